#pragma once

#include <array>
#include <cstdint>

namespace mfourier {

/**
 * Philox4x32-10 counter-based generator. A (seed, stream) pair fixes the whole
 * sequence, so a path's draws do not depend on which thread simulates it.
 */
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    double exponential(double rate);
    /// Inversion sampling; intended for small means.
    unsigned poisson(double mean);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    unsigned used_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mfourier
