#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "monofourier/greens.hpp"

namespace testutil {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

/// Random but well-posed jump-diffusion parameters in pricing mode.
inline mfourier::ProcessParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double sigma = 0.1 + 0.4 * u(rng);
    const double rate = 0.1 * u(rng);
    const double lambda = 0.5 * u(rng);
    if (u(rng) < 0.5)
        return mfourier::ProcessParams::pricing(
            sigma, rate, lambda, mfourier::KouJumps{u(rng), 1.5 + 5.0 * u(rng), 0.5 + 5.0 * u(rng)});
    return mfourier::ProcessParams::pricing(sigma, rate, lambda,
                                            mfourier::MertonJumps{-0.5 + u(rng), 0.05 + 0.4 * u(rng)});
}

} // namespace testutil
