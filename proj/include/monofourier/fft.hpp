#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "monofourier/grid.hpp"

namespace mfourier {

namespace detail {
struct FftwDeleter {
    void operator()(void* p) const;
};
} // namespace detail

/// SIMD-aligned scratch storage; FFTW plans are only valid on aligned arrays.
template <typename T>
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t n);

    std::size_t size() const { return n_; }
    T* data() { return ptr_.get(); }
    const T* data() const { return ptr_.get(); }
    T& operator[](std::size_t i) { return ptr_.get()[i]; }
    const T& operator[](std::size_t i) const { return ptr_.get()[i]; }
    std::span<T> span() { return {ptr_.get(), n_}; }
    std::span<const T> span() const { return {ptr_.get(), n_}; }

private:
    std::unique_ptr<T[], detail::FftwDeleter> ptr_;
    std::size_t n_ = 0;
};

extern template class AlignedBuffer<double>;
extern template class AlignedBuffer<Complex>;

/// Unnormalized in-place complex transforms of length n on aligned storage.
/// forward uses e^{-2 pi i k l / n}, backward uses e^{+2 pi i k l / n}.
void fft_forward(std::span<Complex> data);
void fft_backward(std::span<Complex> data);

/**
 * DFT of a real vector in ascending node order,
 *   V(k) = (1/N) sum_l exp(-2 pi i k l / N) v_l,  l, k signed in [-N/2, N/2-1].
 */
ComplexSpectrum dft(std::span<const double> values);

/// Inverse of dft(): v_l = sum_k V(k) exp(2 pi i k l / N), returned in ascending order.
std::vector<Complex> idft(const ComplexSpectrum& spectrum);

/**
 * Periodic convolution evaluated in Fourier space: idft(dft(v) * K), where K is the
 * DFT of (P/N)*g for physical weights g. Throws NumericalError if the imaginary
 * residue exceeds 1e-10 * max|v| (a non-Hermitian kernel).
 */
std::vector<double> convolve_spectral(std::span<const double> values,
                                      const ComplexSpectrum& kernel_spectrum);

/// O(N^2) physical-space evaluation of out_k = dx * sum_j g_{k-j} v_j with periodic
/// wrap of k-j into [-N/2, N/2-1]. Weights are ascending by offset. Test oracle only.
std::vector<double> brute_force_convolve(std::span<const double> values,
                                         std::span<const double> weights, double dx);

/**
 * Reusable convolution against a fixed Hermitian kernel spectrum using real-to-complex
 * transforms. Thread-safe: all mutable state lives in the caller's Workspace.
 */
class SpectralConvolver {
public:
    struct Workspace {
        explicit Workspace(std::size_t n);
        AlignedBuffer<double> real;
        AlignedBuffer<Complex> half;
    };

    explicit SpectralConvolver(const ComplexSpectrum& kernel_spectrum);

    std::size_t size() const { return n_; }
    Workspace make_workspace() const { return Workspace(n_); }
    void apply(std::span<const double> in, std::span<double> out, Workspace& ws) const;

private:
    std::size_t n_;
    std::vector<Complex> half_kernel_; // k = 0..N/2, scaled by 1/N
    void* r2c_plan_ = nullptr;         // fftw_plan, owned by the global plan cache
    void* c2r_plan_ = nullptr;
};

} // namespace mfourier
