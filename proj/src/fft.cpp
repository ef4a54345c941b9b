#include "monofourier/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "monofourier/errors.hpp"

namespace mfourier {

namespace detail {
void FftwDeleter::operator()(void* p) const { fftw_free(p); }
} // namespace detail

template <typename T>
AlignedBuffer<T>::AlignedBuffer(std::size_t n)
    : ptr_(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))), n_(n) {
    if (!ptr_) throw std::bad_alloc();
    std::fill(ptr_.get(), ptr_.get() + n_, T{});
}

template class AlignedBuffer<double>;
template class AlignedBuffer<Complex>;

namespace {

enum class PlanKind { Forward, Backward, RealToHalf, HalfToReal };

// FFTW planning is not thread-safe; execution of an existing plan on new
// (equally aligned) arrays is.
fftw_plan cached_plan(std::size_t n, PlanKind kind) {
    static std::mutex mutex;
    static std::map<std::tuple<std::size_t, PlanKind>, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(n, kind);
    if (auto it = plans.find(key); it != plans.end()) return it->second;

    const int len = static_cast<int>(n);
    fftw_plan plan = nullptr;
    switch (kind) {
    case PlanKind::Forward:
    case PlanKind::Backward: {
        AlignedBuffer<Complex> scratch(n);
        auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
        plan = fftw_plan_dft_1d(len, p, p, kind == PlanKind::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
        break;
    }
    case PlanKind::RealToHalf: {
        AlignedBuffer<double> r(n);
        AlignedBuffer<Complex> h(n / 2 + 1);
        plan = fftw_plan_dft_r2c_1d(len, r.data(), reinterpret_cast<fftw_complex*>(h.data()),
                                    FFTW_ESTIMATE);
        break;
    }
    case PlanKind::HalfToReal: {
        AlignedBuffer<double> r(n);
        AlignedBuffer<Complex> h(n / 2 + 1);
        plan = fftw_plan_dft_c2r_1d(len, reinterpret_cast<fftw_complex*>(h.data()), r.data(),
                                    FFTW_ESTIMATE);
        break;
    }
    }
    if (!plan) throw NumericalError("FFTW failed to create a plan of length " + std::to_string(n));
    plans.emplace(key, plan);
    return plan;
}

void run_complex(std::span<Complex> data, PlanKind kind) {
    if (!is_power_of_two(data.size())) throw ConfigError("transform length must be a power of two");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cached_plan(data.size(), kind), p, p);
}

// Ascending node index i holds signed l = i - N/2; transform slot is l mod N.
std::size_t node_to_slot(std::size_t i, std::size_t n) { return (i + n / 2) % n; }

} // namespace

void fft_forward(std::span<Complex> data) { run_complex(data, PlanKind::Forward); }
void fft_backward(std::span<Complex> data) { run_complex(data, PlanKind::Backward); }

ComplexSpectrum dft(std::span<const double> values) {
    const std::size_t n = values.size();
    if (!is_power_of_two(n)) throw ConfigError("dft length must be a power of two");
    AlignedBuffer<Complex> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[node_to_slot(i, n)] = values[i];
    fft_forward(buf.span());
    std::vector<Complex> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) out[s] = buf[s] * scale;
    return ComplexSpectrum(std::move(out));
}

std::vector<Complex> idft(const ComplexSpectrum& spectrum) {
    const std::size_t n = spectrum.size();
    AlignedBuffer<Complex> buf(n);
    std::copy(spectrum.slots().begin(), spectrum.slots().end(), buf.data());
    fft_backward(buf.span());
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[node_to_slot(i, n)];
    return out;
}

std::vector<double> convolve_spectral(std::span<const double> values,
                                      const ComplexSpectrum& kernel_spectrum) {
    const std::size_t n = values.size();
    if (kernel_spectrum.size() != n)
        throw ConfigError("convolution length mismatch: values " + std::to_string(n) +
                          ", kernel " + std::to_string(kernel_spectrum.size()));
    ComplexSpectrum v = dft(values);
    for (std::size_t s = 0; s < n; ++s) v[s] *= kernel_spectrum[s];
    const auto back = idft(v);

    double vmax = 0.0, residue = 0.0;
    for (double x : values) vmax = std::max(vmax, std::abs(x));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = back[i].real();
        residue = std::max(residue, std::abs(back[i].imag()));
    }
    if (residue > 1e-10 * vmax)
        throw NumericalError("imaginary residue " + std::to_string(residue) +
                             " after inverse transform: kernel spectrum is not Hermitian");
    return out;
}

std::vector<double> brute_force_convolve(std::span<const double> values,
                                         std::span<const double> weights, double dx) {
    const std::size_t n = values.size();
    if (weights.size() != n) throw ConfigError("brute-force convolution length mismatch");
    const auto sn = static_cast<std::ptrdiff_t>(n);
    std::vector<double> out(n, 0.0);
    for (std::ptrdiff_t k = 0; k < sn; ++k) {
        double acc = 0.0;
        for (std::ptrdiff_t j = 0; j < sn; ++j) {
            // offset k - j wrapped into [-N/2, N/2-1], stored at offset + N/2
            const std::ptrdiff_t wrapped = ((k - j + sn / 2) % sn + sn) % sn;
            acc += weights[static_cast<std::size_t>(wrapped)] * values[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(k)] = dx * acc;
    }
    return out;
}

SpectralConvolver::Workspace::Workspace(std::size_t n) : real(n), half(n / 2 + 1) {}

SpectralConvolver::SpectralConvolver(const ComplexSpectrum& kernel_spectrum)
    : n_(kernel_spectrum.size()), half_kernel_(kernel_spectrum.size() / 2 + 1) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t s = 0; s <= n_ / 2; ++s) half_kernel_[s] = kernel_spectrum[s] * scale;
    // plans are fetched once so apply() never takes the planner lock
    r2c_plan_ = cached_plan(n_, PlanKind::RealToHalf);
    c2r_plan_ = cached_plan(n_, PlanKind::HalfToReal);
}

// Storage is ascending rather than rotated to l mod N: the (-1)^k phase this
// introduces in the forward transform cancels in the inverse.
void SpectralConvolver::apply(std::span<const double> in, std::span<double> out,
                              Workspace& ws) const {
    if (in.size() != n_ || out.size() != n_ || ws.real.size() != n_)
        throw ConfigError("convolver length mismatch");
    std::copy(in.begin(), in.end(), ws.real.data());
    auto* half = reinterpret_cast<fftw_complex*>(ws.half.data());
    fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_plan_), ws.real.data(), half);
    for (std::size_t s = 0; s <= n_ / 2; ++s) ws.half[s] *= half_kernel_[s];
    fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_plan_), half, ws.real.data());
    std::copy(ws.real.data(), ws.real.data() + n_, out.begin());
}

} // namespace mfourier
