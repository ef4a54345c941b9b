#include "monofourier/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "monofourier/errors.hpp"
#include "monofourier/fft.hpp"
#include "monofourier/io.hpp"

namespace mfourier {

double basis_factor(double omega, double dx, BasisKind basis) {
    if (!(dx > 0.0)) throw ConfigError("basis factor needs a positive spacing");
    if (omega == 0.0) return 1.0;
    const double a = std::numbers::pi * omega * dx;
    const double sinc = std::sin(a) / a;
    return basis == BasisKind::PiecewiseLinear ? sinc * sinc : sinc;
}

std::vector<double> project_weights(const Grid1D& grid, const ProcessParams& params, double dtau,
                                    std::size_t alpha, BasisKind basis) {
    if (!is_power_of_two(alpha)) throw ConfigError("truncation parameter must be a power of two");
    if (!(dtau > 0.0)) throw ConfigError("timestep must be positive");
    const std::size_t n = grid.size();
    const std::size_t fine = alpha * n;
    const FrequencyIndexing idx(fine);

    AlignedBuffer<Complex> y(fine);
    for (std::size_t s = 0; s < fine; ++s) {
        const double omega = grid.frequency(idx.signed_index(s)); // same k/P on the fine series
        y[s] = basis_factor(omega, grid.dx(), basis) *
               std::exp(characteristic_exponent(omega, params) * dtau);
    }
    // The lone Nyquist term has no conjugate partner in the truncated series; keep its
    // real part so the residue check below only sees genuine asymmetry.
    y[fine / 2] = y[fine / 2].real();
    fft_backward(y.span());

    const double inv_p = 1.0 / grid.period();
    std::vector<double> weights(n);
    double wmax = 0.0, residue = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::ptrdiff_t j = grid.signed_index(i);
        const Complex g = y[idx.slot(j * static_cast<std::ptrdiff_t>(alpha))] * inv_p;
        weights[i] = g.real();
        wmax = std::max(wmax, std::abs(g.real()));
        residue = std::max(residue, std::abs(g.imag()));
    }
    if (residue > 1e-10 * wmax)
        throw NumericalError("projected weights carry imaginary residue " + std::to_string(residue));
    return weights;
}

double monotonicity_test(std::span<const double> weights, double dx) {
    double neg = 0.0;
    for (double w : weights) neg += dx * std::min(w, 0.0);
    return neg;
}

double accuracy_test(std::span<const double> a, std::span<const double> b, double dx) {
    if (a.size() != b.size()) throw ConfigError("accuracy test needs equal-length weights");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, dx * std::abs(a[i] - b[i]));
    return m;
}

void ToleranceConfig::validate() const {
    if (!(eps1 > 0.0) || !(eps2 > 0.0)) throw ConfigError("eps1 and eps2 must be positive");
    if (!is_power_of_two(alpha_max) || alpha_max < 2)
        throw ConfigError("alpha_max must be a power of two >= 2");
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
}

ComplexSpectrum weights_spectrum(const Grid1D& grid, std::span<const double> weights) {
    if (weights.size() != grid.size()) throw ConfigError("weights length does not match grid");
    ComplexSpectrum spec = dft(weights);
    const double scale = grid.period(); // (P/N) * N, undoing the 1/N of dft()
    for (auto& z : spec.slots()) z *= scale;
    return spec;
}

ProjectedKernel build_kernel(const Grid1D& grid, const ProcessParams& params, double dtau,
                             BasisKind basis, const ToleranceConfig& tol) {
    tol.validate();
    const double dx = grid.dx();
    const double neg_tol = tol.eps1 * dtau / tol.horizon;

    std::vector<double> previous = project_weights(grid, params, dtau, 1, basis);
    for (std::size_t alpha = 2; alpha <= tol.alpha_max; alpha *= 2) {
        std::vector<double> current = project_weights(grid, params, dtau, alpha, basis);
        const double test1 = monotonicity_test(current, dx);
        const double test2 = accuracy_test(current, previous, dx);
        if (std::abs(test1) < neg_tol && test2 < tol.eps2) {
            ComplexSpectrum spectrum = weights_spectrum(grid, current);
            return ProjectedKernel{grid,  dtau,  basis, alpha,
                                   std::move(current), std::move(spectrum),
                                   test1, test2, std::exp(-params.discount() * dtau)};
        }
        previous = std::move(current);
    }
    throw NumericalError("projected Green's function did not converge by alpha_max = " +
                         std::to_string(tol.alpha_max));
}

TruncationBounds theoretical_bounds(std::size_t alpha, std::size_t n_nodes,
                                    const ProcessParams& params, double dtau, double period) {
    if (!(params.sigma() > 0.0)) throw ConfigError("truncation bounds require sigma > 0");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double c4 = 2.0 * params.sigma() * params.sigma() * pi2 * dtau / (period * period);
    const double a = static_cast<double>(alpha);
    const double n = static_cast<double>(n_nodes);
    const double dx = period / n;
    TruncationBounds b{};
    b.test1 = 8.0 / (pi2 * a * a) * std::exp(-c4 * n * n * a * a / 4.0) /
              -std::expm1(-c4 * n * a);
    b.test2 = 64.0 / (pi2 * a * a) * (dx / period) * std::exp(-c4 * n * n * a * a / 16.0) /
              -std::expm1(-c4 * n * a / 2.0);
    return b;
}

void write_kernel_csv(const ProjectedKernel& kernel, const std::filesystem::path& path) {
    CsvWriter csv(path, {"y", "g", "dx_g"});
    const double dx = kernel.grid.dx();
    for (std::size_t i = 0; i < kernel.weights.size(); ++i) {
        const double y = static_cast<double>(kernel.grid.signed_index(i)) * dx;
        csv.row({y, kernel.weights[i], dx * kernel.weights[i]});
    }
}

} // namespace mfourier
