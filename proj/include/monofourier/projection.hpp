#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "monofourier/greens.hpp"
#include "monofourier/grid.hpp"

namespace mfourier {

enum class BasisKind { PiecewiseLinear, PiecewiseConstant };

/// Transform of the basis function averaged over a cell: sinc^2 for hats, sinc for boxes.
/// Exactly 1 at omega = 0.
double basis_factor(double omega, double dx, BasisKind basis);

/**
 * Green's function projected onto the basis functions, computed from a Fourier
 * series truncated at alpha*N terms via one transform of length alpha*N and an
 * exact subsample at every alpha-th point. Ascending by offset j in [-N/2, N/2-1].
 */
std::vector<double> project_weights(const Grid1D& grid, const ProcessParams& params, double dtau,
                                    std::size_t alpha, BasisKind basis);

/// Signed negative mass, sum_j dx*min(g_j, 0). Never positive.
double monotonicity_test(std::span<const double> weights, double dx);

/// max_j dx*|a_j - b_j|.
double accuracy_test(std::span<const double> weights_alpha,
                     std::span<const double> weights_half_alpha, double dx);

struct ToleranceConfig {
    double eps1 = 1e-6;          ///< negative-mass tolerance, scaled by dtau/T
    double eps2 = 1e-6;          ///< projection accuracy tolerance
    std::size_t alpha_max = 64;  ///< give up beyond this truncation parameter
    double horizon = 1.0;        ///< total horizon T

    void validate() const;
};

/// epsilon-monotone kernel ready for timestepping.
struct ProjectedKernel {
    Grid1D grid;
    double dtau;
    BasisKind basis;
    std::size_t alpha;
    std::vector<double> weights;
    ComplexSpectrum spectrum; ///< DFT of (P/N) * weights
    double test1;
    double test2;
    double c1;
};

/**
 * Doubles alpha from 1 until the negative mass is below eps1*dtau/T and successive
 * projections agree to eps2, then transforms the weights to the grid spectrum.
 * Throws NumericalError once alpha would exceed alpha_max.
 */
ProjectedKernel build_kernel(const Grid1D& grid, const ProcessParams& params, double dtau,
                             BasisKind basis, const ToleranceConfig& tol);

/// Grid spectrum of arbitrary physical weights: (P/N) * dft(weights).
ComplexSpectrum weights_spectrum(const Grid1D& grid, std::span<const double> weights);

struct TruncationBounds {
    double test1;
    double test2;
};

/// A-priori bounds on |test1| and test2 for truncation parameter alpha (exact arithmetic).
/// Requires sigma > 0.
TruncationBounds theoretical_bounds(std::size_t alpha, std::size_t n_nodes,
                                    const ProcessParams& params, double dtau, double period);

/// One row per offset: y_j, g_j, dx*g_j.
void write_kernel_csv(const ProjectedKernel& kernel, const std::filesystem::path& path);

} // namespace mfourier
