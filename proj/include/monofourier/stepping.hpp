#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "monofourier/fft.hpp"
#include "monofourier/greens.hpp"
#include "monofourier/grid.hpp"
#include "monofourier/projection.hpp"

namespace mfourier {

enum class QuadratureRule { Trapezoidal, Simpson };

/// Quadrature weights over the ascending nodes (dimensionless, multiplied by dx in the integral).
std::vector<double> quadrature_weights(std::size_t n, QuadratureRule rule);

/// Large-x behaviour used to fill the right wing of the auxiliary grid.
enum class AsymptoticForm {
    Zero, ///< A(x) = 0
    ExpX, ///< A(x) = e^x
    Flat, ///< repeat the value at x_max
};

/// Scratch buffers for one stepping thread.
struct StepWorkspace {
    explicit StepWorkspace(std::size_t n);

    SpectralConvolver::Workspace conv;
    AlignedBuffer<Complex> full;
    std::vector<double> weighted;
};

/**
 * One timestep of either the projected-kernel scheme (a real, Hermitian convolution)
 * or the FST/CONV baseline (quadrature-weighted values times exp(Psi dtau)).
 * Immutable after construction; apply() may run concurrently with separate workspaces.
 */
class Stepper {
public:
    static Stepper mono(const ProjectedKernel& kernel);
    static Stepper fst(const GreensSpectrum& spectrum, QuadratureRule rule);
    static Stepper fst(const GreensSpectrum& spectrum, std::vector<double> weights);

    const Grid1D& grid() const { return grid_; }
    bool is_mono() const { return convolver_ != nullptr; }
    StepWorkspace make_workspace() const { return StepWorkspace(grid_.size()); }

    void apply(std::span<const double> in, std::span<double> out, StepWorkspace& ws) const;

private:
    explicit Stepper(Grid1D grid) : grid_(grid) {}

    Grid1D grid_;
    std::shared_ptr<const SpectralConvolver> convolver_;
    std::vector<Complex> spectrum_; // FST: G in slot order
    std::vector<double> weights_;   // FST: quadrature weights
};

/// Doubled grid with the same spacing and anchor: N^a = 2N nodes on [x_min - P/2, x_max + P/2].
class AuxiliaryGrid {
public:
    explicit AuxiliaryGrid(const Grid1D& base);

    const Grid1D& base() const { return base_; }
    const Grid1D& doubled() const { return doubled_; }
    /// Auxiliary storage index of base storage index 0.
    std::size_t offset() const { return base_.size() / 2; }

    /// Extends base values: constant v(x_min) on the left, A(x) on the right.
    void extend(std::span<const double> base_values, AsymptoticForm form,
                std::span<double> aux_values) const;

private:
    Grid1D base_;
    Grid1D doubled_;
};

/**
 * Step on the auxiliary grid to suppress wrap-around, keeping only the base nodes.
 * The stepper must live on aux.doubled().
 */
class GuardedStepper {
public:
    struct Workspace {
        explicit Workspace(std::size_t n_aux);
        StepWorkspace step;
        std::vector<double> aux_in;
        std::vector<double> aux_out;
    };

    GuardedStepper(const AuxiliaryGrid& aux, Stepper stepper, AsymptoticForm form);

    const Grid1D& grid() const { return aux_.base(); }
    const AuxiliaryGrid& aux() const { return aux_; }
    AsymptoticForm form() const { return form_; }
    Workspace make_workspace() const { return Workspace(aux_.doubled().size()); }

    void apply(std::span<const double> in, std::span<double> out, Workspace& ws) const;
    void apply(std::span<const double> in, std::span<double> out, AsymptoticForm form,
               Workspace& ws) const;

private:
    AuxiliaryGrid aux_;
    Stepper stepper_;
    AsymptoticForm form_;
};

ValueCurve fst_step(const ValueCurve& values, const GreensSpectrum& spectrum, QuadratureRule rule);
ValueCurve mono_step(const ValueCurve& values, const ProjectedKernel& kernel);
ValueCurve wrap_guard_step(const ValueCurve& values, const GuardedStepper& stepper);

/// Rows (x_j, v_j).
void write_curve_csv(const ValueCurve& curve, const std::filesystem::path& path);

} // namespace mfourier
