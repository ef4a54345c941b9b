#include "monofourier/stepping.hpp"

#include <algorithm>
#include <cmath>

#include "monofourier/errors.hpp"
#include "monofourier/io.hpp"

namespace mfourier {

std::vector<double> quadrature_weights(std::size_t n, QuadratureRule rule) {
    if (!is_power_of_two(n) || n < 4) throw ConfigError("quadrature needs a power-of-two node count");
    std::vector<double> w(n, 1.0);
    if (rule == QuadratureRule::Simpson) {
        for (std::size_t i = 0; i < n; ++i) w[i] = (i % 2 == 0) ? 2.0 / 3.0 : 4.0 / 3.0;
        w.front() = 1.0 / 3.0;
        w.back() = 1.0 / 3.0;
    } else {
        w.front() = 0.5;
        w.back() = 0.5;
    }
    return w;
}

StepWorkspace::StepWorkspace(std::size_t n) : conv(n), full(n), weighted(n) {}

Stepper Stepper::mono(const ProjectedKernel& kernel) {
    Stepper s(kernel.grid);
    s.convolver_ = std::make_shared<const SpectralConvolver>(kernel.spectrum);
    return s;
}

Stepper Stepper::fst(const GreensSpectrum& spectrum, QuadratureRule rule) {
    return fst(spectrum, quadrature_weights(spectrum.grid.size(), rule));
}

Stepper Stepper::fst(const GreensSpectrum& spectrum, std::vector<double> weights) {
    const std::size_t n = spectrum.grid.size();
    if (weights.size() != n || spectrum.values.size() != n)
        throw ConfigError("FST weights or spectrum do not match the grid");
    Stepper s(spectrum.grid);
    s.spectrum_.resize(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) s.spectrum_[k] = spectrum.values[k] * scale;
    s.weights_ = std::move(weights);
    return s;
}

void Stepper::apply(std::span<const double> in, std::span<double> out, StepWorkspace& ws) const {
    const std::size_t n = grid_.size();
    if (in.size() != n || out.size() != n) throw ConfigError("step input does not match the grid");
    if (convolver_) {
        convolver_->apply(in, out, ws.conv);
        return;
    }
    // ascending storage goes straight into the transform; the (-1)^k phases cancel
    for (std::size_t i = 0; i < n; ++i) ws.full[i] = weights_[i] * in[i];
    fft_forward(ws.full.span());
    for (std::size_t k = 0; k < n; ++k) ws.full[k] *= spectrum_[k];
    fft_backward(ws.full.span());
    // G is not Hermitian at the Nyquist slot, so the imaginary part is simply dropped
    for (std::size_t i = 0; i < n; ++i) out[i] = ws.full[i].real();
}

AuxiliaryGrid::AuxiliaryGrid(const Grid1D& base)
    : base_(base), doubled_(base.anchor(), base.dx(), 2 * base.size()) {}

void AuxiliaryGrid::extend(std::span<const double> base_values, AsymptoticForm form,
                           std::span<double> aux_values) const {
    const std::size_t n = base_.size();
    if (base_values.size() != n || aux_values.size() != 2 * n)
        throw ConfigError("auxiliary extension size mismatch");
    const std::size_t off = offset();
    std::fill(aux_values.begin(), aux_values.begin() + off, base_values.front());
    std::copy(base_values.begin(), base_values.end(), aux_values.begin() + off);
    for (std::size_t i = off + n; i < 2 * n; ++i) {
        switch (form) {
        case AsymptoticForm::Zero: aux_values[i] = 0.0; break;
        case AsymptoticForm::ExpX: aux_values[i] = std::exp(doubled_.at(i)); break;
        case AsymptoticForm::Flat: aux_values[i] = base_values.back(); break;
        }
    }
}

GuardedStepper::Workspace::Workspace(std::size_t n_aux)
    : step(n_aux), aux_in(n_aux), aux_out(n_aux) {}

GuardedStepper::GuardedStepper(const AuxiliaryGrid& aux, Stepper stepper, AsymptoticForm form)
    : aux_(aux), stepper_(std::move(stepper)), form_(form) {
    if (!(stepper_.grid() == aux_.doubled()))
        throw ConfigError("guarded stepper needs a kernel built on the auxiliary grid");
}

void GuardedStepper::apply(std::span<const double> in, std::span<double> out,
                           Workspace& ws) const {
    apply(in, out, form_, ws);
}

void GuardedStepper::apply(std::span<const double> in, std::span<double> out,
                           AsymptoticForm form, Workspace& ws) const {
    const std::size_t n = aux_.base().size();
    if (out.size() != n) throw ConfigError("guarded step output does not match the grid");
    aux_.extend(in, form, ws.aux_in);
    stepper_.apply(ws.aux_in, ws.aux_out, ws.step);
    std::copy_n(ws.aux_out.begin() + static_cast<std::ptrdiff_t>(aux_.offset()), n, out.begin());
}

ValueCurve fst_step(const ValueCurve& values, const GreensSpectrum& spectrum, QuadratureRule rule) {
    if (!(values.grid == spectrum.grid)) throw ConfigError("FST step: grid mismatch");
    const Stepper s = Stepper::fst(spectrum, rule);
    auto ws = s.make_workspace();
    ValueCurve out(values.grid, 0.0);
    s.apply(values.values, out.values, ws);
    return out;
}

ValueCurve mono_step(const ValueCurve& values, const ProjectedKernel& kernel) {
    if (!(values.grid == kernel.grid)) throw ConfigError("monotone step: grid mismatch");
    const Stepper s = Stepper::mono(kernel);
    auto ws = s.make_workspace();
    ValueCurve out(values.grid, 0.0);
    s.apply(values.values, out.values, ws);
    return out;
}

ValueCurve wrap_guard_step(const ValueCurve& values, const GuardedStepper& stepper) {
    if (!(values.grid == stepper.grid())) throw ConfigError("guarded step: grid mismatch");
    auto ws = stepper.make_workspace();
    ValueCurve out(values.grid, 0.0);
    stepper.apply(values.values, out.values, ws);
    return out;
}

void write_curve_csv(const ValueCurve& curve, const std::filesystem::path& path) {
    CsvWriter csv(path, {"x", "v"});
    for (std::size_t i = 0; i < curve.values.size(); ++i) csv.row({curve.grid.at(i), curve.values[i]});
}

} // namespace mfourier
