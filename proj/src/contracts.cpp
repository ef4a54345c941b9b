#include "monofourier/contracts.hpp"

#include <algorithm>
#include <cmath>

#include "monofourier/errors.hpp"

namespace mfourier {

double Payoff::operator()(double x) const {
    const double s = std::exp(x);
    return kind == PayoffKind::Call ? std::max(s - strike, 0.0) : std::max(strike - s, 0.0);
}

double linear_interpolate(const ValueCurve& curve, double x) {
    const Grid1D& g = curve.grid;
    const double t = (x - g.x_min()) / g.dx();
    if (t < -1e-12) throw ConfigError("interpolation point below x_min");
    const std::size_t last = g.size() - 1;
    if (t >= static_cast<double>(last)) return curve.values[last];
    const double fl = std::floor(std::max(t, 0.0));
    const auto i = static_cast<std::size_t>(fl);
    const double f = std::max(t, 0.0) - fl;
    return (1.0 - f) * curve.values[i] + f * curve.values[i + 1];
}

double price_interpolate(const ValueCurve& curve, double x) {
    const Grid1D& g = curve.grid;
    const double t = (x - g.x_min()) / g.dx();
    if (t < -1e-12) throw ConfigError("interpolation point below x_min");
    const std::size_t last = g.size() - 1;
    if (t >= static_cast<double>(last)) return curve.values[last];
    const auto i = static_cast<std::size_t>(std::floor(std::max(t, 0.0)));
    const double s0 = std::exp(g.at(i));
    const double s1 = std::exp(g.at(i + 1));
    const double f = std::clamp((std::exp(x) - s0) / (s1 - s0), 0.0, 1.0);
    return (1.0 - f) * curve.values[i] + f * curve.values[i + 1];
}

ValueCurve bermudan_intervention(const ValueCurve& continuation, const BermudanPutDividend& spec) {
    const Grid1D& g = continuation.grid;
    const double floor_s = std::exp(g.x_min());
    ValueCurve out(g, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = std::exp(g.at(i));
        const double shifted = std::log(std::max(s - spec.dividend, floor_s));
        const double hold = price_interpolate(continuation, std::max(shifted, g.x_min()));
        out.values[i] = std::max(hold, std::max(spec.strike - s, 0.0));
    }
    return out;
}

std::string to_string(Method m) {
    switch (m) {
    case Method::MonoLinear: return "mono-linear";
    case Method::MonoConstant: return "mono-const";
    case Method::FstTrapezoidal: return "fst-trap";
    case Method::FstSimpson: return "fst-simpson";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::MonoLinear, Method::MonoConstant, Method::FstTrapezoidal,
                     Method::FstSimpson})
        if (to_string(m) == name) return m;
    throw ConfigError("unknown method '" + name + "'");
}

Stepper make_stepper(Method method, const Grid1D& grid, const ProcessParams& params, double dtau,
                     const ToleranceConfig& tol) {
    switch (method) {
    case Method::MonoLinear:
        return Stepper::mono(build_kernel(grid, params, dtau, BasisKind::PiecewiseLinear, tol));
    case Method::MonoConstant:
        return Stepper::mono(build_kernel(grid, params, dtau, BasisKind::PiecewiseConstant, tol));
    case Method::FstTrapezoidal:
        return Stepper::fst(greens_spectrum(grid, params, dtau), QuadratureRule::Trapezoidal);
    case Method::FstSimpson:
        return Stepper::fst(greens_spectrum(grid, params, dtau), QuadratureRule::Simpson);
    }
    throw ConfigError("unknown method");
}

Grid1D GridSpec::build() const {
    if (!(spot > 0.0) || !(half_width > 0.0)) throw ConfigError("grid needs spot > 0 and half_width > 0");
    const double c = std::log(spot);
    return build_grid(c - half_width, c + half_width, n_nodes);
}

namespace {

// Unguarded steppers are wrapped so both paths share one call signature.
class OneStep {
public:
    OneStep(Method method, const Grid1D& grid, const ProcessParams& params, double dtau,
            const ToleranceConfig& tol, std::optional<AsymptoticForm> guard) {
        if (guard) {
            AuxiliaryGrid aux(grid);
            guarded_.emplace(aux, make_stepper(method, aux.doubled(), params, dtau, tol), *guard);
            gws_.emplace(guarded_->make_workspace());
        } else {
            plain_.emplace(make_stepper(method, grid, params, dtau, tol));
            ws_.emplace(plain_->make_workspace());
        }
    }

    ValueCurve operator()(const ValueCurve& v) {
        ValueCurve out(v.grid, 0.0);
        if (guarded_)
            guarded_->apply(v.values, out.values, *gws_);
        else
            plain_->apply(v.values, out.values, *ws_);
        return out;
    }

private:
    std::optional<Stepper> plain_;
    std::optional<StepWorkspace> ws_;
    std::optional<GuardedStepper> guarded_;
    std::optional<GuardedStepper::Workspace> gws_;
};

ToleranceConfig with_horizon(ToleranceConfig tol, double horizon) {
    tol.horizon = horizon;
    return tol;
}

} // namespace

ValueCurve solve_european(const EuropeanProblem& pb, Method method, const ToleranceConfig& tol) {
    if (!(pb.expiry > 0.0)) throw ConfigError("expiry must be positive");
    const Grid1D grid = pb.grid.build();
    OneStep step(method, grid, pb.params, pb.expiry, with_horizon(tol, pb.expiry), pb.guard);
    return step(ValueCurve::sample(grid, pb.payoff));
}

double run_european(const EuropeanProblem& pb, Method method, const ToleranceConfig& tol) {
    const ValueCurve v = solve_european(pb, method, tol);
    return linear_interpolate(v, std::log(pb.grid.spot));
}

std::size_t period_count(double expiry, double monitoring) {
    if (!(expiry > 0.0) || !(monitoring > 0.0)) throw ConfigError("expiry and monitoring must be positive");
    const double m = expiry / monitoring;
    const double r = std::round(m);
    if (r < 1.0 || std::abs(m - r) > 1e-9 * std::max(1.0, m))
        throw ConfigError("expiry is not a whole number of monitoring periods");
    return static_cast<std::size_t>(r);
}

ValueCurve solve_bermudan(const BermudanProblem& pb, const ValueCurve& terminal, Method method,
                          const ToleranceConfig& tol) {
    const std::size_t m = period_count(pb.expiry, pb.monitoring);
    if (!(pb.contract.dividend >= 0.0)) throw ConfigError("dividend must be non-negative");
    const Grid1D& grid = terminal.grid;
    OneStep step(method, grid, pb.params, pb.monitoring, with_horizon(tol, pb.expiry), pb.guard);
    ValueCurve v = terminal;
    for (std::size_t n = 0; n < m; ++n) v = bermudan_intervention(step(v), pb.contract);
    return v;
}

ValueCurve solve_bermudan(const BermudanProblem& pb, Method method, const ToleranceConfig& tol) {
    const Grid1D grid = pb.grid.build();
    const Payoff put{PayoffKind::Put, pb.contract.strike};
    return solve_bermudan(pb, ValueCurve::sample(grid, put), method, tol);
}

double run_bermudan(const BermudanProblem& pb, Method method, const ToleranceConfig& tol) {
    return linear_interpolate(solve_bermudan(pb, method, tol), std::log(pb.grid.spot));
}

} // namespace mfourier
