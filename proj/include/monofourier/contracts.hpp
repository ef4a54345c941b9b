#pragma once

#include <optional>
#include <string>
#include <variant>

#include "monofourier/greens.hpp"
#include "monofourier/grid.hpp"
#include "monofourier/projection.hpp"
#include "monofourier/stepping.hpp"

namespace mfourier {

enum class PayoffKind { Call, Put };

struct Payoff {
    PayoffKind kind;
    double strike;

    double operator()(double x) const;
};

/// Piecewise-linear interpolation in x; flat beyond the last node. Throws below x_min.
double linear_interpolate(const ValueCurve& curve, double x);

/// Linear interpolation in S = e^x between the bracketing nodes; flat beyond the last node.
double price_interpolate(const ValueCurve& curve, double x);

struct BermudanPutDividend {
    double strike;
    double dividend;
};

/// max(v(log(max(e^x - D, e^{x_min}))), max(K - e^x, 0)) at every node, with v
/// interpolated linearly in S.
ValueCurve bermudan_intervention(const ValueCurve& continuation, const BermudanPutDividend& spec);

enum class Method { MonoLinear, MonoConstant, FstTrapezoidal, FstSimpson };

std::string to_string(Method m);
Method parse_method(const std::string& name);

/// Builds the one-step propagator for a method on a given grid.
Stepper make_stepper(Method method, const Grid1D& grid, const ProcessParams& params, double dtau,
                     const ToleranceConfig& tol);

/// Log-price grid centred on log(spot) so that a node sits at the spot (and strike).
struct GridSpec {
    double spot;
    double half_width; ///< x in [log(spot) - half_width, log(spot) + half_width]
    std::size_t n_nodes;

    Grid1D build() const;
};

struct EuropeanProblem {
    ProcessParams params;
    Payoff payoff;
    double expiry;
    GridSpec grid;
    std::optional<AsymptoticForm> guard; ///< wrap guard off unless set
};

/// Single step of size T; returns the whole curve at tau = T.
ValueCurve solve_european(const EuropeanProblem& problem, Method method, const ToleranceConfig& tol);
double run_european(const EuropeanProblem& problem, Method method, const ToleranceConfig& tol);

struct BermudanProblem {
    ProcessParams params;
    BermudanPutDividend contract;
    double expiry;
    double monitoring;
    GridSpec grid;
    std::optional<AsymptoticForm> guard = AsymptoticForm::Zero;
};

/**
 * Terminal payoff, then for each of the M = T/dtau periods a step followed by the
 * intervention (exercise dates t_0..t_{M-1}; none at expiry). Returns the curve at tau = T.
 */
ValueCurve solve_bermudan(const BermudanProblem& problem, Method method, const ToleranceConfig& tol);
ValueCurve solve_bermudan(const BermudanProblem& problem, const ValueCurve& terminal, Method method,
                          const ToleranceConfig& tol);
double run_bermudan(const BermudanProblem& problem, Method method, const ToleranceConfig& tol);

/// Number of periods T / dtau; throws ConfigError unless it is a whole number.
std::size_t period_count(double expiry, double monitoring);

} // namespace mfourier
