#include "monofourier/meanvar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "monofourier/errors.hpp"
#include "monofourier/io.hpp"
#include "monofourier/random.hpp"

namespace mfourier {

namespace {
constexpr std::size_t kBaseUniform = 240;
constexpr std::size_t kBaseGeometric = 64;
constexpr double kUniformTop = 1200.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> base_bgrid(double b_max) {
    const double top = std::min(kUniformTop, 0.5 * b_max);
    const double h = top / static_cast<double>(kBaseUniform);
    const double rest = b_max - top;
    // growth g with h (g^K - 1)/(g - 1) = rest, so the first geometric cell equals h
    auto span = [&](double g) {
        return h * (std::pow(g, static_cast<double>(kBaseGeometric)) - 1.0) / (g - 1.0);
    };
    double lo = 1.0 + 1e-12, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (span(mid) < rest ? lo : hi) = mid;
    }
    const double g = 0.5 * (lo + hi);
    std::vector<double> b;
    b.reserve(kBaseUniform + kBaseGeometric + 1);
    for (std::size_t i = 0; i <= kBaseUniform; ++i) b.push_back(h * static_cast<double>(i));
    double cell = h;
    for (std::size_t i = 0; i < kBaseGeometric; ++i) {
        b.push_back(b.back() + cell);
        cell *= g;
    }
    b.back() = b_max;
    return b;
}
} // namespace

BGrid::BGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw ConfigError("bond grid needs at least two nodes");
    if (nodes_.front() != 0.0) throw ConfigError("bond grid must start at 0");
    for (std::size_t j = 1; j < nodes_.size(); ++j)
        if (!(nodes_[j] > nodes_[j - 1])) throw ConfigError("bond grid must be strictly increasing");
    if (nodes_.size() > std::numeric_limits<std::uint16_t>::max())
        throw ConfigError("bond grid too large for the policy store");
}

BGrid BGrid::standard(int level, double b_max) {
    if (!(b_max > 0.0)) throw ConfigError("b_max must be positive");
    if (level < -4 || level > 6) throw ConfigError("bond grid level out of range");
    std::vector<double> b = base_bgrid(b_max);
    for (int l = 0; l < level; ++l) {
        std::vector<double> fine;
        fine.reserve(2 * b.size() - 1);
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            fine.push_back(b[j]);
            fine.push_back(0.5 * (b[j] + b[j + 1]));
        }
        fine.push_back(b.back());
        b = std::move(fine);
    }
    if (level < 0) {
        const std::size_t stride = std::size_t{1} << (-level);
        std::vector<double> coarse;
        for (std::size_t j = 0; j < b.size(); j += stride) coarse.push_back(b[j]);
        b = std::move(coarse);
    }
    return BGrid(std::move(b));
}

int BGrid::level_for(std::size_t n_nodes) {
    const std::size_t base = kBaseUniform + kBaseGeometric;
    for (int level = -4; level <= 6; ++level) {
        const std::size_t cells = level >= 0 ? base << level : base >> (-level);
        if (cells + 1 == n_nodes) return level;
    }
    throw ConfigError("bond grid size " + std::to_string(n_nodes) +
                      " is not on the ladder 304*2^L + 1");
}

std::pair<std::size_t, double> BGrid::bracket(double b) const {
    if (b <= 0.0) return {0, 0.0};
    if (b >= nodes_.back()) return {nodes_.size() - 1, 0.0};
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), b);
    const auto j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return {j, (b - nodes_[j]) / (nodes_[j + 1] - nodes_[j])};
}

Surface2D::Surface2D(Grid1D xg, std::shared_ptr<const BGrid> bg, double fill)
    : x(xg), b(std::move(bg)), values(x.size() * b->size(), fill) {}

MVConfig::MVConfig() : x_min(std::log(100.0) - 10.0), x_max(std::log(100.0) + 5.0) {
    tol.horizon = horizon;
}

void MVConfig::validate() const {
    if (!(horizon > 0.0) || periods == 0) throw ConfigError("horizon and periods must be positive");
    if (injections.size() != periods) throw ConfigError("need one injection per rebalance date");
    for (double q : injections)
        if (!(q >= 0.0)) throw ConfigError("injections must be non-negative");
    if (!(rate >= 0.0)) throw ConfigError("rate must be non-negative");
    if (params.mode() != Mode::RealWorld) throw ConfigError("mean-variance needs real-world parameters");
    if (!(target > 0.0)) throw ConfigError("target wealth W* must be positive");
    if (!(x_max > x_min)) throw ConfigError("x_max must exceed x_min");
    if (!is_power_of_two(nx) || nx < 4) throw ConfigError("nx must be a power of two >= 4");
    tol.validate();
}

double discounted_contributions(const MVConfig& cfg, std::size_t n) {
    if (n >= cfg.periods) throw ConfigError("date index out of range");
    double q = 0.0;
    for (std::size_t j = n + 1; j < cfg.periods; ++j)
        q += std::exp(-cfg.rate * (cfg.time(j) - cfg.time(n))) * cfg.injections[j];
    return q;
}

double withdrawal_threshold(const MVConfig& cfg, std::size_t n) {
    return cfg.target * std::exp(-cfg.rate * (cfg.horizon - cfg.time(n))) -
           discounted_contributions(cfg, n);
}

Surface2D terminal_condition(const Grid1D& x, std::shared_ptr<const BGrid> b, double target) {
    Surface2D s(x, std::move(b));
    for (std::size_t j = 0; j < s.nb(); ++j)
        for (std::size_t m = 0; m < s.nx(); ++m) {
            const double shortfall = std::min(std::exp(x.at(m)) + (*s.b)[j] - target, 0.0);
            s.at(m, j) = shortfall * shortfall;
        }
    return s;
}

PolicyStore::PolicyStore(std::size_t periods, std::size_t nx, std::size_t nb)
    : periods_(periods), nx_(nx), nb_(nb), index_(periods * nx * nb, 0) {}

MVContext::MVContext(const MVConfig& cfg)
    : cfg_(cfg), x_(build_grid(cfg.x_min, cfg.x_max, cfg.nx)) {
    cfg_.validate();
    b_ = std::make_shared<const BGrid>(BGrid::standard(cfg_.b_level, std::exp(cfg_.x_max)));
    AuxiliaryGrid aux(x_);
    ToleranceConfig tol = cfg_.tol;
    tol.horizon = cfg_.horizon;
    const ProjectedKernel kernel =
        build_kernel(aux.doubled(), cfg_.params, cfg_.dt(), BasisKind::PiecewiseLinear, tol);
    stepper_ = std::make_unique<GuardedStepper>(aux, Stepper::mono(kernel), AsymptoticForm::Zero);
    prices_.resize(x_.size());
    for (std::size_t m = 0; m < x_.size(); ++m) prices_[m] = std::exp(x_.at(m));
    inv_dx_ = 1.0 / x_.dx();
}

std::size_t MVContext::locate(double s) const {
    const std::size_t last = prices_.size() - 1;
    double guess = std::floor((std::log(s) - x_.x_min()) / x_.dx());
    guess = std::clamp(guess, 0.0, static_cast<double>(last));
    auto i = static_cast<std::size_t>(guess);
    while (i < last && prices_[i + 1] <= s) ++i;
    while (i > 0 && prices_[i] > s) --i;
    return i;
}

double MVContext::interpolate(std::span<const double> slice, double s) const {
    s = std::max(s, prices_.front());
    const std::size_t i = locate(s);
    if (i + 1 >= prices_.size()) return slice[i];
    return between(slice, i, s);
}

namespace {

void advance_slice(const MVContext& ctx, const Surface2D& plus, std::size_t j, double growth,
                   AsymptoticForm wing, std::vector<double>& tmp, GuardedStepper::Workspace& ws,
                   Surface2D& out) {
    const auto [k, w] = plus.b->bracket((*plus.b)[j] * growth);
    const auto lo = plus.slice(k);
    if (w == 0.0) {
        std::copy(lo.begin(), lo.end(), tmp.begin());
    } else {
        const auto hi = plus.slice(k + 1);
        for (std::size_t m = 0; m < tmp.size(); ++m) tmp[m] = (1.0 - w) * lo[m] + w * hi[m];
    }
    ctx.stepper().apply(tmp, out.slice(j), wing, ws);
}

double wealth_after(double wealth_before_injection, double q, double threshold) {
    // c* = max(W + q - threshold, 0); W' never goes below zero even if the threshold does
    return std::min(wealth_before_injection + q, std::max(threshold, 0.0));
}

} // namespace

Surface2D advance_time(const MVContext& ctx, const Surface2D& plus, AsymptoticForm wing) {
    Surface2D out(plus.x, plus.b);
    const double growth = std::exp(ctx.config().rate * ctx.config().dt());
    const std::size_t nb = plus.nb();
    if (ctx.config().execution == Execution::Serial) {
        std::vector<double> tmp(plus.nx());
        auto ws = ctx.stepper().make_workspace();
        for (std::size_t j = 0; j < nb; ++j) advance_slice(ctx, plus, j, growth, wing, tmp, ws, out);
        return out;
    }
#pragma omp parallel
    {
        std::vector<double> tmp(plus.nx());
        auto ws = ctx.stepper().make_workspace();
#pragma omp for schedule(static)
        for (std::size_t j = 0; j < nb; ++j) advance_slice(ctx, plus, j, growth, wing, tmp, ws, out);
    }
    return out;
}

std::pair<double, std::uint16_t> optimal_bond(const MVContext& ctx, const Surface2D& minus,
                                              double wp) {
    const BGrid& b = *minus.b;
    double best = kInf;
    std::uint16_t arg = 0;
    for (std::size_t k = 0; k < b.size() && b[k] <= wp; ++k) {
        const double v = ctx.interpolate(minus.slice(k), wp - b[k]);
        if (v < best) {
            best = v;
            arg = static_cast<std::uint16_t>(k);
        }
    }
    return {best, arg};
}

namespace {

// Reference search: every node, every candidate, independently.
void control_serial(const MVContext& ctx, const Surface2D& minus, double q, double threshold,
                    ControlResult& out) {
    const auto prices = ctx.prices();
    const BGrid& b = *minus.b;
    for (std::size_t j = 0; j < minus.nb(); ++j)
        for (std::size_t m = 0; m < minus.nx(); ++m) {
            const auto [v, k] = optimal_bond(ctx, minus, wealth_after(prices[m] + b[j], q, threshold));
            out.values.at(m, j) = v;
            out.choice[j * minus.nx() + m] = k;
        }
}

// Same arithmetic, organised per b-row: along a row W' increases with m, so for each
// candidate the bracketing price index only moves forward. Nodes whose W' is capped at
// the withdrawal threshold share one search.
void control_row(const MVContext& ctx, const Surface2D& minus, double q, double threshold,
                 std::size_t j, std::pair<double, std::uint16_t> capped, std::vector<double>& best,
                 std::vector<std::uint16_t>& arg, ControlResult& out) {
    const auto prices = ctx.prices();
    const BGrid& b = *minus.b;
    const std::size_t nx = minus.nx();
    const std::size_t last = nx - 1;
    const double cap = std::max(threshold, 0.0);

    std::size_t m_cap = 0;
    while (m_cap < nx && prices[m_cap] + b[j] + q < cap) ++m_cap;

    std::fill(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(m_cap), kInf);
    std::fill(arg.begin(), arg.begin() + static_cast<std::ptrdiff_t>(m_cap), 0);
    if (m_cap > 0) {
        const double w_top = prices[m_cap - 1] + b[j] + q;
        for (std::size_t k = 0; k < b.size() && b[k] <= w_top; ++k) {
            const auto slice = minus.slice(k);
            const double bk = b[k];
            std::size_t m = 0;
            while (prices[m] + b[j] + q < bk) ++m;
            std::size_t i = ctx.locate(std::max(prices[m] + b[j] + q - bk, prices.front()));
            for (; m < m_cap; ++m) {
                const double s = std::max(prices[m] + b[j] + q - bk, prices.front());
                while (i < last && prices[i + 1] <= s) ++i;
                const double v = i == last ? slice[last] : ctx.between(slice, i, s);
                if (v < best[m]) {
                    best[m] = v;
                    arg[m] = static_cast<std::uint16_t>(k);
                }
            }
        }
    }
    for (std::size_t m = 0; m < nx; ++m) {
        const bool is_capped = m >= m_cap;
        out.values.at(m, j) = is_capped ? capped.first : best[m];
        out.choice[j * nx + m] = is_capped ? capped.second : arg[m];
    }
}

} // namespace

ControlResult apply_control(const MVContext& ctx, const Surface2D& minus, std::size_t n) {
    const MVConfig& cfg = ctx.config();
    const double q = cfg.injections.at(n);
    const double threshold = withdrawal_threshold(cfg, n);
    ControlResult out{Surface2D(minus.x, minus.b), std::vector<std::uint16_t>(minus.values.size())};
    if (cfg.execution == Execution::Serial) {
        control_serial(ctx, minus, q, threshold, out);
        return out;
    }
    const auto capped = optimal_bond(ctx, minus, std::max(threshold, 0.0));
    const std::size_t nb = minus.nb();
#pragma omp parallel
    {
        std::vector<double> best(minus.nx());
        std::vector<std::uint16_t> arg(minus.nx());
#pragma omp for schedule(dynamic, 4)
        for (std::size_t j = 0; j < nb; ++j)
            control_row(ctx, minus, q, threshold, j, capped, best, arg, out);
    }
    return out;
}

} // namespace mfourier

namespace mfourier {

Surface2D apply_policy(const MVContext& ctx, const Surface2D& minus, std::size_t n,
                       std::span<const std::uint16_t> choice) {
    const MVConfig& cfg = ctx.config();
    const double q = cfg.injections.at(n);
    const double threshold = withdrawal_threshold(cfg, n);
    const auto prices = ctx.prices();
    const BGrid& b = *minus.b;
    const std::size_t nx = minus.nx();
    const std::size_t nb = minus.nb();
    if (choice.size() != nx * nb) throw ConfigError("policy slice does not match the surface");
    Surface2D out(minus.x, minus.b);
#pragma omp parallel for schedule(static) if (cfg.execution == Execution::Parallel)
    for (std::size_t j = 0; j < nb; ++j)
        for (std::size_t m = 0; m < nx; ++m) {
            const std::size_t k = choice[j * nx + m];
            const double wp = wealth_after(prices[m] + b[j], q, threshold);
            out.at(m, j) = ctx.interpolate(minus.slice(k), wp - b[k]);
        }
    return out;
}

ValueSolution solve_value_function(const MVContext& ctx) {
    const MVConfig& cfg = ctx.config();
    const std::size_t M = cfg.periods;
    ValueSolution sol{0.0, PolicyStore(M, ctx.x().size(), ctx.b()->size())};
    Surface2D v = terminal_condition(ctx.x(), ctx.b(), cfg.target);
    for (std::size_t step = 1; step <= M; ++step) {
        const std::size_t n = M - step;
        Surface2D minus = advance_time(ctx, v, AsymptoticForm::Zero);
        ControlResult cr = apply_control(ctx, minus, n);
        std::copy(cr.choice.begin(), cr.choice.end(), sol.policy.date(n).begin());
        if (n == 0) {
            const double wp = wealth_after(0.0, cfg.injections[0], withdrawal_threshold(cfg, 0));
            const auto [value, k] = optimal_bond(ctx, minus, wp);
            sol.value = value;
            sol.policy.origin = k;
        }
        v = std::move(cr.values);
    }
    sol.policy.complete = true;
    return sol;
}

namespace {

Moments moments_at(double u1, double u2) {
    return {u1, std::sqrt(std::max(u2 - u1 * u1, 0.0))};
}

// Moment surfaces grow like (e^x + b)^2 at large x; beyond x_max they are continued flat.
template <typename Control, typename Origin>
Moments propagate(const MVContext& ctx, Control&& control, Origin&& origin) {
    const MVConfig& cfg = ctx.config();
    Surface2D u1(ctx.x(), ctx.b());
    Surface2D u2(ctx.x(), ctx.b());
    const auto prices = ctx.prices();
    for (std::size_t j = 0; j < u1.nb(); ++j)
        for (std::size_t m = 0; m < u1.nx(); ++m) {
            const double w = prices[m] + (*u1.b)[j];
            u1.at(m, j) = w;
            u2.at(m, j) = w * w;
        }
    for (std::size_t step = 1; step <= cfg.periods; ++step) {
        const std::size_t n = cfg.periods - step;
        Surface2D m1 = advance_time(ctx, u1, AsymptoticForm::Flat);
        Surface2D m2 = advance_time(ctx, u2, AsymptoticForm::Flat);
        if (n == 0) return moments_at(origin(m1), origin(m2));
        u1 = control(m1, n);
        u2 = control(m2, n);
    }
    throw ConfigError("no rebalance dates");
}

} // namespace

Moments moment_propagation(const MVContext& ctx, const PolicyStore& policy) {
    const MVConfig& cfg = ctx.config();
    if (!policy.complete || policy.periods() != cfg.periods) throw ConfigError("policy is incomplete");
    const double wp0 = wealth_after(0.0, cfg.injections[0], withdrawal_threshold(cfg, 0));
    const BGrid& b = *ctx.b();
    return propagate(
        ctx, [&](const Surface2D& s, std::size_t n) { return apply_policy(ctx, s, n, policy.date(n)); },
        [&](const Surface2D& s) {
            return ctx.interpolate(s.slice(policy.origin), wp0 - b[policy.origin]);
        });
}

namespace {

// 2-D interpolation at an arbitrary bond amount: linear in b between slices, linear in S.
double interpolate_2d(const MVContext& ctx, const Surface2D& s, double stock, double bond) {
    const auto [k, w] = s.b->bracket(bond);
    const double lo = ctx.interpolate(s.slice(k), stock);
    if (w == 0.0) return lo;
    return (1.0 - w) * lo + w * ctx.interpolate(s.slice(k + 1), stock);
}

} // namespace

Moments moment_propagation_constant_mix(const MVContext& ctx, double stock_fraction) {
    if (!(stock_fraction >= 0.0 && stock_fraction <= 1.0))
        throw ConfigError("stock fraction must lie in [0, 1]");
    const MVConfig& cfg = ctx.config();
    const auto prices = ctx.prices();
    auto control = [&](const Surface2D& minus, std::size_t n) {
        Surface2D out(minus.x, minus.b);
        const double q = cfg.injections[n];
        for (std::size_t j = 0; j < minus.nb(); ++j)
            for (std::size_t m = 0; m < minus.nx(); ++m) {
                const double wp = prices[m] + (*minus.b)[j] + q;
                out.at(m, j) = interpolate_2d(ctx, minus, stock_fraction * wp, (1.0 - stock_fraction) * wp);
            }
        return out;
    };
    const double wp0 = cfg.injections[0];
    return propagate(ctx, control, [&](const Surface2D& s) {
        return interpolate_2d(ctx, s, stock_fraction * wp0, (1.0 - stock_fraction) * wp0);
    });
}

Moments constant_mix_moments(double p, const MVConfig& cfg) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("stock fraction must lie in [0, 1]");
    const double dt = cfg.dt();
    const double g1 = std::exp(moment_exponent(1.0, cfg.params) * dt);
    const double g2 = std::exp(moment_exponent(2.0, cfg.params) * dt);
    const double bond = std::exp(cfg.rate * dt);
    const double r1 = p * g1 + (1.0 - p) * bond;
    const double r2 = p * p * g2 + 2.0 * p * (1.0 - p) * g1 * bond + (1.0 - p) * (1.0 - p) * bond * bond;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < cfg.periods; ++n) {
        const double q = cfg.injections[n];
        m2 = (m2 + 2.0 * q * m1 + q * q) * r2;
        m1 = (m1 + q) * r1;
    }
    return moments_at(m1, m2);
}

namespace {

NewtonResult secant_on_mean(const MVConfig& cfg, double target_mean, std::optional<NewtonResult> start,
                            double rel_tol, std::size_t max_iter) {
    if (!(target_mean > 0.0)) throw ConfigError("target mean must be positive");
    struct Eval {
        double w;
        double mean;
        double stdev;
        double value;
        PolicyStore policy;
    };
    auto evaluate = [&](double w) {
        MVConfig c = cfg;
        c.target = w;
        const MVContext ctx(c);
        ValueSolution sol = solve_value_function(ctx);
        const Moments mo = moment_propagation(ctx, sol.policy);
        return Eval{w, mo.mean, mo.stdev, sol.value, std::move(sol.policy)};
    };
    auto done = [&](const Eval& e) { return std::abs(e.mean - target_mean) < rel_tol * target_mean; };
    auto result = [](Eval&& e, std::size_t it) {
        return NewtonResult{e.w, e.mean, e.stdev, e.value, it, std::move(e.policy)};
    };

    Eval prev = start ? Eval{start->target, start->mean, start->stdev, start->value,
                             std::move(start->policy)}
                      : evaluate(cfg.target);
    if (done(prev)) return result(std::move(prev), 1);
    // first step assumes unit slope, at least one unit of wealth
    double gap = target_mean - prev.mean;
    double step = std::abs(gap) >= 1.0 ? gap : std::copysign(1.0, gap);
    Eval cur = evaluate(prev.w + step);
    for (std::size_t it = 2; it <= max_iter; ++it) {
        if (done(cur)) return result(std::move(cur), it);
        const double slope = (cur.mean - prev.mean) / (cur.w - prev.w);
        if (!(slope > 0.0) || !std::isfinite(slope))
            throw NumericalError("mean is not increasing in W*; target " +
                                 std::to_string(target_mean) + " is not bracketed");
        const double next = cur.w + (target_mean - cur.mean) / slope;
        if (!(next > 0.0)) throw NumericalError("Newton iterate left the feasible W* range");
        prev = std::move(cur);
        cur = evaluate(next);
    }
    if (done(cur)) return result(std::move(cur), max_iter);
    throw NumericalError("Newton iteration on W* did not converge in " + std::to_string(max_iter) +
                         " iterations");
}

} // namespace

NewtonResult newton_on_mean(const MVConfig& cfg, double target_mean, double rel_tol,
                            std::size_t max_iter) {
    return secant_on_mean(cfg, target_mean, std::nullopt, rel_tol, max_iter);
}

NewtonResult newton_on_mean(const MVConfig& cfg, double target_mean, NewtonResult start,
                            double rel_tol, std::size_t max_iter) {
    if (!start.policy.complete) throw ConfigError("starting evaluation has no complete policy");
    return secant_on_mean(cfg, target_mean, std::move(start), rel_tol, max_iter);
}

namespace {

double log_return(CounterRng& rng, const ProcessParams& p, double dt) {
    double y = p.log_drift() * dt + p.sigma() * std::sqrt(dt) * rng.normal();
    const unsigned jumps = p.lambda() > 0.0 ? rng.poisson(p.lambda() * dt) : 0u;
    for (unsigned i = 0; i < jumps; ++i) {
        std::visit(
            [&](const auto& law) {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, KouJumps>) {
                    y += rng.uniform() < law.p_up ? rng.exponential(law.eta_up)
                                                  : -rng.exponential(law.eta_down);
                } else {
                    y += law.mean + law.stdev * rng.normal();
                }
            },
            p.jumps());
    }
    return y;
}

MCResult summarise(std::vector<double>& w) {
    const double n = static_cast<double>(w.size());
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : w) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const auto mid = w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2);
    std::nth_element(w.begin(), mid, w.end());
    double median = *mid;
    if (w.size() % 2 == 0) median = 0.5 * (median + *std::max_element(w.begin(), mid));
    return {mean, sd, median, 2.58 * sd / std::sqrt(n)};
}

// Bilinear interpolation of the stored bond amount in (log S, B).
double policy_bond(const MVContext& ctx, const PolicyStore& policy, std::size_t n, double stock,
                   double bond) {
    const Grid1D& x = ctx.x();
    const BGrid& b = *ctx.b();
    const double xs = stock > 0.0 ? std::log(stock) : x.x_min();
    const double t = std::clamp((xs - x.x_min()) / x.dx(), 0.0, static_cast<double>(x.size() - 1));
    const auto i = std::min(static_cast<std::size_t>(t), x.size() - 2);
    const double fx = t - static_cast<double>(i);
    const auto [j, fb] = b.bracket(bond);
    const std::size_t j1 = std::min(j + 1, b.size() - 1);
    auto node = [&](std::size_t m, std::size_t jj) { return b[policy.at(n, m, jj)]; };
    return (1.0 - fb) * ((1.0 - fx) * node(i, j) + fx * node(i + 1, j)) +
           fb * ((1.0 - fx) * node(i, j1) + fx * node(i + 1, j1));
}

} // namespace

MCResult monte_carlo(const MVContext& ctx, const PolicyStore& policy, std::size_t n_sim,
                     std::uint64_t seed) {
    if (n_sim < 2) throw ConfigError("need at least two Monte Carlo paths");
    if (!policy.complete) throw ConfigError("policy is incomplete");
    const MVConfig& cfg = ctx.config();
    const double dt = cfg.dt();
    const double bond_growth = std::exp(cfg.rate * dt);
    const BGrid& b = *ctx.b();
    std::vector<double> terminal(n_sim);
    const auto n_paths = static_cast<std::ptrdiff_t>(n_sim);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t path = 0; path < n_paths; ++path) {
        CounterRng rng(seed, static_cast<std::uint64_t>(path));
        double stock = 0.0, bond = 0.0;
        for (std::size_t n = 0; n < cfg.periods; ++n) {
            const double wp = wealth_after(stock + bond, cfg.injections[n], withdrawal_threshold(cfg, n));
            const double target_bond = n == 0 ? b[policy.origin] : policy_bond(ctx, policy, n, stock, bond);
            bond = std::clamp(target_bond, 0.0, wp);
            stock = wp - bond;
            stock *= std::exp(log_return(rng, cfg.params, dt));
            bond *= bond_growth;
        }
        terminal[static_cast<std::size_t>(path)] = stock + bond;
    }
    return summarise(terminal);
}

MCResult monte_carlo_constant_mix(const MVConfig& cfg, double p, std::size_t n_sim,
                                  std::uint64_t seed) {
    if (n_sim < 2) throw ConfigError("need at least two Monte Carlo paths");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("stock fraction must lie in [0, 1]");
    const double dt = cfg.dt();
    const double bond_growth = std::exp(cfg.rate * dt);
    std::vector<double> terminal(n_sim);
    const auto n_paths = static_cast<std::ptrdiff_t>(n_sim);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t path = 0; path < n_paths; ++path) {
        CounterRng rng(seed, static_cast<std::uint64_t>(path));
        double w = 0.0;
        for (std::size_t n = 0; n < cfg.periods; ++n) {
            w += cfg.injections[n];
            w = p * w * std::exp(log_return(rng, cfg.params, dt)) + (1.0 - p) * w * bond_growth;
        }
        terminal[static_cast<std::size_t>(path)] = w;
    }
    return summarise(terminal);
}

void write_policy_csv(const MVContext& ctx, const PolicyStore& policy,
                      const std::filesystem::path& dir) {
    const MVConfig& cfg = ctx.config();
    const BGrid& b = *ctx.b();
    const auto prices = ctx.prices();
    std::filesystem::create_directories(dir);
    for (std::size_t n = 0; n < policy.periods(); ++n) {
        char name[32];
        std::snprintf(name, sizeof name, "policy_t%02zu.csv", n);
        CsvWriter csv(dir / name, {"x", "b", "b_star", "c_star"});
        const double q = cfg.injections[n];
        const double threshold = withdrawal_threshold(cfg, n);
        for (std::size_t j = 0; j < b.size(); ++j)
            for (std::size_t m = 0; m < ctx.x().size(); ++m) {
                const double wq = prices[m] + b[j] + q;
                const double wp = wealth_after(prices[m] + b[j], q, threshold);
                csv.row({ctx.x().at(m), b[j], b[policy.at(n, m, j)], wq - wp});
            }
    }
}

void write_frontier_csv(std::span<const FrontierPoint> points, const std::filesystem::path& path) {
    CsvWriter csv(path, {"w_star", "mean", "std"});
    for (const auto& p : points) csv.row({p.target, p.mean, p.stdev});
}

} // namespace mfourier
