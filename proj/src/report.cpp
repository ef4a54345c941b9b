#include "monofourier/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "monofourier/errors.hpp"
#include "monofourier/io.hpp"

namespace mfourier {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t finest_b(const ExperimentConfig& cfg) {
    return cfg.b_nodes.empty() ? 305 : cfg.b_nodes.back();
}
} // namespace

double successive_ratio(double v0, double v1, double v2) {
    const double num = v1 - v0;
    const double den = v2 - v1;
    if (den == 0.0 || !std::isfinite(num) || !std::isfinite(den)) return kNaN;
    return num / den;
}

std::vector<ConvergenceRow> convergence_rows(std::span<const std::size_t> n,
                                             std::span<const std::size_t> nb,
                                             std::span<const double> values) {
    if (n.size() != values.size() || (!nb.empty() && nb.size() != values.size()))
        throw ConfigError("ladder and value lists differ in length");
    std::vector<ConvergenceRow> rows(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        rows[i].n = n[i];
        rows[i].nb = nb.empty() ? 0 : nb[i];
        rows[i].value = values[i];
        rows[i].change = i >= 1 ? values[i] - values[i - 1] : kNaN;
        rows[i].ratio = i >= 2 ? successive_ratio(values[i - 2], values[i - 1], values[i]) : kNaN;
    }
    return rows;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> values;
    std::vector<std::size_t> nb;
    const ProcessParams params = cfg.process();
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
        const std::size_t n = cfg.nodes[i];
        const GridSpec grid{cfg.contract.spot, cfg.half_width, n};
        switch (cfg.problem) {
        case Problem::European: {
            const EuropeanProblem pb{params, Payoff{cfg.contract.payoff, cfg.contract.strike},
                                     cfg.contract.expiry, grid, cfg.guard};
            values.push_back(run_european(pb, cfg.method, cfg.tol));
            break;
        }
        case Problem::Bermudan: {
            const BermudanProblem pb{params,
                                     BermudanPutDividend{cfg.contract.strike, cfg.contract.dividend},
                                     cfg.contract.expiry, cfg.contract.monitoring, grid, cfg.guard};
            values.push_back(run_bermudan(pb, cfg.method, cfg.tol));
            break;
        }
        case Problem::MeanVariance: {
            const MVContext ctx(meanvar_config(cfg, n, cfg.b_nodes[i]));
            values.push_back(solve_value_function(ctx).value);
            nb.push_back(cfg.b_nodes[i]);
            break;
        }
        case Problem::ConstantMix: {
            const std::size_t b = cfg.b_nodes.empty() ? 305 : cfg.b_nodes[i];
            const MVContext ctx(meanvar_config(cfg, n, b));
            values.push_back(moment_propagation_constant_mix(ctx, cfg.portfolio.stock_fraction).mean);
            nb.push_back(b);
            break;
        }
        }
    }
    return convergence_rows(cfg.nodes, nb, values);
}

void write_convergence_csv(std::span<const ConvergenceRow> rows, const std::filesystem::path& path) {
    CsvWriter csv(path, {"n", "nb", "value", "change", "ratio"});
    for (const auto& r : rows)
        csv.row({std::to_string(r.n), std::to_string(r.nb), format_value(r.value),
                 format_value(r.change), format_ratio(r.ratio)});
}

std::string format_convergence(std::span<const ConvergenceRow> rows, const std::string& title) {
    std::ostringstream out;
    char buf[160];
    out << title << '\n';
    std::snprintf(buf, sizeof buf, "%12s %20s %16s %8s\n", "N", "value", "change", "ratio");
    out << buf;
    for (const auto& r : rows) {
        const std::string n = r.nb ? std::to_string(r.n) + "x" + std::to_string(r.nb) : std::to_string(r.n);
        const std::string change = std::isfinite(r.change) ? format_value(r.change) : "";
        const std::string ratio = std::isfinite(r.ratio) ? format_ratio(r.ratio) : "";
        std::snprintf(buf, sizeof buf, "%12s %20s %16s %8s\n", n.c_str(), format_value(r.value).c_str(),
                      change.c_str(), ratio.c_str());
        out << buf;
    }
    return out.str();
}

MeanVarLadder run_meanvar_ladder(const ExperimentConfig& cfg) {
    if (cfg.problem != Problem::MeanVariance) throw ConfigError("meanvar ladder needs problem = meanvar");
    cfg.validate();
    MeanVarLadder out;
    std::vector<double> values;
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
        MVConfig mv = meanvar_config(cfg, cfg.nodes[i], cfg.b_nodes[i]);
        MeanVarRow row{mv.nx, cfg.b_nodes[i], mv.target, 0.0, 0.0, 0.0, 0, kNaN};
        PolicyStore policy;
        if (cfg.portfolio.target_mean > 0.0) {
            NewtonResult nr = newton_on_mean(mv, cfg.portfolio.target_mean);
            row.target = nr.target;
            row.value = nr.value;
            row.mean = nr.mean;
            row.stdev = nr.stdev;
            row.iterations = nr.iterations;
            mv.target = nr.target;
            policy = std::move(nr.policy);
        } else {
            const MVContext ctx(mv);
            ValueSolution sol = solve_value_function(ctx);
            const Moments mo = moment_propagation(ctx, sol.policy);
            row.value = sol.value;
            row.mean = mo.mean;
            row.stdev = mo.stdev;
            policy = std::move(sol.policy);
        }
        values.push_back(row.value);
        if (i >= 2) row.value_ratio = successive_ratio(values[i - 2], values[i - 1], values[i]);
        out.rows.push_back(row);
        if (i + 1 == cfg.nodes.size()) {
            out.finest_policy = std::move(policy);
            out.finest_config = mv;
        }
    }
    return out;
}

void write_meanvar_csv(std::span<const MeanVarRow> rows, const std::filesystem::path& path) {
    CsvWriter csv(path, {"nx", "nb", "w_star", "value", "mean", "std", "iterations", "ratio"});
    for (const auto& r : rows)
        csv.row({std::to_string(r.nx), std::to_string(r.nb), format_value(r.target),
                 format_value(r.value), format_value(r.mean), format_value(r.stdev),
                 std::to_string(r.iterations), format_ratio(r.value_ratio)});
}

std::string format_meanvar(std::span<const MeanVarRow> rows, const std::string& title) {
    std::ostringstream out;
    char buf[200];
    out << title << '\n';
    std::snprintf(buf, sizeof buf, "%12s %14s %18s %14s %14s %6s\n", "Nx x Nb", "W*", "value", "E[W_T]",
                  "std[W_T]", "ratio");
    out << buf;
    for (const auto& r : rows) {
        const std::string n = std::to_string(r.nx) + "x" + std::to_string(r.nb);
        const std::string ratio = std::isfinite(r.value_ratio) ? format_ratio(r.value_ratio) : "";
        std::snprintf(buf, sizeof buf, "%12s %14s %18s %14s %14s %6s\n", n.c_str(),
                      format_value(r.target).c_str(), format_value(r.value).c_str(),
                      format_value(r.mean).c_str(), format_value(r.stdev).c_str(), ratio.c_str());
        out << buf;
    }
    return out.str();
}

ConstantMixReport run_constant_mix(const ExperimentConfig& cfg) {
    cfg.validate();
    const MVConfig mv = meanvar_config(cfg, cfg.nodes.back(), finest_b(cfg));
    ConstantMixReport r;
    r.closed_form = constant_mix_moments(cfg.portfolio.stock_fraction, mv);
    const MVContext ctx(mv);
    r.recursion = moment_propagation_constant_mix(ctx, cfg.portfolio.stock_fraction);
    if (cfg.n_sim > 0)
        r.mc = monte_carlo_constant_mix(mv, cfg.portfolio.stock_fraction, cfg.n_sim, cfg.seed);
    return r;
}

std::string format_constant_mix(const ConstantMixReport& r, double stock_fraction) {
    std::ostringstream out;
    out << "constant mix, stock fraction " << format_value(stock_fraction) << '\n';
    out << "  closed form   E[W_T] " << format_value(r.closed_form.mean) << "  std[W_T] "
        << format_value(r.closed_form.stdev) << '\n';
    out << "  recursion     E[W_T] " << format_value(r.recursion.mean) << "  std[W_T] "
        << format_value(r.recursion.stdev) << '\n';
    if (r.mc)
        out << "  monte carlo   E[W_T] " << format_value(r.mc->mean) << "  std[W_T] "
            << format_value(r.mc->stdev) << "  median " << format_value(r.mc->median)
            << "  99% half-width " << format_value(r.mc->std_error) << '\n';
    return out.str();
}

} // namespace mfourier
