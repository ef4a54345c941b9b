// Command-line driver: runs a config file or one of the shipped table presets.
#include <omp.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "monofourier/config.hpp"
#include "monofourier/contracts.hpp"
#include "monofourier/errors.hpp"
#include "monofourier/io.hpp"
#include "monofourier/projection.hpp"
#include "monofourier/report.hpp"

#ifndef MONOFOURIER_PRESET_DIR
#define MONOFOURIER_PRESET_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace mfourier;

namespace {

struct Overrides {
    std::optional<fs::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_sim;
    std::optional<std::size_t> max_nodes;
};

ExperimentConfig load(const fs::path& path, const Overrides& o) {
    ExperimentConfig cfg = parse_config(path);
    if (o.out) cfg.out_dir = *o.out;
    if (o.seed) cfg.seed = *o.seed;
    if (o.n_sim) cfg.n_sim = *o.n_sim;
    if (o.max_nodes) {
        while (cfg.nodes.size() > 1 && cfg.nodes.back() > *o.max_nodes) {
            cfg.nodes.pop_back();
            if (!cfg.b_nodes.empty()) cfg.b_nodes.pop_back();
        }
    }
    cfg.validate();
    return cfg;
}

void dump_kernel(const ExperimentConfig& cfg) {
    if (cfg.method != Method::MonoLinear && cfg.method != Method::MonoConstant) return;
    const Grid1D grid = GridSpec{cfg.contract.spot, cfg.half_width, cfg.nodes.front()}.build();
    const double dtau = cfg.problem == Problem::Bermudan ? cfg.contract.monitoring : cfg.contract.expiry;
    const BasisKind basis =
        cfg.method == Method::MonoLinear ? BasisKind::PiecewiseLinear : BasisKind::PiecewiseConstant;
    const ProjectedKernel k = build_kernel(grid, cfg.process(), dtau, basis, cfg.tol);
    write_kernel_csv(k, cfg.out_dir / ("kernel_" + std::to_string(grid.size()) + ".csv"));
}

void run_pricing(ExperimentConfig cfg, bool all_methods) {
    const Method methods[] = {Method::MonoLinear, Method::MonoConstant, Method::FstTrapezoidal,
                              Method::FstSimpson};
    for (Method m : methods) {
        if (!all_methods && m != cfg.method) continue;
        cfg.method = m;
        const auto rows = run_convergence(cfg);
        std::cout << format_convergence(rows, to_string(cfg.problem) + " " + to_string(m)) << '\n';
        write_convergence_csv(rows, cfg.out_dir / (to_string(cfg.problem) + "_" + to_string(m) + ".csv"));
        dump_kernel(cfg);
    }
}

void run_meanvar(const ExperimentConfig& cfg) {
    const MeanVarLadder ladder = run_meanvar_ladder(cfg);
    const std::string title =
        cfg.portfolio.target_mean > 0.0 ? "mean-variance, W* solved on the mean" : "mean-variance, fixed W*";
    std::cout << format_meanvar(ladder.rows, title) << '\n';
    const std::string stem = cfg.portfolio.target_mean > 0.0 ? "meanvar_newton" : "meanvar";
    write_meanvar_csv(ladder.rows, cfg.out_dir / (stem + ".csv"));

    std::vector<FrontierPoint> frontier;
    for (const auto& r : ladder.rows) frontier.push_back({r.target, r.mean, r.stdev});
    write_frontier_csv(frontier, cfg.out_dir / (stem + "_frontier.csv"));

    const MVContext ctx(*ladder.finest_config);
    write_policy_csv(ctx, *ladder.finest_policy, cfg.out_dir / (stem + "_policy"));
    if (cfg.n_sim > 0) {
        const MCResult mc = monte_carlo(ctx, *ladder.finest_policy, cfg.n_sim, cfg.seed);
        std::cout << "monte carlo (" << cfg.n_sim << " paths, finest policy): E[W_T] "
                  << format_value(mc.mean) << " +- " << format_value(mc.std_error) << "  std[W_T] "
                  << format_value(mc.stdev) << "  median " << format_value(mc.median) << "\n";
    }
}

void run_constmix(const ExperimentConfig& cfg) {
    const ConstantMixReport r = run_constant_mix(cfg);
    std::cout << format_constant_mix(r, cfg.portfolio.stock_fraction);
    CsvWriter csv(cfg.out_dir / "constmix.csv", {"source", "mean", "std", "median"});
    csv.row({"closed_form", format_value(r.closed_form.mean), format_value(r.closed_form.stdev), ""});
    csv.row({"recursion", format_value(r.recursion.mean), format_value(r.recursion.stdev), ""});
    if (r.mc)
        csv.row({"monte_carlo", format_value(r.mc->mean), format_value(r.mc->stdev),
                 format_value(r.mc->median)});
}

void run(const ExperimentConfig& cfg, bool all_methods) {
    fs::create_directories(cfg.out_dir);
    if (!cfg.source.empty()) std::cout << "# " << cfg.source << "\n";
    switch (cfg.problem) {
    case Problem::European:
    case Problem::Bermudan: run_pricing(cfg, all_methods); break;
    case Problem::MeanVariance: run_meanvar(cfg); break;
    case Problem::ConstantMix: run_constmix(cfg); break;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monotone Fourier timestepping for jump-diffusion pricing and portfolio control"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    std::string presets = MONOFOURIER_PRESET_DIR;
    int threads = 0;
    std::string out, config;
    std::uint64_t seed = 0;
    std::size_t n_sim = 0, max_nodes = 0;

    app.add_option("--out", out, "Output directory (overrides the config)");
    app.add_option("--threads", threads, "OpenMP thread count")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Monte Carlo seed (overrides the config)");
    app.add_option("--n-sim", n_sim, "Monte Carlo paths (overrides the config)");
    app.add_option("--max-nodes", max_nodes, "Drop ladder levels above this grid size");
    app.add_option("--presets", presets, "Directory holding the table presets");

    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a config file");
    run_cmd->add_option("config", config, "Config file")->required();

    const std::pair<const char*, const char*> tables[] = {
        {"table2", "european_T025.cfg"}, {"table3", "european_T0001.cfg"},
        {"table5", "bermudan_put.cfg"},  {"table7", "meanvar_W1022.cfg"},
        {"table8", "constmix_60_40.cfg"}, {"table9", "meanvar_newton.cfg"},
    };
    for (const auto& [name, file] : tables) app.add_subcommand(name, std::string("Reproduce preset ") + file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (app.count("--out")) o.out = out;
    if (app.count("--seed")) o.seed = seed;
    if (app.count("--n-sim")) o.n_sim = n_sim;
    if (app.count("--max-nodes")) o.max_nodes = max_nodes;
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (run_cmd->parsed()) {
            run(load(config, o), false);
            return 0;
        }
        for (const auto& [name, file] : tables) {
            if (!app.got_subcommand(name)) continue;
            const std::string n = name;
            run(load(fs::path(presets) / file, o), n == "table2" || n == "table3" || n == "table5");
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
