#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monofourier/config.hpp"
#include "monofourier/meanvar.hpp"

namespace mfourier {

/// One refinement level. change and ratio are NaN where undefined.
struct ConvergenceRow {
    std::size_t n = 0;
    std::size_t nb = 0; ///< bond nodes, 0 for one-dimensional problems
    double value = 0.0;
    double change = 0.0;
    double ratio = 0.0;
};

/// (v1 - v0) / (v2 - v1); NaN when the denominator is zero or either change is non-finite.
double successive_ratio(double v0, double v1, double v2);

/// Rows in ladder order; changes from the second row, ratios from the third.
std::vector<ConvergenceRow> convergence_rows(std::span<const std::size_t> n,
                                             std::span<const std::size_t> nb,
                                             std::span<const double> values);

/// Scalar value per ladder entry: option value for the pricing problems, the value
/// function at zero wealth for meanvar, E[W_T] from the moment recursion for constmix.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg);

void write_convergence_csv(std::span<const ConvergenceRow> rows, const std::filesystem::path& path);
std::string format_convergence(std::span<const ConvergenceRow> rows, const std::string& title);

struct MeanVarRow {
    std::size_t nx;
    std::size_t nb;
    double target;
    double value;
    double mean;
    double stdev;
    std::size_t iterations; ///< Newton iterations, 0 for a fixed W*
    double value_ratio;
};

struct MeanVarLadder {
    std::vector<MeanVarRow> rows;
    std::optional<PolicyStore> finest_policy;
    std::optional<MVConfig> finest_config;
};

/// Value function and terminal moments at every (nx, nb) pair. With
/// portfolio.target_mean > 0 each level solves for W* so the mean is matched.
MeanVarLadder run_meanvar_ladder(const ExperimentConfig& cfg);

void write_meanvar_csv(std::span<const MeanVarRow> rows, const std::filesystem::path& path);
std::string format_meanvar(std::span<const MeanVarRow> rows, const std::string& title);

struct ConstantMixReport {
    Moments closed_form;
    Moments recursion; ///< on the finest configured grid
    std::optional<MCResult> mc;
};

ConstantMixReport run_constant_mix(const ExperimentConfig& cfg);
std::string format_constant_mix(const ConstantMixReport& r, double stock_fraction);

} // namespace mfourier
