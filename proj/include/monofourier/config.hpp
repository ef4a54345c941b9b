#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "monofourier/contracts.hpp"
#include "monofourier/greens.hpp"
#include "monofourier/meanvar.hpp"
#include "monofourier/projection.hpp"

namespace mfourier {

enum class Problem { European, Bermudan, MeanVariance, ConstantMix };

std::string to_string(Problem p);

struct ModelConfig {
    double sigma = 0.0;
    double rate = 0.0;  ///< risk-free rate (discount and pricing drift, bond growth)
    double drift = 0.0; ///< real-world drift, used by the portfolio problems
    double lambda = 0.0;
    JumpSpec jumps = KouJumps{0.5, 2.0, 2.0};
};

struct ContractConfig {
    PayoffKind payoff = PayoffKind::Call;
    double strike = 100.0;
    double spot = 100.0;
    double expiry = 1.0;
    double monitoring = 0.0; ///< Bermudan exercise spacing
    double dividend = 0.0;
};

struct PortfolioConfig {
    double target = 1022.0;       ///< W*
    double target_mean = 0.0;     ///< > 0 switches to solving for W* on the mean
    double injection = 10.0;      ///< cash added at every rebalance date
    std::size_t periods = 30;
    double stock_fraction = 0.6;  ///< constant-mix strategy
    double x_below = 10.0;        ///< x_min = log(spot) - x_below
    double x_above = 5.0;         ///< x_max = log(spot) + x_above
};

struct ExperimentConfig {
    Problem problem = Problem::European;
    Method method = Method::MonoLinear;
    std::string source; ///< table the preset reproduces, free text
    ModelConfig model;
    ContractConfig contract;
    PortfolioConfig portfolio;
    std::vector<std::size_t> nodes;   ///< x-grid refinement ladder
    std::vector<std::size_t> b_nodes; ///< bond-grid ladder, paired with nodes
    double half_width = 10.0;
    std::optional<AsymptoticForm> guard;
    ToleranceConfig tol;
    std::size_t n_sim = 0;
    std::uint64_t seed = 42;
    std::filesystem::path out_dir = "out";

    ProcessParams process() const;
    void validate() const;
};

/// Flat "key = value" text with [section] headers and '#' comments.
/// Errors carry the line number or the offending field name.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

/// Comma-separated size list, e.g. "512, 1024, 2048".
std::vector<std::size_t> parse_ladder(const std::string& text);

/// Throws ConfigError unless strictly increasing powers of two.
void validate_ladder(const std::vector<std::size_t>& ladder, const std::string& field);

MVConfig meanvar_config(const ExperimentConfig& cfg, std::size_t nx, std::size_t b_nodes);

} // namespace mfourier
