#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "monofourier/greens.hpp"
#include "monofourier/grid.hpp"
#include "monofourier/projection.hpp"
#include "monofourier/stepping.hpp"

namespace mfourier {

/**
 * Unequally spaced bond-amount nodes, b_0 = 0 < ... < b_max.
 *
 * The reference ladder starts from 305 nodes: 240 uniform cells up to 1200, then 64
 * geometrically growing cells to b_max with the first cell matching the uniform spacing.
 * Level L > 0 inserts midpoints L times (609, 1217, 2433, ...); level L < 0 keeps every
 * 2^-L-th node (153, 77, 39, ...).
 */
class BGrid {
public:
    explicit BGrid(std::vector<double> nodes);
    static BGrid standard(int level, double b_max);
    static int level_for(std::size_t n_nodes);

    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t j) const { return nodes_[j]; }
    double max() const { return nodes_.back(); }
    std::span<const double> nodes() const { return nodes_; }

    /// Index j and weight w with b = (1-w) b_j + w b_{j+1}; flat above b_max.
    std::pair<std::size_t, double> bracket(double b) const;

private:
    std::vector<double> nodes_;
};

/// Values v(x_m, b_j) stored b-slice by b-slice: index j * Nx + m.
struct Surface2D {
    Grid1D x;
    std::shared_ptr<const BGrid> b;
    std::vector<double> values;

    Surface2D(Grid1D xg, std::shared_ptr<const BGrid> bg, double fill = 0.0);

    std::size_t nx() const { return x.size(); }
    std::size_t nb() const { return b->size(); }
    std::span<double> slice(std::size_t j) { return {values.data() + j * nx(), nx()}; }
    std::span<const double> slice(std::size_t j) const { return {values.data() + j * nx(), nx()}; }
    double& at(std::size_t m, std::size_t j) { return values[j * nx() + m]; }
    double at(std::size_t m, std::size_t j) const { return values[j * nx() + m]; }
};

enum class Execution { Serial, Parallel };

struct MVConfig {
    double horizon = 30.0;
    std::size_t periods = 30;
    std::vector<double> injections = std::vector<double>(30, 10.0);
    double rate = 0.00827;
    ProcessParams params = ProcessParams::real_world(0.14777, 0.08885, 0.3222,
                                                      KouJumps{0.2758, 4.4273, 5.262});
    double target = 1022.0; ///< embedding parameter W*
    double x_min;
    double x_max;
    std::size_t nx = 512;
    int b_level = 0;
    ToleranceConfig tol;
    Execution execution = Execution::Parallel;

    MVConfig();
    double dt() const { return horizon / static_cast<double>(periods); }
    double time(std::size_t n) const { return dt() * static_cast<double>(n); }
    void validate() const;
};

/// Q_n = sum_{j=n+1}^{M-1} e^{-r(t_j - t_n)} q_j.
double discounted_contributions(const MVConfig& cfg, std::size_t n);

/// Wealth level above which cash is withdrawn at date n: W* e^{-r(T - t_n)} - Q_n.
double withdrawal_threshold(const MVConfig& cfg, std::size_t n);

Surface2D terminal_condition(const Grid1D& x, std::shared_ptr<const BGrid> b, double target);

/// Optimal bond node index per date and node; c* follows from the closed-form rule.
class PolicyStore {
public:
    PolicyStore() = default;
    PolicyStore(std::size_t periods, std::size_t nx, std::size_t nb);

    std::size_t periods() const { return periods_; }
    std::uint16_t& at(std::size_t n, std::size_t m, std::size_t j) {
        return index_[(n * nb_ + j) * nx_ + m];
    }
    std::uint16_t at(std::size_t n, std::size_t m, std::size_t j) const {
        return index_[(n * nb_ + j) * nx_ + m];
    }
    std::span<std::uint16_t> date(std::size_t n) { return {index_.data() + n * nb_ * nx_, nb_ * nx_}; }
    std::span<const std::uint16_t> date(std::size_t n) const {
        return {index_.data() + n * nb_ * nx_, nb_ * nx_};
    }

    std::uint16_t origin = 0; ///< b* index chosen from zero initial wealth at t_0
    bool complete = false;

private:
    std::size_t periods_ = 0, nx_ = 0, nb_ = 0;
    std::vector<std::uint16_t> index_;
};

/// Everything the control and time-advance steps share for one configuration.
class MVContext {
public:
    explicit MVContext(const MVConfig& cfg);

    const MVConfig& config() const { return cfg_; }
    const Grid1D& x() const { return x_; }
    std::shared_ptr<const BGrid> b() const { return b_; }
    const GuardedStepper& stepper() const { return *stepper_; }
    std::span<const double> prices() const { return prices_; }

    /// Interpolates a slice linearly in log S at price s (clamped to [S_0, S_{N-1}]).
    double interpolate(std::span<const double> slice, double s) const;
    /// Largest i with S_i <= s, for s >= S_0.
    std::size_t locate(double s) const;
    /// Linear in log S between nodes i and i+1; s must lie in [S_i, S_{i+1}].
    double between(std::span<const double> slice, std::size_t i, double s) const {
        const double f = (std::log(s) - x_.at(i)) * inv_dx_;
        return slice[i] + f * (slice[i + 1] - slice[i]);
    }

private:
    MVConfig cfg_;
    Grid1D x_;
    std::shared_ptr<const BGrid> b_;
    std::unique_ptr<GuardedStepper> stepper_;
    std::vector<double> prices_;
    double inv_dx_ = 0.0;
};

/// Algorithm-4 advance: b-interpolation at b e^{r dtau}, then a guarded monotone step per slice.
Surface2D advance_time(const MVContext& ctx, const Surface2D& plus, AsymptoticForm wing);

/// Result of the control search at one date.
struct ControlResult {
    Surface2D values;
    std::vector<std::uint16_t> choice; ///< b* index per node, j * Nx + m
};

/// Exhaustive search over bond nodes at date n (forward index, t_n).
ControlResult apply_control(const MVContext& ctx, const Surface2D& minus, std::size_t n);

/// Minimum over candidates for a single post-withdrawal wealth level.
std::pair<double, std::uint16_t> optimal_bond(const MVContext& ctx, const Surface2D& minus,
                                              double wealth_after);

/// Applies stored choices (no optimisation) at date n.
Surface2D apply_policy(const MVContext& ctx, const Surface2D& minus, std::size_t n,
                       std::span<const std::uint16_t> choice);

struct ValueSolution {
    double value;      ///< value function at zero wealth, t = 0
    PolicyStore policy;
};

ValueSolution solve_value_function(const MVContext& ctx);

struct Moments {
    double mean;
    double stdev;
};

/// E[W_T] and std[W_T] from zero initial wealth under the stored policy.
Moments moment_propagation(const MVContext& ctx, const PolicyStore& policy);

/// Same, rebalancing to a fixed stock fraction at every date (no withdrawals).
Moments moment_propagation_constant_mix(const MVContext& ctx, double stock_fraction);

/// Closed-form moments of the constant-proportion strategy.
Moments constant_mix_moments(double stock_fraction, const MVConfig& cfg);

struct NewtonResult {
    double target;     ///< converged W*
    double mean;
    double stdev;
    double value;
    std::size_t iterations;
    PolicyStore policy;
};

/// Secant iteration on W* so that E[W_T] matches the requested mean.
NewtonResult newton_on_mean(const MVConfig& cfg, double target_mean, double rel_tol = 1e-5,
                            std::size_t max_iter = 20);
/// Same, taking an evaluation already computed at W* = start.target as the first iterate.
NewtonResult newton_on_mean(const MVConfig& cfg, double target_mean, NewtonResult start,
                            double rel_tol = 1e-5, std::size_t max_iter = 20);

struct MCResult {
    double mean;
    double stdev;
    double median;
    double std_error; ///< 2.58 sd / sqrt(n), 99% level
};

/// Forward simulation of (S, B) applying the stored controls.
MCResult monte_carlo(const MVContext& ctx, const PolicyStore& policy, std::size_t n_sim,
                     std::uint64_t seed);

/// Forward simulation of the constant-proportion strategy.
MCResult monte_carlo_constant_mix(const MVConfig& cfg, double stock_fraction, std::size_t n_sim,
                                  std::uint64_t seed);

/// One file per rebalance date: rows (x, b, b*, c*).
void write_policy_csv(const MVContext& ctx, const PolicyStore& policy,
                      const std::filesystem::path& dir);

struct FrontierPoint {
    double target;
    double mean;
    double stdev;
};

void write_frontier_csv(std::span<const FrontierPoint> points, const std::filesystem::path& path);

} // namespace mfourier
