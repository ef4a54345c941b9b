#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "monofourier/contracts.hpp"
#include "monofourier/errors.hpp"

using namespace mfourier;

namespace {

const ProcessParams kEuro = ProcessParams::pricing(0.15, 0.05, 0.1, KouJumps{0.3445, 3.0465, 3.0775});
const ProcessParams kBerm = ProcessParams::pricing(0.15, 0.05, 0.1, MertonJumps{-1.08, 0.4});

BermudanProblem bermudan(std::size_t n) {
    return BermudanProblem{kBerm, {100.0, 1.0}, 10.0, 1.0, GridSpec{100.0, 10.0, n}};
}

EuropeanProblem european_call(std::size_t n, double expiry) {
    return EuropeanProblem{kEuro, Payoff{PayoffKind::Call, 100.0}, expiry, GridSpec{100.0, 10.0, n}, std::nullopt};
}

} // namespace

TEST_CASE("payoff examples") {
    const Payoff call{PayoffKind::Call, 100.0};
    const Payoff put{PayoffKind::Put, 100.0};
    CHECK(call(std::log(100.0)) < 1e-12);
    CHECK(put(std::log(50.0)) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(call(std::log(150.0)) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(put(std::log(150.0)) == 0.0);
}

TEST_CASE("linear interpolation examples") {
    const Grid1D g = build_grid(0.0, 4.0, 4);
    const ValueCurve v(g, std::vector<double>{2.0, 4.0, 1.0, 7.0});
    CHECK(linear_interpolate(v, 1.0) == 4.0);
    CHECK(linear_interpolate(v, 0.5) == doctest::Approx(3.0));
    CHECK(linear_interpolate(v, 3.0) == 7.0);
    CHECK(linear_interpolate(v, 3.9) == 7.0);
    CHECK_THROWS_AS(linear_interpolate(v, -0.1), ConfigError);

    const ValueCurve line = ValueCurve::sample(g, [](double x) { return 3.0 - 2.0 * x; });
    for (double x : {0.1, 0.77, 1.5, 2.25, 2.999})
        CHECK(linear_interpolate(line, x) == doctest::Approx(3.0 - 2.0 * x).epsilon(1e-13));

    // price interpolation reproduces functions linear in S
    const ValueCurve s_line = ValueCurve::sample(g, [](double x) { return 5.0 + std::exp(x); });
    for (double x : {0.1, 0.77, 1.5, 2.25})
        CHECK(price_interpolate(s_line, x) == doctest::Approx(5.0 + std::exp(x)).epsilon(1e-12));
}

TEST_CASE("intervention examples") {
    const Grid1D g = GridSpec{100.0, 10.0, 256}.build();
    const Payoff put{PayoffKind::Put, 100.0};
    const ValueCurve zero(g, 0.0);
    const ValueCurve out = bermudan_intervention(zero, {100.0, 0.0});
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(out.values[i] == put(g.at(i)));

    const ValueCurve small(g, 1.0);
    const ValueCurve deep = bermudan_intervention(small, {100.0, 1.0});
    CHECK(deep.values[10] == doctest::Approx(100.0 - std::exp(g.at(10))).epsilon(1e-14));
}

TEST_CASE("intervention is monotone, non-expansive and dominates payoff and shifted continuation") {
    const Grid1D g = GridSpec{100.0, 10.0, 128}.build();
    const Payoff put{PayoffKind::Put, 100.0};
    const BermudanPutDividend spec{100.0, 3.0};
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; ++t) {
        const ValueCurve v(g, testutil::random_vector(rng, 128, 0.0, 150.0));
        auto bump = testutil::random_vector(rng, 128, 0.0, 20.0);
        ValueCurve u = v;
        for (std::size_t i = 0; i < 128; ++i) u.values[i] += bump[i];
        const ValueCurve iv = bermudan_intervention(v, spec);
        const ValueCurve iu = bermudan_intervention(u, spec);
        double gap = 0.0;
        for (std::size_t i = 0; i < 128; ++i) {
            REQUIRE(iu.values[i] >= iv.values[i]);
            REQUIRE(iv.values[i] >= put(g.at(i)));
            const double s = std::exp(g.at(i));
            const double shifted = std::log(std::max(s - spec.dividend, std::exp(g.x_min())));
            REQUIRE(iv.values[i] >= price_interpolate(v, shifted));
            gap = std::max(gap, iu.values[i] - iv.values[i]);
        }
        REQUIRE(gap <= testutil::max_abs_diff(u.values, v.values) + 1e-12);
    }
}

TEST_CASE("period count") {
    CHECK(period_count(10.0, 1.0) == 10);
    CHECK(period_count(1.0, 0.1) == 10);
    CHECK_THROWS_AS(period_count(10.0, 3.0), ConfigError);
    CHECK_THROWS_AS(period_count(10.0, 0.0), ConfigError);
    auto pb = bermudan(64);
    pb.monitoring = 3.0;
    CHECK_THROWS_AS(run_bermudan(pb, Method::MonoLinear, ToleranceConfig{}), ConfigError);
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::MonoLinear, Method::MonoConstant, Method::FstTrapezoidal, Method::FstSimpson})
        CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("crank-nicolson"), ConfigError);
}

TEST_CASE("Bermudan put on the coarsest grid") {
    CHECK(run_bermudan(bermudan(512), Method::MonoLinear, ToleranceConfig{}) ==
          doctest::Approx(24.811127744).epsilon(2e-11));
}

TEST_CASE("a single undiscounted-dividend period is a European put followed by one intervention") {
    auto pb = bermudan(512);
    pb.contract.dividend = 0.0;
    pb.expiry = pb.monitoring = 1.0;
    const ValueCurve berm = solve_bermudan(pb, Method::MonoLinear, ToleranceConfig{});
    const EuropeanProblem eu{kBerm, Payoff{PayoffKind::Put, 100.0}, 1.0, pb.grid, pb.guard};
    const ValueCurve composed =
        bermudan_intervention(solve_european(eu, Method::MonoLinear, ToleranceConfig{}), pb.contract);
    CHECK(testutil::max_abs_diff(berm.values, composed.values) < 1e-12);
}

TEST_CASE("European call on the finest grid") {
    CHECK(run_european(european_call(16384, 0.25), Method::MonoLinear, ToleranceConfig{}) ==
          doctest::Approx(3.9734860412).epsilon(3e-11));
    // short expiry: the paper's last digits depend on the truncation level
    CHECK(run_european(european_call(16384, 0.001), Method::MonoLinear, ToleranceConfig{}) ==
          doctest::Approx(0.19337297842).epsilon(1e-8));
}

TEST_CASE("discrete comparison through the Bermudan pipeline") {
    const auto pb = bermudan(512);
    const Grid1D g = pb.grid.build();
    const ToleranceConfig tol;
    std::mt19937_64 rng(2718);
    for (int t = 0; t < 50; ++t) {
        const ValueCurve w0(g, testutil::random_vector(rng, g.size(), 0.0, 150.0));
        ValueCurve u0 = w0;
        const auto lift = testutil::random_vector(rng, g.size(), 0.0, 1.0 + 40.0 * (t % 5));
        for (std::size_t i = 0; i < g.size(); ++i) u0.values[i] += lift[i];
        const ValueCurve un = solve_bermudan(pb, u0, Method::MonoLinear, tol);
        const ValueCurve wn = solve_bermudan(pb, w0, Method::MonoLinear, tol);
        double lowest = INFINITY;
        for (std::size_t i = 0; i < g.size(); ++i) lowest = std::min(lowest, un.values[i] - wn.values[i]);
        REQUIRE(lowest >= -2.0 * tol.eps1 * testutil::max_abs_diff(u0.values, w0.values));
    }
}
