#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "monofourier/errors.hpp"
#include "monofourier/projection.hpp"

using namespace mfourier;

namespace {

const ProcessParams kEuro = ProcessParams::pricing(0.15, 0.05, 0.1, KouJumps{0.3445, 3.0465, 3.0775});

Grid1D euro_grid(std::size_t n) { return build_grid(std::log(100.0) - 10.0, std::log(100.0) + 10.0, n); }

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

} // namespace

TEST_CASE("basis factors") {
    CHECK(basis_factor(0.0, 0.1, BasisKind::PiecewiseLinear) == 1.0);
    CHECK(basis_factor(0.0, 0.1, BasisKind::PiecewiseConstant) == 1.0);
    const double dx = 0.1;
    const double omega = 0.5 / dx; // pi * omega * dx = pi / 2
    CHECK(basis_factor(omega, dx, BasisKind::PiecewiseLinear) ==
          doctest::Approx(4.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-14));
    for (double w : {0.3, 1.7, 4.2, 11.0}) {
        const double c = basis_factor(w, dx, BasisKind::PiecewiseConstant);
        const double l = basis_factor(w, dx, BasisKind::PiecewiseLinear);
        CHECK(l == doctest::Approx(c * c).epsilon(1e-14));
        CHECK(l >= 0.0);
        CHECK(l <= 1.0);
        CHECK(c >= -0.2173);
    }
    CHECK_THROWS_AS(basis_factor(1.0, 0.0, BasisKind::PiecewiseLinear), ConfigError);
}

TEST_CASE("test measures on small inputs") {
    const std::vector<double> pos{0.1, 0.5, 2.0};
    CHECK(monotonicity_test(pos, 0.5) == 0.0);
    const std::vector<double> mixed{-1.0, 2.0};
    CHECK(monotonicity_test(mixed, 1.0) == -1.0);
    CHECK(accuracy_test(pos, pos, 0.3) == 0.0);
    CHECK_THROWS_AS(accuracy_test(pos, mixed, 1.0), ConfigError);
}

TEST_CASE("projected weights conserve mass for every truncation") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 20; ++t) {
        const ProcessParams p = testutil::random_params(rng);
        const double dtau = 0.05 + std::uniform_real_distribution<double>(0, 1)(rng);
        const Grid1D g = euro_grid(std::size_t{1} << (7 + t % 4));
        for (std::size_t alpha : {1u, 2u, 8u}) {
            for (BasisKind b : {BasisKind::PiecewiseLinear, BasisKind::PiecewiseConstant}) {
                const auto w = project_weights(g, p, dtau, alpha, b);
                double sum = 0.0;
                for (double x : w) sum += x;
                REQUIRE(std::abs(g.dx() * sum - std::exp(-p.discount() * dtau)) < 1e-12);
            }
        }
    }
}

TEST_CASE("projected weights match quadrature of the partial Fourier series") {
    const std::size_t n = 64;
    const Grid1D g = euro_grid(n);
    const double dtau = 0.25;
    const auto weights = project_weights(g, kEuro, dtau, 16, BasisKind::PiecewiseLinear);

    // g(y) = (1/P) [G_0 + 2 Re sum_{k=1}^{K} G_k e^{2 pi i k y / P}], K = 1e5
    const std::size_t terms = 100000;
    std::vector<Complex> coef;
    coef.reserve(terms);
    for (std::size_t k = 1; k <= terms; ++k) {
        const Complex gk = std::exp(characteristic_exponent(g.frequency(static_cast<std::ptrdiff_t>(k)), kEuro) * dtau);
        if (gk == Complex(0.0)) break; // every later term underflows as well
        coef.push_back(gk);
    }
    const double g0 = std::exp(-kEuro.discount() * dtau);
    const double period = g.period();
    auto green = [&](double y) {
        const Complex step = std::polar(1.0, 2.0 * std::numbers::pi * y / period);
        Complex ph = step, acc = 0.0;
        for (const Complex& c : coef) {
            acc += c * ph;
            ph *= step;
        }
        return (g0 + 2.0 * acc.real()) / period;
    };

    std::vector<double> gx, gw;
    gauss_legendre(24, gx, gw);
    const double dx = g.dx();
    const int panels = 6;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yj = static_cast<double>(g.signed_index(i)) * dx;
        double integral = 0.0;
        for (int side = 0; side < 2; ++side) {
            for (int p = 0; p < panels; ++p) {
                // offsets u in [0, dx] from the peak, hat weight 1 - u/dx
                const double a = dx * p / panels, b = dx * (p + 1) / panels;
                for (std::size_t q = 0; q < gx.size(); ++q) {
                    const double u = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
                    const double y = side == 0 ? yj + u : yj - u;
                    integral += 0.5 * (b - a) * gw[q] * (1.0 - u / dx) * green(y);
                }
            }
        }
        worst = std::max(worst, std::abs(integral / dx - weights[i]));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("weights are even when the log drift vanishes and jumps are absent") {
    const double sigma = 0.3;
    const ProcessParams p = ProcessParams::real_world(sigma, 0.5 * sigma * sigma, 0.0, KouJumps{0.5, 3.0, 3.0});
    const Grid1D g = euro_grid(256);
    const auto w = project_weights(g, p, 0.5, 4, BasisKind::PiecewiseLinear);
    for (std::size_t i = 1; i < 128; ++i)
        CHECK(std::abs(w[g.storage_index(static_cast<std::ptrdiff_t>(i))] -
                       w[g.storage_index(-static_cast<std::ptrdiff_t>(i))]) < 1e-12);
}

TEST_CASE("broad diffusion without jumps gives non-negative weights") {
    const ProcessParams p = ProcessParams::pricing(1.5, 0.05, 0.0, KouJumps{0.5, 3.0, 3.0});
    const auto w = project_weights(euro_grid(512), p, 0.25, 4, BasisKind::PiecewiseLinear);
    for (double x : w) CHECK(x >= -1e-14);
}

TEST_CASE("kernel construction on the European setup") {
    ToleranceConfig tol;
    tol.horizon = 0.25;
    const ProjectedKernel k = build_kernel(euro_grid(1024), kEuro, 0.25, BasisKind::PiecewiseLinear, tol);
    CHECK(k.alpha <= 4);
    CHECK(std::abs(k.test1) < tol.eps1);
    CHECK(k.test2 < tol.eps2);
    double sum = 0.0;
    for (double w : k.weights) sum += w;
    CHECK(std::abs(k.grid.dx() * sum - k.c1) < 1e-12);
    // spectrum at k = 0 is P * (1/N) * sum g = dx * sum g
    CHECK(std::abs(k.spectrum.at(0).real() - k.c1) < 1e-12);
    CHECK(k.spectrum.size() == 1024);
}

TEST_CASE("truncation tests reach round-off at the sizes used in practice") {
    const Grid1D g = euro_grid(2048);
    const auto w1 = project_weights(g, kEuro, 0.25, 1, BasisKind::PiecewiseLinear);
    const auto w2 = project_weights(g, kEuro, 0.25, 2, BasisKind::PiecewiseLinear);
    CHECK(accuracy_test(w2, w1, g.dx()) < 1e-14);
    CHECK(std::abs(monotonicity_test(project_weights(g, kEuro, 0.25, 4, BasisKind::PiecewiseLinear), g.dx())) < 1e-6);

    const auto s4 = project_weights(g, kEuro, 0.001, 4, BasisKind::PiecewiseLinear);
    const auto s8 = project_weights(g, kEuro, 0.001, 8, BasisKind::PiecewiseLinear);
    const double t2 = accuracy_test(s8, s4, g.dx());
    CHECK(t2 < 1e-10);
    CHECK(t2 > 1e-14);
}

TEST_CASE("degenerate pure drift does not converge") {
    const ProcessParams p = ProcessParams::pricing(0.0, 0.05, 0.0, KouJumps{0.5, 3.0, 3.0});
    ToleranceConfig tol;
    tol.alpha_max = 16;
    CHECK_THROWS_AS(build_kernel(euro_grid(256), p, 0.25, BasisKind::PiecewiseLinear, tol), NumericalError);
    CHECK_THROWS_AS(theoretical_bounds(2, 256, p, 0.25, 20.0), ConfigError);
}

TEST_CASE("tolerance validation") {
    ToleranceConfig tol;
    tol.alpha_max = 12;
    CHECK_THROWS_AS(tol.validate(), ConfigError);
    tol.alpha_max = 64;
    tol.eps1 = 0.0;
    CHECK_THROWS_AS(tol.validate(), ConfigError);
    CHECK_THROWS_AS(project_weights(euro_grid(64), kEuro, 0.25, 3, BasisKind::PiecewiseLinear), ConfigError);
}

TEST_CASE("a-priori truncation bounds dominate the measured tests") {
    // small N and dtau so that the measured quantities sit above round-off
    for (std::size_t n : {64u, 128u, 2048u}) {
        const Grid1D g = euro_grid(n);
        for (double dtau : {0.25, 0.001}) {
            auto prev = project_weights(g, kEuro, dtau, 1, BasisKind::PiecewiseLinear);
            double last1 = INFINITY, last2 = INFINITY;
            for (std::size_t alpha : {2u, 4u, 8u}) {
                const auto cur = project_weights(g, kEuro, dtau, alpha, BasisKind::PiecewiseLinear);
                const TruncationBounds b = theoretical_bounds(alpha, n, kEuro, dtau, g.period());
                if (n <= 128) { // larger grids drive the exact bound below the smallest double
                    CHECK(b.test1 > 0.0);
                    CHECK(b.test2 > 0.0);
                    CHECK(b.test1 < last1);
                    CHECK(b.test2 < last2);
                }
                last1 = b.test1;
                last2 = b.test2;
                // allow round-off on top of the exact-arithmetic bound
                CHECK(std::abs(monotonicity_test(cur, g.dx())) <= b.test1 + 1e-15);
                CHECK(accuracy_test(cur, prev, g.dx()) <= b.test2 + 1e-15);
                prev = cur;
            }
        }
    }
}

TEST_CASE("bound exponents shrink by the expected factor from alpha 2 to 4") {
    const std::size_t n = 64;
    const double dtau = 0.001, period = 20.0;
    const double c4 = 2.0 * 0.15 * 0.15 * std::numbers::pi * std::numbers::pi * dtau / (period * period);
    const auto b2 = theoretical_bounds(2, n, kEuro, dtau, period);
    const auto b4 = theoretical_bounds(4, n, kEuro, dtau, period);
    const double n2 = static_cast<double>(n * n);
    const double ratio = (b4.test1 * 16.0 * -std::expm1(-c4 * n * 4.0)) /
                         (b2.test1 * 4.0 * -std::expm1(-c4 * n * 2.0));
    CHECK(std::log(ratio) == doctest::Approx(-c4 * n2 * 3.0).epsilon(1e-9));
}
