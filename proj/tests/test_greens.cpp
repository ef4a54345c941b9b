#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "monofourier/errors.hpp"
#include "monofourier/greens.hpp"

using namespace mfourier;

namespace {

const KouJumps kEuroKou{0.3445, 3.0465, 3.0775};
const ProcessParams kEuro = ProcessParams::pricing(0.15, 0.05, 0.1, kEuroKou);
const ProcessParams kMV =
    ProcessParams::real_world(0.14777, 0.08885, 0.3222, KouJumps{0.2758, 4.4273, 5.262});

// One-sided pieces of the Kou density, each smooth on its own half-line.
double kou_up(double y, const KouJumps& k) { return k.p_up * k.eta_up * std::exp(-k.eta_up * y); }
double kou_down(double y, const KouJumps& k) {
    return (1.0 - k.p_up) * k.eta_down * std::exp(k.eta_down * y);
}

// Composite Simpson on [a, b] with n (even) panels.
template <typename F>
auto simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    auto sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * (h / 3.0);
}

} // namespace

TEST_CASE("jump transform is one at zero frequency") {
    CHECK(jump_transform_conj(0.0, kEuroKou) == Complex(1.0));
    CHECK(jump_transform_conj(0.0, MertonJumps{-1.08, 0.4}) == Complex(1.0));
}

TEST_CASE("Kou transform matches quadrature of the density") {
    for (double omega : {0.3, 1.0, 2.5}) {
        auto e = [&](double y) { return std::polar(1.0, 2.0 * std::numbers::pi * omega * y); };
        auto up = [&](double y) { return kou_up(y, kEuroKou) * e(y); };
        auto down = [&](double y) { return kou_down(y, kEuroKou) * e(y); };
        const Complex q = simpson(down, -30.0, 0.0, 200000) + simpson(up, 0.0, 30.0, 200000);
        CHECK(std::abs(jump_transform_conj(omega, kEuroKou) - q) < 1e-9);
    }
}

TEST_CASE("Merton transform matches quadrature of the density") {
    const MertonJumps m{-1.08, 0.4};
    auto f = [&](double y) {
        const double z = (y - m.mean) / m.stdev;
        return std::exp(-0.5 * z * z) / (m.stdev * std::sqrt(2.0 * std::numbers::pi)) *
               std::polar(1.0, 2.0 * std::numbers::pi * 0.7 * y);
    };
    const Complex q = simpson(f, m.mean - 12.0, m.mean + 12.0, 20000);
    CHECK(std::abs(jump_transform_conj(0.7, m) - q) < 1e-10);
}

TEST_CASE("expected jump multiplier") {
    const double kappa = expected_jump_multiplier(kEuroKou);
    CHECK(kappa == doctest::Approx(0.007559).epsilon(1e-3));
    auto up = [&](double y) { return std::exp(y) * kou_up(y, kEuroKou); };
    auto down = [&](double y) { return std::exp(y) * kou_down(y, kEuroKou); };
    const double q = simpson(down, -40.0, 0.0, 400000) + simpson(up, 0.0, 40.0, 400000) - 1.0;
    CHECK(kappa == doctest::Approx(q).epsilon(1e-8));

    CHECK(expected_jump_multiplier(MertonJumps{-1.08, 0.4}) == doctest::Approx(std::exp(-1.0) - 1.0).epsilon(1e-14));
    CHECK(std::abs(expected_jump_multiplier(MertonJumps{0.0, 1e-9})) < 1e-15);
    CHECK_THROWS_AS(expected_jump_multiplier(KouJumps{0.5, 1.0, 2.0}), ConfigError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ProcessParams::pricing(0.2, 0.05, -0.1, kEuroKou), ConfigError);
    CHECK_THROWS_AS(ProcessParams::pricing(-0.2, 0.05, 0.1, kEuroKou), ConfigError);
    CHECK_THROWS_AS(ProcessParams::pricing(0.2, 0.05, 0.1, KouJumps{1.2, 3.0, 3.0}), ConfigError);
    CHECK_THROWS_AS(ProcessParams::pricing(0.2, 0.05, 0.1, MertonJumps{0.0, 0.0}), ConfigError);
    CHECK(kMV.discount() == 0.0);
    CHECK(kEuro.discount() == kEuro.drift());
}

TEST_CASE("characteristic exponent at zero and in the pure-diffusion limit") {
    CHECK(characteristic_exponent(0.0, kEuro) == Complex(-0.05));
    CHECK(characteristic_exponent(0.0, kMV) == Complex(0.0));

    const ProcessParams bs = ProcessParams::pricing(0.15, 0.05, 0.0, kEuroKou);
    const double w = 2.0 * std::numbers::pi;
    const Complex expected(-0.15 * 0.15 * w * w / 2.0 - 0.05, (0.05 - 0.15 * 0.15 / 2.0) * w);
    CHECK(std::abs(characteristic_exponent(1.0, bs) - expected) < 1e-13);
}

TEST_CASE("Green's spectrum: mass, Hermitian symmetry, decay bound, semigroup") {
    const Grid1D g = build_grid(std::log(100.0) - 10.0, std::log(100.0) + 10.0, 512);
    const auto s = greens_spectrum(g, kEuro, 0.25);
    CHECK(std::abs(s.values.at(0) - Complex(std::exp(-0.0125))) < 1e-15);
    CHECK(s.c1 == doctest::Approx(std::exp(-0.0125)));
    const auto mv = greens_spectrum(g, kMV, 1.0);
    CHECK(std::abs(mv.values.at(0) - Complex(1.0)) < 1e-15);
    CHECK(mv.c1 == 1.0);

    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
        const ProcessParams p = testutil::random_params(rng);
        const auto a = greens_spectrum(g, p, 0.3);
        const auto b = greens_spectrum(g, p, 0.7);
        const auto ab = greens_spectrum(g, p, 1.0);
        for (std::ptrdiff_t k = -255; k < 256; ++k) {
            const double w = 2.0 * std::numbers::pi * g.frequency(k);
            REQUIRE(std::abs(a.values.at(-k) - std::conj(a.values.at(k))) < 1e-15);
            REQUIRE(std::abs(a.values.at(k)) <= std::exp(-p.sigma() * p.sigma() * w * w * 0.3 / 2.0) * (1 + 1e-12));
            REQUIRE(characteristic_exponent(g.frequency(k), p).real() <= -p.sigma() * p.sigma() * w * w / 2.0 + 1e-12);
            const Complex prod = a.values.at(k) * b.values.at(k);
            REQUIRE(std::abs(prod - ab.values.at(k)) <= 1e-12 * std::max(std::abs(ab.values.at(k)), 1e-300) + 1e-300);
        }
    }
    CHECK_THROWS_AS(greens_spectrum(g, kEuro, 0.0), ConfigError);
}

TEST_CASE("moment exponent") {
    CHECK(moment_exponent(0.0, kMV) == 0.0);
    CHECK(moment_exponent(1.0, kMV) == doctest::Approx(0.08885).epsilon(1e-13));
    CHECK_THROWS_AS(moment_exponent(5.0, kMV), ConfigError);
}

TEST_CASE("second moment exponent agrees with simulated one-period returns") {
    // independent sampler: standard library engine and distributions
    std::mt19937_64 rng(77);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    std::poisson_distribution<int> poisson(kMV.lambda());
    const auto& kou = std::get<KouJumps>(kMV.jumps());
    std::exponential_distribution<double> up(kou.eta_up), down(kou.eta_down);
    const int n = 10'000'000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        double y = kMV.log_drift() + kMV.sigma() * normal(rng);
        for (int j = poisson(rng); j > 0; --j) y += unif(rng) < kou.p_up ? up(rng) : -down(rng);
        const double r2 = std::exp(2.0 * y);
        s += r2;
        ss += r2 * r2;
    }
    const double mean = s / n;
    const double se = std::sqrt((ss / n - mean * mean) / n);
    CHECK(std::abs(mean - std::exp(moment_exponent(2.0, kMV))) < 3.0 * se);
}
