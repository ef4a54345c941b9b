#include "monofourier/greens.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "monofourier/errors.hpp"

namespace mfourier {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;
} // namespace

void validate(const JumpSpec& jumps) {
    std::visit(Overloaded{
                   [](const KouJumps& k) {
                       if (!(k.p_up >= 0.0 && k.p_up <= 1.0))
                           throw ConfigError("Kou p_up must lie in [0, 1]");
                       if (!(k.eta_up > 0.0) || !(k.eta_down > 0.0))
                           throw ConfigError("Kou decay rates must be positive");
                   },
                   [](const MertonJumps& m) {
                       if (!(m.stdev > 0.0)) throw ConfigError("Merton jump stdev must be positive");
                   },
               },
               jumps);
}

ProcessParams::ProcessParams(Mode mode, double sigma, double drift, double discount,
                             double lambda, JumpSpec jumps)
    : mode_(mode), sigma_(sigma), drift_(drift), discount_(discount), lambda_(lambda),
      jumps_(jumps), kappa_(0.0) {
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
    if (!(lambda >= 0.0)) throw ConfigError("jump intensity lambda must be non-negative");
    if (!(discount >= 0.0)) throw ConfigError("discount rate must be non-negative");
    validate(jumps_);
    kappa_ = expected_jump_multiplier(jumps_);
}

ProcessParams ProcessParams::pricing(double sigma, double rate, double lambda, JumpSpec jumps) {
    return ProcessParams(Mode::Pricing, sigma, rate, rate, lambda, jumps);
}

ProcessParams ProcessParams::real_world(double sigma, double drift, double lambda,
                                        JumpSpec jumps) {
    return ProcessParams(Mode::RealWorld, sigma, drift, 0.0, lambda, jumps);
}

double ProcessParams::log_drift() const {
    return drift_ - lambda_ * kappa_ - 0.5 * sigma_ * sigma_;
}

std::complex<double> jump_transform_conj(double omega, const JumpSpec& jumps) {
    using namespace std::complex_literals;
    return std::visit(
        Overloaded{
            [omega](const KouJumps& k) -> std::complex<double> {
                const std::complex<double> w = 2.0 * kPi * omega * 1i;
                return k.p_up / (1.0 - w / k.eta_up) + (1.0 - k.p_up) / (1.0 + w / k.eta_down);
            },
            [omega](const MertonJumps& m) -> std::complex<double> {
                const double a = kPi * omega;
                return std::exp(2.0 * (a * m.mean * 1i - a * a * m.stdev * m.stdev));
            },
        },
        jumps);
}

double jump_moment(double m, const JumpSpec& jumps) {
    return std::visit(Overloaded{
                          [m](const KouJumps& k) {
                              if (!(m < k.eta_up) || !(m > -k.eta_down))
                                  throw ConfigError("Kou jump moment of order " +
                                                    std::to_string(m) + " is infinite");
                              return k.p_up * k.eta_up / (k.eta_up - m) +
                                     (1.0 - k.p_up) * k.eta_down / (k.eta_down + m);
                          },
                          [m](const MertonJumps& j) {
                              return std::exp(m * j.mean + 0.5 * m * m * j.stdev * j.stdev);
                          },
                      },
                      jumps);
}

double expected_jump_multiplier(const JumpSpec& jumps) {
    if (const auto* k = std::get_if<KouJumps>(&jumps); k && !(k->eta_up > 1.0))
        throw ConfigError("Kou eta_up must exceed 1 for a finite expected jump");
    if (const auto* m = std::get_if<MertonJumps>(&jumps))
        return std::expm1(m->mean + 0.5 * m->stdev * m->stdev);
    return jump_moment(1.0, jumps) - 1.0;
}

std::complex<double> characteristic_exponent(double omega, const ProcessParams& p) {
    using namespace std::complex_literals;
    const double w = 2.0 * kPi * omega;
    // -(rho + lambda) + lambda F̄ is written as -rho + lambda (F̄ - 1) so that Psi(0) = -rho exactly
    return -0.5 * p.sigma() * p.sigma() * w * w + p.log_drift() * w * 1i - p.discount() +
           p.lambda() * (jump_transform_conj(omega, p.jumps()) - 1.0);
}

double moment_exponent(double m, const ProcessParams& p) {
    const double s2 = p.sigma() * p.sigma();
    return m * p.log_drift() + 0.5 * m * m * s2 + p.lambda() * (jump_moment(m, p.jumps()) - 1.0);
}

GreensSpectrum greens_spectrum(const Grid1D& grid, const ProcessParams& params, double dtau) {
    if (!(dtau > 0.0)) throw ConfigError("timestep must be positive");
    const std::size_t n = grid.size();
    const FrequencyIndexing idx(n);
    std::vector<Complex> values(n);
    for (std::size_t s = 0; s < n; ++s)
        values[s] = std::exp(characteristic_exponent(grid.frequency(idx.signed_index(s)), params) * dtau);
    return GreensSpectrum{grid, dtau, ComplexSpectrum(std::move(values)),
                          std::exp(-params.discount() * dtau)};
}

} // namespace mfourier
