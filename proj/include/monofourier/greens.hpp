#pragma once

#include <complex>
#include <variant>

#include "monofourier/grid.hpp"

namespace mfourier {

/// Double-exponential (Kou) log-jump density: up with probability p_up at rate eta_up,
/// down at rate eta_down.
struct KouJumps {
    double p_up;
    double eta_up;
    double eta_down;
};

/// Normal (Merton) log-jump density with mean and standard deviation.
struct MertonJumps {
    double mean;
    double stdev;
};

using JumpSpec = std::variant<KouJumps, MertonJumps>;

void validate(const JumpSpec& jumps);

/// Which of the two PIDE cases the parameters describe.
enum class Mode {
    Pricing,   ///< risk-neutral: drift = discount = r
    RealWorld, ///< mean-variance: free drift mu, no discounting
};

/**
 * Jump-diffusion model parameters. Built through the named constructors so that the
 * drift/discount pair is always consistent with the mode; kappa = E[xi] - 1 is
 * derived from the jump law and never supplied.
 */
class ProcessParams {
public:
    static ProcessParams pricing(double sigma, double rate, double lambda, JumpSpec jumps);
    static ProcessParams real_world(double sigma, double drift, double lambda, JumpSpec jumps);

    Mode mode() const { return mode_; }
    double sigma() const { return sigma_; }
    double drift() const { return drift_; }
    double discount() const { return discount_; }
    double lambda() const { return lambda_; }
    const JumpSpec& jumps() const { return jumps_; }
    double kappa() const { return kappa_; }

    /// Drift of log S between jumps: mu - lambda*kappa - sigma^2/2.
    double log_drift() const;

private:
    ProcessParams(Mode mode, double sigma, double drift, double discount, double lambda,
                  JumpSpec jumps);

    Mode mode_;
    double sigma_;
    double drift_;
    double discount_;
    double lambda_;
    JumpSpec jumps_;
    double kappa_;
};

/// Complex conjugate of the jump-density transform, F̄(omega) = E[exp(2 pi i omega y)].
std::complex<double> jump_transform_conj(double omega, const JumpSpec& jumps);

/// kappa = E[xi] - 1. Throws ConfigError when the Kou up-rate is <= 1 (E[xi] infinite).
double expected_jump_multiplier(const JumpSpec& jumps);

/// E[xi^m]; throws ConfigError if infinite (Kou with m >= eta_up).
double jump_moment(double m, const JumpSpec& jumps);

/// Psi(omega), with G(omega, dtau) = exp(Psi(omega) * dtau).
std::complex<double> characteristic_exponent(double omega, const ProcessParams& params);

/// psi(m) with E[(S_{t+dt}/S_t)^m] = exp(psi(m) dt). psi(1) equals the drift.
double moment_exponent(double m, const ProcessParams& params);

/// Closed-form transform of the Green's function on the grid frequencies.
struct GreensSpectrum {
    Grid1D grid;
    double dtau;
    ComplexSpectrum values;
    double c1; ///< total mass exp(-rho dtau)
};

GreensSpectrum greens_spectrum(const Grid1D& grid, const ProcessParams& params, double dtau);

} // namespace mfourier
