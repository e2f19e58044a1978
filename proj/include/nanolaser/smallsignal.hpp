#pragma once

// Closed-form small-signal solution of the Langevin rate equations
// linearised around the deterministic steady state.
//
// Note: `rin` here is the dimensionless zero-delay quantity
//   RIN = g2(0) + (1 - <n_p>) / <n_p>,
// not a per-Hz spectral density.

#include <optional>

#include "nanolaser/model.hpp"

namespace nanolaser {

class SmallSignalInvalid : public Error {
public:
    using Error::Error;
};

class ZeroPhotons : public Error {
public:
    using Error::Error;
};

struct SmallSignalSolution {
    double n_bar_a = 0.0;
    double n_bar_e = 0.0;
    // Linearised dynamics: d/dt (dn_p, dn_e) = [[-aa, ae], [-ea, -ee]] (dn_p, dn_e)
    double gamma_aa = 0.0;
    double gamma_ae = 0.0;
    double gamma_ea = 0.0;
    double gamma_ee = 0.0;
    double omega_R_sq = 0.0;  // gamma_ae*gamma_ea + gamma_aa*gamma_ee
    double gamma_total = 0.0; // gamma_aa + gamma_ee
    Diffusion diffusion{};    // at the steady state
    bool valid = false;       // omega_R_sq > 0 and gamma_total > 0

    // Withheld when !valid.
    std::optional<double> var_np;
    std::optional<double> g2_0;
    std::optional<double> rin;
};

SmallSignalSolution small_signal_solution(const LaserParameters& params);

/// Stationary photon variance from the Gamma entries and diffusion fields of
/// `solution` (meaningful only when valid).
double photon_variance(const SmallSignalSolution& solution);

/// Stationary covariance of the linearised fluctuations with noise
/// covariance 2D, i.e. the solution of A C + C A^T + 2D = 0.
struct FluctuationCovariance {
    double pp;
    double pe;
    double ee;
};
FluctuationCovariance stationary_covariance(const SmallSignalSolution& solution);

/// <n_p n_e> / (<n_p><n_e>) from the linearised covariance; empty when the
/// solution is invalid or a mean vanishes.
std::optional<double> small_signal_corr_ratio(const SmallSignalSolution& solution);

struct AnalyticStatistics {
    double g2_0;
    double rin;
};

/// g2(0) and RIN from a mean and photon variance.
AnalyticStatistics photon_statistics(double mean_np, double var_np);

/// Throws SmallSignalInvalid / ZeroPhotons.
AnalyticStatistics analytic_statistics(const SmallSignalSolution& solution);

/// Photon-number noise spectrum, normalised so that
/// (1/2pi) * integral S(w) dw = var_np.
double intensity_spectrum(const SmallSignalSolution& solution, double omega);

} // namespace nanolaser
