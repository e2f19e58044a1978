#include "nanolaser/smallsignal.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace nanolaser {

SmallSignalSolution small_signal_solution(const LaserParameters& params) {
    const auto ss = deterministic_steady_state(params);
    const double gr = radiative_rate(params);
    const double n0 = params.n0;

    SmallSignalSolution s;
    s.n_bar_a = ss.n_p;
    s.n_bar_e = ss.n_e;
    s.gamma_aa = params.gamma_c - gr * (2.0 * ss.n_e - n0);
    s.gamma_ae = 2.0 * gr * ss.n_p + gr;
    s.gamma_ea = gr * (2.0 * ss.n_e - n0);
    s.gamma_ee = params.gamma_P + 2.0 * gr * ss.n_p + gr + params.gamma_A;
    s.omega_R_sq = s.gamma_ae * s.gamma_ea + s.gamma_aa * s.gamma_ee;
    s.gamma_total = s.gamma_aa + s.gamma_ee;
    s.diffusion = diffusion({ss.n_p, ss.n_e, 0.0}, params);
    s.valid = s.omega_R_sq > 0.0 && s.gamma_total > 0.0;
    if (!s.valid) return s;

    const double var = photon_variance(s);
    s.var_np = var;
    if (s.n_bar_a > 0.0) {
        const auto st = photon_statistics(s.n_bar_a, var);
        s.g2_0 = st.g2_0;
        s.rin = st.rin;
    }
    return s;
}

double photon_variance(const SmallSignalSolution& s) {
    const auto& d = s.diffusion;
    const double w2 = s.omega_R_sq;
    return (1.0 / s.gamma_total) *
           ((1.0 + s.gamma_ee * s.gamma_ee / w2) * d.aa + (s.gamma_ae * s.gamma_ae / w2) * d.ee +
            (2.0 * s.gamma_ae * s.gamma_ee / w2) * d.ae);
}

FluctuationCovariance stationary_covariance(const SmallSignalSolution& s) {
    // A = [[-aa, ae], [-ea, -ee]]; unknowns (C_pp, C_pe, C_ee).
    const double a11 = -s.gamma_aa, a12 = s.gamma_ae, a21 = -s.gamma_ea, a22 = -s.gamma_ee;
    Eigen::Matrix3d m;
    m << 2 * a11, 2 * a12, 0.0,
         a21, a11 + a22, a12,
         0.0, 2 * a21, 2 * a22;
    const Eigen::Vector3d rhs(-2 * s.diffusion.aa, -2 * s.diffusion.ae, -2 * s.diffusion.ee);
    const Eigen::Vector3d c = m.fullPivLu().solve(rhs);
    return {c[0], c[1], c[2]};
}

std::optional<double> small_signal_corr_ratio(const SmallSignalSolution& s) {
    if (!s.valid || !(s.n_bar_a > 0.0) || !(s.n_bar_e > 0.0)) return std::nullopt;
    const double mean_product = s.n_bar_a * s.n_bar_e;
    return (mean_product + stationary_covariance(s).pe) / mean_product;
}

AnalyticStatistics photon_statistics(double mean_np, double var_np) {
    if (!(mean_np > 0.0)) throw ZeroPhotons("g2(0) and RIN are undefined without photons");
    const double second = mean_np * mean_np + var_np;
    const double g2 = (second - mean_np) / (mean_np * mean_np);
    return {g2, g2 + (1.0 - mean_np) / mean_np};
}

AnalyticStatistics analytic_statistics(const SmallSignalSolution& solution) {
    if (!solution.valid || !solution.var_np)
        throw SmallSignalInvalid("small-signal solution is not stable (omega_R^2 <= 0 or damping <= 0)");
    return photon_statistics(solution.n_bar_a, *solution.var_np);
}

double intensity_spectrum(const SmallSignalSolution& s, double omega) {
    const double w2 = omega * omega;
    const double re = s.omega_R_sq - w2;
    const double im = omega * s.gamma_total;
    // |H|^2 / omega_R^4 = 1 / |omega_R^2 - w^2 + i w Gamma|^2
    const double inv_det_sq = 1.0 / (re * re + im * im);
    const auto& d = s.diffusion;
    return inv_det_sq * (2.0 * s.gamma_ae * s.gamma_ae * d.ee + 4.0 * s.gamma_ee * s.gamma_ae * d.ae +
                         (s.gamma_ee * s.gamma_ee + w2) * 2.0 * d.aa);
}

} // namespace nanolaser
