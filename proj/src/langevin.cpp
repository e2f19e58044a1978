#include "nanolaser/langevin.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "nanolaser/smallsignal.hpp"

namespace nanolaser {

NegativityPolicy parse_negativity_policy(std::string_view s) {
    if (s == "clamp") return NegativityPolicy::Clamp;
    if (s == "reflect") return NegativityPolicy::Reflect;
    throw Error("unknown negativity policy '" + std::string(s) + "' (expected clamp|reflect)");
}

DiffusionMode parse_diffusion_mode(std::string_view s) {
    if (s == "frozen") return DiffusionMode::FrozenAtSteadyState;
    if (s == "state-dependent") return DiffusionMode::StateDependent;
    throw Error("unknown diffusion mode '" + std::string(s) + "' (expected frozen|state-dependent)");
}

NoiseConstruction parse_noise_construction(std::string_view s) {
    if (s == "per-event") return NoiseConstruction::PerEvent;
    if (s == "covariance") return NoiseConstruction::Covariance;
    throw Error("unknown noise construction '" + std::string(s) + "' (expected per-event|covariance)");
}

std::string_view to_string(NegativityPolicy p) {
    return p == NegativityPolicy::Clamp ? "clamp" : "reflect";
}
std::string_view to_string(DiffusionMode m) {
    return m == DiffusionMode::FrozenAtSteadyState ? "frozen" : "state-dependent";
}
std::string_view to_string(NoiseConstruction n) {
    return n == NoiseConstruction::PerEvent ? "per-event" : "covariance";
}

void LangevinConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("langevin: epsilon must lie in (0, 1)");
    if (t_end && !(*t_end > 0.0)) throw Error("langevin: t_end must be positive");
    if (dt && !(*dt > 0.0)) throw Error("langevin: dt must be positive");
    if (!(dt_scale > 0.0)) throw Error("langevin: dt_scale must be positive");
    if (max_steps < 1) throw Error("langevin: max_steps must be at least 1");
}

DtSelection select_dt(const LaserParameters& params, double epsilon) {
    const auto ss = deterministic_steady_state(params);
    const auto d = diffusion({ss.n_p, ss.n_e, 0.0}, params);
    const double e2 = epsilon * epsilon;
    double dt = std::numeric_limits<double>::infinity();
    bool any = false;
    if (ss.n_p > 0.0 && d.aa > 0.0) {
        dt = std::min(dt, e2 * ss.n_p / (2.0 * d.aa));
        any = true;
    }
    if (ss.n_e > 0.0 && d.ee > 0.0) {
        dt = std::min(dt, e2 * ss.n_e / (2.0 * d.ee));
        any = true;
    }
    if (any && ss.n_p > 0.0 && ss.n_e > 0.0) return {dt, false};

    // Degenerate steady state: a fixed fraction of the relaxation time.
    const auto sol = small_signal_solution(params);
    if (!(sol.gamma_total > 0.0)) throw Error("langevin: cannot choose a step, no damping");
    return {e2 / sol.gamma_total, true};
}

double default_langevin_duration(const LaserParameters& params) {
    const auto sol = small_signal_solution(params);
    if (sol.omega_R_sq > 0.0) return 5000.0 / std::sqrt(sol.omega_R_sq);
    if (sol.gamma_total > 0.0) return 5000.0 / sol.gamma_total;
    throw Error("langevin: no relaxation rate to set the default duration");
}

LangevinStepper::LangevinStepper(const LaserParameters& params, const LangevinConfig& config)
    : params_(params),
      policy_(config.negativity_policy),
      mode_(config.diffusion_mode),
      noise_(config.noise_construction),
      noisy_(!config.suppress_noise),
      gamma_r_(radiative_rate(params)) {
    if (mode_ == DiffusionMode::FrozenAtSteadyState) {
        const auto ss = deterministic_steady_state(params);
        frozen_sqrt_rates_ = sqrt_rates_at(ss.n_p, ss.n_e);
        frozen_chol_ = cholesky_at(ss.n_p, ss.n_e);
    }
}

Drift LangevinStepper::drift_at(double n_p, double n_e) const {
    const double n0 = params_.n0;
    const double gain = gamma_r_ * (2.0 * n_e - n0) * n_p;
    return {gain + gamma_r_ * n_e - params_.gamma_c * n_p,
            params_.gamma_P * (n0 - n_e) - gain - gamma_r_ * n_e - params_.gamma_A * n_e};
}

std::array<double, kEventCount> LangevinStepper::sqrt_rates_at(double n_p, double n_e) const {
    // Rates are evaluated on the physical region only.
    n_p = std::max(0.0, n_p);
    n_e = std::clamp(n_e, 0.0, static_cast<double>(params_.n0));
    auto a = propensities(n_p, n_e, params_, gamma_r_);
    for (double& x : a) x = std::sqrt(std::max(0.0, x));
    return a;
}

std::array<double, 3> LangevinStepper::cholesky_at(double n_p, double n_e) const {
    n_p = std::max(0.0, n_p);
    n_e = std::clamp(n_e, 0.0, static_cast<double>(params_.n0));
    const auto d = diffusion({n_p, n_e, 0.0}, params_);
    const double c11 = 2.0 * d.aa;
    const double c21 = 2.0 * d.ae;
    const double c22 = 2.0 * d.ee;
    const double l11 = std::sqrt(std::max(0.0, c11));
    const double l21 = l11 > 0.0 ? c21 / l11 : 0.0;
    const double l22 = std::sqrt(std::max(0.0, c22 - l21 * l21));
    return {l11, l21, l22};
}

std::array<double, 2> LangevinStepper::force_from_amplitudes(
    const std::array<double, kEventCount>& sqrt_rates,
    const std::array<double, kEventCount>& normals) const {
    double fp = 0.0;
    double fe = 0.0;
    for (std::size_t j = 0; j < kEventCount; ++j) {
        const double w = sqrt_rates[j] * normals[j];
        fp += kEventDeltas[j].photons * w;
        fe += kEventDeltas[j].emitters * w;
    }
    return {fp, fe};
}

std::array<double, 2> LangevinStepper::noise_force(const ContinuousState& state,
                                                   const std::array<double, kEventCount>& normals) const {
    const bool frozen = mode_ == DiffusionMode::FrozenAtSteadyState;
    if (noise_ == NoiseConstruction::PerEvent) {
        return force_from_amplitudes(frozen ? frozen_sqrt_rates_ : sqrt_rates_at(state.n_p, state.n_e),
                                     normals);
    }
    const auto l = frozen ? frozen_chol_ : cholesky_at(state.n_p, state.n_e);
    return {l[0] * normals[0], l[1] * normals[0] + l[2] * normals[1]};
}

void LangevinStepper::apply_policy(ContinuousState& s) const {
    const double n0 = params_.n0;
    if (policy_ == NegativityPolicy::Clamp) {
        s.n_p = std::max(0.0, s.n_p);
        s.n_e = std::clamp(s.n_e, 0.0, n0);
    } else {
        s.n_p = std::abs(s.n_p);
        s.n_e = std::min(n0, std::abs(s.n_e));
    }
}

void LangevinStepper::step(ContinuousState& state, double dt, RngStream& rng) const {
    std::array<double, kEventCount> xi{};
    const std::size_t draws = noise_ == NoiseConstruction::PerEvent ? kEventCount : 2;
    if (noisy_)
        for (std::size_t j = 0; j < draws; ++j) xi[j] = rng.normal();
    const double sqdt = noisy_ ? std::sqrt(dt) : 0.0;

    const auto f0 = drift_at(state.n_p, state.n_e);
    const auto g0 = noise_force(state, xi);
    if (mode_ == DiffusionMode::FrozenAtSteadyState) {
        state.n_p += f0.photons * dt + g0[0] * sqdt;
        state.n_e += f0.emitters * dt + g0[1] * sqdt;
    } else {
        ContinuousState pred{state.n_p + f0.photons * dt + g0[0] * sqdt,
                             state.n_e + f0.emitters * dt + g0[1] * sqdt, state.t};
        apply_policy(pred);
        const auto f1 = drift_at(pred.n_p, pred.n_e);
        const auto g1 = noise_force(pred, xi);
        state.n_p += 0.5 * (f0.photons + f1.photons) * dt + 0.5 * (g0[0] + g1[0]) * sqdt;
        state.n_e += 0.5 * (f0.emitters + f1.emitters) * dt + 0.5 * (g0[1] + g1[1]) * sqdt;
    }
    if (!std::isfinite(state.n_p) || !std::isfinite(state.n_e))
        throw NonFiniteState("langevin: non-finite population at t = " + std::to_string(state.t));
    apply_policy(state);
    state.t += dt;
}

ContinuousState langevin_step(const ContinuousState& state, const LaserParameters& params, double dt,
                              const LangevinConfig& config, RngStream& rng) {
    if (!(dt > 0.0)) throw Error("langevin: dt must be positive");
    const LangevinStepper stepper(params, config);
    ContinuousState next = state;
    stepper.step(next, dt, rng);
    return next;
}

} // namespace nanolaser
