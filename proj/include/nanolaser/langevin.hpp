#pragma once

// Fixed-step integration of the Langevin rate equations with population
// clamping or reflection applied after every full step.
//
//   FrozenAtSteadyState: additive noise with the diffusion evaluated once at
//                        the deterministic steady state (Euler-Maruyama).
//   StateDependent:      multiplicative noise re-evaluated every step with an
//                        Euler-Heun predictor-corrector.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "nanolaser/model.hpp"
#include "nanolaser/rng.hpp"
#include "nanolaser/simulation.hpp"

namespace nanolaser {

enum class NegativityPolicy { Clamp, Reflect };
enum class DiffusionMode { FrozenAtSteadyState, StateDependent };
enum class NoiseConstruction { PerEvent, Covariance };

NegativityPolicy parse_negativity_policy(std::string_view s);
DiffusionMode parse_diffusion_mode(std::string_view s);
NoiseConstruction parse_noise_construction(std::string_view s);
std::string_view to_string(NegativityPolicy p);
std::string_view to_string(DiffusionMode m);
std::string_view to_string(NoiseConstruction n);

class NonFiniteState : public Error {
public:
    using Error::Error;
};

struct LangevinConfig {
    double epsilon = 0.01;
    std::optional<double> t_end;              // 5000 / omega_R when empty
    std::uint64_t seed = 0;
    std::optional<ContinuousState> initial_state; // steady state when empty
    NegativityPolicy negativity_policy = NegativityPolicy::Clamp;
    DiffusionMode diffusion_mode = DiffusionMode::FrozenAtSteadyState;
    NoiseConstruction noise_construction = NoiseConstruction::PerEvent;
    double dt_scale = 1.0;                    // 2 for the doubled-step error runs
    std::optional<double> dt;                 // explicit step, bypasses select_dt
    std::uint64_t max_steps = kDefaultMaxSteps;
    bool suppress_noise = false;              // deterministic Euler/Heun steps

    void validate() const;
};

struct DtSelection {
    double dt;
    bool fallback; // steady state degenerate; dt = eps^2 / damping
};

/// dt = min(eps^2 n_p / (2 D_aa), eps^2 n_e / (2 D_ee)) at the steady state.
DtSelection select_dt(const LaserParameters& params, double epsilon);

/// Default integration window 5000 / omega_R.
double default_langevin_duration(const LaserParameters& params);

/// Holds everything that is fixed over a trajectory (steady-state noise
/// amplitudes, radiative rate) so the per-step work stays small.
class LangevinStepper {
public:
    LangevinStepper(const LaserParameters& params, const LangevinConfig& config);

    /// Advances `state` by dt (time included) and applies the negativity
    /// policy. Throws NonFiniteState.
    void step(ContinuousState& state, double dt, RngStream& rng) const;

    /// Noise force for a given draw of standard normals (first 2 used by the
    /// covariance construction), evaluated at `state` or at the steady state.
    std::array<double, 2> noise_force(const ContinuousState& state,
                                      const std::array<double, kEventCount>& normals) const;

    Drift drift_at(double n_p, double n_e) const;

private:
    std::array<double, 2> force_from_amplitudes(const std::array<double, kEventCount>& sqrt_rates,
                                                const std::array<double, kEventCount>& normals) const;
    std::array<double, kEventCount> sqrt_rates_at(double n_p, double n_e) const;
    std::array<double, 3> cholesky_at(double n_p, double n_e) const;
    void apply_policy(ContinuousState& s) const;

    LaserParameters params_;
    NegativityPolicy policy_;
    DiffusionMode mode_;
    NoiseConstruction noise_;
    bool noisy_;
    double gamma_r_;
    std::array<double, kEventCount> frozen_sqrt_rates_{};
    std::array<double, 3> frozen_chol_{}; // l11, l21, l22 of 2D
};

/// One step from `state`; builds a stepper each call (convenience for tests).
ContinuousState langevin_step(const ContinuousState& state, const LaserParameters& params, double dt,
                              const LangevinConfig& config, RngStream& rng);

struct LangevinReport : TerminationReport {
    double dt = 0.0;
    bool dt_fallback = false;
    bool initial_from_steady_state = false;
};

template <class Observer>
    requires StateObserver<Observer, ContinuousState>
LangevinReport simulate_langevin(const LaserParameters& params, const LangevinConfig& config,
                                 Observer&& observer) {
    config.validate();
    params.validate();
    LangevinReport report;
    double dt = 0.0;
    if (config.dt) {
        dt = *config.dt;
    } else {
        const auto sel = select_dt(params, config.epsilon);
        dt = sel.dt;
        report.dt_fallback = sel.fallback;
    }
    dt *= config.dt_scale;
    report.dt = dt;
    const double t_end = config.t_end ? *config.t_end : default_langevin_duration(params);

    ContinuousState state;
    if (config.initial_state) {
        state = *config.initial_state;
    } else {
        const auto ss = deterministic_steady_state(params);
        state = {ss.n_p, ss.n_e, 0.0};
        report.initial_from_steady_state = true;
    }
    state.t = 0.0;

    const LangevinStepper stepper(params, config);
    RngStream rng(config.seed);
    while (true) {
        if (report.steps_taken >= config.max_steps) {
            report.stop_reason = StopReason::StepLimit;
            break;
        }
        const double remaining = t_end - state.t;
        if (!(remaining > 0.0)) {
            report.stop_reason = StopReason::TimeLimit;
            break;
        }
        const bool last = dt >= remaining;
        const double h = last ? remaining : dt;
        observer(state, h);
        stepper.step(state, h, rng);
        ++report.steps_taken;
        if (last) {
            state.t = t_end;
            report.stop_reason = StopReason::TimeLimit;
            break;
        }
    }
    report.t_reached = state.t;
    return report;
}

} // namespace nanolaser
