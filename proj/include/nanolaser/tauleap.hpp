#pragma once

// Poisson tau-leaping with the bounded fractional-change step rule. Leaps
// that would leave the physical region are rejected and retried with half
// the step; after kMaxLeapRetries rejections one exact FRM step is taken.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>

#include "nanolaser/model.hpp"
#include "nanolaser/rng.hpp"
#include "nanolaser/simulation.hpp"
#include "nanolaser/ssa.hpp"

namespace nanolaser {

struct TauLeapConfig {
    double epsilon = 0.01;
    double t_end = 1.0;
    std::uint64_t seed = 0;
    std::optional<PopulationState> initial_state;
    std::uint64_t max_steps = kDefaultMaxSteps;

    void validate() const;
};

inline constexpr int kMaxLeapRetries = 16;

/// Largest leap keeping both the expected change and its standard deviation
/// of every population below epsilon * max(x_i, 1), over all events with
/// a_j > 0. Throws AbsorbingState when nothing can happen.
double select_tau(const Propensities& a, double n_p, double n_e, double epsilon);
double select_tau(const PopulationState& state, const LaserParameters& params, double epsilon);

struct LeapResult {
    PopulationState state; // time advanced by `tau`
    double tau;            // step actually taken
    int rejections = 0;
    bool exact_fallback = false;
    std::uint64_t events = 0;
};

/// One leap from `state` with step `tau` (> 0). The propensities are frozen
/// at `state`.
LeapResult leap_step(const PopulationState& state, const LaserParameters& params, double tau,
                     RngStream& rng);

/// Noise-free leap map: every Poisson draw replaced by its mean. Test hook
/// for the explicit-Euler consistency of the leap rule.
ContinuousState mean_leap(const ContinuousState& state, const LaserParameters& params,
                          double epsilon);

template <class Observer>
    requires StateObserver<Observer, PopulationState>
TerminationReport simulate_tau(const LaserParameters& params, const TauLeapConfig& config,
                               Observer&& observer) {
    config.validate();
    params.validate();
    const double gr = radiative_rate(params);
    RngStream rng(config.seed);
    PopulationState state = config.initial_state ? *config.initial_state : rounded_steady_state(params);
    state.t = 0.0;
    if (!state.valid(params.n0)) throw Error("initial state outside the physical region");

    TerminationReport report;
    while (true) {
        if (report.steps_taken >= config.max_steps) {
            report.stop_reason = StopReason::StepLimit;
            break;
        }
        const double remaining = config.t_end - state.t;
        if (!(remaining > 0.0)) {
            report.stop_reason = StopReason::TimeLimit;
            break;
        }
        const auto a = propensities(static_cast<double>(state.n_p), static_cast<double>(state.n_e),
                                    params, gr);
        if (total_rate(a) <= 0.0) {
            report.stop_reason = StopReason::Absorbing;
            break;
        }
        const double tau = std::min(
            select_tau(a, static_cast<double>(state.n_p), static_cast<double>(state.n_e), config.epsilon),
            remaining);
        auto leap = leap_step(state, params, tau, rng);
        report.rejected_leaps += static_cast<std::uint64_t>(leap.rejections);
        if (leap.exact_fallback) {
            ++report.exact_fallbacks;
            // The exact waiting time may run past t_end; in that case the
            // state simply holds until the end.
            if (leap.tau >= remaining) {
                observer(state, remaining);
                state.t = config.t_end;
                report.stop_reason = StopReason::TimeLimit;
                break;
            }
        }
        observer(state, leap.tau);
        const bool at_end = leap.tau >= remaining;
        state = leap.state;
        ++report.steps_taken;
        if (at_end) {
            state.t = config.t_end;
            report.stop_reason = StopReason::TimeLimit;
            break;
        }
    }
    report.t_reached = state.t;
    return report;
}

} // namespace nanolaser
