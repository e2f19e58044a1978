#pragma once

// Exact sampling of the laser Markov chain with the First Reaction Method:
// one exponential waiting time per active event, the earliest one fires.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "nanolaser/model.hpp"
#include "nanolaser/rng.hpp"
#include "nanolaser/simulation.hpp"

namespace nanolaser {

struct SsaConfig {
    double t_end = 1.0;
    std::uint64_t max_steps = kDefaultMaxSteps;
    std::uint64_t seed = 0;
    std::optional<PopulationState> initial_state; // rounded steady state when empty

    void validate() const;
};

struct FirstReaction {
    Event event;
    double tau;
};

/// Draws tau_j = ln(1/r_j)/a_j for every a_j > 0 in event order and returns
/// the earliest. `uniform` must yield values in (0, 1). Ties go to the lowest
/// event index. Throws AbsorbingState when every propensity is zero.
template <class UniformSource>
FirstReaction first_reaction(const Propensities& a, UniformSource&& uniform) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = kEventCount;
    for (std::size_t j = 0; j < kEventCount; ++j) {
        if (!(a[j] > 0.0)) continue;
        const double tau = -std::log(uniform()) / a[j];
        if (tau < best || best_j == kEventCount) {
            best = tau;
            best_j = j;
        }
    }
    if (best_j == kEventCount) throw AbsorbingState("all propensities are zero");
    return {static_cast<Event>(best_j), best};
}

inline FirstReaction frm_step(const PopulationState& state, const LaserParameters& params,
                              RngStream& rng) {
    return first_reaction(propensities(state, params), [&rng] { return rng.uniform_open(); });
}

/// Runs the chain from config.initial_state until t_end, max_steps or an
/// absorbing state. The observer sees each visited state with its holding
/// time; the last interval is truncated at t_end.
template <class Observer>
    requires StateObserver<Observer, PopulationState>
TerminationReport simulate_ssa(const LaserParameters& params, const SsaConfig& config,
                               Observer&& observer) {
    config.validate();
    params.validate();
    const double gr = radiative_rate(params);
    RngStream rng(config.seed);
    PopulationState state = config.initial_state ? *config.initial_state : rounded_steady_state(params);
    state.t = 0.0;
    if (!state.valid(params.n0)) throw Error("initial state outside the physical region");

    TerminationReport report;
    auto uniform = [&rng] { return rng.uniform_open(); };
    while (true) {
        if (report.steps_taken >= config.max_steps) {
            report.stop_reason = StopReason::StepLimit;
            break;
        }
        const auto a = propensities(static_cast<double>(state.n_p), static_cast<double>(state.n_e),
                                    params, gr);
        if (total_rate(a) <= 0.0) {
            report.stop_reason = StopReason::Absorbing;
            break;
        }
        const auto fr = first_reaction(a, uniform);
        const double remaining = config.t_end - state.t;
        if (fr.tau >= remaining) {
            observer(state, remaining);
            state.t = config.t_end;
            report.stop_reason = StopReason::TimeLimit;
            break;
        }
        observer(state, fr.tau);
        apply_event(state, fr.event);
        state.t += fr.tau;
        ++report.steps_taken;
    }
    report.t_reached = state.t;
    return report;
}

} // namespace nanolaser
