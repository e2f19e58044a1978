#pragma once

#include <cstdint>
#include <string_view>

#include "nanolaser/model.hpp"

namespace nanolaser {

class AbsorbingState : public Error {
public:
    using Error::Error;
};

enum class StopReason { TimeLimit, StepLimit, Absorbing };

inline std::string_view stop_reason_name(StopReason r) {
    switch (r) {
    case StopReason::TimeLimit: return "time_limit";
    case StopReason::StepLimit: return "step_limit";
    case StopReason::Absorbing: return "absorbing";
    }
    return "unknown";
}

struct TerminationReport {
    double t_reached = 0.0;
    std::uint64_t steps_taken = 0;
    StopReason stop_reason = StopReason::TimeLimit;
    // Tau-leaping bookkeeping; zero for other methods.
    std::uint64_t rejected_leaps = 0;
    std::uint64_t exact_fallbacks = 0;
};

/// Observers receive each (state, holding time) pair; the state holds for
/// the whole interval.
template <class Observer, class State>
concept StateObserver = requires(Observer& obs, const State& s, double dt) { obs(s, dt); };

struct NullObserver {
    template <class State>
    void operator()(const State&, double) const noexcept {}
};

inline constexpr std::uint64_t kDefaultMaxSteps = 20'000'000'000ULL;

} // namespace nanolaser
