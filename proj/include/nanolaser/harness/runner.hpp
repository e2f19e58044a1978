#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nanolaser/harness/results.hpp"
#include "nanolaser/harness/spec.hpp"
#include "nanolaser/stats.hpp"

namespace nanolaser {

/// Calls fn(i) for i in [0, n) on up to `workers` threads. fn must not throw.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Outcome of one stochastic trajectory.
struct RunOutcome {
    std::optional<RunStatistics> stats;
    std::uint64_t steps = 0;
    double wallclock_s = 0.0;
    std::string status = "ok";
};

struct RunRequest {
    Method method = Method::Ssa;
    LaserParameters params;
    MethodOptions options;
    double t_end = 0.0;
    std::uint64_t seed = 0;
    bool doubled = false; // 2 epsilon for tauleap, 2 dt for langevin
};

/// Runs one trajectory and summarizes it after the burn-in window.
/// Failures are reported in `status`, never thrown.
RunOutcome run_trajectory(const RunRequest& request);

/// Default simulated time of one run: 5000/omega_R scaled for Langevin, 100x
/// that for the Markov-chain methods, unless overridden.
double run_duration(Method method, const LaserParameters& params, const MethodOptions& options);

/// Exact (oracle) or analytic (smallsignal) statistics at one point.
struct ReferenceOutcome {
    std::optional<RunStatistics> stats;
    std::string status = "ok";
    double wallclock_s = 0.0;
};
ReferenceOutcome reference_statistics(Method method, const LaserParameters& params);

std::uint64_t method_seed_key(Method m);

struct SweepResult {
    std::vector<ResultRow> rows; // pump ascending, then method name
    std::vector<RunRow> runs;    // pump, method, variant, run
};

/// Every (pump, method) point; failures stay in-row. `log` receives one line
/// per completed point when non-null.
SweepResult run_sweep(const SweepSpec& spec, std::ostream* log = nullptr);

/// Nominal throughput (steps per second) used when spec.deterministic is set.
double nominal_step_rate(Method m);

std::vector<BenchRow> run_benchmark(const BenchmarkSpec& spec, std::ostream* log = nullptr);

/// Sidecar contents: resolved configuration, seed scheme and version.
nlohmann::json sweep_metadata(const SweepSpec& spec, const nlohmann::json& resolved);
nlohmann::json bench_metadata(const BenchmarkSpec& spec, const nlohmann::json& resolved);

} // namespace nanolaser
