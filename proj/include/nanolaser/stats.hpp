#pragma once

// Time-weighted moments of trajectories and the derived photon statistics.
// Averages are <X> = sum X(t_i) dt_i / sum dt_i with piecewise-constant
// states; samples inside the burn-in window are dropped.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nanolaser/model.hpp"

namespace nanolaser {

class EmptyWindow : public Error {
public:
    using Error::Error;
};

struct Moments {
    double mean_np = 0.0;
    double mean_ne = 0.0;
    double mean_np2 = 0.0;
    double mean_ne2 = 0.0;
    double mean_npne = 0.0;
    double total_time = 0.0;
};

class MomentAccumulator {
public:
    explicit MomentAccumulator(double burn_in = 0.0) : burn_in_(burn_in) {}

    void observe(double n_p, double n_e, double dt);

    void operator()(const PopulationState& s, double dt) {
        observe(static_cast<double>(s.n_p), static_cast<double>(s.n_e), dt);
    }
    void operator()(const ContinuousState& s, double dt) { observe(s.n_p, s.n_e, dt); }

    /// Combine post-burn-in data of another accumulator.
    void merge(const MomentAccumulator& other);

    /// Throws EmptyWindow when no time was observed after burn-in.
    Moments moments() const;

    double burn_in() const { return burn_in_; }
    double elapsed() const { return elapsed_; }
    double total_time() const { return weight_; }
    std::uint64_t sample_count() const { return samples_; }

private:
    double burn_in_;
    double elapsed_ = 0.0;
    double weight_ = 0.0;
    // Second moments are accumulated about the first observed values.
    bool shifted_ = false;
    double shift_p_ = 0.0;
    double shift_e_ = 0.0;
    double sp_ = 0.0, se_ = 0.0, spp_ = 0.0, see_ = 0.0, spe_ = 0.0;
    std::uint64_t samples_ = 0;
};

/// Statistics of one trajectory (or of an exact distribution). g2/RIN are
/// empty when <n_p> = 0; corr_ratio also needs <n_e> > 0.
struct RunStatistics {
    double mean_np = 0.0;
    double mean_ne = 0.0;
    std::optional<double> g2_0;
    std::optional<double> rin;
    std::optional<double> corr_ratio;
};

RunStatistics summarize(const Moments& m);

/// Aggregate of several runs at one parameter point.
struct SummaryStatistics {
    double mean_np = 0.0;
    double mean_ne = 0.0;
    std::optional<double> g2_0;
    std::optional<double> rin;
    std::optional<double> corr_ratio;
    std::optional<double> err_np;
    std::optional<double> err_g2;
    std::optional<double> err_rin;
    double wallclock = 0.0;
    std::uint64_t steps = 0;
};

double sample_mean(std::span<const double> v);
/// Unbiased sample standard deviation (needs at least two values).
double sample_std(std::span<const double> v);

/// sqrt(delta_dt^2 + STD^2) with delta_dt = |mean(doubled) - mean(base)|;
/// STD alone when `doubled` is empty. Needs at least two base values.
double error_estimate(std::span<const double> base, std::span<const double> doubled = {});

/// Means over runs plus error bars. `doubled` holds the same quantities from
/// runs at twice the step (may be empty for exact methods).
SummaryStatistics aggregate_runs(std::span<const RunStatistics> base,
                                 std::span<const RunStatistics> doubled = {});

/// Truth with zero statistical error (exact or analytic methods).
SummaryStatistics exact_summary(const RunStatistics& truth);

/// delta = sqrt(max_X mean_runs ((X_run - X_truth)/X_truth)^2) over
/// X in {<n_p>, g2(0), RIN}. Throws when a truth value is zero or undefined.
struct RelativeError {
    double delta;
    double delta_np;
    double delta_g2;
    double delta_rin;
};
RelativeError relative_error(std::span<const RunStatistics> runs, const RunStatistics& truth);

} // namespace nanolaser
