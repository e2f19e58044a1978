#pragma once

// Exact steady state of the classical birth-death master equation of the
// laser Markov chain on a truncated grid n_p in [0, N_max], n_e in [0, n0].
// Transitions that would leave the grid through n_p > N_max are dropped;
// the dropped outflow is reported so the truncation can be judged.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/SparseCore>

#include "nanolaser/model.hpp"
#include "nanolaser/stats.hpp"

namespace nanolaser {

class TruncationFailure : public Error {
public:
    using Error::Error;
};

class Generator {
public:
    Generator(const LaserParameters& params, std::int64_t n_max);

    std::int64_t n_max() const { return n_max_; }
    int n0() const { return params_.n0; }
    const LaserParameters& params() const { return params_; }
    std::size_t size() const { return static_cast<std::size_t>((n_max_ + 1) * (params_.n0 + 1)); }

    std::size_t index(std::int64_t n_p, std::int64_t n_e) const {
        return static_cast<std::size_t>(n_p * (params_.n0 + 1) + n_e);
    }

    /// Column-oriented rate matrix: entry (to, from) is the transition rate,
    /// diagonal is minus the column's outflow.
    const Eigen::SparseMatrix<double>& matrix() const { return q_; }

    /// Outflow removed at n_p = N_max, per source state.
    const std::vector<double>& removed_rates() const { return removed_; }
    double total_removed_rate() const;

    /// dP/dt = Q P.
    std::vector<double> apply(const std::vector<double>& p) const;

private:
    LaserParameters params_;
    std::int64_t n_max_;
    Eigen::SparseMatrix<double> q_;
    std::vector<double> removed_;
};

Generator build_generator(const LaserParameters& params, std::int64_t n_max);

struct OracleOptions {
    double tail_tolerance = 1e-8;
    std::size_t max_states = std::size_t{1} << 20;
    std::int64_t initial_n_max = 0; // 0: max(32, 8 * steady-state photons)
};

struct OracleDistribution {
    int n0 = 1;
    std::int64_t n_max = 0;
    std::vector<double> p; // index n_p * (n0 + 1) + n_e
    double tail_mass = 0.0;
    double residual = 0.0; // ||Q p||_inf
    Moments moments;

    double at(std::int64_t n_p, std::int64_t n_e) const {
        return p[static_cast<std::size_t>(n_p * (n0 + 1) + n_e)];
    }
};

/// Solves Q p = 0 on this truncation only (no tail check).
OracleDistribution solve_distribution(const Generator& generator);

/// Solves and doubles N_max until the tail mass drops below tolerance.
/// Throws TruncationFailure past options.max_states.
OracleDistribution steady_state(const Generator& generator, const OracleOptions& options = {});
OracleDistribution oracle_steady_state(const LaserParameters& params, const OracleOptions& options = {});

/// Exact moments of a distribution on the (n_p, n_e) grid.
Moments distribution_moments(const std::vector<double>& p, int n0);

RunStatistics oracle_statistics(const OracleDistribution& dist);

/// Rows "n_p,n_e,probability".
void write_distribution(std::ostream& out, const OracleDistribution& dist);

} // namespace nanolaser
