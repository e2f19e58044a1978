#include "nanolaser/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/SparseLU>

#include "nanolaser/io.hpp"

namespace nanolaser {

Generator::Generator(const LaserParameters& params, std::int64_t n_max)
    : params_(params), n_max_(n_max) {
    params.validate();
    if (n_max < 1) throw Error("oracle: N_max must be at least 1");
    const std::size_t n = size();
    const double gr = radiative_rate(params);
    removed_.assign(n, 0.0);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n * 6);
    for (std::int64_t p = 0; p <= n_max; ++p) {
        for (std::int64_t e = 0; e <= params.n0; ++e) {
            const std::size_t from = index(p, e);
            const auto a = propensities(static_cast<double>(p), static_cast<double>(e), params, gr);
            // Emission processes share a target; merge them into one entry.
            const double rates[5] = {a[0] + a[1], a[2], a[3], a[4], a[5]};
            const int dp[5] = {+1, -1, -1, 0, 0};
            const int de[5] = {-1, +1, 0, -1, +1};
            double out = 0.0;
            for (int k = 0; k < 5; ++k) {
                if (!(rates[k] > 0.0)) continue;
                const std::int64_t tp = p + dp[k];
                const std::int64_t te = e + de[k];
                if (tp > n_max) {
                    removed_[from] += rates[k];
                    continue;
                }
                trip.emplace_back(static_cast<int>(index(tp, te)), static_cast<int>(from), rates[k]);
                out += rates[k];
            }
            trip.emplace_back(static_cast<int>(from), static_cast<int>(from), -out);
        }
    }
    q_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    q_.setFromTriplets(trip.begin(), trip.end());
    q_.makeCompressed();
}

double Generator::total_removed_rate() const {
    double s = 0.0;
    for (double r : removed_) s += r;
    return s;
}

std::vector<double> Generator::apply(const std::vector<double>& p) const {
    if (p.size() != size()) throw Error("oracle: distribution size does not match the generator");
    Eigen::Map<const Eigen::VectorXd> in(p.data(), static_cast<Eigen::Index>(p.size()));
    Eigen::VectorXd r = q_ * in;
    return {r.data(), r.data() + r.size()};
}

Generator build_generator(const LaserParameters& params, std::int64_t n_max) {
    return Generator(params, n_max);
}

Moments distribution_moments(const std::vector<double>& p, int n0) {
    const std::size_t width = static_cast<std::size_t>(n0) + 1;
    Moments m;
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double np = static_cast<double>(i / width);
        const double ne = static_cast<double>(i % width);
        const double w = p[i];
        total += w;
        m.mean_np += w * np;
        m.mean_ne += w * ne;
        m.mean_np2 += w * np * np;
        m.mean_ne2 += w * ne * ne;
        m.mean_npne += w * np * ne;
    }
    if (total > 0.0 && total != 1.0) {
        m.mean_np /= total;
        m.mean_ne /= total;
        m.mean_np2 /= total;
        m.mean_ne2 /= total;
        m.mean_npne /= total;
    }
    m.total_time = 0.0;
    return m;
}

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void normalise(Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < 0.0) x[i] = 0.0;
    const double s = x.sum();
    if (!(s > 0.0)) throw Error("oracle: steady-state solve produced no probability mass");
    x /= s;
}

// Uniformised power iteration; used only when the direct factorisation fails.
Eigen::VectorXd power_iteration(const Eigen::SparseMatrix<double>& q, std::size_t ref) {
    double lambda = 0.0;
    for (Eigen::Index k = 0; k < q.outerSize(); ++k) lambda = std::max(lambda, -q.coeff(k, k));
    lambda = lambda > 0.0 ? 1.05 * lambda : 1.0;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(q.rows());
    x[static_cast<Eigen::Index>(ref)] = 1.0;
    for (int it = 0; it < 2'000'000; ++it) {
        const Eigen::VectorXd dx = q * x;
        if (inf_norm(dx) < 1e-12) return x;
        x += dx / lambda;
    }
    throw Error("oracle: power iteration did not converge");
}

} // namespace

OracleDistribution solve_distribution(const Generator& gen) {
    const auto& q = gen.matrix();
    const Eigen::Index n = q.rows();

    // Pin the state nearest the deterministic fixed point (a high-probability
    // state) to 1 instead of one balance equation, then normalise.
    std::size_t ref = 0;
    try {
        auto rs = rounded_steady_state(gen.params());
        ref = gen.index(std::min(rs.n_p, gen.n_max()), rs.n_e);
    } catch (const Error&) {
        ref = 0;
    }
    const Eigen::Index k = static_cast<Eigen::Index>(ref);

    Eigen::SparseMatrix<double> a = q;
    a.prune([k](const Eigen::Index& row, const Eigen::Index&, const double&) { return row != k; });
    a.insert(k, k) = 1.0;
    a.makeCompressed();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[k] = 1.0;

    Eigen::VectorXd x;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() == Eigen::Success) {
        x = lu.solve(b);
        for (int refine = 0; refine < 2 && lu.info() == Eigen::Success; ++refine) {
            const Eigen::VectorXd r = b - a * x;
            x += lu.solve(r);
        }
    }
    if (lu.info() != Eigen::Success || !x.allFinite()) x = power_iteration(q, ref);
    normalise(x);

    OracleDistribution d;
    d.n0 = gen.n0();
    d.n_max = gen.n_max();
    d.p.assign(x.data(), x.data() + x.size());
    d.residual = inf_norm(q * x);
    for (std::int64_t e = 0; e <= d.n0; ++e) d.tail_mass += d.at(d.n_max, e);
    d.moments = distribution_moments(d.p, d.n0);
    return d;
}

OracleDistribution steady_state(const Generator& generator, const OracleOptions& options) {
    const auto& params = generator.params();
    const std::size_t width = static_cast<std::size_t>(params.n0) + 1;
    std::int64_t n_max = generator.n_max();
    OracleDistribution d = solve_distribution(generator);
    while (d.tail_mass >= options.tail_tolerance) {
        n_max *= 2;
        if (static_cast<std::size_t>(n_max + 1) * width > options.max_states)
            throw TruncationFailure("oracle: photon truncation would exceed " +
                                    std::to_string(options.max_states) + " states");
        d = solve_distribution(Generator(params, n_max));
    }
    return d;
}

OracleDistribution oracle_steady_state(const LaserParameters& params, const OracleOptions& options) {
    std::int64_t n_max = options.initial_n_max;
    if (n_max <= 0) {
        double photons = 0.0;
        try {
            photons = deterministic_steady_state(params).n_p;
        } catch (const NoPhysicalRoot&) {
            photons = 0.0;
        }
        n_max = std::max<std::int64_t>(32, static_cast<std::int64_t>(std::ceil(8.0 * photons)));
    }
    const std::size_t width = static_cast<std::size_t>(params.n0) + 1;
    if (static_cast<std::size_t>(n_max + 1) * width > options.max_states)
        throw TruncationFailure("oracle: initial truncation already exceeds " +
                                std::to_string(options.max_states) + " states");
    return steady_state(Generator(params, n_max), options);
}

RunStatistics oracle_statistics(const OracleDistribution& dist) { return summarize(dist.moments); }

void write_distribution(std::ostream& out, const OracleDistribution& dist) {
    out << "n_p,n_e,probability\n";
    for (std::int64_t p = 0; p <= dist.n_max; ++p)
        for (std::int64_t e = 0; e <= dist.n0; ++e)
            out << p << ',' << e << ',' << format_double(dist.at(p, e)) << '\n';
}

} // namespace nanolaser
