#include "nanolaser/tauleap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nanolaser {

void TauLeapConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("tauleap: epsilon must lie in (0, 1)");
    if (!(t_end > 0.0)) throw Error("tauleap: t_end must be positive");
    if (max_steps < 1) throw Error("tauleap: max_steps must be at least 1");
}

double select_tau(const Propensities& a, double n_p, double n_e, double epsilon) {
    const double x[2] = {std::max(n_p, 1.0), std::max(n_e, 1.0)};
    double tau = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t j = 0; j < kEventCount; ++j) {
        if (!(a[j] > 0.0)) continue;
        any = true;
        const int v[2] = {kEventDeltas[j].photons, kEventDeltas[j].emitters};
        for (int i = 0; i < 2; ++i) {
            if (v[i] == 0) continue;
            const double av = std::abs(static_cast<double>(v[i]));
            const double mean_bound = epsilon * x[i] / (av * a[j]);
            const double sd_bound = epsilon * epsilon * x[i] * x[i] / (av * av * a[j]);
            tau = std::min({tau, mean_bound, sd_bound});
        }
    }
    if (!any) throw AbsorbingState("all propensities are zero");
    return tau;
}

double select_tau(const PopulationState& state, const LaserParameters& params, double epsilon) {
    return select_tau(propensities(state, params), static_cast<double>(state.n_p),
                      static_cast<double>(state.n_e), epsilon);
}

LeapResult leap_step(const PopulationState& state, const LaserParameters& params, double tau,
                     RngStream& rng) {
    if (!(tau > 0.0)) throw Error("tauleap: leap step must be positive");
    const auto a = propensities(state, params);
    const double a0 = total_rate(a);
    std::size_t last = 0;
    for (std::size_t j = 0; j < kEventCount; ++j)
        if (a[j] > 0.0) last = j;
    LeapResult out{state, tau};
    for (int attempt = 0; attempt <= kMaxLeapRetries; ++attempt) {
        std::int64_t dp = 0;
        std::int64_t de = 0;
        std::uint64_t fired = 0;
        // Independent Poisson counts per event, drawn as a Poisson total split
        // multinomially; most leaps at low population fire nothing at all.
        std::int64_t left = rng.poisson(a0 * out.tau);
        fired = static_cast<std::uint64_t>(left);
        double mass = a0;
        for (std::size_t j = 0; j < kEventCount && left > 0; ++j) {
            if (!(a[j] > 0.0)) continue;
            const double q = std::min(1.0, a[j] / mass);
            const std::int64_t k = j == last || q >= 1.0
                                       ? left
                                       : std::binomial_distribution<std::int64_t>(left, q)(rng.engine());
            dp += k * kEventDeltas[j].photons;
            de += k * kEventDeltas[j].emitters;
            left -= k;
            mass -= a[j];
        }
        PopulationState next{state.n_p + dp, state.n_e + de, state.t + out.tau};
        if (next.valid(params.n0)) {
            out.state = next;
            out.events = fired;
            return out;
        }
        ++out.rejections;
        out.tau *= 0.5;
    }
    const auto fr = first_reaction(a, [&rng] { return rng.uniform_open(); });
    out.state = state;
    apply_event(out.state, fr.event);
    out.tau = fr.tau;
    out.state.t = state.t + fr.tau;
    out.exact_fallback = true;
    out.events = 1;
    return out;
}

ContinuousState mean_leap(const ContinuousState& state, const LaserParameters& params,
                          double epsilon) {
    const auto a = propensities(state, params);
    const double tau = select_tau(a, state.n_p, state.n_e, epsilon);
    ContinuousState next = state;
    for (std::size_t j = 0; j < kEventCount; ++j) {
        next.n_p += a[j] * tau * kEventDeltas[j].photons;
        next.n_e += a[j] * tau * kEventDeltas[j].emitters;
    }
    next.t += tau;
    return next;
}

} // namespace nanolaser
