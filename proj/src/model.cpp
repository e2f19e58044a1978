#include "nanolaser/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nanolaser {

void LaserParameters::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DegenerateParameters(std::string(name) + " must be a finite non-negative rate");
    };
    check(g, "g");
    check(gamma_c, "gamma_c");
    check(gamma_A, "gamma_A");
    check(gamma_P, "gamma_P");
    check(gamma_D, "gamma_D");
    if (n0 < 1) throw DegenerateParameters("n0 must be at least 1");
}

DerivedRates derived_rates(const LaserParameters& p) {
    const double gamma_perp = p.gamma_P + p.gamma_A + p.gamma_D + p.gamma_c;
    if (!(gamma_perp > 0.0))
        throw DegenerateParameters("gamma_perp = gamma_P + gamma_A + gamma_D + gamma_c is zero");
    const double gamma_r = 4.0 * p.g * p.g / gamma_perp;

    // beta is defined with the pump switched off.
    const double perp_unpumped = p.gamma_A + p.gamma_D + p.gamma_c;
    double beta = 0.0;
    if (perp_unpumped > 0.0) {
        const double r0 = 4.0 * p.g * p.g / perp_unpumped;
        beta = (r0 + p.gamma_A) > 0.0 ? r0 / (r0 + p.gamma_A) : 0.0;
    }
    return {gamma_perp, gamma_r, beta};
}

double radiative_rate(const LaserParameters& params) { return derived_rates(params).gamma_r; }

std::string_view event_name(Event e) {
    switch (e) {
    case Event::StimulatedEmission: return "stimulated_emission";
    case Event::SpontaneousEmission: return "spontaneous_emission";
    case Event::Absorption: return "absorption";
    case Event::CavityDecay: return "cavity_decay";
    case Event::BackgroundDecay: return "background_decay";
    case Event::Pumping: return "pumping";
    }
    return "unknown";
}

Propensities propensities(const PopulationState& state, const LaserParameters& params) {
    return propensities(static_cast<double>(state.n_p), static_cast<double>(state.n_e), params,
                        radiative_rate(params));
}

Propensities propensities(const ContinuousState& state, const LaserParameters& params) {
    return propensities(state.n_p, state.n_e, params, radiative_rate(params));
}

Drift drift(const ContinuousState& s, const LaserParameters& p) {
    const double gr = radiative_rate(p);
    const double n0 = p.n0;
    const double gain = gr * (2.0 * s.n_e - n0) * s.n_p;
    return {
        gain + gr * s.n_e - p.gamma_c * s.n_p,
        p.gamma_P * (n0 - s.n_e) - gain - gr * s.n_e - p.gamma_A * s.n_e,
    };
}

Diffusion diffusion(const ContinuousState& s, const LaserParameters& p) {
    const double gr = radiative_rate(p);
    const double n0 = p.n0;
    return {
        0.5 * (gr * n0 * s.n_p + gr * s.n_e + p.gamma_c * s.n_p),
        -0.5 * gr * (s.n_e + n0 * s.n_p),
        0.5 * (gr * n0 * s.n_p + gr * s.n_e + p.gamma_P * (n0 - s.n_e) + p.gamma_A * s.n_e),
    };
}

namespace {

// Eliminating n_p between the two stationarity conditions leaves a quadratic
// in n_e with exactly one root between 0 and the first of (pump saturation,
// gain clamping). f(0) >= 0 and f(hi) <= 0 bracket it.
struct EmitterBalance {
    double gP, gA, gc, gr, n0;

    double value(double ne) const {
        return (gP * (n0 - ne) - gA * ne) * (gc - gr * (2.0 * ne - n0)) - gc * gr * ne;
    }
    double slope(double ne) const {
        return -(gP + gA) * (gc - gr * (2.0 * ne - n0)) - 2.0 * gr * (gP * (n0 - ne) - gA * ne) -
               gc * gr;
    }
};

double photons_at(const EmitterBalance& b, double ne) {
    if (b.gc > 0.0) return std::max(0.0, (b.gP * (b.n0 - ne) - b.gA * ne) / b.gc);
    const double denom = b.gc - b.gr * (2.0 * ne - b.n0);
    return denom > 0.0 ? b.gr * ne / denom : std::numeric_limits<double>::infinity();
}

} // namespace

SteadyState deterministic_steady_state(const LaserParameters& p) {
    p.validate();
    if (!(p.gamma_c > 0.0) && !(p.gamma_A > 0.0))
        throw NoPhysicalRoot("steady state needs a loss channel (gamma_c > 0 or gamma_A > 0)");
    const double gr = radiative_rate(p);
    const double n0 = p.n0;
    if (p.gamma_P == 0.0) return {0.0, 0.0};

    const EmitterBalance bal{p.gamma_P, p.gamma_A, p.gamma_c, gr, n0};
    double hi = p.gamma_P * n0 / (p.gamma_P + p.gamma_A);
    if (gr > 0.0) hi = std::min(hi, 0.5 * (p.gamma_c / gr + n0));
    hi = std::min(hi, n0);
    double lo = 0.0;

    double ne = 0.5 * (lo + hi);
    for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double f = bal.value(ne);
        if (f == 0.0) {
            lo = hi = ne;
            break;
        }
        if (f > 0.0) lo = ne;
        else hi = ne;
        const double df = bal.slope(ne);
        double next = df != 0.0 ? ne - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const bool settled = std::abs(next - ne) <= 4e-16 * std::max(1.0, ne);
        ne = next;
        if (settled) break;
    }

    const double np = photons_at(bal, ne);
    if (!(ne >= 0.0 && ne <= n0 && np >= 0.0 && std::isfinite(np)))
        throw NoPhysicalRoot("steady-state solver left the physical region");

    // One Newton polish on the full two-variable system; kept only if it
    // improves the residual and stays physical.
    SteadyState best{np, ne};
    auto residual = [&](const SteadyState& s) {
        const auto d = drift({s.n_p, s.n_e, 0.0}, p);
        return std::max(std::abs(d.photons), std::abs(d.emitters));
    };
    double best_res = residual(best);
    for (int it = 0; it < 3; ++it) {
        const auto d = drift({best.n_p, best.n_e, 0.0}, p);
        const double j11 = gr * (2.0 * best.n_e - n0) - p.gamma_c;
        const double j12 = 2.0 * gr * best.n_p + gr;
        const double j21 = -gr * (2.0 * best.n_e - n0);
        const double j22 = -p.gamma_P - 2.0 * gr * best.n_p - gr - p.gamma_A;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        SteadyState trial{best.n_p - (j22 * d.photons - j12 * d.emitters) / det,
                          best.n_e - (-j21 * d.photons + j11 * d.emitters) / det};
        if (!(trial.n_p >= 0.0 && trial.n_e >= 0.0 && trial.n_e <= n0)) break;
        const double r = residual(trial);
        if (!(r < best_res)) break;
        best = trial;
        best_res = r;
    }
    return best;
}

PopulationState rounded_steady_state(const LaserParameters& params) {
    const auto ss = deterministic_steady_state(params);
    PopulationState s;
    s.n_p = static_cast<std::int64_t>(std::llround(ss.n_p));
    s.n_e = std::clamp<std::int64_t>(std::llround(ss.n_e), 0, params.n0);
    return s;
}

LaserParameters preset_parameters(Preset preset) {
    LaserParameters p;
    p.g = 0.1;
    p.gamma_c = 0.04;
    p.gamma_D = 1.0;
    p.gamma_P = 0.0;
    switch (preset) {
    case Preset::N0_1: p.n0 = 1; break;
    case Preset::N0_10: p.n0 = 10; break;
    case Preset::N0_100: p.n0 = 100; break;
    case Preset::N0_10000: p.n0 = 10000; break;
    }
    p.gamma_A = kPresetBackgroundDecay[static_cast<std::size_t>(preset)];
    return p;
}

Preset parse_preset(std::string_view name) {
    if (name == "n0_1") return Preset::N0_1;
    if (name == "n0_10") return Preset::N0_10;
    if (name == "n0_100") return Preset::N0_100;
    if (name == "n0_10000") return Preset::N0_10000;
    throw Error("unknown preset '" + std::string(name) + "'");
}

std::string_view preset_name(Preset preset) {
    switch (preset) {
    case Preset::N0_1: return "n0_1";
    case Preset::N0_10: return "n0_10";
    case Preset::N0_100: return "n0_100";
    case Preset::N0_10000: return "n0_10000";
    }
    return "custom";
}

} // namespace nanolaser
