#pragma once

// Laser Markov chain model: physical parameters, the six-event table and the
// deterministic drift/diffusion shared by every solver. Rates are in ps^-1,
// times in ps.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nanolaser {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateParameters : public Error {
public:
    using Error::Error;
};

class NoPhysicalRoot : public Error {
public:
    using Error::Error;
};

struct LaserParameters {
    double g = 0.1;        // light-matter coupling
    double gamma_c = 0.04; // cavity decay
    double gamma_A = 0.0;  // background decay per emitter
    double gamma_P = 0.0;  // pump rate per emitter
    double gamma_D = 1.0;  // pure dephasing per emitter
    int n0 = 1;            // emitter count

    /// Throws DegenerateParameters naming the first offending field.
    void validate() const;

    LaserParameters with_pump(double pump) const {
        LaserParameters p = *this;
        p.gamma_P = pump;
        return p;
    }
};

struct DerivedRates {
    double gamma_perp;
    double gamma_r;
    double beta;
};

/// gamma_perp = gP + gA + gD + gc, gamma_r = 4 g^2 / gamma_perp and the
/// beta factor evaluated with the pump switched off. Recomputed on every call
/// so pump sweeps never see a stale radiative rate.
DerivedRates derived_rates(const LaserParameters& params);

/// Shorthand for derived_rates(params).gamma_r.
double radiative_rate(const LaserParameters& params);

enum class Event : std::uint8_t {
    StimulatedEmission = 0,
    SpontaneousEmission,
    Absorption,
    CavityDecay,
    BackgroundDecay,
    Pumping,
};

inline constexpr std::size_t kEventCount = 6;

struct StateChange {
    int photons;
    int emitters;
};

/// Population change v_j per event, in Event order.
inline constexpr std::array<StateChange, kEventCount> kEventDeltas{{
    {+1, -1}, // stimulated emission
    {+1, -1}, // spontaneous emission
    {-1, +1}, // absorption
    {-1, 0},  // cavity decay
    {0, -1},  // background decay
    {0, +1},  // pumping
}};

std::string_view event_name(Event e);

struct PopulationState {
    std::int64_t n_p = 0;
    std::int64_t n_e = 0;
    double t = 0.0;

    bool valid(int n0) const { return n_p >= 0 && n_e >= 0 && n_e <= n0 && t >= 0.0; }
    friend bool operator==(const PopulationState&, const PopulationState&) = default;
};

struct ContinuousState {
    double n_p = 0.0;
    double n_e = 0.0;
    double t = 0.0;
};

using Propensities = std::array<double, kEventCount>;

/// Table of event rates. The radiative rate is passed in so callers in hot
/// loops compute it once per parameter set.
inline Propensities propensities(double n_p, double n_e, const LaserParameters& params,
                                 double gamma_r) {
    const double n0 = params.n0;
    return {
        gamma_r * n_e * n_p,
        gamma_r * n_e,
        gamma_r * (n0 - n_e) * n_p,
        params.gamma_c * n_p,
        params.gamma_A * n_e,
        params.gamma_P * (n0 - n_e),
    };
}

Propensities propensities(const PopulationState& state, const LaserParameters& params);
Propensities propensities(const ContinuousState& state, const LaserParameters& params);

inline double total_rate(const Propensities& a) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
}

/// Applies event e to the populations (time is left untouched).
inline void apply_event(PopulationState& state, Event e) {
    const auto& d = kEventDeltas[static_cast<std::size_t>(e)];
    state.n_p += d.photons;
    state.n_e += d.emitters;
}

struct Drift {
    double photons;
    double emitters;
};

/// Rate-equation right-hand side (dn_p/dt, dn_e/dt).
Drift drift(const ContinuousState& state, const LaserParameters& params);

/// Half the event-sum second moments: 2 D_ij = sum_k v_k[i] v_k[j] a_k.
struct Diffusion {
    double aa;
    double ae;
    double ee;
};

Diffusion diffusion(const ContinuousState& state, const LaserParameters& params);

struct SteadyState {
    double n_p;
    double n_e;
};

/// Physical fixed point of the noiseless rate equations (0 <= n_e <= n0,
/// n_p >= 0). Throws NoPhysicalRoot when no loss channel exists or the
/// solver leaves the physical region.
SteadyState deterministic_steady_state(const LaserParameters& params);

/// Nearest valid integer state to the deterministic steady state.
PopulationState rounded_steady_state(const LaserParameters& params);

// Parameter presets with the fixed coupling/decay/dephasing values and the
// per-emitter-count background decay rates.
enum class Preset { N0_1, N0_10, N0_100, N0_10000 };

inline constexpr std::array<double, 4> kPresetBackgroundDecay{0.0, 0.263941, 1.51458, 19.4566};

LaserParameters preset_parameters(Preset preset);
Preset parse_preset(std::string_view name);
std::string_view preset_name(Preset preset);

} // namespace nanolaser
