#pragma once

// Sweep and benchmark descriptions plus their layered configuration:
// preset values, overridden by a JSON file, overridden by command-line flags.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nanolaser/langevin.hpp"
#include "nanolaser/model.hpp"
#include "nanolaser/simulation.hpp"

namespace nanolaser {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

class ConfigError : public Error {
public:
    using Error::Error;
};

// Enumerators are in name order, which is also the row order of the output.
enum class Method { Langevin, Oracle, SmallSignal, Ssa, TauLeap };

std::string_view method_name(Method m);
Method parse_method(std::string_view s);
bool is_stochastic(Method m);

struct MethodOptions {
    double epsilon = 0.01; // tau-leap step rule and Langevin step size
    NegativityPolicy negativity_policy = NegativityPolicy::Clamp;
    DiffusionMode diffusion_mode = DiffusionMode::FrozenAtSteadyState;
    NoiseConstruction noise_construction = NoiseConstruction::PerEvent;
    std::uint64_t max_steps = kDefaultMaxSteps;
    double duration_scale = 1.0;
    std::optional<double> langevin_duration; // ps; 5000/omega_R * duration_scale when empty
    std::optional<double> markov_duration;   // ps; 100x the Langevin duration when empty
    double burn_in_fraction = 0.01;
    bool error_runs = true; // extra runs at doubled step for tauleap/langevin
};

struct SweepSpec {
    std::string preset = "n0_1";
    LaserParameters params;
    std::vector<double> pump_grid;
    std::vector<Method> methods;
    int runs_per_point = 5;
    std::uint64_t base_seed = 1;
    MethodOptions options;
    bool deterministic = false; // omit wall-clock values from the CSV
    int workers = 1;

    void validate() const;
};

struct BenchmarkSpec {
    std::string preset = "n0_1";
    LaserParameters params; // gamma_P is the benchmark pump
    std::vector<Method> methods;
    std::vector<double> budgets; // seconds of compute per delta measurement
    Method truth = Method::Oracle;
    int runs_per_point = 5;
    int repetitions = 1;
    std::uint64_t base_seed = 1;
    MethodOptions options;
    bool deterministic = false; // nominal throughput instead of a timed pilot
    int workers = 1;

    void validate() const;
};

/// Single-point settings shared by the `oracle` and `trajectory` commands.
struct PointSpec {
    std::string preset = "n0_1";
    LaserParameters params;
    Method method = Method::Ssa;
    std::uint64_t seed = 1;
    MethodOptions options;
    std::optional<double> duration;
    std::uint64_t stride = 1;
};

enum class ConfigKind { Sweep, Bench, Point };

/// Merges preset defaults, the file (if any) and the flag layer, then checks
/// keys, types and invariants. Errors name the offending key.
nlohmann::json resolve_config(ConfigKind kind, const std::optional<std::filesystem::path>& file,
                              const nlohmann::json& flags);

SweepSpec sweep_from_config(const nlohmann::json& resolved);
BenchmarkSpec bench_from_config(const nlohmann::json& resolved);
PointSpec point_from_config(const nlohmann::json& resolved);

/// n points spaced evenly in log(gamma_P) from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

struct PumpRange {
    double lo;
    double hi;
};
PumpRange default_pump_range(Preset preset);

} // namespace nanolaser
