#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "nanolaser/harness/spec.hpp"

namespace nanolaser {

using nlohmann::json;

std::string_view method_name(Method m) {
    switch (m) {
    case Method::Langevin: return "langevin";
    case Method::Oracle: return "oracle";
    case Method::SmallSignal: return "smallsignal";
    case Method::Ssa: return "ssa";
    case Method::TauLeap: return "tauleap";
    }
    return "unknown";
}

Method parse_method(std::string_view s) {
    for (auto m : {Method::Langevin, Method::Oracle, Method::SmallSignal, Method::Ssa, Method::TauLeap})
        if (method_name(m) == s) return m;
    throw Error("unknown method '" + std::string(s) + "'");
}

bool is_stochastic(Method m) {
    return m == Method::Ssa || m == Method::TauLeap || m == Method::Langevin;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 1) throw Error("grid needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

PumpRange default_pump_range(Preset preset) {
    switch (preset) {
    case Preset::N0_1:
    case Preset::N0_10: return {1e-3, 1e2};
    case Preset::N0_100: return {1e-1, 3e1}; // below 0.1 the mode is nearly dark; 1e2 is already quenched
    case Preset::N0_10000: return {1e-1, 1e2};
    }
    return {1e-3, 1e2};
}

namespace {

const std::set<std::string> kCommonKeys = {
    "preset", "g", "gamma_c", "gamma_A", "gamma_D", "n0", "seed", "epsilon", "negativity_policy",
    "diffusion_mode", "noise_construction", "max_steps", "duration_scale", "langevin_duration",
    "markov_duration", "burn_in_fraction"};
const std::set<std::string> kSweepKeys = {"methods", "runs", "error_runs", "deterministic",
                                          "pump_min", "pump_max", "pump_points", "pump_grid"};
const std::set<std::string> kBenchKeys = {"methods", "runs", "gamma_P", "budgets", "truth", "repetitions",
                                          "deterministic"};
const std::set<std::string> kPointKeys = {"method", "gamma_P", "duration", "stride"};

bool allowed(ConfigKind kind, const std::string& key) {
    if (kCommonKeys.count(key)) return true;
    switch (kind) {
    case ConfigKind::Sweep: return kSweepKeys.count(key) > 0;
    case ConfigKind::Bench: return kBenchKeys.count(key) > 0;
    case ConfigKind::Point: return kPointKeys.count(key) > 0;
    }
    return false;
}

void check_keys(ConfigKind kind, const json& layer, std::string_view origin) {
    if (!layer.is_object()) throw ConfigError(std::string(origin) + ": expected a JSON object");
    for (const auto& [key, value] : layer.items())
        if (!allowed(kind, key)) throw ConfigError(key + ": unknown key (" + std::string(origin) + ")");
}

double number(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key + ": must be finite");
    return x;
}

std::optional<double> optional_number(const json& j, const std::string& key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return number(j, key);
}

std::int64_t integer(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto s = v.get<std::int64_t>();
        if (s < 0) throw ConfigError(key + ": must be non-negative");
        return static_cast<std::uint64_t>(s);
    }
    throw ConfigError(key + ": expected an integer");
}

std::string string(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(key + ": expected a string");
    return v.get<std::string>();
}

bool boolean(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(key + ": expected true or false");
    return v.get<bool>();
}

std::vector<double> number_list(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_array()) throw ConfigError(key + ": expected a list of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(key + ": expected a list of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::string> string_list(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (v.is_string()) return {v.get<std::string>()};
    if (!v.is_array()) throw ConfigError(key + ": expected a list of names");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string()) throw ConfigError(key + ": expected a list of names");
        out.push_back(x.get<std::string>());
    }
    return out;
}

template <class F>
auto wrap(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

double default_bench_pump(Preset p) {
    switch (p) {
    case Preset::N0_1: return 0.1;
    case Preset::N0_10: return 0.3;
    case Preset::N0_100: return 10.0;
    case Preset::N0_10000: return 30.0;
    }
    return 0.1;
}

json preset_layer(ConfigKind kind, const std::string& name) {
    std::optional<Preset> preset;
    LaserParameters p;
    if (name != "custom") {
        preset = wrap("preset", [&] { return parse_preset(name); });
        p = preset_parameters(*preset);
    }
    const MethodOptions o;
    json j = {
        {"preset", name},
        {"g", p.g},
        {"gamma_c", p.gamma_c},
        {"gamma_A", p.gamma_A},
        {"gamma_D", p.gamma_D},
        {"n0", p.n0},
        {"seed", 1},
        {"epsilon", o.epsilon},
        {"negativity_policy", std::string(to_string(o.negativity_policy))},
        {"diffusion_mode", std::string(to_string(o.diffusion_mode))},
        {"noise_construction", std::string(to_string(o.noise_construction))},
        {"max_steps", o.max_steps},
        {"duration_scale", o.duration_scale},
        {"langevin_duration", nullptr},
        {"markov_duration", nullptr},
        {"burn_in_fraction", o.burn_in_fraction},
    };
    const Preset grid_preset = preset.value_or(Preset::N0_1);
    switch (kind) {
    case ConfigKind::Sweep: {
        const auto r = default_pump_range(grid_preset);
        j["pump_min"] = r.lo;
        j["pump_max"] = r.hi;
        j["pump_points"] = 24;
        j["runs"] = 5;
        j["error_runs"] = true;
        j["deterministic"] = false;
        if (p.n0 <= 10)
            j["methods"] = {"langevin", "oracle", "smallsignal", "ssa", "tauleap"};
        else
            j["methods"] = {"langevin", "smallsignal", "ssa", "tauleap"};
        break;
    }
    case ConfigKind::Bench:
        j["gamma_P"] = default_bench_pump(grid_preset);
        j["methods"] = {"langevin", "ssa", "tauleap"};
        j["runs"] = 5;
        j["budgets"] = {1.0, 4.0, 15.0, 60.0};
        j["truth"] = "auto";
        j["repetitions"] = 1;
        j["deterministic"] = false;
        break;
    case ConfigKind::Point:
        j["method"] = "ssa";
        j["gamma_P"] = default_bench_pump(grid_preset);
        j["duration"] = nullptr;
        j["stride"] = 1;
        break;
    }
    return j;
}

void overlay(json& base, const json& layer) {
    const bool range = layer.contains("pump_min") || layer.contains("pump_max") || layer.contains("pump_points");
    if (range) base.erase("pump_grid");
    if (layer.contains("pump_grid")) {
        base.erase("pump_min");
        base.erase("pump_max");
        base.erase("pump_points");
    }
    for (const auto& [key, value] : layer.items()) base[key] = value;
}

LaserParameters params_from(const json& j, double pump) {
    LaserParameters p;
    p.g = number(j, "g");
    p.gamma_c = number(j, "gamma_c");
    p.gamma_A = number(j, "gamma_A");
    p.gamma_D = number(j, "gamma_D");
    const auto n0 = integer(j, "n0");
    if (n0 < 1 || n0 > 1'000'000) throw ConfigError("n0: must be between 1 and 1000000");
    p.n0 = static_cast<int>(n0);
    p.gamma_P = pump;
    for (const char* key : {"g", "gamma_c", "gamma_A", "gamma_D"})
        if (number(j, key) < 0.0) throw ConfigError(std::string(key) + ": must be non-negative");
    if (p.gamma_P < 0.0) throw ConfigError("gamma_P: must be non-negative");
    return p;
}

MethodOptions options_from(const json& j) {
    MethodOptions o;
    o.epsilon = number(j, "epsilon");
    if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw ConfigError("epsilon: must lie in (0, 1)");
    o.negativity_policy =
        wrap("negativity_policy", [&] { return parse_negativity_policy(string(j, "negativity_policy")); });
    o.diffusion_mode = wrap("diffusion_mode", [&] { return parse_diffusion_mode(string(j, "diffusion_mode")); });
    o.noise_construction =
        wrap("noise_construction", [&] { return parse_noise_construction(string(j, "noise_construction")); });
    o.max_steps = unsigned_integer(j, "max_steps");
    if (o.max_steps == 0) throw ConfigError("max_steps: must be positive");
    o.duration_scale = number(j, "duration_scale");
    if (!(o.duration_scale > 0.0)) throw ConfigError("duration_scale: must be positive");
    o.langevin_duration = optional_number(j, "langevin_duration");
    if (o.langevin_duration && !(*o.langevin_duration > 0.0))
        throw ConfigError("langevin_duration: must be positive");
    o.markov_duration = optional_number(j, "markov_duration");
    if (o.markov_duration && !(*o.markov_duration > 0.0)) throw ConfigError("markov_duration: must be positive");
    o.burn_in_fraction = number(j, "burn_in_fraction");
    if (!(o.burn_in_fraction >= 0.0 && o.burn_in_fraction < 1.0))
        throw ConfigError("burn_in_fraction: must lie in [0, 1)");
    return o;
}

std::vector<Method> methods_from(const json& j, const std::string& key) {
    std::vector<Method> out;
    for (const auto& name : string_list(j, key)) {
        const auto m = wrap(key, [&] { return parse_method(name); });
        if (std::find(out.begin(), out.end(), m) != out.end())
            throw ConfigError(key + ": method '" + name + "' listed twice");
        out.push_back(m);
    }
    if (out.empty()) throw ConfigError(key + ": at least one method is required");
    std::sort(out.begin(), out.end());
    return out;
}

int positive_int(const json& j, const std::string& key) {
    const auto v = integer(j, key);
    if (v < 1 || v > 1'000'000) throw ConfigError(key + ": must be a positive integer");
    return static_cast<int>(v);
}

void check_increasing(const std::vector<double>& v, const std::string& key) {
    if (v.empty()) throw ConfigError(key + ": must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0) || !std::isfinite(v[i])) throw ConfigError(key + ": values must be positive");
        if (i > 0 && !(v[i] > v[i - 1])) throw ConfigError(key + ": values must be strictly increasing");
    }
}

} // namespace

json resolve_config(ConfigKind kind, const std::optional<std::filesystem::path>& file, const json& flags) {
    json file_layer = json::object();
    if (file) {
        std::ifstream in(*file);
        if (!in) throw ConfigError("config: cannot open " + file->string());
        try {
            file_layer = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config: " + file->string() + ": " + e.what());
        }
        check_keys(kind, file_layer, file->string());
    }
    check_keys(kind, flags, "command line");

    std::string preset = "n0_1";
    if (file_layer.contains("preset")) preset = string(file_layer, "preset");
    if (flags.contains("preset")) preset = string(flags, "preset");
    json resolved = preset_layer(kind, preset);
    overlay(resolved, file_layer);
    overlay(resolved, flags);
    resolved["preset"] = preset;

    if (kind == ConfigKind::Sweep && !resolved.contains("pump_grid")) {
        for (const char* key : {"pump_min", "pump_max", "pump_points"})
            if (!resolved.contains(key)) throw ConfigError(std::string(key) + ": required with a pump range");
        const double lo = number(resolved, "pump_min"), hi = number(resolved, "pump_max");
        const int n = positive_int(resolved, "pump_points");
        if (!(lo > 0.0)) throw ConfigError("pump_min: must be positive");
        if (n > 1 && !(hi > lo)) throw ConfigError("pump_max: must exceed pump_min");
        resolved["pump_grid"] = log_grid(lo, hi, n);
    }
    // Parse once so that type and invariant errors surface here.
    switch (kind) {
    case ConfigKind::Sweep: sweep_from_config(resolved); break;
    case ConfigKind::Bench: resolved["truth"] = method_name(bench_from_config(resolved).truth); break;
    case ConfigKind::Point: point_from_config(resolved); break;
    }
    return resolved;
}

void SweepSpec::validate() const {
    check_increasing(pump_grid, "pump_grid");
    if (runs_per_point < 1) throw ConfigError("runs: must be a positive integer");
    if (methods.empty()) throw ConfigError("methods: at least one method is required");
    if (workers < 1) throw ConfigError("workers: must be a positive integer");
    wrap("params", [&] {
        params.with_pump(pump_grid.front()).validate();
        return 0;
    });
}

void BenchmarkSpec::validate() const {
    check_increasing(budgets, "budgets");
    if (runs_per_point < 1) throw ConfigError("runs: must be a positive integer");
    if (repetitions < 1) throw ConfigError("repetitions: must be a positive integer");
    if (!(params.gamma_P > 0.0)) throw ConfigError("gamma_P: must be positive");
    if (truth != Method::Oracle && truth != Method::SmallSignal)
        throw ConfigError("truth: must be oracle or smallsignal");
    for (auto m : methods)
        if (!is_stochastic(m)) throw ConfigError("methods: only ssa, tauleap and langevin can be benchmarked");
    if (workers < 1) throw ConfigError("workers: must be a positive integer");
    wrap("params", [&] {
        params.validate();
        return 0;
    });
}

SweepSpec sweep_from_config(const json& j) {
    SweepSpec s;
    s.preset = string(j, "preset");
    s.params = params_from(j, 0.0);
    s.pump_grid = number_list(j, "pump_grid");
    check_increasing(s.pump_grid, "pump_grid");
    s.methods = methods_from(j, "methods");
    s.runs_per_point = positive_int(j, "runs");
    s.base_seed = unsigned_integer(j, "seed");
    s.options = options_from(j);
    s.options.error_runs = boolean(j, "error_runs");
    s.deterministic = boolean(j, "deterministic");
    s.validate();
    return s;
}

BenchmarkSpec bench_from_config(const json& j) {
    BenchmarkSpec s;
    s.preset = string(j, "preset");
    s.params = params_from(j, number(j, "gamma_P"));
    s.methods = methods_from(j, "methods");
    s.budgets = number_list(j, "budgets");
    const auto truth = string(j, "truth");
    if (truth == "auto")
        s.truth = s.params.n0 <= 10 ? Method::Oracle : Method::SmallSignal;
    else
        s.truth = wrap("truth", [&] { return parse_method(truth); });
    s.runs_per_point = positive_int(j, "runs");
    s.repetitions = positive_int(j, "repetitions");
    s.base_seed = unsigned_integer(j, "seed");
    s.options = options_from(j);
    s.options.error_runs = false;
    s.deterministic = boolean(j, "deterministic");
    s.validate();
    return s;
}

PointSpec point_from_config(const json& j) {
    PointSpec s;
    s.preset = string(j, "preset");
    s.params = params_from(j, number(j, "gamma_P"));
    s.method = wrap("method", [&] { return parse_method(string(j, "method")); });
    s.seed = unsigned_integer(j, "seed");
    s.options = options_from(j);
    s.duration = optional_number(j, "duration");
    if (s.duration && !(*s.duration > 0.0)) throw ConfigError("duration: must be positive");
    s.stride = unsigned_integer(j, "stride");
    if (s.stride == 0) throw ConfigError("stride: must be positive");
    wrap("params", [&] {
        s.params.validate();
        return 0;
    });
    return s;
}

} // namespace nanolaser
