// Command-line front end: sweep, bench, oracle and trajectory.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nanolaser/harness/results.hpp"
#include "nanolaser/harness/runner.hpp"
#include "nanolaser/harness/spec.hpp"
#include "nanolaser/io.hpp"
#include "nanolaser/langevin.hpp"
#include "nanolaser/oracle.hpp"
#include "nanolaser/ssa.hpp"
#include "nanolaser/tauleap.hpp"

namespace nl = nanolaser;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAllFailed = 3;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Flags that were actually given, keyed like the JSON config.
struct CommonFlags {
    std::optional<std::string> preset, negativity_policy, diffusion_mode, noise_construction;
    std::optional<std::filesystem::path> config;
    std::optional<double> g, gamma_c, gamma_A, gamma_D, epsilon, duration_scale, langevin_duration,
        markov_duration, burn_in_fraction;
    std::optional<int> n0;
    std::optional<std::uint64_t> seed, max_steps;

    void add(CLI::App* app) {
        app->add_option("--preset", preset, "n0_1, n0_10, n0_100, n0_10000 or custom");
        app->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
        app->add_option("--g", g, "light-matter coupling (ps^-1)");
        app->add_option("--gamma-c", gamma_c, "cavity decay rate (ps^-1)");
        app->add_option("--gamma-A", gamma_A, "background decay rate (ps^-1)");
        app->add_option("--gamma-D", gamma_D, "pure dephasing rate (ps^-1)");
        app->add_option("--n0", n0, "number of emitters");
        app->add_option("--seed", seed, "base seed");
        app->add_option("--epsilon", epsilon, "tau-leap / Langevin step accuracy");
        app->add_option("--negativity-policy", negativity_policy, "clamp or reflect");
        app->add_option("--diffusion-mode", diffusion_mode, "frozen or state-dependent");
        app->add_option("--noise-construction", noise_construction, "per-event or covariance");
        app->add_option("--max-steps", max_steps, "step ceiling per run");
        app->add_option("--duration-scale", duration_scale, "multiplier on the default run durations");
        app->add_option("--langevin-duration", langevin_duration, "Langevin run length (ps)");
        app->add_option("--markov-duration", markov_duration, "SSA / tau-leap run length (ps)");
        app->add_option("--burn-in-fraction", burn_in_fraction, "fraction of each run discarded");
    }

    json to_json() const {
        json j = json::object();
        auto put = [&j](const char* key, const auto& v) {
            if (v) j[key] = *v;
        };
        put("preset", preset);
        put("g", g);
        put("gamma_c", gamma_c);
        put("gamma_A", gamma_A);
        put("gamma_D", gamma_D);
        put("n0", n0);
        put("seed", seed);
        put("epsilon", epsilon);
        put("negativity_policy", negativity_policy);
        put("diffusion_mode", diffusion_mode);
        put("noise_construction", noise_construction);
        put("max_steps", max_steps);
        put("duration_scale", duration_scale);
        put("langevin_duration", langevin_duration);
        put("markov_duration", markov_duration);
        put("burn_in_fraction", burn_in_fraction);
        return j;
    }
};

struct SweepFlags {
    CommonFlags common;
    std::optional<std::string> methods;
    std::optional<double> pump_min, pump_max;
    std::optional<int> pump_points, runs;
    bool deterministic = false, per_run = false, no_error_runs = false, quiet = false;
    int workers = 1;
    std::filesystem::path out = "sweep.csv";
};

struct BenchFlags {
    CommonFlags common;
    std::optional<std::string> methods, budgets, truth;
    std::optional<double> gamma_P;
    std::optional<int> runs, repetitions;
    bool deterministic = false, quiet = false;
    int workers = 1;
    std::filesystem::path out = "bench.csv";
};

struct PointFlags {
    CommonFlags common;
    std::optional<std::string> method;
    std::optional<double> gamma_P, duration;
    std::optional<std::uint64_t> stride;
    std::string out = "-";
};

int run_sweep_command(const SweepFlags& f) {
    json flags = f.common.to_json();
    if (f.methods) flags["methods"] = split_list(*f.methods);
    if (f.pump_min) flags["pump_min"] = *f.pump_min;
    if (f.pump_max) flags["pump_max"] = *f.pump_max;
    if (f.pump_points) flags["pump_points"] = *f.pump_points;
    if (f.runs) flags["runs"] = *f.runs;
    if (f.deterministic) flags["deterministic"] = true;
    if (f.no_error_runs) flags["error_runs"] = false;

    const auto resolved = nl::resolve_config(nl::ConfigKind::Sweep, f.common.config, flags);
    auto spec = nl::sweep_from_config(resolved);
    spec.workers = f.workers;
    const auto result = nl::run_sweep(spec, f.quiet ? nullptr : &std::cerr);
    nl::emit_sweep(f.out, result.rows, f.per_run ? &result.runs : nullptr, nl::sweep_metadata(spec, resolved));
    std::cerr << "wrote " << f.out.string() << " (" << result.rows.size() << " rows)\n";
    const bool any = std::any_of(result.rows.begin(), result.rows.end(),
                                 [](const nl::ResultRow& r) { return r.mean_np.has_value(); });
    return any || result.rows.empty() ? 0 : kExitAllFailed;
}

int run_bench_command(const BenchFlags& f) {
    json flags = f.common.to_json();
    if (f.methods) flags["methods"] = split_list(*f.methods);
    if (f.budgets) {
        json b = json::array();
        for (const auto& s : split_list(*f.budgets)) b.push_back(nl::parse_double(s));
        flags["budgets"] = b;
    }
    if (f.truth) flags["truth"] = *f.truth;
    if (f.gamma_P) flags["gamma_P"] = *f.gamma_P;
    if (f.runs) flags["runs"] = *f.runs;
    if (f.repetitions) flags["repetitions"] = *f.repetitions;
    if (f.deterministic) flags["deterministic"] = true;

    const auto resolved = nl::resolve_config(nl::ConfigKind::Bench, f.common.config, flags);
    auto spec = nl::bench_from_config(resolved);
    spec.workers = f.workers;
    const auto rows = nl::run_benchmark(spec, f.quiet ? nullptr : &std::cerr);
    nl::emit_bench(f.out, rows, nl::bench_metadata(spec, resolved));
    std::cerr << "wrote " << f.out.string() << " (" << rows.size() << " rows)\n";
    const bool any =
        std::any_of(rows.begin(), rows.end(), [](const nl::BenchRow& r) { return r.delta.has_value(); });
    return any || rows.empty() ? 0 : kExitAllFailed;
}

json point_flags(const PointFlags& f) {
    json flags = f.common.to_json();
    if (f.method) flags["method"] = *f.method;
    if (f.gamma_P) flags["gamma_P"] = *f.gamma_P;
    if (f.duration) flags["duration"] = *f.duration;
    if (f.stride) flags["stride"] = *f.stride;
    return flags;
}

template <class Body>
void with_output(const std::string& path, Body&& body) {
    if (path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw nl::Error("cannot open " + path + " for writing");
    body(out);
    if (!out) throw nl::Error("write failed: " + path);
}

int run_oracle_command(const PointFlags& f) {
    const auto resolved = nl::resolve_config(nl::ConfigKind::Point, f.common.config, point_flags(f));
    const auto spec = nl::point_from_config(resolved);
    const auto dist = nl::oracle_steady_state(spec.params);
    const auto stats = nl::oracle_statistics(dist);
    nl::ResultRow row;
    row.method = "oracle";
    row.n0 = spec.params.n0;
    row.gamma_P = spec.params.gamma_P;
    row.mean_np = stats.mean_np;
    row.mean_ne = stats.mean_ne;
    row.g2_0 = stats.g2_0;
    row.rin = stats.rin;
    row.corr_ratio = stats.corr_ratio;
    row.err_np = 0.0;
    if (stats.g2_0) row.err_g2 = 0.0;
    if (stats.rin) row.err_rin = 0.0;
    nl::write_sweep_csv(std::cout, {row});
    if (f.out != "-") with_output(f.out, [&](std::ostream& out) { nl::write_distribution(out, dist); });
    std::cerr << "oracle: n_max=" << dist.n_max << " tail=" << nl::format_double(dist.tail_mass)
              << " residual=" << nl::format_double(dist.residual) << "\n";
    return 0;
}

int run_trajectory_command(const PointFlags& f) {
    const auto resolved = nl::resolve_config(nl::ConfigKind::Point, f.common.config, point_flags(f));
    const auto spec = nl::point_from_config(resolved);
    if (!nl::is_stochastic(spec.method)) throw nl::ConfigError("method: must be ssa, tauleap or langevin");
    const double t_end =
        spec.duration ? *spec.duration : nl::run_duration(nl::Method::Langevin, spec.params, spec.options);
    nl::TerminationReport report;
    with_output(f.out, [&](std::ostream& out) {
        out << "t,n_p,n_e\n";
        std::uint64_t k = 0;
        auto record = [&](double t, double np, double ne) {
            if (k++ % spec.stride == 0)
                out << nl::format_double(t) << ',' << nl::format_double(np) << ',' << nl::format_double(ne) << '\n';
        };
        switch (spec.method) {
        case nl::Method::Ssa: {
            nl::SsaConfig c;
            c.t_end = t_end;
            c.seed = spec.seed;
            c.max_steps = spec.options.max_steps;
            report = nl::simulate_ssa(spec.params, c, [&](const nl::PopulationState& s, double) {
                record(s.t, static_cast<double>(s.n_p), static_cast<double>(s.n_e));
            });
            break;
        }
        case nl::Method::TauLeap: {
            nl::TauLeapConfig c;
            c.epsilon = spec.options.epsilon;
            c.t_end = t_end;
            c.seed = spec.seed;
            c.max_steps = spec.options.max_steps;
            report = nl::simulate_tau(spec.params, c, [&](const nl::PopulationState& s, double) {
                record(s.t, static_cast<double>(s.n_p), static_cast<double>(s.n_e));
            });
            break;
        }
        default: {
            nl::LangevinConfig c;
            c.epsilon = spec.options.epsilon;
            c.t_end = t_end;
            c.seed = spec.seed;
            c.negativity_policy = spec.options.negativity_policy;
            c.diffusion_mode = spec.options.diffusion_mode;
            c.noise_construction = spec.options.noise_construction;
            c.max_steps = spec.options.max_steps;
            report = nl::simulate_langevin(spec.params, c, [&](const nl::ContinuousState& s, double) {
                record(s.t, s.n_p, s.n_e);
            });
            break;
        }
        }
    });
    std::cerr << "trajectory: " << report.steps_taken << " steps, stop=" << nl::stop_reason_name(report.stop_reason)
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-noise statistics of a nanolaser Markov chain"};
    app.require_subcommand(1);

    SweepFlags sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "pump sweep over one or more methods");
    sweep.common.add(sweep_cmd);
    sweep_cmd->add_option("--method", sweep.methods, "comma list of ssa,tauleap,langevin,smallsignal,oracle");
    sweep_cmd->add_option("--pump-min", sweep.pump_min, "lowest pump rate (ps^-1)");
    sweep_cmd->add_option("--pump-max", sweep.pump_max, "highest pump rate (ps^-1)");
    sweep_cmd->add_option("--pump-points", sweep.pump_points, "number of log-spaced pump points");
    sweep_cmd->add_option("--runs", sweep.runs, "runs per point");
    sweep_cmd->add_option("--workers", sweep.workers, "worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sweep.out, "output CSV path");
    sweep_cmd->add_flag("--deterministic", sweep.deterministic, "leave wall-clock fields empty");
    sweep_cmd->add_flag("--per-run", sweep.per_run, "also write <out>.runs.csv");
    sweep_cmd->add_flag("--no-error-runs", sweep.no_error_runs, "skip the doubled-step runs");
    sweep_cmd->add_flag("--quiet", sweep.quiet, "no progress log");

    BenchFlags bench;
    auto* bench_cmd = app.add_subcommand("bench", "accuracy versus compute time at one pump rate");
    bench.common.add(bench_cmd);
    bench_cmd->add_option("--method", bench.methods, "comma list of ssa,tauleap,langevin");
    bench_cmd->add_option("--gamma-P", bench.gamma_P, "pump rate (ps^-1)");
    bench_cmd->add_option("--budgets", bench.budgets, "comma list of compute budgets (s)");
    bench_cmd->add_option("--truth", bench.truth, "oracle, smallsignal or auto");
    bench_cmd->add_option("--runs", bench.runs, "runs per delta");
    bench_cmd->add_option("--repetitions", bench.repetitions, "independent repetitions per budget");
    bench_cmd->add_option("--workers", bench.workers, "worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", bench.out, "output CSV path");
    bench_cmd->add_flag("--deterministic", bench.deterministic, "nominal throughput, no wall-clock fields");
    bench_cmd->add_flag("--quiet", bench.quiet, "no progress log");

    PointFlags oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "exact stationary distribution at one pump rate");
    oracle.common.add(oracle_cmd);
    oracle_cmd->add_option("--gamma-P", oracle.gamma_P, "pump rate (ps^-1)");
    oracle_cmd->add_option("--out", oracle.out, "distribution CSV (n_p,n_e,probability)");

    PointFlags traj;
    auto* traj_cmd = app.add_subcommand("trajectory", "dump one run as t,n_p,n_e rows");
    traj.common.add(traj_cmd);
    traj_cmd->add_option("--method", traj.method, "ssa, tauleap or langevin");
    traj_cmd->add_option("--gamma-P", traj.gamma_P, "pump rate (ps^-1)");
    traj_cmd->add_option("--duration", traj.duration, "simulated time (ps); default 5000/omega_R");
    traj_cmd->add_option("--stride", traj.stride, "write every k-th state");
    traj_cmd->add_option("--out", traj.out, "output CSV path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sweep_cmd) return run_sweep_command(sweep);
        if (*bench_cmd) return run_bench_command(bench);
        if (*oracle_cmd) return run_oracle_command(oracle);
        if (*traj_cmd) return run_trajectory_command(traj);
    } catch (const nl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
