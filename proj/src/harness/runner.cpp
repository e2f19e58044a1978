#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <thread>

#include "nanolaser/harness/runner.hpp"
#include "nanolaser/io.hpp"
#include "nanolaser/langevin.hpp"
#include "nanolaser/oracle.hpp"
#include "nanolaser/smallsignal.hpp"
#include "nanolaser/ssa.hpp"
#include "nanolaser/tauleap.hpp"

namespace nanolaser {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr std::uint64_t kBenchTag = 0xBE7C;
constexpr std::uint64_t kPilotTag = 0x9170;
constexpr std::uint64_t kPilotSteps = 20'000;
constexpr std::uint64_t kTimingSteps = 200'000;
constexpr double kMinStepsPerRun = 1000.0;

std::string_view status_of(StopReason r) {
    switch (r) {
    case StopReason::TimeLimit: return "ok";
    case StopReason::StepLimit: return "step_limit";
    case StopReason::Absorbing: return "absorbing";
    }
    return "error";
}

TerminationReport simulate(const RunRequest& rq, double t_end, std::uint64_t max_steps, MomentAccumulator* acc) {
    auto observe = [acc](const auto& s, double dt) {
        if (acc) (*acc)(s, dt);
    };
    switch (rq.method) {
    case Method::Ssa: {
        SsaConfig c;
        c.t_end = t_end;
        c.seed = rq.seed;
        c.max_steps = max_steps;
        return simulate_ssa(rq.params, c, observe);
    }
    case Method::TauLeap: {
        TauLeapConfig c;
        c.epsilon = rq.options.epsilon * (rq.doubled ? 2.0 : 1.0);
        c.t_end = t_end;
        c.seed = rq.seed;
        c.max_steps = max_steps;
        return simulate_tau(rq.params, c, observe);
    }
    case Method::Langevin: {
        LangevinConfig c;
        c.epsilon = rq.options.epsilon;
        c.t_end = t_end;
        c.seed = rq.seed;
        c.negativity_policy = rq.options.negativity_policy;
        c.diffusion_mode = rq.options.diffusion_mode;
        c.noise_construction = rq.options.noise_construction;
        c.dt_scale = rq.doubled ? 2.0 : 1.0;
        c.max_steps = max_steps;
        return simulate_langevin(rq.params, c, observe);
    }
    default: throw Error(std::string(method_name(rq.method)) + " is not a trajectory method");
    }
}

RunRow run_row(Method m, const LaserParameters& p, int run, bool doubled, std::uint64_t seed,
               const RunOutcome& o, bool deterministic) {
    RunRow r;
    r.method = std::string(method_name(m));
    r.n0 = p.n0;
    r.gamma_P = p.gamma_P;
    r.run = run;
    r.variant = doubled ? "doubled" : "base";
    if (o.stats) {
        r.mean_np = o.stats->mean_np;
        r.mean_ne = o.stats->mean_ne;
        r.g2_0 = o.stats->g2_0;
        r.rin = o.stats->rin;
        r.corr_ratio = o.stats->corr_ratio;
    }
    r.steps = o.steps;
    if (!deterministic) r.wallclock_s = o.wallclock_s;
    r.seed = seed;
    r.status = o.status;
    return r;
}

void fill_statistics(ResultRow& row, const SummaryStatistics& s) {
    row.mean_np = s.mean_np;
    row.mean_ne = s.mean_ne;
    row.g2_0 = s.g2_0;
    row.rin = s.rin;
    row.corr_ratio = s.corr_ratio;
    row.err_np = s.err_np;
    row.err_g2 = s.err_g2;
    row.err_rin = s.err_rin;
}

} // namespace

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
}

std::uint64_t method_seed_key(Method m) { return static_cast<std::uint64_t>(m) + 1; }

double run_duration(Method method, const LaserParameters& params, const MethodOptions& options) {
    const double t_l =
        options.langevin_duration ? *options.langevin_duration : default_langevin_duration(params) * options.duration_scale;
    if (method == Method::Langevin) return t_l;
    return options.markov_duration ? *options.markov_duration : 100.0 * t_l;
}

RunOutcome run_trajectory(const RunRequest& rq) {
    RunOutcome out;
    const auto start = Clock::now();
    try {
        MomentAccumulator acc(rq.options.burn_in_fraction * rq.t_end);
        const auto report = simulate(rq, rq.t_end, rq.options.max_steps, &acc);
        out.steps = report.steps_taken;
        out.status = std::string(status_of(report.stop_reason));
        out.stats = summarize(acc.moments());
    } catch (const NonFiniteState&) {
        out.status = "non_finite";
    } catch (const EmptyWindow&) {
        out.status = "empty_window";
    } catch (const AbsorbingState&) {
        out.status = "absorbing";
    } catch (const NoPhysicalRoot&) {
        out.status = "no_steady_state";
    } catch (const std::exception&) {
        out.status = "error";
    }
    out.wallclock_s = seconds_since(start);
    return out;
}

ReferenceOutcome reference_statistics(Method method, const LaserParameters& params) {
    ReferenceOutcome out;
    const auto start = Clock::now();
    try {
        if (method == Method::Oracle) {
            out.stats = oracle_statistics(oracle_steady_state(params));
        } else if (method == Method::SmallSignal) {
            const auto sol = small_signal_solution(params);
            RunStatistics r;
            r.mean_np = sol.n_bar_a;
            r.mean_ne = sol.n_bar_e;
            if (sol.valid) {
                r.g2_0 = sol.g2_0;
                r.rin = sol.rin;
                r.corr_ratio = small_signal_corr_ratio(sol);
            } else {
                out.status = "invalid";
            }
            out.stats = r;
        } else {
            throw Error(std::string(method_name(method)) + " is not a reference method");
        }
    } catch (const TruncationFailure&) {
        out.status = "truncation_failure";
    } catch (const NoPhysicalRoot&) {
        out.status = "no_steady_state";
    } catch (const std::exception&) {
        out.status = "error";
    }
    out.wallclock_s = seconds_since(start);
    return out;
}

SweepResult run_sweep(const SweepSpec& spec, std::ostream* log) {
    spec.validate();
    struct Task {
        std::size_t point; // index into points
        int run;           // -1 for reference methods
        bool doubled;
    };
    struct Point {
        std::size_t pump_index;
        Method method;
        LaserParameters params;
        double t_end = 0.0;
        std::string setup_status; // non-empty when the duration could not be set
    };

    std::vector<Point> points;
    for (std::size_t i = 0; i < spec.pump_grid.size(); ++i) {
        for (auto m : spec.methods) {
            Point pt{i, m, spec.params.with_pump(spec.pump_grid[i]), 0.0, {}};
            if (is_stochastic(m)) {
                try {
                    pt.t_end = run_duration(m, pt.params, spec.options);
                } catch (const NoPhysicalRoot&) {
                    pt.setup_status = "no_steady_state";
                } catch (const std::exception&) {
                    pt.setup_status = "no_duration";
                }
            }
            points.push_back(std::move(pt));
        }
    }

    std::vector<Task> tasks;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto m = points[k].method;
        if (!is_stochastic(m)) {
            tasks.push_back({k, -1, false});
            continue;
        }
        if (!points[k].setup_status.empty()) continue;
        const bool with_doubled = spec.options.error_runs && m != Method::Ssa;
        for (int variant = 0; variant < (with_doubled ? 2 : 1); ++variant)
            for (int r = 0; r < spec.runs_per_point; ++r) tasks.push_back({k, r, variant == 1});
    }

    auto seed_of = [&](const Task& t) {
        const auto& pt = points[t.point];
        return derive_seed(spec.base_seed, {method_seed_key(pt.method), pt.pump_index,
                                            static_cast<std::uint64_t>(t.run), t.doubled ? 1u : 0u});
    };

    std::vector<RunOutcome> runs(tasks.size());
    std::vector<ReferenceOutcome> refs(tasks.size());
    std::vector<std::atomic<int>> remaining(points.size());
    for (const auto& t : tasks) ++remaining[t.point];
    std::mutex log_mutex;
    std::atomic<std::size_t> points_done{0};
    for (std::size_t k = 0; k < points.size(); ++k)
        if (remaining[k] == 0) ++points_done;

    parallel_for(tasks.size(), spec.workers, [&](std::size_t i) {
        const auto& t = tasks[i];
        const auto& pt = points[t.point];
        if (t.run < 0) {
            refs[i] = reference_statistics(pt.method, pt.params);
        } else {
            RunRequest rq{pt.method, pt.params, spec.options, pt.t_end, seed_of(t), t.doubled};
            runs[i] = run_trajectory(rq);
        }
        if (--remaining[t.point] == 0 && log) {
            const auto done = ++points_done;
            std::lock_guard lock(log_mutex);
            *log << "sweep: " << method_name(pt.method) << " gamma_P=" << format_double(pt.params.gamma_P)
                 << " done (" << done << "/" << points.size() << ")\n";
        }
    });

    SweepResult result;
    std::vector<std::vector<std::size_t>> by_point(points.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) by_point[tasks[i].point].push_back(i);

    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& pt = points[k];
        ResultRow row;
        row.method = std::string(method_name(pt.method));
        row.n0 = pt.params.n0;
        row.gamma_P = pt.params.gamma_P;
        if (!is_stochastic(pt.method)) {
            const auto& ref = refs[by_point[k].front()];
            if (ref.stats) fill_statistics(row, exact_summary(*ref.stats));
            if (ref.stats && !ref.stats->g2_0) row.err_g2.reset();
            if (!spec.deterministic) row.wallclock_s = ref.wallclock_s;
            row.status = ref.status;
            result.rows.push_back(std::move(row));
            continue;
        }
        row.seed = spec.base_seed;
        if (!pt.setup_status.empty()) {
            row.status = pt.setup_status;
            result.rows.push_back(std::move(row));
            continue;
        }
        std::vector<RunStatistics> base, doubled;
        std::string first_failure;
        double wallclock = 0.0;
        // Base runs come before doubled runs within a point.
        for (std::size_t i : by_point[k]) {
            const auto& t = tasks[i];
            const auto& o = runs[i];
            row.steps += o.steps;
            wallclock += o.wallclock_s;
            if (o.stats) (t.doubled ? doubled : base).push_back(*o.stats);
            if (o.status != "ok" && first_failure.empty()) first_failure = o.status;
            result.runs.push_back(run_row(pt.method, pt.params, t.run, t.doubled, seed_of(t), o, spec.deterministic));
        }
        if (!base.empty()) fill_statistics(row, aggregate_runs(base, doubled));
        if (!spec.deterministic) row.wallclock_s = wallclock;
        row.status = first_failure.empty() ? "ok" : first_failure;
        result.rows.push_back(std::move(row));
    }
    return result;
}

double nominal_step_rate(Method m) {
    switch (m) {
    case Method::Ssa: return 5e6;
    case Method::TauLeap: return 3e6;
    case Method::Langevin: return 4e6;
    default: return 0.0;
    }
}

std::vector<BenchRow> run_benchmark(const BenchmarkSpec& spec, std::ostream* log) {
    spec.validate();
    const auto& params = spec.params;
    const auto truth = reference_statistics(spec.truth, params);
    const bool truth_ok = truth.stats && truth.stats->g2_0 && truth.stats->rin && truth.stats->mean_np > 0.0;

    // Simulated time per step from a short seeded pilot (deterministic), and
    // steps per second either measured or nominal.
    struct Calibration {
        double steps_per_ps = 0.0;
        double steps_per_s = 0.0;
        std::string status = "ok";
    };
    std::vector<Calibration> calib(spec.methods.size());
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
        const auto m = spec.methods[mi];
        auto& c = calib[mi];
        RunRequest rq{m, params, spec.options, 0.0,
                      derive_seed(spec.base_seed, {kPilotTag, method_seed_key(m)}), false};
        try {
            if (m == Method::Langevin) {
                c.steps_per_ps = 1.0 / select_dt(params, spec.options.epsilon).dt;
            } else {
                const auto rep = simulate(rq, 1e300, kPilotSteps, nullptr);
                if (rep.steps_taken == 0 || !(rep.t_reached > 0.0)) throw Error("pilot made no progress");
                c.steps_per_ps = static_cast<double>(rep.steps_taken) / rep.t_reached;
            }
            if (spec.deterministic) {
                c.steps_per_s = nominal_step_rate(m);
            } else {
                const auto start = Clock::now();
                const auto rep = simulate(rq, static_cast<double>(kTimingSteps) / c.steps_per_ps * 10.0,
                                          kTimingSteps, nullptr);
                c.steps_per_s = static_cast<double>(rep.steps_taken) / seconds_since(start);
            }
        } catch (const std::exception&) {
            c.status = "calibration_failed";
        }
    }

    struct Cell {
        std::size_t budget;
        std::size_t method;
        int repetition;
        double t_end = 0.0;
        std::uint64_t seed = 0;
        std::string status = "ok";
    };
    std::vector<Cell> cells;
    for (std::size_t b = 0; b < spec.budgets.size(); ++b)
        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
            for (int r = 0; r < spec.repetitions; ++r) {
                Cell cell{b, mi, r, 0.0, 0, "ok"};
                cell.seed = derive_seed(spec.base_seed, {kBenchTag, method_seed_key(spec.methods[mi]), b,
                                                         static_cast<std::uint64_t>(r)});
                const auto& c = calib[mi];
                const double steps_per_run = spec.budgets[b] * c.steps_per_s / spec.runs_per_point;
                if (!truth_ok)
                    cell.status = "truth_unavailable";
                else if (c.status != "ok")
                    cell.status = c.status;
                else if (steps_per_run < kMinStepsPerRun)
                    cell.status = "budget_too_small";
                else
                    cell.t_end = steps_per_run / c.steps_per_ps;
                cells.push_back(cell);
            }

    struct Task {
        std::size_t cell;
        int run;
    };
    std::vector<Task> tasks;
    for (std::size_t k = 0; k < cells.size(); ++k)
        if (cells[k].status == "ok")
            for (int r = 0; r < spec.runs_per_point; ++r) tasks.push_back({k, r});

    std::vector<RunOutcome> outcomes(tasks.size());
    std::vector<std::atomic<int>> remaining(cells.size());
    for (const auto& t : tasks) ++remaining[t.cell];
    std::mutex log_mutex;
    parallel_for(tasks.size(), spec.workers, [&](std::size_t i) {
        const auto& cell = cells[tasks[i].cell];
        const auto m = spec.methods[cell.method];
        MethodOptions opts = spec.options;
        opts.max_steps = kDefaultMaxSteps;
        RunRequest rq{m, params, opts, cell.t_end,
                      derive_seed(cell.seed, {static_cast<std::uint64_t>(tasks[i].run)}), false};
        outcomes[i] = run_trajectory(rq);
        if (--remaining[tasks[i].cell] == 0 && log) {
            std::lock_guard lock(log_mutex);
            *log << "bench: " << method_name(m) << " budget=" << format_double(spec.budgets[cell.budget])
                 << "s repetition " << cell.repetition << " done\n";
        }
    });

    std::vector<std::vector<std::size_t>> by_cell(cells.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) by_cell[tasks[i].cell].push_back(i);

    std::vector<BenchRow> rows;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto& cell = cells[k];
        BenchRow row;
        row.budget_s = spec.budgets[cell.budget];
        row.method = std::string(method_name(spec.methods[cell.method]));
        row.n0 = params.n0;
        row.gamma_P = params.gamma_P;
        row.repetition = cell.repetition;
        row.seed = cell.seed;
        row.status = cell.status;
        if (cell.status == "ok") {
            std::vector<RunStatistics> stats;
            double wallclock = 0.0;
            for (std::size_t i : by_cell[k]) {
                const auto& o = outcomes[i];
                row.steps += o.steps;
                wallclock += o.wallclock_s;
                if (o.stats)
                    stats.push_back(*o.stats);
                else if (row.status == "ok")
                    row.status = o.status;
            }
            if (!spec.deterministic) row.wallclock_s = wallclock;
            if (row.status == "ok") {
                try {
                    const auto e = relative_error(stats, *truth.stats);
                    row.delta = e.delta;
                    row.delta_np = e.delta_np;
                    row.delta_g2 = e.delta_g2;
                    row.delta_rin = e.delta_rin;
                } catch (const std::exception&) {
                    row.status = "undefined_statistics";
                }
            }
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        if (a.budget_s != b.budget_s) return a.budget_s < b.budget_s;
        if (a.method != b.method) return a.method < b.method;
        return a.repetition < b.repetition;
    });
    return rows;
}

nlohmann::json sweep_metadata(const SweepSpec& spec, const nlohmann::json& resolved) {
    nlohmann::json seeds = nlohmann::json::object();
    nlohmann::json durations = nlohmann::json::object();
    for (auto m : spec.methods) {
        if (!is_stochastic(m)) continue;
        auto& per_method = seeds[std::string(method_name(m))] = nlohmann::json::array();
        auto& dur = durations[std::string(method_name(m))] = nlohmann::json::array();
        for (std::size_t i = 0; i < spec.pump_grid.size(); ++i) {
            nlohmann::json point = nlohmann::json::array();
            for (int r = 0; r < spec.runs_per_point; ++r)
                point.push_back(derive_seed(spec.base_seed, {method_seed_key(m), i, static_cast<std::uint64_t>(r), 0u}));
            per_method.push_back(point);
            try {
                dur.push_back(run_duration(m, spec.params.with_pump(spec.pump_grid[i]), spec.options));
            } catch (const std::exception&) {
                dur.push_back(nullptr);
            }
        }
    }
    return {
        {"artifact", "nanolaser"},
        {"version", kArtifactVersion},
        {"kind", "sweep"},
        {"config", resolved},
        {"seed_scheme", "derive_seed(seed, [method_key, pump_index, run, variant]); variant 1 = doubled step"},
        {"method_keys", {{"langevin", 1}, {"oracle", 2}, {"smallsignal", 3}, {"ssa", 4}, {"tauleap", 5}}},
        {"run_seeds", seeds},
        {"durations_ps", durations},
    };
}

nlohmann::json bench_metadata(const BenchmarkSpec& spec, const nlohmann::json& resolved) {
    return {
        {"artifact", "nanolaser"},
        {"version", kArtifactVersion},
        {"kind", "bench"},
        {"config", resolved},
        {"truth", method_name(spec.truth)},
        {"seed_scheme", "row seed = derive_seed(seed, [0xBE7C, method_key, budget_index, repetition]); "
                        "run seed = derive_seed(row seed, [run])"},
        {"budget_semantics", "summed compute seconds of all runs behind one delta"},
        {"throughput", spec.deterministic ? "nominal" : "timed pilot"},
    };
}

} // namespace nanolaser
