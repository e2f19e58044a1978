#include <doctest.h>

#include <cmath>
#include <vector>

#include "nanolaser/oracle.hpp"
#include "nanolaser/rng.hpp"
#include "nanolaser/ssa.hpp"
#include "nanolaser/stats.hpp"

using namespace nanolaser;

TEST_CASE("first reaction: inverse CDF of a single channel") {
    Propensities a{0, 0, 0, 2.0, 0, 0};
    int calls = 0;
    const auto fr = first_reaction(a, [&] {
        ++calls;
        return std::exp(-2.0);
    });
    CHECK(fr.event == Event::CavityDecay);
    CHECK(fr.tau == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(calls == 1);
}

TEST_CASE("first reaction: one draw per active event, ties go to the lowest index") {
    Propensities a{0.5, 0.0, 1.0, 2.0, 0.0, 3.0};
    int calls = 0;
    const auto fr = first_reaction(a, [&] {
        ++calls;
        return 1.0;
    });
    CHECK(calls == 4);
    CHECK(fr.tau == 0.0);
    CHECK(fr.event == Event::StimulatedEmission);
}

TEST_CASE("first reaction: all propensities zero") {
    Propensities a{};
    CHECK_THROWS_AS(first_reaction(a, [] { return 0.5; }), AbsorbingState);
}

TEST_CASE("event frequencies follow a_j / a_0") {
    auto p = preset_parameters(Preset::N0_10).with_pump(0.8);
    const PopulationState s{3, 4, 0.0};
    const auto a = propensities(s, p);
    const double a0 = total_rate(a);
    RngStream rng(99);
    std::vector<long> counts(kEventCount, 0);
    const long n = 1'000'000;
    for (long i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(frm_step(s, p, rng).event)];
    for (std::size_t j = 0; j < kEventCount; ++j) {
        const double q = a[j] / a0;
        const double se = std::sqrt(n * q * (1 - q));
        CAPTURE(j);
        CHECK(std::abs(counts[j] - n * q) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("waiting time is exponential with the total rate") {
    auto p = preset_parameters(Preset::N0_10).with_pump(0.8);
    const PopulationState s{3, 4, 0.0};
    const double a0 = total_rate(propensities(s, p));
    RngStream rng(5);
    const int n = 200'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += frm_step(s, p, rng).tau;
    const double mean = sum / n;
    CHECK(std::abs(mean - 1.0 / a0) < 3.0 * (1.0 / a0) / std::sqrt(n));
}

TEST_CASE("pump off from the empty state is absorbing at t = 0") {
    auto p = preset_parameters(Preset::N0_1);
    SsaConfig cfg;
    cfg.t_end = 10.0;
    cfg.initial_state = PopulationState{0, 0, 0.0};
    int observed = 0;
    const auto r = simulate_ssa(p, cfg, [&](const PopulationState&, double) { ++observed; });
    CHECK(r.stop_reason == StopReason::Absorbing);
    CHECK(r.t_reached == 0.0);
    CHECK(r.steps_taken == 0);
    CHECK(observed == 0);
}

TEST_CASE("pure death chain: mean first passage to zero") {
    LaserParameters p;
    p.g = 0.0;
    p.gamma_c = 0.04;
    p.gamma_P = 0.0;
    double expected = 0.0, var = 0.0;
    for (int k = 1; k <= 5; ++k) {
        expected += 1.0 / (0.04 * k);
        var += 1.0 / (0.04 * k * 0.04 * k);
    }
    const int runs = 4000;
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) {
        SsaConfig cfg;
        cfg.t_end = 1e6;
        cfg.seed = derive_seed(11, {static_cast<std::uint64_t>(i)});
        cfg.initial_state = PopulationState{5, 0, 0.0};
        std::int64_t last = 6;
        const auto r = simulate_ssa(p, cfg, [&](const PopulationState& s, double) {
            CHECK(s.n_p < last);
            last = s.n_p;
        });
        REQUIRE(r.stop_reason == StopReason::Absorbing);
        sum += r.t_reached;
    }
    const double mean = sum / runs;
    CHECK(std::abs(mean - expected) < 3.0 * std::sqrt(var / runs));
}

TEST_CASE("trajectories are reproducible and cover exactly t_end") {
    auto p = preset_parameters(Preset::N0_10).with_pump(0.5);
    SsaConfig cfg;
    cfg.t_end = 2000.0;
    cfg.seed = 1234;
    std::vector<PopulationState> a, b;
    double covered = 0.0;
    simulate_ssa(p, cfg, [&](const PopulationState& s, double dt) {
        a.push_back(s);
        covered += dt;
        CHECK(s.valid(p.n0));
    });
    simulate_ssa(p, cfg, [&](const PopulationState& s, double) { b.push_back(s); });
    CHECK(a == b);
    CHECK(covered == doctest::Approx(2000.0).epsilon(1e-12));
}

TEST_CASE("step limit stops the run") {
    auto p = preset_parameters(Preset::N0_10).with_pump(0.5);
    SsaConfig cfg;
    cfg.t_end = 1e9;
    cfg.max_steps = 1000;
    const auto r = simulate_ssa(p, cfg, NullObserver{});
    CHECK(r.stop_reason == StopReason::StepLimit);
    CHECK(r.steps_taken == 1000);
}

TEST_CASE("config validation") {
    auto p = preset_parameters(Preset::N0_1).with_pump(0.1);
    SsaConfig cfg;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(simulate_ssa(p, cfg, NullObserver{}), Error);
    cfg.t_end = 1.0;
    cfg.max_steps = 0;
    CHECK_THROWS_AS(simulate_ssa(p, cfg, NullObserver{}), Error);
    cfg.max_steps = 10;
    cfg.initial_state = PopulationState{0, 2, 0.0};
    CHECK_THROWS_AS(simulate_ssa(p, cfg, NullObserver{}), Error);
}

TEST_CASE("long runs agree with the master-equation steady state") {
    const auto p = preset_parameters(Preset::N0_1).with_pump(0.1);
    const auto truth = oracle_statistics(oracle_steady_state(p));
    std::vector<RunStatistics> runs;
    for (std::uint64_t i = 0; i < 5; ++i) {
        SsaConfig cfg;
        cfg.t_end = 2e6;
        cfg.seed = derive_seed(2024, {i});
        MomentAccumulator acc(0.01 * cfg.t_end);
        simulate_ssa(p, cfg, acc);
        runs.push_back(summarize(acc.moments()));
    }
    const auto s = aggregate_runs(runs);
    CHECK(std::abs(s.mean_np - truth.mean_np) < 3.0 * *s.err_np);
    CHECK(std::abs(*s.g2_0 - *truth.g2_0) < 3.0 * *s.err_g2);
    CHECK(std::abs(*s.rin - *truth.rin) < 3.0 * *s.err_rin);
}
