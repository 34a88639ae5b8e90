#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "temple/control.hpp"
#include "temple/decay.hpp"
#include "temple/riemann.hpp"
#include "temple/tracking.hpp"

using namespace temple;

namespace {

void BM_RiemannFan(benchmark::State& state) {
    auto sys = make_diag2();
    const GridLevel grid{static_cast<int>(state.range(0))};
    const WVec wl{-1.0, -1.0};
    const WVec wr{1.0, 1.0};  // full-box fan, 2^(nu+1) quanta
    for (auto _ : state) {
        auto fronts = solve_riemann(sys, wl, wr, grid, 0.0);
        benchmark::DoNotOptimize(fronts);
    }
}
BENCHMARK(BM_RiemannFan)->Arg(4)->Arg(6)->Arg(8);

void BM_ForwardFlow(benchmark::State& state) {
    auto sys = make_diag2();
    const GridLevel grid{6};
    const int cells = static_cast<int>(state.range(0));
    testgen::Rng rng(99);
    Profile initial = testgen::random_grid_profile(rng, sys, grid, 0.0, 1.0,
                                                   cells, 1.0 / (8.0 * cells));
    auto ua = testgen::random_control(rng, sys, grid, 4.0, 6, 0.2);
    auto ub = testgen::random_control(rng, sys, grid, 4.0, 6, 0.2);
    std::size_t events = 0;
    for (auto _ : state) {
        Trajectory traj = run_forward(sys, initial, ua, ub, grid, 4.0, {});
        events = traj.events.size();
        benchmark::DoNotOptimize(traj);
    }
    state.counters["events"] = static_cast<double>(events);
}
BENCHMARK(BM_ForwardFlow)->Arg(4)->Arg(16)->Arg(64);

void BM_Synthesis(benchmark::State& state) {
    auto sys = make_diag2();
    const GridLevel grid{static_cast<int>(state.range(0))};
    const DecayConstants constants = DecayConstants::make(8.0, 0.5, 0.75);
    testgen::Rng rng(7);
    Profile initial = testgen::random_grid_profile(rng, sys, grid, 0.0, 1.0,
                                                   4, 0.05);
    Profile target = testgen::random_downward_profile(rng, sys, 0.0, 1.0, 6);
    for (auto _ : state) {
        auto plan = synthesize(sys, initial, target, 6.0, grid, constants);
        benchmark::DoNotOptimize(plan);
    }
}
BENCHMARK(BM_Synthesis)->Arg(4)->Arg(6)->Arg(8);

void BM_KRhoCheck(benchmark::State& state) {
    auto sys = make_diag2();
    const GridLevel grid{6};
    testgen::Rng rng(13);
    Profile p = testgen::random_grid_profile(rng, sys, grid, 0.0, 1.0,
                                             static_cast<int>(state.range(0)),
                                             0.001);
    for (auto _ : state) {
        auto rep = check_k_rho(p, 16.0, sys.p, KMode::PartitionPairs);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_KRhoCheck)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
