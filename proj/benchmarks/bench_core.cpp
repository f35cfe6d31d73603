#include <benchmark/benchmark.h>

#include "safezone/exact.hpp"
#include "safezone/gridworld.hpp"
#include "safezone/oracle.hpp"
#include "safezone/solver.hpp"

using namespace safezone;

namespace {

MarkovChain grid_chain(int side, int horizon) {
    GridConfig cfg;
    cfg.n = side;
    cfg.horizon = horizon;
    return induce_chain(with_deterministic_policy(build_gridworld(cfg),
                                                  policy_right_then_up(cfg)));
}

StateSet band_zone(const MarkovChain& chain, int side) {
    GridConfig cfg;
    cfg.n = side;
    StateSet zone(chain.n_states());
    for (int row = side / 2 - 3; row <= side / 2; ++row)
        for (int col = 0; col < side; ++col)
            if (row >= 0) zone.insert(grid_state(cfg, col, row));
    return zone;
}

void BM_ExactDelta(benchmark::State& state) {
    int side = static_cast<int>(state.range(0));
    MarkovChain chain = grid_chain(side, 300);
    StateSet zone = band_zone(chain, side);
    for (auto _ : state) benchmark::DoNotOptimize(exact_delta(chain, zone));
    state.SetComplexityN(chain.edge_count() * chain.horizon());
}

void BM_SampleTrajectory(benchmark::State& state) {
    MarkovChain chain = grid_chain(30, 300);
    RngStream rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(sample_trajectory(chain, rng));
}

void BM_NewCount(benchmark::State& state) {
    MarkovChain chain = grid_chain(30, 300);
    StateSet zone = band_zone(chain, 30);
    RngStream rng(7);
    Trajectory traj = sample_trajectory(chain, rng);
    for (auto _ : state) benchmark::DoNotOptimize(new_count(traj, zone));
}

void BM_VisitProbabilities(benchmark::State& state) {
    int side = static_cast<int>(state.range(0));
    MarkovChain chain = grid_chain(side, 10 * side);
    for (auto _ : state) benchmark::DoNotOptimize(visit_probabilities(chain));
}

void BM_FindSafezoneExact(benchmark::State& state) {
    MarkovChain chain = gen_threshold_lowerbound(0.3, 6, 4);
    SolverConfig cfg;
    cfg.rho = 0.3;
    cfg.epsilon = 0.04;
    cfg.lambda = 0.1;
    cfg.safety_mode = SafetyMode::exact;
    uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(find_safezone(chain, cfg, seed++));
}

void BM_OracleKstar(benchmark::State& state) {
    MarkovChain chain = gen_threshold_lowerbound(0.3, 4, 3);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_kstar(chain, 0.3));
}

} // namespace

BENCHMARK(BM_ExactDelta)->Arg(10)->Arg(20)->Arg(30)->Complexity(benchmark::oN);
BENCHMARK(BM_SampleTrajectory);
BENCHMARK(BM_NewCount);
BENCHMARK(BM_VisitProbabilities)->Arg(10)->Arg(15);
BENCHMARK(BM_FindSafezoneExact);
BENCHMARK(BM_OracleKstar);

BENCHMARK_MAIN();
