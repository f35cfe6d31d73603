#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "safezone/markov_chain.hpp"
#include "safezone/solver.hpp"

namespace safezone {

// N x N grid, agent at (column 0, middle row), absorbing goal at
// (column N-1, middle row). Each action moves as intended with
// intended_prob and drifts one row down with drift_prob; moves off the grid
// keep the agent in place along that axis.
struct GridConfig {
    int n = 30;
    int horizon = 300;
    double intended_prob = 0.9;
    double drift_prob = 0.1;
    int episodes_train = 2000;
    int episodes_test = 2000;
};

enum class GridAction : int { up = 0, down = 1, right = 2, left = 3 };

// Cells are indexed row-major: state = row * n + column, row 0 at the bottom.
int grid_state(const GridConfig& cfg, int column, int row);
int grid_start_state(const GridConfig& cfg);
int grid_goal_state(const GridConfig& cfg);

Mdp build_gridworld(const GridConfig& cfg);

// Deterministic policies from the benchmark: go right, then move along the
// last column toward the goal; or move to the middle row, then go right.
std::vector<int> policy_right_then_up(const GridConfig& cfg);
std::vector<int> policy_middle_then_right(const GridConfig& cfg);

// Fraction of trajectories entirely inside the zone. Throws DomainError on
// an empty test set.
double coverage(const std::vector<Trajectory>& test_trajectories, const StateSet& zone);

// --- Budgeted variants used for coverage-vs-k curves. -----------------------
//
// The coverage benchmark hands every algorithm a state budget k; these
// adapters realize that budget so the zones are monotone in k. A budget
// covering the whole universe short-circuits to the full state set.
// Selection orders:
//   threshold   - the k reachable states of highest visit probability;
//   simulation  - union trajectories, stopping before one would overflow k;
//   greedy      - per-time-step probability prefixes (mass 1-rho) taken in
//                 time order, stopping before one would overflow k;
//   solver      - the acceptance loop, skipping trajectories that would
//                 overflow k, stopping after 50 consecutive skips.

StateSet threshold_with_budget(std::span<const double> visit_probs, int budget);

StateSet simulation_with_budget(const MarkovChain& chain, int budget, int64_t max_episodes,
                                RngStream& rng);

// Greedy-at-each-step on time marginals (the grid chain is not layered, so
// layers are read as time steps: states sorted by Pr[s_t = s]).
StateSet greedy_steps_with_budget(const MarkovChain& chain, double rho, int budget);

StateSet find_safezone_with_budget(const MarkovChain& chain, const SolverConfig& cfg,
                                   int budget, uint64_t seed);

// --- Benchmark sweep. --------------------------------------------------------

struct BenchmarkCell {
    std::string algorithm;
    int k;
    int seed_index;
    double coverage;
};

struct CurvePoint {
    int k;
    double mean_coverage;
    double stderr_coverage;
    double delta_vs_greedy; // mean coverage minus greedy's at the same k
};

struct CoverageCurve {
    std::string algorithm;
    std::vector<CurvePoint> points;
};

struct BenchmarkOptions {
    GridConfig grid;
    std::vector<int> k_grid;
    int seeds = 5;
    uint64_t root_seed = 0;
    // Solver parameters for the budgeted Finding-SafeZone variant (exact
    // safety gating; the budget is what normally stops it).
    double solver_rho = 0.01;
    double solver_epsilon = 0.05;
    // Per-step tail mass for the greedy variant.
    double greedy_rho = 0.01;
};

struct BenchmarkResult {
    std::vector<BenchmarkCell> cells;   // one row per (algorithm, k, seed)
    std::vector<CoverageCurve> curves;  // aggregated per algorithm
};

inline const std::vector<std::string>& benchmark_algorithms() {
    static const std::vector<std::string> names = {"find-safezone", "greedy-step",
                                                   "simulation", "threshold"};
    return names;
}

// Runs every (algorithm, k, seed) cell on the chain induced by the policy.
// Each cell derives its own streams from root_seed, so results are
// independent of scheduling; coverage is always measured on the seed's own
// fresh test set.
BenchmarkResult run_benchmark(const BenchmarkOptions& options,
                              const std::vector<int>& policy_actions);

} // namespace safezone
