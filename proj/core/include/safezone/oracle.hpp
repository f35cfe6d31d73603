#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "safezone/markov_chain.hpp"

namespace safezone {

// Exhaustive search is refused beyond this many positively-reachable states.
inline constexpr int kOracleReachableLimit = 24;

struct OracleResult {
    int k_star;
    StateSet witness;          // smallest rho-safe set found (contains s0)
    int64_t subsets_examined;  // exact-DP evaluations performed
};

// Smallest rho-safe set of size at most max_size, if one exists. Enumerates
// subsets containing s0, restricted to reachable states, in increasing
// cardinality and lexicographic order within a cardinality, so the witness is
// deterministic and minimal. Throws DomainError when the reachable-state
// count exceeds kOracleReachableLimit.
std::optional<OracleResult> bounded_safezone_search(const MarkovChain& chain, double rho,
                                                    int max_size);

// k*(rho) with a minimal witness. Always succeeds for rho > 0: the full
// reachable set has escape probability 0.
OracleResult brute_force_kstar(const MarkovChain& chain, double rho);

// Adversarial instance for the threshold algorithm: a hub with k disjoint
// deterministic paths of length `horizon`, each entered with probability
// beta = rho/k, plus k-1 absorbing states each entered with probability
// (1-rho)/(k-1). Every state then has visit probability >= beta, so the
// threshold at beta keeps everything, while {s0} union the absorbing states
// is a (rho, k)-safe zone.
MarkovChain gen_threshold_lowerbound(double rho, int horizon, int k);

// Adversarial instance for the simulation algorithm: ceil(m^2/gamma) disjoint
// paths (m the simulation sample count for k* = k) each entered with
// probability rho/r, plus the k-1 absorbing states. Sampled trajectories then
// almost never collide on a path, so each adds a full path of new states.
MarkovChain gen_simulation_lowerbound(double rho, double gamma, int horizon, int k);

// Adversarial layered instance for greedy-at-each-step with k = 3H+1 extra
// low-mass states per layer. Per layer the visit probabilities are
// 1-2rho, rho/2, rho/2, rho/2, and rho/(2k) for each low-mass state; the
// generator re-derives the marginals by forward DP and refuses to return a
// chain that misses them by more than 1e-9. Requires 0 < rho < 1/4.
MarkovChain gen_greedy_lowerbound(double rho, int horizon);

struct RegularGraph {
    int n_vertices;
    int degree;
    std::vector<std::pair<int, int>> edges; // undirected, no duplicates
};

// Throws DomainError unless every vertex has exactly `degree` neighbors with
// no self-loops or duplicate edges.
void validate_graph(const RegularGraph& graph);

struct CliqueReductionInstance {
    int start_vertex;
    double rho; // 1 - ((k_c - 1)/d)^2
    MarkovChain chain;
};

// Uniform random walk on the graph with horizon 2, one instance per start
// vertex, each paired with the clique-threshold escape bound.
std::vector<CliqueReductionInstance> clique_reduction(const RegularGraph& graph, int k_c);

// Decides k_c-clique existence by solving every reduction instance exactly:
// true iff some start vertex admits a set of at most k_c states with escape
// probability at most rho.
bool regular_clique_via_safezone(const RegularGraph& graph, int k_c);

} // namespace safezone
