#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here deliberately avoids the library's DP/search code paths so it can act
// as a cross-check.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "safezone/markov_chain.hpp"
#include "safezone/oracle.hpp"
#include "safezone/rng.hpp"

namespace safezone::testing {

// Escape probability by exhaustive walk over every positive-probability
// path. Exponential in the horizon; only for tiny chains.
inline double enumerate_escape_probability(const MarkovChain& chain, const StateSet& zone) {
    struct Walker {
        const MarkovChain& chain;
        const StateSet& zone;
        double total = 0.0;

        void walk(int state, int depth, double prob, bool escaped) {
            escaped = escaped || !zone.contains(state);
            if (depth == chain.horizon()) {
                if (escaped) total += prob;
                return;
            }
            for (const Transition& t : chain.row(state))
                if (t.prob > 0.0) walk(t.target, depth + 1, prob * t.prob, escaped);
        }
    };
    Walker walker{chain, zone};
    walker.walk(chain.start_state(), 0, 1.0, false);
    return walker.total;
}

// Visit probability of one state by the same exhaustive walk.
inline double enumerate_visit_probability(const MarkovChain& chain, int target) {
    struct Walker {
        const MarkovChain& chain;
        int target;
        double total = 0.0;

        void walk(int state, int depth, double prob, bool seen) {
            seen = seen || state == target;
            if (depth == chain.horizon()) {
                if (seen) total += prob;
                return;
            }
            for (const Transition& t : chain.row(state))
                if (t.prob > 0.0) walk(t.target, depth + 1, prob * t.prob, seen);
        }
    };
    Walker walker{chain, target};
    walker.walk(chain.start_state(), 0, 1.0, false);
    return walker.total;
}

// Random valid chain: every state gets one to three outgoing edges with
// normalized random weights.
inline MarkovChain random_chain(uint64_t seed, int n_states, int horizon) {
    RngStream rng(seed);
    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n_states));
    for (int s = 0; s < n_states; ++s) {
        int fanout = 1 + rng.next_below(std::min(3, n_states));
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < fanout) {
            int t = rng.next_below(n_states);
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        std::vector<double> weights;
        double total = 0.0;
        for (size_t i = 0; i < targets.size(); ++i) {
            weights.push_back(0.05 + rng.next_unit());
            total += weights.back();
        }
        for (size_t i = 0; i < targets.size(); ++i)
            rows[static_cast<size_t>(s)].push_back({targets[i], weights[i] / total});
    }
    return MarkovChain(n_states, 0, horizon, std::move(rows));
}

// Random layered chain: single start on layer 0, `width` states per layer
// 1..horizon, absorbing self-loops on the last layer.
inline MarkovChain random_layered_chain(uint64_t seed, int width, int horizon) {
    RngStream rng(seed);
    int n = 1 + width * horizon;
    auto state_at = [&](int layer, int slot) { return 1 + (layer - 1) * width + slot; };

    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n));
    std::vector<int> labels(static_cast<size_t>(n), 0);
    for (int layer = 1; layer <= horizon; ++layer)
        for (int slot = 0; slot < width; ++slot)
            labels[static_cast<size_t>(state_at(layer, slot))] = layer;

    auto fill_row = [&](int from, int layer) {
        int fanout = 1 + rng.next_below(std::min(3, width));
        std::vector<int> slots;
        while (static_cast<int>(slots.size()) < fanout) {
            int slot = rng.next_below(width);
            if (std::find(slots.begin(), slots.end(), slot) == slots.end()) slots.push_back(slot);
        }
        std::vector<double> weights;
        double total = 0.0;
        for (size_t i = 0; i < slots.size(); ++i) {
            weights.push_back(0.05 + rng.next_unit());
            total += weights.back();
        }
        for (size_t i = 0; i < slots.size(); ++i)
            rows[static_cast<size_t>(from)].push_back(
                {state_at(layer, slots[i]), weights[i] / total});
    };

    fill_row(0, 1);
    for (int layer = 1; layer < horizon; ++layer)
        for (int slot = 0; slot < width; ++slot)
            fill_row(state_at(layer, slot), layer + 1);
    for (int slot = 0; slot < width; ++slot) {
        int s = state_at(horizon, slot);
        rows[static_cast<size_t>(s)].push_back({s, 1.0});
    }
    return MarkovChain(n, 0, horizon, std::move(rows), labels);
}

// Two-state chain: leaves the start with probability q at the single step,
// otherwise stays. Escape probability of {s0} is exactly q.
inline MarkovChain two_state_chain(double q, int horizon = 1) {
    std::vector<std::vector<Transition>> rows(2);
    rows[0] = {{0, 1.0 - q}, {1, q}};
    rows[1] = {{1, 1.0}};
    return MarkovChain(2, 0, horizon, std::move(rows));
}

// Deterministic path 0 -> 1 -> ... -> horizon (the last state absorbs).
inline MarkovChain deterministic_path_chain(int horizon) {
    int n = horizon + 1;
    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n));
    for (int s = 0; s < horizon; ++s) rows[static_cast<size_t>(s)] = {{s + 1, 1.0}};
    rows[static_cast<size_t>(horizon)] = {{horizon, 1.0}};
    return MarkovChain(n, 0, horizon, std::move(rows));
}

inline MarkovChain absorbing_start_chain(int n_states = 3, int horizon = 4) {
    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n_states));
    for (int s = 0; s < n_states; ++s) rows[static_cast<size_t>(s)] = {{s, 1.0}};
    return MarkovChain(n_states, 0, horizon, std::move(rows));
}

// Three disjoint two-step branches with probabilities 0.5 / 0.3 / 0.2; used
// to pin the acceptance distribution.
inline MarkovChain three_branch_chain() {
    std::vector<std::vector<Transition>> rows(7);
    rows[0] = {{1, 0.5}, {3, 0.3}, {5, 0.2}};
    rows[1] = {{2, 1.0}};
    rows[3] = {{4, 1.0}};
    rows[5] = {{6, 1.0}};
    rows[2] = {{2, 1.0}};
    rows[4] = {{4, 1.0}};
    rows[6] = {{6, 1.0}};
    return MarkovChain(7, 0, 2, std::move(rows));
}

// --- Graph fixtures and a brute-force clique oracle. -------------------------

inline RegularGraph complete_graph(int n) {
    RegularGraph graph{n, n - 1, {}};
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) graph.edges.emplace_back(u, v);
    return graph;
}

inline RegularGraph cycle_graph(int n) {
    RegularGraph graph{n, 2, {}};
    for (int u = 0; u < n; ++u) graph.edges.emplace_back(u, (u + 1) % n);
    return graph;
}

inline RegularGraph complete_bipartite_3_3() {
    RegularGraph graph{6, 3, {}};
    for (int u = 0; u < 3; ++u)
        for (int v = 3; v < 6; ++v) graph.edges.emplace_back(u, v);
    return graph;
}

inline RegularGraph petersen_graph() {
    RegularGraph graph{10, 3, {}};
    for (int u = 0; u < 5; ++u) {
        graph.edges.emplace_back(u, (u + 1) % 5);         // outer cycle
        graph.edges.emplace_back(u, u + 5);               // spokes
        graph.edges.emplace_back(u + 5, (u + 2) % 5 + 5); // inner pentagram
    }
    return graph;
}

// Configuration-model d-regular graph; retries until simple. n*d must be even.
inline RegularGraph random_regular_graph(uint64_t seed, int n, int d) {
    RngStream rng(seed);
    for (int attempt = 0; attempt < 10'000; ++attempt) {
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i)
            std::swap(stubs[static_cast<size_t>(i)],
                      stubs[static_cast<size_t>(rng.next_below(i + 1))]);

        std::vector<std::pair<int, int>> edges;
        std::vector<std::vector<char>> seen(static_cast<size_t>(n),
                                            std::vector<char>(static_cast<size_t>(n), 0));
        bool simple = true;
        for (size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v || seen[static_cast<size_t>(u)][static_cast<size_t>(v)]) {
                simple = false;
                break;
            }
            seen[static_cast<size_t>(u)][static_cast<size_t>(v)] = 1;
            seen[static_cast<size_t>(v)][static_cast<size_t>(u)] = 1;
            edges.emplace_back(u, v);
        }
        if (simple) return RegularGraph{n, d, std::move(edges)};
    }
    throw std::runtime_error("could not sample a simple regular graph");
}

// Clique existence by exhaustive extension.
inline bool clique_exists(const RegularGraph& graph, int k) {
    std::vector<std::vector<char>> adj(static_cast<size_t>(graph.n_vertices),
                                       std::vector<char>(static_cast<size_t>(graph.n_vertices), 0));
    for (auto [u, v] : graph.edges) {
        adj[static_cast<size_t>(u)][static_cast<size_t>(v)] = 1;
        adj[static_cast<size_t>(v)][static_cast<size_t>(u)] = 1;
    }
    std::vector<int> clique;
    struct Searcher {
        const RegularGraph& graph;
        const std::vector<std::vector<char>>& adj;
        int k;

        bool extend(std::vector<int>& clique, int from) {
            if (static_cast<int>(clique.size()) == k) return true;
            for (int v = from; v < graph.n_vertices; ++v) {
                bool compatible = true;
                for (int u : clique)
                    if (!adj[static_cast<size_t>(u)][static_cast<size_t>(v)]) {
                        compatible = false;
                        break;
                    }
                if (!compatible) continue;
                clique.push_back(v);
                if (extend(clique, v + 1)) return true;
                clique.pop_back();
            }
            return false;
        }
    };
    Searcher searcher{graph, adj, k};
    return searcher.extend(clique, 0);
}

} // namespace safezone::testing
