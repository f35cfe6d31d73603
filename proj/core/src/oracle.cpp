#include "safezone/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "safezone/baselines.hpp"
#include "safezone/errors.hpp"
#include "safezone/exact.hpp"

namespace safezone {

namespace {

// Absorbs exact-arithmetic equalities (instances are often built so the
// witness sits exactly at rho) without letting float dust flip the decision.
constexpr double kSafetySlack = 1e-12;

std::vector<int> reachable_states(const MarkovChain& chain) {
    std::vector<char> seen(static_cast<size_t>(chain.n_states()), 0);
    std::vector<int> frontier{chain.start_state()};
    seen[static_cast<size_t>(chain.start_state())] = 1;
    for (int depth = 0; depth < chain.horizon() && !frontier.empty(); ++depth) {
        std::vector<int> next;
        for (int s : frontier) {
            for (const Transition& t : chain.row(s)) {
                if (t.prob > 0.0 && !seen[static_cast<size_t>(t.target)]) {
                    seen[static_cast<size_t>(t.target)] = 1;
                    next.push_back(t.target);
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<int> out;
    for (int s = 0; s < chain.n_states(); ++s)
        if (seen[static_cast<size_t>(s)]) out.push_back(s);
    return out;
}

} // namespace

std::optional<OracleResult> bounded_safezone_search(const MarkovChain& chain, double rho,
                                                    int max_size) {
    if (!(rho > 0.0)) throw DomainError("rho must be positive");
    if (max_size < 1) throw DomainError("max_size must be positive");
    require_valid(chain);

    std::vector<int> reachable = reachable_states(chain);
    if (static_cast<int>(reachable.size()) > kOracleReachableLimit) {
        std::ostringstream msg;
        msg << "oracle guard: " << reachable.size() << " reachable states exceed the limit of "
            << kOracleReachableLimit;
        throw DomainError(msg.str());
    }

    std::vector<int> candidates;
    for (int s : reachable)
        if (s != chain.start_state()) candidates.push_back(s);
    const int m = static_cast<int>(candidates.size());

    int64_t examined = 0;
    int limit = std::min(max_size, m + 1);
    for (int size = 1; size <= limit; ++size) {
        int pick = size - 1; // states beyond s0
        std::vector<int> index(static_cast<size_t>(pick));
        for (int i = 0; i < pick; ++i) index[static_cast<size_t>(i)] = i;
        for (;;) {
            StateSet zone(chain.n_states());
            zone.insert(chain.start_state());
            for (int i : index) zone.insert(candidates[static_cast<size_t>(i)]);
            ++examined;
            if (exact_delta(chain, zone) <= rho + kSafetySlack)
                return OracleResult{size, std::move(zone), examined};

            // next lexicographic combination
            int pos = pick - 1;
            while (pos >= 0 && index[static_cast<size_t>(pos)] == m - pick + pos) --pos;
            if (pos < 0) break;
            ++index[static_cast<size_t>(pos)];
            for (int i = pos + 1; i < pick; ++i)
                index[static_cast<size_t>(i)] = index[static_cast<size_t>(i - 1)] + 1;
        }
    }
    return std::nullopt;
}

OracleResult brute_force_kstar(const MarkovChain& chain, double rho) {
    std::optional<OracleResult> found =
        bounded_safezone_search(chain, rho, chain.n_states());
    if (!found)
        throw DomainError("no safe set found; the full reachable set should always qualify");
    return std::move(*found);
}

namespace {

// Hub-and-paths instance shared by the threshold and simulation lower bounds:
// n_paths deterministic paths of `horizon` states entered with probability
// path_entry each, and k-1 absorbing states entered with probability
// (1-rho)/(k-1) each.
MarkovChain hub_paths_instance(double rho, int horizon, int k, int n_paths,
                               double path_entry) {
    int n = 1 + n_paths * horizon + (k - 1);
    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n));

    auto path_state = [&](int path, int depth) { return 1 + path * horizon + depth; };
    int absorbing_base = 1 + n_paths * horizon;

    for (int path = 0; path < n_paths; ++path) {
        rows[0].push_back({path_state(path, 0), path_entry});
        for (int depth = 0; depth + 1 < horizon; ++depth)
            rows[static_cast<size_t>(path_state(path, depth))].push_back(
                {path_state(path, depth + 1), 1.0});
        rows[static_cast<size_t>(path_state(path, horizon - 1))].push_back(
            {path_state(path, horizon - 1), 1.0});
    }
    double absorb_entry = (1.0 - rho) / static_cast<double>(k - 1);
    for (int b = 0; b < k - 1; ++b) {
        rows[0].push_back({absorbing_base + b, absorb_entry});
        rows[static_cast<size_t>(absorbing_base + b)].push_back({absorbing_base + b, 1.0});
    }

    MarkovChain chain(n, 0, horizon, std::move(rows));
    require_valid(chain);
    return chain;
}

} // namespace

MarkovChain gen_threshold_lowerbound(double rho, int horizon, int k) {
    if (!(rho > 0.0 && rho < 0.5)) throw DomainError("rho must be in (0, 1/2)");
    if (k < 2) throw DomainError("k must be at least 2");
    if (horizon < 1) throw DomainError("horizon must be positive");

    double beta = rho / static_cast<double>(k);
    // rho/beta paths keep the hub row stochastic: beta per path plus the
    // (1-rho) absorbing mass. With beta = rho/k that is exactly k paths.
    int n_paths = static_cast<int>(std::llround(rho / beta));
    double entry_mass = beta * static_cast<double>(n_paths) + (1.0 - rho);
    if (entry_mass > 1.0 + kRowSumTolerance)
        throw DomainError("branch probabilities exceed 1 for these parameters");
    return hub_paths_instance(rho, horizon, k, n_paths, beta);
}

MarkovChain gen_simulation_lowerbound(double rho, double gamma, int horizon, int k) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must be in (0, 1)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must be in (0, 1)");
    if (k < 2) throw DomainError("k must be at least 2");
    if (horizon < 1) throw DomainError("horizon must be positive");

    double m = static_cast<double>(simulation_sample_size(k, rho));
    double paths_needed = std::ceil(m * m / gamma);
    double states_needed = 1.0 + paths_needed * horizon + (k - 1);
    if (states_needed > 50e6) {
        std::ostringstream msg;
        msg << "instance would need about " << states_needed << " states; pick smaller k, "
            << "larger rho or larger gamma";
        throw DomainError(msg.str());
    }
    int n_paths = static_cast<int>(paths_needed);
    double path_entry = rho / static_cast<double>(n_paths);
    double entry_mass = path_entry * static_cast<double>(n_paths) + (1.0 - rho);
    if (entry_mass > 1.0 + kRowSumTolerance)
        throw DomainError("branch probabilities exceed 1 for these parameters");
    return hub_paths_instance(rho, horizon, k, n_paths, path_entry);
}

MarkovChain gen_greedy_lowerbound(double rho, int horizon) {
    if (!(rho > 0.0 && rho < 0.25)) throw DomainError("rho must be in (0, 1/4)");
    if (horizon < 1) throw DomainError("horizon must be positive");

    const int k = 3 * horizon + 1;         // low-mass states per layer
    const int width = 4 + k;               // states per layer
    const int n = 1 + horizon * width;

    auto layer_state = [&](int layer, int slot) { return 1 + (layer - 1) * width + slot; };

    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n));
    std::vector<int> labels(static_cast<size_t>(n), 0);

    rows[0].push_back({layer_state(1, 0), 1.0 - 2.0 * rho});
    rows[0].push_back({layer_state(1, 1), rho / 2.0});
    rows[0].push_back({layer_state(1, 2), rho / 2.0});
    rows[0].push_back({layer_state(1, 3), rho / 2.0});
    for (int j = 0; j < k; ++j)
        rows[0].push_back({layer_state(1, 4 + j), rho / (2.0 * static_cast<double>(k))});

    for (int layer = 1; layer <= horizon; ++layer) {
        for (int slot = 0; slot < width; ++slot)
            labels[static_cast<size_t>(layer_state(layer, slot))] = layer;
        if (layer == horizon) {
            for (int slot = 0; slot < width; ++slot) {
                int s = layer_state(layer, slot);
                rows[static_cast<size_t>(s)].push_back({s, 1.0});
            }
            continue;
        }
        int s1 = layer_state(layer, 0), t1 = layer_state(layer + 1, 0);
        int s2 = layer_state(layer, 1), t2 = layer_state(layer + 1, 1);
        int s3 = layer_state(layer, 2), t3 = layer_state(layer + 1, 2);
        int s4 = layer_state(layer, 3), t4 = layer_state(layer + 1, 3);

        rows[static_cast<size_t>(s1)] = {{t1, 1.0 - rho}, {t2, rho / 2.0}, {t3, rho / 2.0}};
        rows[static_cast<size_t>(s2)] = {{t1, 1.0 - 2.0 * rho}, {t2, rho}, {t3, rho}};
        rows[static_cast<size_t>(s3)] = {{t1, 1.0 - 2.0 * rho}, {t2, rho}, {t3, rho}};

        rows[static_cast<size_t>(s4)].push_back({t4, 0.5});
        for (int j = 0; j < k; ++j)
            rows[static_cast<size_t>(s4)].push_back(
                {layer_state(layer + 1, 4 + j), 1.0 / (2.0 * static_cast<double>(k))});
        for (int j = 0; j < k; ++j) {
            int s = layer_state(layer, 4 + j);
            rows[static_cast<size_t>(s)].push_back({t4, 0.5});
            for (int j2 = 0; j2 < k; ++j2)
                rows[static_cast<size_t>(s)].push_back(
                    {layer_state(layer + 1, 4 + j2), 1.0 / (2.0 * static_cast<double>(k))});
        }
    }

    MarkovChain chain(n, 0, horizon, std::move(rows), labels);
    require_valid(chain);

    // The construction is only trusted if forward DP reproduces the intended
    // per-layer visit probabilities.
    std::vector<double> marginals = visit_probabilities(chain);
    auto expect = [&](int state, double want) {
        if (std::abs(marginals[static_cast<size_t>(state)] - want) > 1e-9) {
            std::ostringstream msg;
            msg << "greedy lower-bound construction drifted: state " << state << " has marginal "
                << marginals[static_cast<size_t>(state)] << ", wanted " << want;
            throw DomainError(msg.str());
        }
    };
    for (int layer = 1; layer <= horizon; ++layer) {
        expect(layer_state(layer, 0), 1.0 - 2.0 * rho);
        expect(layer_state(layer, 1), rho / 2.0);
        expect(layer_state(layer, 2), rho / 2.0);
        expect(layer_state(layer, 3), rho / 2.0);
        for (int j = 0; j < k; ++j)
            expect(layer_state(layer, 4 + j), rho / (2.0 * static_cast<double>(k)));
    }
    return chain;
}

void validate_graph(const RegularGraph& graph) {
    if (graph.n_vertices <= 0) throw DomainError("graph needs a positive vertex count");
    if (graph.degree <= 0) throw DomainError("graph degree must be positive");
    std::set<std::pair<int, int>> seen;
    std::vector<int> degree(static_cast<size_t>(graph.n_vertices), 0);
    for (auto [u, v] : graph.edges) {
        if (u < 0 || u >= graph.n_vertices || v < 0 || v >= graph.n_vertices)
            throw DomainError("graph edge endpoint out of range");
        if (u == v) throw DomainError("graph has a self-loop");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second) throw DomainError("graph has a duplicate edge");
        ++degree[static_cast<size_t>(u)];
        ++degree[static_cast<size_t>(v)];
    }
    for (int v = 0; v < graph.n_vertices; ++v) {
        if (degree[static_cast<size_t>(v)] != graph.degree) {
            std::ostringstream msg;
            msg << "vertex " << v << " has degree " << degree[static_cast<size_t>(v)]
                << ", expected " << graph.degree;
            throw DomainError(msg.str());
        }
    }
}

std::vector<CliqueReductionInstance> clique_reduction(const RegularGraph& graph, int k_c) {
    validate_graph(graph);
    if (k_c < 2 || k_c > graph.n_vertices)
        throw DomainError("clique size must be between 2 and the vertex count");

    std::vector<std::vector<int>> adjacency(static_cast<size_t>(graph.n_vertices));
    for (auto [u, v] : graph.edges) {
        adjacency[static_cast<size_t>(u)].push_back(v);
        adjacency[static_cast<size_t>(v)].push_back(u);
    }

    double ratio = static_cast<double>(k_c - 1) / static_cast<double>(graph.degree);
    double rho = 1.0 - ratio * ratio;
    double step = 1.0 / static_cast<double>(graph.degree);

    std::vector<CliqueReductionInstance> instances;
    instances.reserve(static_cast<size_t>(graph.n_vertices));
    for (int start = 0; start < graph.n_vertices; ++start) {
        std::vector<std::vector<Transition>> rows(static_cast<size_t>(graph.n_vertices));
        for (int u = 0; u < graph.n_vertices; ++u)
            for (int v : adjacency[static_cast<size_t>(u)])
                rows[static_cast<size_t>(u)].push_back({v, step});
        MarkovChain chain(graph.n_vertices, start, 2, std::move(rows));
        require_valid(chain);
        instances.push_back({start, rho, std::move(chain)});
    }
    return instances;
}

bool regular_clique_via_safezone(const RegularGraph& graph, int k_c) {
    for (const CliqueReductionInstance& instance : clique_reduction(graph, k_c)) {
        // rho = 0 happens at k_c - 1 = d; the safety slack inside the search
        // keeps exact-zero escape probabilities decidable.
        if (bounded_safezone_search(instance.chain, std::max(instance.rho, 1e-15), k_c))
            return true;
    }
    return false;
}

} // namespace safezone
