#include "safezone/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "safezone/errors.hpp"

namespace safezone {

BaselineResult greedy_by_threshold(std::span<const double> visit_probs, double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must be in (0, 1]");
    if (visit_probs.empty()) throw DomainError("visit probabilities are empty");

    StateSet zone(static_cast<int>(visit_probs.size()));
    for (int s = 0; s < static_cast<int>(visit_probs.size()); ++s)
        if (visit_probs[static_cast<size_t>(s)] >= beta) zone.insert(s);

    BaselineResult result{std::move(zone), BaselineAlgorithm::threshold, {{"beta", beta}}, 0};
    return result;
}

BaselineResult simulation_algorithm(const MarkovChain& chain, int64_t m, RngStream& rng) {
    if (m < 0) throw DomainError("sample count must be nonnegative");
    require_valid(chain);

    StateSet zone(chain.n_states());
    zone.insert(chain.start_state());
    for (int64_t i = 0; i < m; ++i) zone.insert(sample_trajectory(chain, rng));

    BaselineResult result{std::move(zone), BaselineAlgorithm::simulation,
                          {{"m", static_cast<double>(m)}}, m};
    return result;
}

int64_t simulation_sample_size(int k_star, double rho) {
    if (k_star < 1) throw DomainError("k_star must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must be in (0, 1)");
    return static_cast<int64_t>(
        std::ceil(static_cast<double>(k_star) / rho * std::log(static_cast<double>(k_star) / 0.005)));
}

BaselineResult greedy_each_step(const MarkovChain& chain, double rho,
                                std::span<const double> visit_probs) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must be in (0, 1)");
    if (!chain.is_layered())
        throw DomainError("greedy at each step needs a layered chain");
    require_valid(chain);
    if (static_cast<int>(visit_probs.size()) != chain.n_states())
        throw DomainError("visit probabilities do not match the chain");

    const auto& labels = chain.layer_labels();
    int layers = chain.max_layer();
    std::vector<std::vector<int>> by_layer(static_cast<size_t>(layers) + 1);
    for (int s = 0; s < chain.n_states(); ++s)
        by_layer[static_cast<size_t>(labels[s])].push_back(s);

    StateSet zone(chain.n_states());
    zone.insert(chain.start_state());
    for (int layer = 1; layer <= layers; ++layer) {
        auto& states = by_layer[static_cast<size_t>(layer)];
        std::sort(states.begin(), states.end(), [&](int a, int b) {
            double pa = visit_probs[static_cast<size_t>(a)];
            double pb = visit_probs[static_cast<size_t>(b)];
            if (pa != pb) return pa > pb;
            return a < b;
        });
        double cumulative = 0.0;
        for (int s : states) {
            zone.insert(s);
            cumulative += visit_probs[static_cast<size_t>(s)];
            // Tolerance keeps designed-equality prefixes (cumulative == 1-rho
            // in real arithmetic) from spilling over on float dust.
            if (cumulative >= 1.0 - rho - 1e-12) break;
        }
    }

    BaselineResult result{std::move(zone), BaselineAlgorithm::greedy_each_step, {{"rho", rho}}, 0};
    return result;
}

} // namespace safezone
