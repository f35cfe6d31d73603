#include "safezone/exact.hpp"

#include <cmath>

#include "safezone/errors.hpp"
#include "safezone/parallel.hpp"

namespace safezone {

double exact_delta(const MarkovChain& chain, const StateSet& zone) {
    if (!zone.contains(chain.start_state())) return 1.0;

    const int n = chain.n_states();
    std::vector<double> current(static_cast<size_t>(n), 0.0);
    std::vector<double> next(static_cast<size_t>(n), 0.0);
    current[static_cast<size_t>(chain.start_state())] = 1.0;
    double sink = 0.0;

    for (int step = 0; step < chain.horizon(); ++step) {
        for (int s = 0; s < n; ++s) {
            double mass = current[static_cast<size_t>(s)];
            if (mass == 0.0) continue;
            for (const Transition& t : chain.row(s)) {
                if (zone.contains(t.target)) {
                    next[static_cast<size_t>(t.target)] += mass * t.prob;
                } else {
                    sink += mass * t.prob;
                }
            }
        }
        std::swap(current, next);
        std::fill(next.begin(), next.end(), 0.0);
    }
    return sink;
}

SafetyReport exact_escape_probability(const MarkovChain& chain, const StateSet& zone) {
    require_valid(chain);
    if (zone.universe_size() != chain.n_states())
        throw DomainError("zone universe does not match the chain");
    return SafetyReport{exact_delta(chain, zone), SafetyMethod::exact, 0, std::nullopt,
                        std::nullopt};
}

namespace {

std::vector<double> layered_visit_probabilities(const MarkovChain& chain) {
    // Each state occurs at exactly one time step, so Pr[s in trajectory] is
    // the forward marginal at that state's own layer.
    const int n = chain.n_states();
    const auto& labels = chain.layer_labels();
    std::vector<double> probs(static_cast<size_t>(n), 0.0);
    std::vector<double> current(static_cast<size_t>(n), 0.0);
    std::vector<double> next(static_cast<size_t>(n), 0.0);

    current[static_cast<size_t>(chain.start_state())] = 1.0;
    probs[static_cast<size_t>(chain.start_state())] = 1.0;

    int steps = std::min(chain.horizon(), chain.max_layer());
    for (int step = 1; step <= steps; ++step) {
        for (int s = 0; s < n; ++s) {
            double mass = current[static_cast<size_t>(s)];
            if (mass == 0.0) continue;
            for (const Transition& t : chain.row(s))
                next[static_cast<size_t>(t.target)] += mass * t.prob;
        }
        std::swap(current, next);
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < n; ++s)
            if (labels[s] == step) probs[static_cast<size_t>(s)] = current[static_cast<size_t>(s)];
    }
    return probs;
}

} // namespace

std::vector<double> visit_probabilities(const MarkovChain& chain) {
    require_valid(chain);
    if (chain.is_layered()) return layered_visit_probabilities(chain);

    const int n = chain.n_states();
    std::vector<double> probs(static_cast<size_t>(n), 0.0);
    parallel_for(n, [&](int64_t s) {
        StateSet without(n);
        for (int t = 0; t < n; ++t)
            if (t != static_cast<int>(s)) without.insert(t);
        probs[static_cast<size_t>(s)] = exact_delta(chain, without);
    });
    return probs;
}

int64_t hoeffding_sample_size(double epsilon, double lambda) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("epsilon must be in (0, 1)");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw DomainError("lambda must be in (0, 1)");
    return static_cast<int64_t>(std::ceil(std::log(2.0 / lambda) / (2.0 * epsilon * epsilon)));
}

SafetyReport monte_carlo_escape(const MarkovChain& chain, const StateSet& zone,
                                double epsilon, double lambda, RngStream& rng) {
    require_valid(chain);
    if (zone.universe_size() != chain.n_states())
        throw DomainError("zone universe does not match the chain");
    int64_t n = hoeffding_sample_size(epsilon, lambda);
    int64_t escaped = 0;
    for (int64_t i = 0; i < n; ++i) {
        Trajectory traj = sample_trajectory(chain, rng);
        if (escapes(traj, zone)) ++escaped;
    }
    return SafetyReport{static_cast<double>(escaped) / static_cast<double>(n),
                        SafetyMethod::monte_carlo, n, epsilon, lambda};
}

} // namespace safezone
