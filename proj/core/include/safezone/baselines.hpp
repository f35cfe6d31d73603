#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "safezone/markov_chain.hpp"

namespace safezone {

enum class BaselineAlgorithm { threshold, simulation, greedy_each_step };

struct BaselineResult {
    StateSet zone;
    BaselineAlgorithm algorithm;
    std::vector<std::pair<std::string, double>> parameters;
    int64_t samples_used = 0;
};

// Keeps every state whose visit probability is at least beta. The start
// state always qualifies (p(s0) = 1). Requires 0 < beta <= 1.
BaselineResult greedy_by_threshold(std::span<const double> visit_probs, double beta);

// Union of the states of m sampled trajectories, plus the start state.
BaselineResult simulation_algorithm(const MarkovChain& chain, int64_t m, RngStream& rng);

// ceil((k_star / rho) * ln(k_star / 0.005)): the sample count under which the
// simulation zone is 2*rho-safe with probability at least 0.99.
int64_t simulation_sample_size(int k_star, double rho);

// For each layer of a layered chain, takes the minimal prefix of its states,
// sorted by visit probability (descending, ties by ascending index), whose
// cumulative probability reaches 1 - rho. Throws DomainError if the chain is
// not layered.
BaselineResult greedy_each_step(const MarkovChain& chain, double rho,
                                std::span<const double> visit_probs);

} // namespace safezone
