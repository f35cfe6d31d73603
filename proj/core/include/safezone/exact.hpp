#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "safezone/markov_chain.hpp"

namespace safezone {

enum class SafetyMethod { exact, monte_carlo };

// Exact or estimated escape probability of a zone, together with how it was
// obtained.
struct SafetyReport {
    double value = 0.0;
    SafetyMethod method = SafetyMethod::exact;
    int64_t samples_used = 0;
    std::optional<double> epsilon;
    std::optional<double> lambda;
};

// Escape probability of `zone`: the chance a random trajectory contains a
// state outside it. Computed by redirecting all mass that leaves the zone
// into an absorbing sink and running the forward distribution for H steps;
// the sink mass at time H is the answer. If the start state is outside the
// zone the value is 1 (the first state already escapes).
//
// Runs in O(edges * H). No validation; callers on untrusted input should use
// exact_escape_probability.
double exact_delta(const MarkovChain& chain, const StateSet& zone);

// Validating wrapper around exact_delta.
SafetyReport exact_escape_probability(const MarkovChain& chain, const StateSet& zone);

// p(s) = probability that a random trajectory visits s. Defined (and for
// general chains computed) as the escape probability of the complement of
// {s}. Layered chains take a single-pass shortcut: each state can only occur
// at its own layer, so p(s) is the forward time-marginal there.
std::vector<double> visit_probabilities(const MarkovChain& chain);

// ceil(ln(2/lambda) / (2 epsilon^2)): the Hoeffding sample size that makes
// Pr[|estimate - truth| >= epsilon] <= lambda.
int64_t hoeffding_sample_size(double epsilon, double lambda);

// Monte-Carlo escape probability: samples the Hoeffding number of
// trajectories and returns the escaping fraction.
SafetyReport monte_carlo_escape(const MarkovChain& chain, const StateSet& zone,
                                double epsilon, double lambda, RngStream& rng);

} // namespace safezone
