#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safezone/rng.hpp"

namespace safezone {

// Tolerance for row-stochasticity checks. Rows are never renormalized;
// generators are expected to produce stochastic rows themselves.
inline constexpr double kRowSumTolerance = 1e-9;

struct Transition {
    int target;
    double prob;

    friend bool operator==(const Transition&, const Transition&) = default;
};

// Finite Markov chain with a fixed horizon H. States are dense indices
// 0..n-1. Rows are sparse adjacency lists sorted by target with duplicate
// targets merged at construction. Immutable afterwards, so instances can be
// shared freely across threads.
//
// Optional layer labels mark a layered chain: every transition must go from
// layer i to layer i+1, except that states on the last layer carry absorbing
// self-loops (every state needs an outgoing row, and there is no next layer
// to point at).
class MarkovChain {
public:
    MarkovChain(int n_states, int start_state, int horizon,
                std::vector<std::vector<Transition>> rows,
                std::optional<std::vector<int>> layer_labels = std::nullopt);

    int n_states() const { return n_states_; }
    int start_state() const { return start_state_; }
    int horizon() const { return horizon_; }

    const std::vector<Transition>& row(int state) const { return rows_[state]; }
    const std::vector<std::vector<Transition>>& rows() const { return rows_; }

    bool is_layered() const { return layer_labels_.has_value(); }
    const std::vector<int>& layer_labels() const { return *layer_labels_; }
    int max_layer() const;

    int64_t edge_count() const;

private:
    int n_states_;
    int start_state_;
    int horizon_;
    std::vector<std::vector<Transition>> rows_;
    std::optional<std::vector<int>> layer_labels_;
};

// Realized state sequence of length horizon+1 starting at the chain's start
// state.
struct Trajectory {
    std::vector<int> states;

    int length() const { return static_cast<int>(states.size()); }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Candidate zone: a bit-indexed subset of the state space with O(1)
// membership.
class StateSet {
public:
    explicit StateSet(int universe_size);

    static StateSet full(int universe_size);
    static StateSet of(int universe_size, std::initializer_list<int> states);

    int universe_size() const { return universe_; }
    int size() const { return count_; }

    bool contains(int state) const {
        return (bits_[static_cast<size_t>(state) >> 6] >> (state & 63)) & 1u;
    }

    void insert(int state);
    void insert(const Trajectory& traj);

    std::vector<int> members() const;
    StateSet complement() const;
    bool is_subset_of(const StateSet& other) const;

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    int universe_;
    int count_;
    std::vector<uint64_t> bits_;
};

// Outcome of validate_chain: either ok, or the first violated invariant with
// the offending state and a human-readable detail.
struct ValidationIssue {
    std::string rule;  // "no outgoing", "probability range", "target range",
                       // "row sum", "layer range", "start layer",
                       // "layer violation"
    int state;
    std::string detail;
};

struct ValidationResult {
    std::optional<ValidationIssue> issue;

    bool ok() const { return !issue.has_value(); }
    std::string message() const;
};

ValidationResult validate_chain(const MarkovChain& chain);

// Throws DomainError with the diagnostic message unless the chain is valid.
void require_valid(const MarkovChain& chain);

// MDP with per-(state, action) transition rows plus a (possibly stochastic)
// policy. Only used as a source for induced chains.
struct Mdp {
    int n_states;
    int start_state;
    int n_actions;
    int horizon;
    // action_rows[s][a] is the sparse row of the transition kernel at (s, a).
    std::vector<std::vector<std::vector<Transition>>> action_rows;
};

struct MdpWithPolicy {
    Mdp mdp;
    // policy[s][a] is the probability of action a in state s.
    std::vector<std::vector<double>> policy;
};

// Wraps a deterministic state->action map as an MdpWithPolicy.
MdpWithPolicy with_deterministic_policy(Mdp mdp, const std::vector<int>& actions);

// Chain induced by the policy: P(s, t) = sum_a policy(a|s) * P'(s, a, t).
// Throws DomainError if the MDP or policy rows are not stochastic.
MarkovChain induce_chain(const MdpWithPolicy& mdp);

// Samples a trajectory of exactly horizon+1 states, one uniform draw per
// step. Deterministic given the stream state.
Trajectory sample_trajectory(const MarkovChain& chain, RngStream& rng);

// True iff some state of traj lies outside zone.
bool escapes(const Trajectory& traj, const StateSet& zone);

// Number of distinct states of traj outside zone; 0 iff !escapes.
int new_count(const Trajectory& traj, const StateSet& zone);

} // namespace safezone
