#include "safezone/markov_chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "safezone/errors.hpp"

namespace safezone {

namespace {

std::vector<Transition> normalize_row_layout(std::vector<Transition> row) {
    std::sort(row.begin(), row.end(),
              [](const Transition& a, const Transition& b) { return a.target < b.target; });
    std::vector<Transition> merged;
    merged.reserve(row.size());
    for (const Transition& t : row) {
        if (!merged.empty() && merged.back().target == t.target) {
            merged.back().prob += t.prob;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Transition& t) { return t.prob == 0.0; });
    return merged;
}

} // namespace

MarkovChain::MarkovChain(int n_states, int start_state, int horizon,
                         std::vector<std::vector<Transition>> rows,
                         std::optional<std::vector<int>> layer_labels)
    : n_states_(n_states),
      start_state_(start_state),
      horizon_(horizon),
      rows_(std::move(rows)),
      layer_labels_(std::move(layer_labels)) {
    if (n_states_ <= 0) throw DomainError("chain needs a positive state count");
    if (start_state_ < 0 || start_state_ >= n_states_)
        throw DomainError("start state out of range");
    if (horizon_ <= 0) throw DomainError("horizon must be positive");
    if (static_cast<int>(rows_.size()) != n_states_)
        throw DomainError("transition rows do not match the state count");
    if (layer_labels_ && static_cast<int>(layer_labels_->size()) != n_states_)
        throw DomainError("layer labels do not match the state count");
    for (auto& row : rows_) row = normalize_row_layout(std::move(row));
}

int MarkovChain::max_layer() const {
    int m = 0;
    for (int label : *layer_labels_) m = std::max(m, label);
    return m;
}

int64_t MarkovChain::edge_count() const {
    int64_t total = 0;
    for (const auto& row : rows_) total += static_cast<int64_t>(row.size());
    return total;
}

StateSet::StateSet(int universe_size)
    : universe_(universe_size),
      count_(0),
      bits_((static_cast<size_t>(universe_size) + 63) / 64, 0) {
    if (universe_size <= 0) throw DomainError("state set needs a positive universe");
}

StateSet StateSet::full(int universe_size) {
    StateSet set(universe_size);
    for (int s = 0; s < universe_size; ++s) set.insert(s);
    return set;
}

StateSet StateSet::of(int universe_size, std::initializer_list<int> states) {
    StateSet set(universe_size);
    for (int s : states) set.insert(s);
    return set;
}

void StateSet::insert(int state) {
    if (state < 0 || state >= universe_)
        throw DomainError("state index out of range for this zone");
    uint64_t& word = bits_[static_cast<size_t>(state) >> 6];
    uint64_t mask = uint64_t{1} << (state & 63);
    if (!(word & mask)) {
        word |= mask;
        ++count_;
    }
}

void StateSet::insert(const Trajectory& traj) {
    for (int s : traj.states) insert(s);
}

std::vector<int> StateSet::members() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(count_));
    for (int s = 0; s < universe_; ++s)
        if (contains(s)) out.push_back(s);
    return out;
}

StateSet StateSet::complement() const {
    StateSet out(universe_);
    for (int s = 0; s < universe_; ++s)
        if (!contains(s)) out.insert(s);
    return out;
}

bool StateSet::is_subset_of(const StateSet& other) const {
    if (universe_ != other.universe_) return false;
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~other.bits_[i]) return false;
    return true;
}

std::string ValidationResult::message() const {
    if (!issue) return "ok";
    std::ostringstream out;
    out << issue->rule << " at state " << issue->state;
    if (!issue->detail.empty()) out << ": " << issue->detail;
    return out.str();
}

ValidationResult validate_chain(const MarkovChain& chain) {
    auto fail = [](std::string rule, int state, std::string detail) {
        return ValidationResult{ValidationIssue{std::move(rule), state, std::move(detail)}};
    };

    for (int s = 0; s < chain.n_states(); ++s) {
        const auto& row = chain.row(s);
        if (row.empty())
            return fail("no outgoing", s, "states with no outgoing edges are invalid");
        double sum = 0.0;
        for (const Transition& t : row) {
            if (t.prob < 0.0 || t.prob > 1.0) {
                std::ostringstream detail;
                detail << "probability " << t.prob << " on edge to " << t.target;
                return fail("probability range", s, detail.str());
            }
            if (t.target < 0 || t.target >= chain.n_states()) {
                std::ostringstream detail;
                detail << "edge target " << t.target;
                return fail("target range", s, detail.str());
            }
            sum += t.prob;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            std::ostringstream detail;
            detail << "outgoing probabilities sum to " << sum;
            return fail("row sum", s, detail.str());
        }
    }

    if (chain.is_layered()) {
        const auto& labels = chain.layer_labels();
        for (int s = 0; s < chain.n_states(); ++s) {
            if (labels[s] < 0 || labels[s] > chain.horizon()) {
                std::ostringstream detail;
                detail << "layer " << labels[s] << " outside [0, " << chain.horizon() << "]";
                return fail("layer range", s, detail.str());
            }
        }
        if (labels[chain.start_state()] != 0)
            return fail("start layer", chain.start_state(), "start state must be on layer 0");
        int terminal = chain.max_layer();
        for (int s = 0; s < chain.n_states(); ++s) {
            for (const Transition& t : chain.row(s)) {
                if (t.prob == 0.0) continue;
                // Terminal-layer states carry absorbing self-loops; everything
                // else steps one layer forward.
                if (labels[s] == terminal ? t.target != s : labels[t.target] != labels[s] + 1) {
                    std::ostringstream detail;
                    detail << "edge " << s << " -> " << t.target << " crosses layers "
                           << labels[s] << " -> " << labels[t.target];
                    return fail("layer violation", s, detail.str());
                }
            }
        }
    }

    return ValidationResult{};
}

void require_valid(const MarkovChain& chain) {
    ValidationResult result = validate_chain(chain);
    if (!result.ok()) throw DomainError("invalid chain: " + result.message());
}

MdpWithPolicy with_deterministic_policy(Mdp mdp, const std::vector<int>& actions) {
    if (static_cast<int>(actions.size()) != mdp.n_states)
        throw DomainError("policy action map does not match the state count");
    std::vector<std::vector<double>> policy(static_cast<size_t>(mdp.n_states),
                                            std::vector<double>(static_cast<size_t>(mdp.n_actions), 0.0));
    for (int s = 0; s < mdp.n_states; ++s) {
        int a = actions[static_cast<size_t>(s)];
        if (a < 0 || a >= mdp.n_actions) throw DomainError("policy action out of range");
        policy[static_cast<size_t>(s)][static_cast<size_t>(a)] = 1.0;
    }
    return MdpWithPolicy{std::move(mdp), std::move(policy)};
}

MarkovChain induce_chain(const MdpWithPolicy& input) {
    const Mdp& mdp = input.mdp;
    if (mdp.n_states <= 0 || mdp.n_actions <= 0)
        throw DomainError("mdp needs positive state and action counts");
    if (static_cast<int>(mdp.action_rows.size()) != mdp.n_states ||
        static_cast<int>(input.policy.size()) != mdp.n_states)
        throw DomainError("mdp rows or policy do not match the state count");

    for (int s = 0; s < mdp.n_states; ++s) {
        if (static_cast<int>(mdp.action_rows[s].size()) != mdp.n_actions ||
            static_cast<int>(input.policy[s].size()) != mdp.n_actions)
            throw DomainError("mdp rows or policy do not match the action count");
        double policy_sum = 0.0;
        for (double p : input.policy[s]) {
            if (p < 0.0 || p > 1.0) throw DomainError("policy probability out of range");
            policy_sum += p;
        }
        if (std::abs(policy_sum - 1.0) > kRowSumTolerance)
            throw DomainError("policy row does not sum to 1");
        for (int a = 0; a < mdp.n_actions; ++a) {
            double row_sum = 0.0;
            for (const Transition& t : mdp.action_rows[s][a]) {
                if (t.prob < 0.0 || t.prob > 1.0)
                    throw DomainError("mdp transition probability out of range");
                if (t.target < 0 || t.target >= mdp.n_states)
                    throw DomainError("mdp transition target out of range");
                row_sum += t.prob;
            }
            if (std::abs(row_sum - 1.0) > kRowSumTolerance)
                throw DomainError("mdp transition row does not sum to 1");
        }
    }

    std::vector<std::vector<Transition>> rows(static_cast<size_t>(mdp.n_states));
    std::vector<double> weight(static_cast<size_t>(mdp.n_states), 0.0);
    for (int s = 0; s < mdp.n_states; ++s) {
        std::vector<int> touched;
        for (int a = 0; a < mdp.n_actions; ++a) {
            double pi = input.policy[s][static_cast<size_t>(a)];
            if (pi == 0.0) continue;
            for (const Transition& t : mdp.action_rows[s][static_cast<size_t>(a)]) {
                if (weight[static_cast<size_t>(t.target)] == 0.0) touched.push_back(t.target);
                weight[static_cast<size_t>(t.target)] += pi * t.prob;
            }
        }
        rows[static_cast<size_t>(s)].reserve(touched.size());
        std::sort(touched.begin(), touched.end());
        for (int target : touched) {
            rows[static_cast<size_t>(s)].push_back({target, weight[static_cast<size_t>(target)]});
            weight[static_cast<size_t>(target)] = 0.0;
        }
    }

    return MarkovChain(mdp.n_states, mdp.start_state, mdp.horizon, std::move(rows));
}

Trajectory sample_trajectory(const MarkovChain& chain, RngStream& rng) {
    Trajectory traj;
    traj.states.reserve(static_cast<size_t>(chain.horizon()) + 1);
    int current = chain.start_state();
    traj.states.push_back(current);
    for (int step = 0; step < chain.horizon(); ++step) {
        const auto& row = chain.row(current);
        double u = rng.next_unit();
        double acc = 0.0;
        int next = row.back().target; // float dust lands on the last edge
        for (const Transition& t : row) {
            acc += t.prob;
            if (u < acc) {
                next = t.target;
                break;
            }
        }
        current = next;
        traj.states.push_back(current);
    }
    return traj;
}

bool escapes(const Trajectory& traj, const StateSet& zone) {
    for (int s : traj.states)
        if (!zone.contains(s)) return true;
    return false;
}

int new_count(const Trajectory& traj, const StateSet& zone) {
    std::vector<int> outside;
    for (int s : traj.states)
        if (!zone.contains(s)) outside.push_back(s);
    if (outside.empty()) return 0;
    std::sort(outside.begin(), outside.end());
    outside.erase(std::unique(outside.begin(), outside.end()), outside.end());
    return static_cast<int>(outside.size());
}

} // namespace safezone
