#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "safezone/exact.hpp"
#include "safezone/markov_chain.hpp"

namespace safezone {

enum class SafetyMode { estimated, exact };

struct SolverConfig {
    double rho = 0.1;      // target safety, in (0,1)
    double epsilon = 0.05; // estimation accuracy, in (0,1)
    double lambda = 0.1;   // failure budget, in (0,1)
    SafetyMode safety_mode = SafetyMode::estimated;
    // Trajectory-draw budget. Defaults to 10x the sample-complexity envelope
    // when kstar_hint is given, else to 1e8 draws.
    std::optional<int64_t> max_samples;
    std::optional<int> kstar_hint;
};

struct AcceptedTrajectory {
    int64_t iteration; // main-loop sample index at which the acceptance fired
    int added;         // new_count at acceptance time
    Trajectory trajectory;
};

struct JScheduleEntry {
    int j;
    double lambda_j; // 3*lambda / (2*(j*pi)^2)
    int64_t n_j;     // estimator sample size; 0 in exact mode
};

// States added in one accepted iteration, split by membership in a reference
// zone ("good" inside, "bad" outside). Only recorded when a reference zone is
// supplied; has no effect on control flow.
struct GbTally {
    int good;
    int bad;
};

struct SolverRun {
    StateSet zone;
    SafetyReport final_safety;
    std::vector<AcceptedTrajectory> accepted;
    std::vector<JScheduleEntry> j_schedule;
    int64_t samples_main = 0;      // trajectories drawn for acceptance
    int64_t samples_estimator = 0; // trajectories drawn by est_safety
    std::optional<std::vector<GbTally>> gb_tallies;

    int64_t total_samples() const { return samples_main + samples_estimator; }
};

// Budget exhaustion carries the partial run; it signals a blown max_samples
// guard, not an algorithmic failure.
class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(std::string what, SolverRun partial)
        : std::runtime_error(std::move(what)), partial_run(std::move(partial)) {}

    SolverRun partial_run;
};

// Escaping fraction of ceil(ln(2/lambda_j) / (2 epsilon^2)) fresh
// trajectories. Both parameters must be in (0,1).
SafetyReport est_safety(const MarkovChain& chain, const StateSet& zone,
                        double epsilon, double lambda_j, RngStream& rng);

struct AcceptanceOutcome {
    Trajectory trajectory;
    int added; // new_count of the accepted trajectory
};

// One acceptance attempt: samples a trajectory and, if it escapes the zone,
// accepts it with probability 1/new_count (one Bernoulli draw; new_count 1
// accepts outright). Attempt-for-attempt this realizes the
// escaping-trajectory distribution proportional to Pr[trajectory]/new_count.
// Assumes a valid chain.
std::optional<AcceptanceOutcome> try_accept_trajectory(const MarkovChain& chain,
                                                       const StateSet& zone, RngStream& rng);

// The main solver. Grows the zone from {s0} by rejection-sampled
// trajectories until the (estimated or exact) escape probability drops to
// 2*rho + epsilon. Safety is evaluated once for {s0} up front and then after
// every acceptance; the j-th evaluation uses lambda_j = 3*lambda/(2*(j*pi)^2).
//
// Streams are derived from `seed` under the labels "main" (acceptance
// sampling) and "estimator" (safety estimation), so the two never share
// draws. reference_zone, when given, only records good/bad tallies.
SolverRun find_safezone(const MarkovChain& chain, const SolverConfig& cfg, uint64_t seed,
                        const StateSet* reference_zone = nullptr);

// ceil(2 ln(300) / delta): number of repetitions used by amplified_find.
int amplification_runs(double delta);

// Runs find_safezone amplification_runs(delta) times, overriding the failure
// budget with lambda = 0.01/(3m), and returns the run with the smallest zone
// (ties: fewer total samples, then lower run index). Run i draws from the
// child stream ("run", i). Budget-exhausted runs are skipped as long as at
// least one run completes.
SolverRun amplified_find(const MarkovChain& chain, const SolverConfig& cfg, double delta,
                         uint64_t seed);

// Sample-complexity envelope with the proof's explicit constants:
// 4 k*/(lambda eps^2) * ln(86 (pi k*)^2 / lambda^3) + 4 H k* / (rho lambda).
double sample_complexity_envelope(int k_star, double rho, double epsilon, double lambda,
                                  int horizon);

} // namespace safezone
