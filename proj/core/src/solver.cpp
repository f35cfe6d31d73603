#include "safezone/solver.hpp"

#include <cmath>
#include <numbers>

#include "safezone/errors.hpp"
#include "safezone/parallel.hpp"

namespace safezone {

namespace {

void check_unit_interval(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0))
        throw DomainError(std::string(name) + " must be in (0, 1)");
}

double lambda_schedule(double lambda, int j) {
    double jpi = static_cast<double>(j) * std::numbers::pi;
    return 3.0 * lambda / (2.0 * jpi * jpi);
}

} // namespace

SafetyReport est_safety(const MarkovChain& chain, const StateSet& zone, double epsilon,
                        double lambda_j, RngStream& rng) {
    check_unit_interval(epsilon, "epsilon");
    check_unit_interval(lambda_j, "lambda_j");
    int64_t n = hoeffding_sample_size(epsilon, lambda_j);
    int64_t escaped = 0;
    for (int64_t i = 0; i < n; ++i) {
        if (escapes(sample_trajectory(chain, rng), zone)) ++escaped;
    }
    return SafetyReport{static_cast<double>(escaped) / static_cast<double>(n),
                        SafetyMethod::monte_carlo, n, epsilon, lambda_j};
}

std::optional<AcceptanceOutcome> try_accept_trajectory(const MarkovChain& chain,
                                                       const StateSet& zone, RngStream& rng) {
    Trajectory traj = sample_trajectory(chain, rng);
    int added = new_count(traj, zone);
    if (added == 0) return std::nullopt;
    if (added == 1) return AcceptanceOutcome{std::move(traj), added}; // no draw spent
    if (rng.bernoulli(1.0 / static_cast<double>(added)))
        return AcceptanceOutcome{std::move(traj), added};
    return std::nullopt;
}

double sample_complexity_envelope(int k_star, double rho, double epsilon, double lambda,
                                  int horizon) {
    double k = static_cast<double>(k_star);
    double pik = std::numbers::pi * k;
    double estimator_part =
        4.0 * k / (lambda * epsilon * epsilon) * std::log(86.0 * pik * pik / (lambda * lambda * lambda));
    double main_part = 4.0 * static_cast<double>(horizon) * k / (rho * lambda);
    return estimator_part + main_part;
}

SolverRun find_safezone(const MarkovChain& chain, const SolverConfig& cfg, uint64_t seed,
                        const StateSet* reference_zone) {
    check_unit_interval(cfg.rho, "rho");
    check_unit_interval(cfg.epsilon, "epsilon");
    check_unit_interval(cfg.lambda, "lambda");
    require_valid(chain);
    if (reference_zone && reference_zone->universe_size() != chain.n_states())
        throw DomainError("reference zone universe does not match the chain");
    if (cfg.max_samples && *cfg.max_samples < 1)
        throw DomainError("max_samples must be positive");

    int64_t budget;
    if (cfg.max_samples) {
        budget = *cfg.max_samples;
    } else if (cfg.kstar_hint) {
        double envelope = 10.0 * sample_complexity_envelope(*cfg.kstar_hint, cfg.rho,
                                                            cfg.epsilon, cfg.lambda,
                                                            chain.horizon());
        budget = envelope >= 9e18 ? INT64_MAX : static_cast<int64_t>(envelope) + 1;
    } else {
        budget = 100'000'000;
    }

    RngStream main_rng = RngStream(seed).child("main");
    RngStream estimator_rng = RngStream(seed).child("estimator");

    SolverRun run{StateSet(chain.n_states()), SafetyReport{}, {}, {}, 0, 0, std::nullopt};
    run.zone.insert(chain.start_state());
    if (reference_zone) run.gb_tallies.emplace();

    const double threshold = 2.0 * cfg.rho + cfg.epsilon;
    int j = 0;

    auto evaluate_safety = [&]() {
        ++j;
        double lj = lambda_schedule(cfg.lambda, j);
        if (cfg.safety_mode == SafetyMode::exact) {
            run.final_safety = SafetyReport{exact_delta(chain, run.zone), SafetyMethod::exact,
                                            0, std::nullopt, std::nullopt};
            run.j_schedule.push_back({j, lj, 0});
        } else {
            run.final_safety = est_safety(chain, run.zone, cfg.epsilon, lj, estimator_rng);
            run.samples_estimator += run.final_safety.samples_used;
            run.j_schedule.push_back({j, lj, run.final_safety.samples_used});
        }
        return run.final_safety.value;
    };

    // Re-estimating only after acceptances would spin forever when nothing
    // escapes {s0}; evaluating up front keeps the solver total and only adds
    // one union-bound event.
    double estimate = evaluate_safety();
    while (estimate > threshold) {
        if (run.total_samples() >= budget)
            throw BudgetExceededError("sample budget exhausted before the zone became safe",
                                      run);
        std::optional<AcceptanceOutcome> outcome =
            try_accept_trajectory(chain, run.zone, main_rng);
        ++run.samples_main;
        if (!outcome) continue;
        int added = outcome->added;
        Trajectory traj = std::move(outcome->trajectory);

        if (reference_zone) {
            int good = 0;
            StateSet seen(chain.n_states());
            for (int s : traj.states) {
                if (run.zone.contains(s) || seen.contains(s)) continue;
                seen.insert(s);
                if (reference_zone->contains(s)) ++good;
            }
            run.gb_tallies->push_back({good, added - good});
        }

        run.zone.insert(traj);
        run.accepted.push_back({run.samples_main, added, std::move(traj)});
        estimate = evaluate_safety();
    }

    return run;
}

int amplification_runs(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must be in (0, 1)");
    return static_cast<int>(std::ceil(2.0 * std::log(300.0) / delta));
}

SolverRun amplified_find(const MarkovChain& chain, const SolverConfig& cfg, double delta,
                         uint64_t seed) {
    int m = amplification_runs(delta);
    SolverConfig per_run = cfg;
    per_run.lambda = 0.01 / (3.0 * static_cast<double>(m));

    // Validate once here: worker threads must not throw.
    check_unit_interval(per_run.rho, "rho");
    check_unit_interval(per_run.epsilon, "epsilon");
    require_valid(chain);
    if (per_run.max_samples && *per_run.max_samples < 1)
        throw DomainError("max_samples must be positive");

    std::vector<std::optional<SolverRun>> runs(static_cast<size_t>(m));
    std::vector<std::string> failures(static_cast<size_t>(m));
    parallel_for(m, [&](int64_t i) {
        uint64_t run_seed = derive_seed(seed, "run", static_cast<uint64_t>(i));
        try {
            runs[static_cast<size_t>(i)] = find_safezone(chain, per_run, run_seed);
        } catch (const BudgetExceededError&) {
            // a budget-exhausted run is skipped as long as another completes
        } catch (const std::exception& e) {
            failures[static_cast<size_t>(i)] = e.what();
        }
    });

    int best = -1;
    for (int i = 0; i < m; ++i) {
        if (!runs[static_cast<size_t>(i)]) continue;
        if (best < 0) {
            best = i;
            continue;
        }
        const SolverRun& candidate = *runs[static_cast<size_t>(i)];
        const SolverRun& incumbent = *runs[static_cast<size_t>(best)];
        if (candidate.zone.size() < incumbent.zone.size() ||
            (candidate.zone.size() == incumbent.zone.size() &&
             candidate.total_samples() < incumbent.total_samples())) {
            best = i;
        }
    }
    if (best < 0) {
        for (const std::string& failure : failures)
            if (!failure.empty()) throw DomainError("amplification run failed: " + failure);
        throw DomainError("every amplification run exhausted its sample budget");
    }
    return std::move(*runs[static_cast<size_t>(best)]);
}

} // namespace safezone
