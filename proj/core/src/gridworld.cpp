#include "safezone/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "safezone/errors.hpp"
#include "safezone/exact.hpp"
#include "safezone/parallel.hpp"

namespace safezone {

namespace {

void check_grid(const GridConfig& cfg) {
    if (cfg.n < 2) throw DomainError("grid side must be at least 2");
    if (cfg.horizon < 1) throw DomainError("horizon must be positive");
    if (std::abs(cfg.intended_prob + cfg.drift_prob - 1.0) > kRowSumTolerance)
        throw DomainError("intended_prob + drift_prob must equal 1");
    if (cfg.intended_prob < 0.0 || cfg.drift_prob < 0.0)
        throw DomainError("grid move probabilities must be nonnegative");
}

struct Cell {
    int column;
    int row;
};

Cell moved(const GridConfig& cfg, Cell from, GridAction action) {
    Cell to = from;
    switch (action) {
        case GridAction::up: to.row += 1; break;
        case GridAction::down: to.row -= 1; break;
        case GridAction::right: to.column += 1; break;
        case GridAction::left: to.column -= 1; break;
    }
    // Off-grid moves keep the agent in place along that axis.
    to.column = std::clamp(to.column, 0, cfg.n - 1);
    to.row = std::clamp(to.row, 0, cfg.n - 1);
    return to;
}

} // namespace

int grid_state(const GridConfig& cfg, int column, int row) { return row * cfg.n + column; }

int grid_start_state(const GridConfig& cfg) { return grid_state(cfg, 0, cfg.n / 2); }

int grid_goal_state(const GridConfig& cfg) { return grid_state(cfg, cfg.n - 1, cfg.n / 2); }

Mdp build_gridworld(const GridConfig& cfg) {
    check_grid(cfg);
    const int n_states = cfg.n * cfg.n;
    const int goal = grid_goal_state(cfg);

    Mdp mdp{n_states, grid_start_state(cfg), 4, cfg.horizon, {}};
    mdp.action_rows.assign(static_cast<size_t>(n_states),
                           std::vector<std::vector<Transition>>(4));
    for (int row = 0; row < cfg.n; ++row) {
        for (int column = 0; column < cfg.n; ++column) {
            int s = grid_state(cfg, column, row);
            for (int a = 0; a < 4; ++a) {
                auto& entries = mdp.action_rows[static_cast<size_t>(s)][static_cast<size_t>(a)];
                if (s == goal) {
                    entries.push_back({s, 1.0});
                    continue;
                }
                Cell here{column, row};
                int intended = grid_state(cfg, moved(cfg, here, static_cast<GridAction>(a)).column,
                                          moved(cfg, here, static_cast<GridAction>(a)).row);
                int drift = grid_state(cfg, moved(cfg, here, GridAction::down).column,
                                       moved(cfg, here, GridAction::down).row);
                if (intended == drift) {
                    entries.push_back({intended, cfg.intended_prob + cfg.drift_prob});
                } else {
                    entries.push_back({intended, cfg.intended_prob});
                    entries.push_back({drift, cfg.drift_prob});
                }
            }
        }
    }
    return mdp;
}

std::vector<int> policy_right_then_up(const GridConfig& cfg) {
    check_grid(cfg);
    const int mid = cfg.n / 2;
    std::vector<int> actions(static_cast<size_t>(cfg.n * cfg.n));
    for (int row = 0; row < cfg.n; ++row) {
        for (int column = 0; column < cfg.n; ++column) {
            GridAction a;
            if (column < cfg.n - 1) {
                a = GridAction::right;
            } else {
                a = row < mid ? GridAction::up : GridAction::down;
            }
            actions[static_cast<size_t>(grid_state(cfg, column, row))] = static_cast<int>(a);
        }
    }
    return actions;
}

std::vector<int> policy_middle_then_right(const GridConfig& cfg) {
    check_grid(cfg);
    const int mid = cfg.n / 2;
    std::vector<int> actions(static_cast<size_t>(cfg.n * cfg.n));
    for (int row = 0; row < cfg.n; ++row) {
        for (int column = 0; column < cfg.n; ++column) {
            GridAction a;
            if (row == mid) {
                a = GridAction::right;
            } else {
                a = row < mid ? GridAction::up : GridAction::down;
            }
            actions[static_cast<size_t>(grid_state(cfg, column, row))] = static_cast<int>(a);
        }
    }
    return actions;
}

double coverage(const std::vector<Trajectory>& test_trajectories, const StateSet& zone) {
    if (test_trajectories.empty()) throw DomainError("coverage needs a nonempty test set");
    int64_t inside = 0;
    for (const Trajectory& traj : test_trajectories)
        if (!escapes(traj, zone)) ++inside;
    return static_cast<double>(inside) / static_cast<double>(test_trajectories.size());
}

StateSet threshold_with_budget(std::span<const double> visit_probs, int budget) {
    if (budget < 1) throw DomainError("budget must be positive");
    if (budget >= static_cast<int>(visit_probs.size()))
        return StateSet::full(static_cast<int>(visit_probs.size()));
    std::vector<int> order;
    for (int s = 0; s < static_cast<int>(visit_probs.size()); ++s)
        if (visit_probs[static_cast<size_t>(s)] > 0.0) order.push_back(s);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double pa = visit_probs[static_cast<size_t>(a)];
        double pb = visit_probs[static_cast<size_t>(b)];
        if (pa != pb) return pa > pb;
        return a < b;
    });
    StateSet zone(static_cast<int>(visit_probs.size()));
    for (int i = 0; i < std::min<int>(budget, static_cast<int>(order.size())); ++i)
        zone.insert(order[static_cast<size_t>(i)]);
    return zone;
}

StateSet simulation_with_budget(const MarkovChain& chain, int budget, int64_t max_episodes,
                                RngStream& rng) {
    if (budget < 1) throw DomainError("budget must be positive");
    if (budget >= chain.n_states()) return StateSet::full(chain.n_states());
    StateSet zone(chain.n_states());
    zone.insert(chain.start_state());
    for (int64_t episode = 0; episode < max_episodes; ++episode) {
        Trajectory traj = sample_trajectory(chain, rng);
        int added = new_count(traj, zone);
        if (zone.size() + added > budget) break; // never truncate a trajectory
        zone.insert(traj);
    }
    return zone;
}

StateSet greedy_steps_with_budget(const MarkovChain& chain, double rho, int budget) {
    if (budget < 1) throw DomainError("budget must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must be in (0, 1)");
    require_valid(chain);
    if (budget >= chain.n_states()) return StateSet::full(chain.n_states());

    // Runs the per-time-step prefix loop in its natural order and stops the
    // moment the budget would be exceeded, like the other budgeted variants.
    const int n = chain.n_states();
    std::vector<double> current(static_cast<size_t>(n), 0.0);
    std::vector<double> next(static_cast<size_t>(n), 0.0);
    current[static_cast<size_t>(chain.start_state())] = 1.0;

    StateSet zone(n);
    bool exhausted = false;
    for (int step = 0; step <= chain.horizon() && !exhausted; ++step) {
        if (step > 0) {
            for (int s = 0; s < n; ++s) {
                double mass = current[static_cast<size_t>(s)];
                if (mass == 0.0) continue;
                for (const Transition& t : chain.row(s))
                    next[static_cast<size_t>(t.target)] += mass * t.prob;
            }
            std::swap(current, next);
            std::fill(next.begin(), next.end(), 0.0);
        }
        std::vector<int> order;
        for (int s = 0; s < n; ++s)
            if (current[static_cast<size_t>(s)] > 0.0) order.push_back(s);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            double pa = current[static_cast<size_t>(a)];
            double pb = current[static_cast<size_t>(b)];
            if (pa != pb) return pa > pb;
            return a < b;
        });
        double cumulative = 0.0;
        for (int s : order) {
            if (!zone.contains(s)) {
                if (zone.size() + 1 > budget) {
                    exhausted = true;
                    break;
                }
                zone.insert(s);
            }
            cumulative += current[static_cast<size_t>(s)];
            if (cumulative >= 1.0 - rho - 1e-12) break;
        }
    }
    return zone;
}

StateSet find_safezone_with_budget(const MarkovChain& chain, const SolverConfig& cfg,
                                   int budget, uint64_t seed) {
    if (budget < 1) throw DomainError("budget must be positive");
    require_valid(chain);
    if (budget >= chain.n_states()) return StateSet::full(chain.n_states());

    RngStream main_rng = RngStream(seed).child("main");
    RngStream estimator_rng = RngStream(seed).child("estimator");

    StateSet zone(chain.n_states());
    zone.insert(chain.start_state());

    const double threshold = 2.0 * cfg.rho + cfg.epsilon;
    int j = 0;
    auto evaluate_safety = [&]() {
        ++j;
        if (cfg.safety_mode == SafetyMode::exact) return exact_delta(chain, zone);
        double jpi = static_cast<double>(j) * std::numbers::pi;
        double lambda_j = 3.0 * cfg.lambda / (2.0 * jpi * jpi);
        return est_safety(chain, zone, cfg.epsilon, lambda_j, estimator_rng).value;
    };

    constexpr int kMaxConsecutiveSkips = 50;
    constexpr int64_t kAttemptCap = 10'000'000;

    double estimate = evaluate_safety();
    int consecutive_skips = 0;
    for (int64_t attempt = 0; estimate > threshold && attempt < kAttemptCap; ++attempt) {
        Trajectory traj = sample_trajectory(chain, main_rng);
        int added = new_count(traj, zone);
        if (added == 0) continue;
        if (zone.size() + added > budget) {
            // overshoots the remaining budget; give up after a stretch of these
            if (++consecutive_skips >= kMaxConsecutiveSkips) break;
            continue;
        }
        consecutive_skips = 0;
        if (added > 1 && !main_rng.bernoulli(1.0 / static_cast<double>(added))) continue;
        zone.insert(traj);
        estimate = evaluate_safety();
    }
    return zone;
}

namespace {

StateSet run_cell(const MarkovChain& chain, std::span<const double> visit_probs,
                  const BenchmarkOptions& options, const std::string& algorithm, int k,
                  uint64_t cell_seed) {
    if (algorithm == "find-safezone") {
        SolverConfig cfg;
        cfg.rho = options.solver_rho;
        cfg.epsilon = options.solver_epsilon;
        cfg.lambda = 0.1;
        cfg.safety_mode = SafetyMode::exact;
        return find_safezone_with_budget(chain, cfg, k, cell_seed);
    }
    if (algorithm == "greedy-step") {
        return greedy_steps_with_budget(chain, options.greedy_rho, k);
    }
    if (algorithm == "simulation") {
        RngStream rng(cell_seed);
        return simulation_with_budget(chain, k, options.grid.episodes_train, rng);
    }
    if (algorithm == "threshold") {
        return threshold_with_budget(visit_probs, k);
    }
    throw DomainError("unknown benchmark algorithm: " + algorithm);
}

} // namespace

BenchmarkResult run_benchmark(const BenchmarkOptions& options,
                              const std::vector<int>& policy_actions) {
    check_grid(options.grid);
    if (options.k_grid.empty()) throw DomainError("k grid is empty");
    if (!std::is_sorted(options.k_grid.begin(), options.k_grid.end()) ||
        std::adjacent_find(options.k_grid.begin(), options.k_grid.end()) != options.k_grid.end())
        throw DomainError("k grid must be strictly increasing");
    if (options.seeds < 1) throw DomainError("need at least one seed");

    MarkovChain chain = induce_chain(
        with_deterministic_policy(build_gridworld(options.grid), policy_actions));
    require_valid(chain);
    std::vector<double> visit_probs = visit_probabilities(chain);

    // Fresh test set per seed, shared by every algorithm and budget.
    std::vector<std::vector<Trajectory>> test_sets(static_cast<size_t>(options.seeds));
    parallel_for(options.seeds, [&](int64_t i) {
        uint64_t seed = derive_seed(options.root_seed, "bench-seed", static_cast<uint64_t>(i));
        RngStream rng = RngStream(seed).child("test-set");
        auto& set = test_sets[static_cast<size_t>(i)];
        set.reserve(static_cast<size_t>(options.grid.episodes_test));
        for (int t = 0; t < options.grid.episodes_test; ++t)
            set.push_back(sample_trajectory(chain, rng));
    });

    const auto& algorithms = benchmark_algorithms();
    const int64_t n_cells = static_cast<int64_t>(algorithms.size()) *
                            static_cast<int64_t>(options.k_grid.size()) *
                            static_cast<int64_t>(options.seeds);

    BenchmarkResult result;
    result.cells.resize(static_cast<size_t>(n_cells));
    std::vector<std::string> failures(static_cast<size_t>(n_cells));

    parallel_for(n_cells, [&](int64_t cell) {
        int64_t per_alg = static_cast<int64_t>(options.k_grid.size()) * options.seeds;
        int alg_index = static_cast<int>(cell / per_alg);
        int k_index = static_cast<int>((cell % per_alg) / options.seeds);
        int seed_index = static_cast<int>(cell % options.seeds);

        const std::string& algorithm = algorithms[static_cast<size_t>(alg_index)];
        int k = options.k_grid[static_cast<size_t>(k_index)];
        uint64_t seed = derive_seed(options.root_seed, "bench-seed",
                                    static_cast<uint64_t>(seed_index));
        uint64_t cell_seed = derive_seed(seed, algorithm, static_cast<uint64_t>(k));
        try {
            StateSet zone = run_cell(chain, visit_probs, options, algorithm, k, cell_seed);
            double cov = coverage(test_sets[static_cast<size_t>(seed_index)], zone);
            result.cells[static_cast<size_t>(cell)] = {algorithm, k, seed_index, cov};
        } catch (const std::exception& e) {
            failures[static_cast<size_t>(cell)] = e.what();
        }
    });
    for (const std::string& failure : failures)
        if (!failure.empty()) throw DomainError("benchmark cell failed: " + failure);

    // Aggregate: mean and standard error per (algorithm, k), plus the
    // difference from greedy's mean at the same budget.
    std::map<std::pair<std::string, int>, std::vector<double>> grouped;
    for (const BenchmarkCell& cell : result.cells)
        grouped[{cell.algorithm, cell.k}].push_back(cell.coverage);

    auto mean_of = [&](const std::string& algorithm, int k) {
        const auto& values = grouped.at({algorithm, k});
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum / static_cast<double>(values.size());
    };

    for (const std::string& algorithm : algorithms) {
        CoverageCurve curve{algorithm, {}};
        for (int k : options.k_grid) {
            const auto& values = grouped.at({algorithm, k});
            double mean = mean_of(algorithm, k);
            double variance = 0.0;
            for (double v : values) variance += (v - mean) * (v - mean);
            double se = values.size() > 1
                            ? std::sqrt(variance / static_cast<double>(values.size() - 1)) /
                                  std::sqrt(static_cast<double>(values.size()))
                            : 0.0;
            curve.points.push_back({k, mean, se, mean - mean_of("greedy-step", k)});
        }
        result.curves.push_back(std::move(curve));
    }
    return result;
}

} // namespace safezone
