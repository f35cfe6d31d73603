// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line. Run with no arguments for the full suite or with a
// criterion number (1-13) for one check. Exits nonzero if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "safezone/baselines.hpp"
#include "safezone/exact.hpp"
#include "safezone/gridworld.hpp"
#include "safezone/io.hpp"
#include "safezone/oracle.hpp"
#include "safezone/solver.hpp"
#include "test_support.hpp"

using namespace safezone;
using namespace safezone::testing;

namespace {

struct Criterion {
    int id;
    std::string name;
    double time_limit_seconds; // 0 = unlimited
    std::function<bool(std::string&)> run;
};

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double stderr_of(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double mean = mean_of(values);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size() - 1);
    return std::sqrt(var / static_cast<double>(values.size()));
}

// --- 1. Exact DP vs exhaustive trajectory enumeration -----------------------

bool criterion_exact_dp(std::string& detail) {
    RngStream seeds(0xacce5501);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + seeds.next_below(5);   // up to 6 states
        int horizon = 1 + seeds.next_below(5); // up to 5 steps
        MarkovChain chain = random_chain(seeds.next_u64(), n, horizon);
        StateSet zone(n);
        if (trial % 10 != 0) zone.insert(chain.start_state()); // a few without s0
        for (int s = 0; s < n; ++s)
            if (seeds.bernoulli(0.5)) zone.insert(s);
        double expected = enumerate_escape_probability(chain, zone);
        double actual = exact_delta(chain, zone);
        worst = std::max(worst, std::abs(expected - actual));
    }
    std::ostringstream out;
    out << "100 chains, worst |DP - enumeration| = " << worst;
    detail = out.str();
    return worst <= 1e-12;
}

// --- 2. Monte-Carlo estimator calibration ------------------------------------

bool criterion_estimator_calibration(std::string& detail) {
    const double epsilon = 0.05, lambda = 0.1;
    const int calls = 200;
    std::ostringstream out;
    bool ok = true;
    for (double delta : {0.1, 0.3, 0.5}) {
        MarkovChain chain = two_state_chain(delta);
        StateSet zone = StateSet::of(2, {0});
        int failures = 0;
        for (int call = 0; call < calls; ++call) {
            RngStream rng(derive_seed(0xacce5502, "call", static_cast<uint64_t>(call) * 8 +
                                                       static_cast<uint64_t>(delta * 10)));
            SafetyReport report = monte_carlo_escape(chain, zone, epsilon, lambda, rng);
            if (std::abs(report.value - delta) > epsilon) ++failures;
        }
        out << "delta=" << delta << " failures=" << failures << "/" << calls << " ";
        if (failures > static_cast<int>(lambda * calls)) ok = false;
    }
    detail = out.str();
    return ok;
}

// --- 3. Threshold upper bound (safety 2 rho, size (H+1)/beta) ----------------

bool criterion_threshold_bound(std::string& detail) {
    const double rho = 0.2;
    int checked = 0;
    for (uint64_t seed = 0; checked < 20; ++seed) {
        int n = 5 + static_cast<int>(seed % 4);
        MarkovChain chain = random_chain(derive_seed(0xacce5503, "chain", seed), n, 4);
        OracleResult oracle = brute_force_kstar(chain, rho);
        double beta = rho / static_cast<double>(oracle.k_star);
        if (beta > 1.0) continue;
        BaselineResult result = greedy_by_threshold(visit_probabilities(chain), beta);
        double delta = exact_delta(chain, result.zone);
        if (delta > rho + oracle.k_star * beta + 1e-12) {
            detail = "escape bound violated on chain seed " + std::to_string(seed);
            return false;
        }
        if (result.zone.size() * beta > chain.horizon() + 1.0 + 1e-9) {
            detail = "size bound violated on chain seed " + std::to_string(seed);
            return false;
        }
        ++checked;
    }
    detail = "20 chains within (2 rho, (H+1)/beta)";
    return true;
}

// --- 4. Threshold tightness on the adversarial instance ----------------------

bool criterion_threshold_tightness(std::string& detail) {
    const double rho = 0.3;
    const int horizon = 5, k = 3;
    MarkovChain chain = gen_threshold_lowerbound(rho, horizon, k);
    double beta = rho / static_cast<double>(k);
    BaselineResult threshold = greedy_by_threshold(visit_probabilities(chain), beta);
    if (threshold.zone.size() != chain.n_states()) {
        detail = "threshold did not keep the whole state set";
        return false;
    }
    OracleResult oracle = brute_force_kstar(chain, rho);
    std::ostringstream out;
    out << "threshold keeps all " << chain.n_states() << " states, oracle k*=" << oracle.k_star;
    detail = out.str();
    return oracle.k_star <= k && exact_delta(chain, oracle.witness) <= rho + 1e-12;
}

// --- 5. Greedy-at-each-step bound (size k*, safety rho H) --------------------

bool criterion_greedy_bound(std::string& detail) {
    const double rho = 0.25;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        MarkovChain chain = random_layered_chain(derive_seed(0xacce5505, "chain", seed), 3, 3);
        OracleResult oracle = brute_force_kstar(chain, rho);
        BaselineResult greedy = greedy_each_step(chain, rho, visit_probabilities(chain));
        if (greedy.zone.size() > oracle.k_star) {
            detail = "size exceeded k* on layered chain seed " + std::to_string(seed);
            return false;
        }
        double delta = exact_delta(chain, greedy.zone);
        if (delta > std::min(1.0, rho * chain.horizon()) + 1e-12) {
            detail = "escape exceeded rho*H on layered chain seed " + std::to_string(seed);
            return false;
        }
    }
    detail = "20 layered chains within (rho H, k*)";
    return true;
}

// Shared solver fixtures for criteria 6-9.

struct SolverInstance {
    std::string name;
    MarkovChain chain;
    double rho;
    double epsilon;
};

std::vector<SolverInstance> solver_instances() {
    std::vector<SolverInstance> instances;
    instances.push_back({"hub-paths", gen_threshold_lowerbound(0.3, 4, 3), 0.3, 0.04});
    instances.push_back({"random-8", random_chain(0xacce5500 + 11, 8, 4), 0.2, 0.05});
    instances.push_back({"random-10", random_chain(0xacce5500 + 77, 10, 5), 0.25, 0.05});
    return instances;
}

SolverConfig exact_mode_config(const SolverInstance& instance) {
    SolverConfig cfg;
    cfg.rho = instance.rho;
    cfg.epsilon = instance.epsilon;
    cfg.lambda = 0.1;
    cfg.safety_mode = SafetyMode::exact;
    return cfg;
}

// --- 6. Exact-mode termination certificate -----------------------------------

bool criterion_exact_mode_certificate(std::string& detail) {
    RngStream seeds(0xacce5506);
    int runs = 0;
    for (int trial = 0; trial < 10; ++trial) {
        int n = 6 + seeds.next_below(5);
        MarkovChain chain = random_chain(seeds.next_u64(), n, 4);
        SolverConfig cfg;
        cfg.rho = 0.15;
        cfg.epsilon = 0.05;
        cfg.lambda = 0.1;
        cfg.safety_mode = SafetyMode::exact;
        SolverRun run = find_safezone(chain, cfg, seeds.next_u64());
        double delta = exact_delta(chain, run.zone);
        if (delta > 2.0 * cfg.rho + cfg.epsilon) {
            detail = "certificate violated on instance " + std::to_string(trial);
            return false;
        }
        ++runs;
    }
    detail = "10 exact-mode runs ended with delta <= 2 rho + epsilon";
    return runs == 10;
}

// --- 7. Expected zone size at most 2 k* --------------------------------------

bool criterion_expected_size(std::string& detail) {
    std::ostringstream out;
    for (const SolverInstance& instance : solver_instances()) {
        OracleResult oracle = brute_force_kstar(instance.chain, instance.rho);
        SolverConfig cfg = exact_mode_config(instance);
        std::vector<double> sizes;
        for (int run_index = 0; run_index < 200; ++run_index) {
            SolverRun run = find_safezone(instance.chain, cfg, derive_seed(0xacce5507,
                                          instance.name, static_cast<uint64_t>(run_index)));
            sizes.push_back(static_cast<double>(run.zone.size()));
        }
        double mean = mean_of(sizes);
        double bound = 2.0 * oracle.k_star + 3.0 * stderr_of(sizes);
        out << instance.name << ": mean=" << mean << " vs 2k*+3se=" << bound << "  ";
        if (mean > bound) {
            detail = out.str();
            return false;
        }
    }
    detail = out.str();
    return true;
}

// --- 8. Amplification size bound ---------------------------------------------

bool criterion_amplification(std::string& detail) {
    const double delta_slack = 1.0 / 3.0;
    std::ostringstream out;
    for (const SolverInstance& instance : solver_instances()) {
        OracleResult oracle = brute_force_kstar(instance.chain, instance.rho);
        int bound = static_cast<int>(std::floor((2.0 + delta_slack) * oracle.k_star));
        SolverConfig cfg = exact_mode_config(instance);
        int within = 0;
        const int meta_runs = 100;
        for (int meta = 0; meta < meta_runs; ++meta) {
            SolverRun best = amplified_find(instance.chain, cfg, delta_slack,
                                            derive_seed(0xacce5508, instance.name,
                                                        static_cast<uint64_t>(meta)));
            if (best.zone.size() <= bound) ++within;
        }
        out << instance.name << ": " << within << "/" << meta_runs << " within " << bound
            << "  ";
        if (within < 95) {
            detail = out.str();
            return false;
        }
    }
    detail = out.str();
    return true;
}

// --- 9. Good additions dominate bad additions --------------------------------

bool criterion_good_bad_balance(std::string& detail) {
    SolverInstance instance = solver_instances()[0];
    OracleResult oracle = brute_force_kstar(instance.chain, instance.rho);
    SolverConfig cfg = exact_mode_config(instance);

    std::vector<double> differences; // bad - good per accepted iteration
    uint64_t run_index = 0;
    while (differences.size() < 10'000) {
        SolverRun run = find_safezone(instance.chain, cfg,
                                      derive_seed(0xacce5509, "run", run_index++),
                                      &oracle.witness);
        for (const GbTally& tally : *run.gb_tallies)
            differences.push_back(static_cast<double>(tally.bad - tally.good));
    }
    double mean = mean_of(differences);
    double se = stderr_of(differences);
    std::ostringstream out;
    out << differences.size() << " iterations, mean(B-G)=" << mean << " vs 3se=" << 3.0 * se;
    detail = out.str();
    return mean <= 3.0 * se;
}

// --- 10. Acceptance realizes Pr/new ------------------------------------------

bool criterion_acceptance_distribution(std::string& detail) {
    MarkovChain chain = three_branch_chain();
    StateSet zone = StateSet::of(7, {0, 2}); // new counts 1 / 2 / 2
    std::map<int, int64_t> counts;
    RngStream rng(0xacce550a);
    const int64_t accepts = 100'000;
    for (int64_t done = 0; done < accepts;) {
        auto outcome = try_accept_trajectory(chain, zone, rng);
        if (!outcome) continue;
        ++counts[outcome->trajectory.states[1]];
        ++done;
    }
    double z = 0.5 / 1.0 + 0.3 / 2.0 + 0.2 / 2.0;
    std::map<int, double> expected{{1, 0.5 / z}, {3, 0.15 / z}, {5, 0.1 / z}};
    std::ostringstream out;
    bool ok = true;
    for (auto [branch, p] : expected) {
        double n = static_cast<double>(accepts);
        double deviation = std::abs(static_cast<double>(counts[branch]) - n * p);
        double sigma = std::sqrt(n * p * (1.0 - p));
        out << "branch " << branch << ": " << deviation / sigma << " sigma  ";
        if (deviation > 3.0 * sigma) ok = false;
    }
    detail = out.str();
    return ok;
}

// --- 11. Clique reduction agrees with brute force -----------------------------

bool criterion_clique_reduction(std::string& detail) {
    std::vector<std::pair<std::string, RegularGraph>> graphs;
    graphs.emplace_back("K4", complete_graph(4));
    graphs.emplace_back("C5", cycle_graph(5));
    graphs.emplace_back("K33", complete_bipartite_3_3());
    graphs.emplace_back("Petersen", petersen_graph());
    int added = 0;
    for (uint64_t seed = 0; added < 20; ++seed) {
        int n = 6 + static_cast<int>(seed % 5);
        int d = 3 + static_cast<int>(seed % 2);
        if (n * d % 2 != 0 || d >= n) continue;
        graphs.emplace_back("random-" + std::to_string(seed),
                            random_regular_graph(derive_seed(0xacce550b, "graph", seed), n, d));
        ++added;
    }

    int checks = 0;
    for (const auto& [name, graph] : graphs) {
        for (int k_c = 2; k_c <= std::min(4, graph.n_vertices); ++k_c) {
            bool via_safezone = regular_clique_via_safezone(graph, k_c);
            bool via_bruteforce = clique_exists(graph, k_c);
            if (via_safezone != via_bruteforce) {
                detail = "disagreement on " + name + " at k_c=" + std::to_string(k_c);
                return false;
            }
            ++checks;
        }
    }
    detail = std::to_string(graphs.size()) + " graphs, " + std::to_string(checks) +
             " decisions agree with brute force";
    return true;
}

// Shared grid-world sweep for criteria 12 and 13.

std::map<std::pair<std::string, int>, double> grid_mean_coverage(
    const std::string& policy, const std::vector<int>& k_grid) {
    BenchmarkOptions options;
    options.grid = GridConfig{};
    options.k_grid = k_grid;
    options.seeds = 5;
    options.root_seed = 0xacce5512;
    std::vector<int> actions = policy == "right-up" ? policy_right_then_up(options.grid)
                                                    : policy_middle_then_right(options.grid);
    BenchmarkResult result = run_benchmark(options, actions);
    std::map<std::pair<std::string, int>, double> means;
    for (const CoverageCurve& curve : result.curves)
        for (const CurvePoint& point : curve.points)
            means[{curve.algorithm, point.k}] = point.mean_coverage;
    return means;
}

// --- 12. Grid world, right-then-up policy -------------------------------------

bool criterion_grid_right_up(std::string& detail) {
    auto means = grid_mean_coverage("right-up", {60, 250});
    double solver_cov = means.at({"find-safezone", 250});
    double greedy_cov = means.at({"greedy-step", 60});
    std::ostringstream out;
    out << "find-safezone@250=" << solver_cov << " (need >= 0.75), greedy@60=" << greedy_cov
        << " (need <= 0.05)";
    detail = out.str();
    return solver_cov >= 0.75 && greedy_cov <= 0.05;
}

// --- 13. Grid world, middle-then-right policy ----------------------------------

bool criterion_grid_middle_right(std::string& detail) {
    const int k = 126; // 14% of the 900 grid states
    auto means = grid_mean_coverage("middle-right", {k});
    std::ostringstream out;
    bool ok = true;
    for (const char* algorithm : {"find-safezone", "greedy-step", "simulation"}) {
        double cov = means.at({algorithm, k});
        out << algorithm << "@" << k << "=" << cov << "  ";
        if (cov < 0.80) ok = false;
    }
    detail = out.str() + "(each needs >= 0.80)";
    return ok;
}

std::vector<Criterion> all_criteria() {
    return {
        {1, "exact DP matches trajectory enumeration within 1e-12", 5.0, criterion_exact_dp},
        {2, "Monte-Carlo estimator calibrated at (0.05, 0.1)", 60.0,
         criterion_estimator_calibration},
        {3, "threshold zones are (2rho, (H+1)/beta) bounded", 30.0, criterion_threshold_bound},
        {4, "threshold keeps everything on the adversarial hub instance", 0.0,
         criterion_threshold_tightness},
        {5, "layered greedy zones are (rho H, k*) bounded", 0.0, criterion_greedy_bound},
        {6, "exact-mode solver certifies delta <= 2rho + epsilon", 60.0,
         criterion_exact_mode_certificate},
        {7, "mean solver zone size <= 2k* + 3se over 200 runs", 300.0,
         criterion_expected_size},
        {8, "amplified zone size <= floor(7k*/3) in >= 95/100 meta-runs", 1200.0,
         criterion_amplification},
        {9, "bad additions do not outweigh good ones (10k iterations)", 300.0,
         criterion_good_bad_balance},
        {10, "acceptance frequencies match Pr/new within 3 sigma", 60.0,
         criterion_acceptance_distribution},
        {11, "clique reduction agrees with brute-force search", 120.0,
         criterion_clique_reduction},
        {12, "grid right-up: solver >= 0.75 at k=250, greedy <= 0.05 at k=60", 600.0,
         criterion_grid_right_up},
        {13, "grid middle-right: three algorithms >= 0.80 at k=126", 600.0,
         criterion_grid_middle_right},
    };
}

} // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = all_criteria();
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [criterion 1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
    }

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.time_limit_seconds > 0 && elapsed > criterion.time_limit_seconds) {
            ok = false;
            detail += " [exceeded " + std::to_string(criterion.time_limit_seconds) + "s limit]";
        }
        std::printf("%s criterion-%02d %s (%.2fs) %s\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name.c_str(), elapsed, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
