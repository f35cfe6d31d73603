#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "manifest.hpp"
#include "safezone/baselines.hpp"
#include "safezone/errors.hpp"
#include "safezone/exact.hpp"
#include "safezone/gridworld.hpp"
#include "safezone/io.hpp"
#include "safezone/oracle.hpp"
#include "safezone/solver.hpp"

namespace safezone::cli {

namespace {

std::string join_command(const std::vector<std::string>& args) {
    std::string out = "safezone";
    for (const std::string& arg : args) {
        out += ' ';
        if (arg.find(' ') != std::string::npos) {
            out += '"' + arg + '"';
        } else {
            out += arg;
        }
    }
    return out;
}

std::string agg_path_for(const std::string& out_path) {
    size_t dot = out_path.find_last_of('.');
    size_t slash = out_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + "_agg";
    return out_path.substr(0, dot) + "_agg" + out_path.substr(dot);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_solver_report(const std::string& path, const std::string& algorithm,
                         const SolverRun& run) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write report: " + path);
    out << "safezone-report v1\n";
    out << "algorithm " << algorithm << "\n";
    out << "zone_size " << run.zone.size() << "\n";
    out << "zone";
    for (int s : run.zone.members()) out << ' ' << s;
    out << "\n";
    out << "safety_method "
        << (run.final_safety.method == SafetyMethod::exact ? "exact" : "monte_carlo") << "\n";
    out << "final_safety " << format_double(run.final_safety.value) << "\n";
    out << "samples_main " << run.samples_main << "\n";
    out << "samples_estimator " << run.samples_estimator << "\n";
    for (const JScheduleEntry& entry : run.j_schedule)
        out << "j " << entry.j << " lambda_j " << format_double(entry.lambda_j) << " n_j "
            << entry.n_j << "\n";
    for (const AcceptedTrajectory& accepted : run.accepted) {
        out << "accepted " << accepted.iteration << ' ' << accepted.added << " states";
        for (int s : accepted.trajectory.states) out << ' ' << s;
        out << "\n";
    }
    if (run.gb_tallies) {
        for (size_t i = 0; i < run.gb_tallies->size(); ++i)
            out << "gb " << i + 1 << " good " << (*run.gb_tallies)[i].good << " bad "
                << (*run.gb_tallies)[i].bad << "\n";
    }
}

// --- subcommand bodies -------------------------------------------------------

int run_validate(const std::string& chain_path) {
    MarkovChain chain = read_chain_file(chain_path);
    ValidationResult result = validate_chain(chain);
    if (result.ok()) {
        std::cout << "ok\n";
        return 0;
    }
    std::cout << "invalid: " << result.message() << "\n";
    std::cerr << "error: domain: invalid chain: " << result.message() << "\n";
    return 2;
}

int run_exact_safety(const std::string& chain_path, const std::string& zone_path) {
    MarkovChain chain = read_chain_file(chain_path);
    StateSet zone = read_zone_file(zone_path, chain.n_states());
    SafetyReport report = exact_escape_probability(chain, zone);
    std::cout << "delta " << format_double(report.value) << "\n";
    return 0;
}

int run_mc_safety(const std::string& chain_path, const std::string& zone_path, double epsilon,
                  double lambda, uint64_t seed) {
    MarkovChain chain = read_chain_file(chain_path);
    StateSet zone = read_zone_file(zone_path, chain.n_states());
    RngStream rng = RngStream(seed).child("mc-safety");
    SafetyReport report = monte_carlo_escape(chain, zone, epsilon, lambda, rng);
    std::cout << "delta_hat " << format_double(report.value) << "\n";
    std::cout << "samples " << report.samples_used << "\n";
    return 0;
}

int run_oracle(const std::string& chain_path, double rho) {
    MarkovChain chain = read_chain_file(chain_path);
    OracleResult result = brute_force_kstar(chain, rho);
    std::cout << "k_star " << result.k_star << "\n";
    std::cout << "witness";
    for (int s : result.witness.members()) std::cout << ' ' << s;
    std::cout << "\n";
    std::cout << "subsets_examined " << result.subsets_examined << "\n";
    return 0;
}

int run_reduce_clique(const std::string& graph_path, int k_c) {
    RegularGraph graph = read_graph_file(graph_path);
    auto instances = clique_reduction(graph, k_c);
    bool found = regular_clique_via_safezone(graph, k_c);
    std::cout << "rho " << format_double(instances.front().rho) << "\n";
    std::cout << "instances " << instances.size() << "\n";
    std::cout << "clique_exists " << (found ? "true" : "false") << "\n";
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"SafeZone: escape-probability analysis and zone finding for finite-horizon "
                 "Markov chains"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersionString));

    // validate
    std::string validate_chain_path;
    CLI::App* cmd_validate = app.add_subcommand("validate", "Check a chain file's invariants");
    cmd_validate->add_option("--chain", validate_chain_path, "chain file")->required();

    // exact-safety
    std::string exact_chain_path, exact_zone_path;
    CLI::App* cmd_exact = app.add_subcommand("exact-safety",
                                             "Exact escape probability of a zone");
    cmd_exact->add_option("--chain", exact_chain_path, "chain file")->required();
    cmd_exact->add_option("--zone", exact_zone_path, "zone file")->required();

    // mc-safety
    std::string mc_chain_path, mc_zone_path;
    double mc_epsilon = 0.05, mc_lambda = 0.1;
    uint64_t mc_seed = 0;
    CLI::App* cmd_mc = app.add_subcommand("mc-safety",
                                          "Monte-Carlo escape probability of a zone");
    cmd_mc->add_option("--chain", mc_chain_path, "chain file")->required();
    cmd_mc->add_option("--zone", mc_zone_path, "zone file")->required();
    cmd_mc->add_option("--epsilon", mc_epsilon, "accuracy")->required();
    cmd_mc->add_option("--lambda", mc_lambda, "failure probability")->required();
    cmd_mc->add_option("--seed", mc_seed, "root seed");

    // solve
    std::string solve_algorithm, solve_chain_path, solve_out, solve_report;
    double solve_beta = 0.0, solve_rho = 0.0, solve_epsilon = 0.05, solve_lambda = 0.1;
    double solve_delta = 0.0;
    int64_t solve_m = -1;
    int64_t solve_max_samples = 0;
    int solve_kstar = 0;
    uint64_t solve_seed = 0;
    bool solve_exact = false;
    CLI::App* cmd_solve = app.add_subcommand("solve", "Run a SafeZone-finding algorithm");
    cmd_solve
        ->add_option("--algorithm", solve_algorithm,
                     "threshold | simulation | greedy-step | find-safezone")
        ->required()
        ->check(CLI::IsMember({"threshold", "simulation", "greedy-step", "find-safezone"}));
    cmd_solve->add_option("--chain", solve_chain_path, "chain file")->required();
    cmd_solve->add_option("--out", solve_out, "zone output file")->required();
    cmd_solve->add_option("--beta", solve_beta, "threshold on visit probability");
    cmd_solve->add_option("--rho", solve_rho, "target safety");
    cmd_solve->add_option("--m", solve_m, "simulation sample count");
    cmd_solve->add_option("--epsilon", solve_epsilon, "estimation accuracy");
    cmd_solve->add_option("--lambda", solve_lambda, "failure budget");
    cmd_solve->add_flag("--exact-safety", solve_exact, "gate on exact escape probability");
    cmd_solve->add_option("--delta", solve_delta, "size slack; enables amplification");
    cmd_solve->add_option("--kstar", solve_kstar, "optimal-size hint for the sample budget");
    cmd_solve->add_option("--max-samples", solve_max_samples, "trajectory budget guard");
    cmd_solve->add_option("--seed", solve_seed, "root seed");
    cmd_solve->add_option("--report", solve_report, "write a solver audit report here");

    // oracle
    std::string oracle_chain_path;
    double oracle_rho = 0.0;
    CLI::App* cmd_oracle = app.add_subcommand("oracle", "Brute-force k* and a minimal witness");
    cmd_oracle->add_option("--chain", oracle_chain_path, "chain file")->required();
    cmd_oracle->add_option("--rho", oracle_rho, "safety bound")->required();

    // gen-instance
    std::string gen_family, gen_out;
    double gen_rho = 0.0, gen_gamma = 0.0;
    int gen_horizon = 0, gen_k = 0;
    CLI::App* cmd_gen = app.add_subcommand("gen-instance",
                                           "Generate an adversarial lower-bound instance");
    cmd_gen->add_option("--family", gen_family, "threshold | simulation | greedy")
        ->required()
        ->check(CLI::IsMember({"threshold", "simulation", "greedy"}));
    cmd_gen->add_option("--rho", gen_rho, "safety parameter")->required();
    cmd_gen->add_option("--horizon", gen_horizon, "horizon")->required();
    cmd_gen->add_option("--k", gen_k, "optimal size parameter");
    cmd_gen->add_option("--gamma", gen_gamma, "collision slack (simulation family)");
    cmd_gen->add_option("--out", gen_out, "chain output file")->required();

    // reduce-clique
    std::string clique_graph_path;
    int clique_k = 0;
    CLI::App* cmd_clique = app.add_subcommand("reduce-clique",
                                              "Decide RegularClique via SafeZone instances");
    cmd_clique->add_option("--graph", clique_graph_path, "graph file")->required();
    cmd_clique->add_option("--kc", clique_k, "clique size")->required();

    // gridworld-bench
    std::string bench_policy = "right-up", bench_out;
    std::vector<int> bench_k_grid;
    int bench_n = 30, bench_horizon = 300, bench_train = 2000, bench_test = 2000,
        bench_seeds = 5;
    uint64_t bench_seed = 0;
    double bench_solver_rho = 0.01, bench_solver_epsilon = 0.05, bench_greedy_rho = 0.01;
    CLI::App* cmd_bench = app.add_subcommand("gridworld-bench",
                                             "Coverage-vs-budget sweep on the grid world");
    cmd_bench->add_option("--n", bench_n, "grid side");
    cmd_bench->add_option("--policy", bench_policy, "right-up | middle-right")
        ->check(CLI::IsMember({"right-up", "middle-right"}));
    cmd_bench->add_option("--k-grid", bench_k_grid, "comma-separated budgets")
        ->required()
        ->delimiter(',');
    cmd_bench->add_option("--seeds", bench_seeds, "number of seeds");
    cmd_bench->add_option("--horizon", bench_horizon, "episode length");
    cmd_bench->add_option("--train", bench_train, "training episodes");
    cmd_bench->add_option("--test", bench_test, "test episodes");
    cmd_bench->add_option("--seed", bench_seed, "root seed");
    cmd_bench->add_option("--solver-rho", bench_solver_rho, "rho for find-safezone");
    cmd_bench->add_option("--solver-epsilon", bench_solver_epsilon,
                          "epsilon for find-safezone");
    cmd_bench->add_option("--greedy-rho", bench_greedy_rho, "per-step tail mass for greedy");
    cmd_bench->add_option("--out", bench_out, "per-cell CSV output")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));

        Timer timer;
        if (*cmd_validate) return run_validate(validate_chain_path);
        if (*cmd_exact) return run_exact_safety(exact_chain_path, exact_zone_path);
        if (*cmd_mc)
            return run_mc_safety(mc_chain_path, mc_zone_path, mc_epsilon, mc_lambda, mc_seed);
        if (*cmd_oracle) return run_oracle(oracle_chain_path, oracle_rho);
        if (*cmd_clique) return run_reduce_clique(clique_graph_path, clique_k);

        if (*cmd_solve) {
            if (solve_algorithm == "threshold" && cmd_solve->count("--beta") == 0)
                throw CLI::ValidationError("solve", "--beta is required for threshold");
            if (solve_algorithm == "simulation" && cmd_solve->count("--m") == 0)
                throw CLI::ValidationError("solve", "--m is required for simulation");
            if ((solve_algorithm == "greedy-step" || solve_algorithm == "find-safezone") &&
                cmd_solve->count("--rho") == 0)
                throw CLI::ValidationError("solve", "--rho is required for " + solve_algorithm);
            if (solve_algorithm != "find-safezone" && !solve_report.empty())
                throw CLI::ValidationError("solve",
                                           "--report is only produced by find-safezone");

            MarkovChain chain = read_chain_file(solve_chain_path);

            RunManifest manifest;
            manifest.command_line = join_command(args);
            manifest.version = kVersionString;
            manifest.seed = solve_seed;
            manifest.add_input(solve_chain_path);
            manifest.config.emplace_back("algorithm", solve_algorithm);

            StateSet zone(chain.n_states());
            if (solve_algorithm == "threshold") {
                std::vector<double> probs = visit_probabilities(chain);
                BaselineResult result = greedy_by_threshold(probs, solve_beta);
                zone = result.zone;
                manifest.config.emplace_back("beta", format_double(solve_beta));
            } else if (solve_algorithm == "simulation") {
                RngStream rng = RngStream(solve_seed).child("main");
                BaselineResult result = simulation_algorithm(chain, solve_m, rng);
                zone = result.zone;
                manifest.config.emplace_back("m", std::to_string(solve_m));
            } else if (solve_algorithm == "greedy-step") {
                std::vector<double> probs = visit_probabilities(chain);
                BaselineResult result = greedy_each_step(chain, solve_rho, probs);
                zone = result.zone;
                manifest.config.emplace_back("rho", format_double(solve_rho));
            } else {
                SolverConfig cfg;
                cfg.rho = solve_rho;
                cfg.epsilon = solve_epsilon;
                cfg.lambda = solve_lambda;
                cfg.safety_mode = solve_exact ? SafetyMode::exact : SafetyMode::estimated;
                if (solve_max_samples > 0) cfg.max_samples = solve_max_samples;
                if (solve_kstar > 0) cfg.kstar_hint = solve_kstar;
                SolverRun run = cmd_solve->count("--delta") != 0
                                    ? amplified_find(chain, cfg, solve_delta, solve_seed)
                                    : find_safezone(chain, cfg, solve_seed);
                zone = run.zone;
                manifest.config.emplace_back("rho", format_double(solve_rho));
                manifest.config.emplace_back("epsilon", format_double(solve_epsilon));
                manifest.config.emplace_back("lambda", format_double(cfg.lambda));
                manifest.config.emplace_back("safety_mode",
                                             solve_exact ? "exact" : "estimated");
                if (cmd_solve->count("--delta") != 0)
                    manifest.config.emplace_back("delta", format_double(solve_delta));
                if (!solve_report.empty()) {
                    write_solver_report(solve_report, solve_algorithm, run);
                    manifest.outputs.push_back(solve_report);
                }
                std::cout << "final_safety " << format_double(run.final_safety.value) << "\n";
            }

            write_zone_file(solve_out, zone);
            manifest.outputs.insert(manifest.outputs.begin(), solve_out);
            manifest.wall_clock_seconds = timer.seconds();
            manifest.created_utc = current_utc_timestamp();
            manifest.write(solve_out + ".manifest");

            std::cout << "zone_size " << zone.size() << "\n";
            std::cout << "zone_file " << solve_out << "\n";
            return 0;
        }

        if (*cmd_gen) {
            MarkovChain chain = [&] {
                if (gen_family == "threshold") {
                    if (cmd_gen->count("--k") == 0)
                        throw CLI::ValidationError("gen-instance", "--k is required");
                    return gen_threshold_lowerbound(gen_rho, gen_horizon, gen_k);
                }
                if (gen_family == "simulation") {
                    if (cmd_gen->count("--k") == 0 || cmd_gen->count("--gamma") == 0)
                        throw CLI::ValidationError("gen-instance",
                                                   "--k and --gamma are required");
                    return gen_simulation_lowerbound(gen_rho, gen_gamma, gen_horizon, gen_k);
                }
                return gen_greedy_lowerbound(gen_rho, gen_horizon);
            }();
            write_chain_file(gen_out, chain);

            RunManifest manifest;
            manifest.command_line = join_command(args);
            manifest.version = kVersionString;
            manifest.config.emplace_back("family", gen_family);
            manifest.config.emplace_back("rho", format_double(gen_rho));
            manifest.config.emplace_back("horizon", std::to_string(gen_horizon));
            if (cmd_gen->count("--k") != 0)
                manifest.config.emplace_back("k", std::to_string(gen_k));
            if (cmd_gen->count("--gamma") != 0)
                manifest.config.emplace_back("gamma", format_double(gen_gamma));
            manifest.outputs.push_back(gen_out);
            manifest.wall_clock_seconds = timer.seconds();
            manifest.created_utc = current_utc_timestamp();
            manifest.write(gen_out + ".manifest");

            std::cout << "states " << chain.n_states() << "\n";
            std::cout << "chain_file " << gen_out << "\n";
            return 0;
        }

        if (*cmd_bench) {
            BenchmarkOptions options;
            options.grid.n = bench_n;
            options.grid.horizon = bench_horizon;
            options.grid.episodes_train = bench_train;
            options.grid.episodes_test = bench_test;
            options.k_grid = bench_k_grid;
            options.seeds = bench_seeds;
            options.root_seed = bench_seed;
            options.solver_rho = bench_solver_rho;
            options.solver_epsilon = bench_solver_epsilon;
            options.greedy_rho = bench_greedy_rho;

            std::vector<int> actions = bench_policy == "right-up"
                                           ? policy_right_then_up(options.grid)
                                           : policy_middle_then_right(options.grid);
            BenchmarkResult result = run_benchmark(options, actions);

            std::ofstream cells(bench_out);
            if (!cells) throw DomainError("cannot write output: " + bench_out);
            cells << "algorithm,k,seed,coverage\n";
            for (const BenchmarkCell& cell : result.cells)
                cells << cell.algorithm << ',' << cell.k << ',' << cell.seed_index << ','
                      << format_double(cell.coverage) << "\n";

            std::string agg_path = agg_path_for(bench_out);
            std::ofstream agg(agg_path);
            if (!agg) throw DomainError("cannot write output: " + agg_path);
            agg << "algorithm,k,mean_coverage,stderr_coverage,delta_vs_greedy\n";
            for (const CoverageCurve& curve : result.curves)
                for (const CurvePoint& point : curve.points)
                    agg << curve.algorithm << ',' << point.k << ','
                        << format_double(point.mean_coverage) << ','
                        << format_double(point.stderr_coverage) << ','
                        << format_double(point.delta_vs_greedy) << "\n";

            RunManifest manifest;
            manifest.command_line = join_command(args);
            manifest.version = kVersionString;
            manifest.seed = bench_seed;
            manifest.config.emplace_back("policy", bench_policy);
            manifest.config.emplace_back("n", std::to_string(bench_n));
            manifest.config.emplace_back("horizon", std::to_string(bench_horizon));
            manifest.config.emplace_back("seeds", std::to_string(bench_seeds));
            manifest.outputs.push_back(bench_out);
            manifest.outputs.push_back(agg_path);
            manifest.wall_clock_seconds = timer.seconds();
            manifest.created_utc = current_utc_timestamp();
            manifest.write(bench_out + ".manifest");

            std::cout << "cells " << result.cells.size() << "\n";
            std::cout << "curves_file " << bench_out << "\n";
            std::cout << "aggregate_file " << agg_path << "\n";
            return 0;
        }

        std::cerr << "error: usage: no subcommand selected\n";
        return 1;
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersionString << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        std::cerr << app.help();
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: domain: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceededError& e) {
        std::cerr << "error: domain: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: domain: " << e.what() << "\n";
        return 2;
    }
}

} // namespace safezone::cli
