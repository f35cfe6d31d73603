#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "safezone/errors.hpp"
#include "safezone/exact.hpp"
#include "test_support.hpp"

using namespace safezone;
using namespace safezone::testing;

TEST_CASE("nothing escapes the full state set") {
    MarkovChain chain = random_chain(1, 5, 4);
    CHECK(exact_escape_probability(chain, StateSet::full(5)).value == 0.0);
}

TEST_CASE("an absorbing start never escapes its own zone") {
    MarkovChain chain = absorbing_start_chain();
    CHECK(exact_escape_probability(chain, StateSet::of(3, {0})).value == 0.0);
}

TEST_CASE("single-step escape equals the leaving probability") {
    for (double p : {0.1, 0.25, 0.5, 0.9}) {
        MarkovChain chain = two_state_chain(p);
        CHECK(exact_escape_probability(chain, StateSet::of(2, {0})).value ==
              doctest::Approx(p).epsilon(1e-15));
    }
}

TEST_CASE("a zone missing the start state escapes with probability 1") {
    MarkovChain chain = two_state_chain(0.5);
    CHECK(exact_escape_probability(chain, StateSet::of(2, {1})).value == 1.0);
}

TEST_CASE("sink DP matches exhaustive path enumeration") {
    RngStream seeds(2024);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + seeds.next_below(5);
        int horizon = 1 + seeds.next_below(5);
        MarkovChain chain = random_chain(seeds.next_u64(), n, horizon);
        StateSet zone(n);
        zone.insert(chain.start_state());
        for (int s = 0; s < n; ++s)
            if (seeds.bernoulli(0.5)) zone.insert(s);
        double expected = enumerate_escape_probability(chain, zone);
        double actual = exact_escape_probability(chain, zone).value;
        CHECK(std::abs(expected - actual) <= 1e-12);
    }
}

TEST_CASE("escape probability is antitone under zone inclusion") {
    RngStream seeds(77);
    for (int trial = 0; trial < 20; ++trial) {
        MarkovChain chain = random_chain(seeds.next_u64(), 7, 5);
        StateSet smaller(7), larger(7);
        smaller.insert(chain.start_state());
        larger.insert(chain.start_state());
        for (int s = 0; s < 7; ++s) {
            bool in_small = seeds.bernoulli(0.4);
            if (in_small) smaller.insert(s);
            if (in_small || seeds.bernoulli(0.4)) larger.insert(s);
        }
        REQUIRE(smaller.is_subset_of(larger));
        CHECK(exact_delta(chain, smaller) >= exact_delta(chain, larger) - 1e-15);
    }
}

TEST_CASE("visit probability of the start state is 1") {
    MarkovChain chain = random_chain(5, 6, 4);
    std::vector<double> probs = visit_probabilities(chain);
    CHECK(probs[static_cast<size_t>(chain.start_state())] == 1.0);
}

TEST_CASE("visit probabilities of a deterministic path are an indicator") {
    MarkovChain chain = deterministic_path_chain(4);
    std::vector<double> probs = visit_probabilities(chain);
    for (int s = 0; s <= 4; ++s) CHECK(probs[static_cast<size_t>(s)] == doctest::Approx(1.0));
}

TEST_CASE("two-state visit probability equals the step probability") {
    MarkovChain chain = two_state_chain(0.37);
    std::vector<double> probs = visit_probabilities(chain);
    CHECK(probs[1] == doctest::Approx(0.37).epsilon(1e-15));
}

TEST_CASE("visit probabilities match enumeration and stay within the mass bounds") {
    RngStream seeds(31);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + seeds.next_below(4);
        int horizon = 1 + seeds.next_below(4);
        MarkovChain chain = random_chain(seeds.next_u64(), n, horizon);
        std::vector<double> probs = visit_probabilities(chain);
        double total = 0.0;
        for (int s = 0; s < n; ++s) {
            CHECK(std::abs(probs[static_cast<size_t>(s)] -
                           enumerate_visit_probability(chain, s)) <= 1e-12);
            total += probs[static_cast<size_t>(s)];
        }
        CHECK(total >= 1.0 - 1e-12);
        CHECK(total <= static_cast<double>(horizon) + 1.0 + 1e-12);
    }
}

TEST_CASE("layered fast path agrees with the complement-escape route") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        MarkovChain layered = random_layered_chain(seed, 3, 4);
        // Same chain with the labels stripped runs the generic route.
        std::vector<std::vector<Transition>> rows;
        for (int s = 0; s < layered.n_states(); ++s) rows.push_back(layered.row(s));
        MarkovChain generic(layered.n_states(), layered.start_state(), layered.horizon(),
                            std::move(rows));
        std::vector<double> fast = visit_probabilities(layered);
        std::vector<double> slow = visit_probabilities(generic);
        for (size_t s = 0; s < fast.size(); ++s) CHECK(std::abs(fast[s] - slow[s]) <= 1e-12);
    }
}

TEST_CASE("hoeffding sample size rounds up") {
    CHECK(hoeffding_sample_size(0.1, 0.05) == 185); // ln(40)/0.02 = 184.44
    CHECK(hoeffding_sample_size(0.05, 0.1) == 600); // ln(20)/0.005 = 599.15
    CHECK_THROWS_AS(hoeffding_sample_size(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(hoeffding_sample_size(0.1, 1.0), DomainError);
}

TEST_CASE("monte carlo hits the trivial zones exactly") {
    MarkovChain chain = random_chain(11, 4, 3);
    RngStream rng(1);
    CHECK(monte_carlo_escape(chain, StateSet::full(4), 0.1, 0.1, rng).value == 0.0);
    StateSet without_start(4);
    without_start.insert((chain.start_state() + 1) % 4);
    CHECK(monte_carlo_escape(chain, without_start, 0.1, 0.1, rng).value == 1.0);
}

TEST_CASE("monte carlo reports its sample count and parameters") {
    MarkovChain chain = two_state_chain(0.3);
    RngStream rng(7);
    SafetyReport report = monte_carlo_escape(chain, StateSet::of(2, {0}), 0.05, 0.1, rng);
    CHECK(report.method == SafetyMethod::monte_carlo);
    CHECK(report.samples_used == 600);
    CHECK(*report.epsilon == 0.05);
    CHECK(*report.lambda == 0.1);
    CHECK(report.value >= 0.0);
    CHECK(report.value <= 1.0);
}

TEST_CASE("monte carlo calibration beats its failure budget") {
    // Delta is exactly 0.3; epsilon 0.05 at lambda 0.1 should miss rarely.
    MarkovChain chain = two_state_chain(0.3);
    StateSet zone = StateSet::of(2, {0});
    RngStream rng(99);
    int failures = 0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
        SafetyReport report = monte_carlo_escape(chain, zone, 0.05, 0.1, rng);
        if (std::abs(report.value - 0.3) > 0.05) ++failures;
    }
    CHECK(failures <= trials / 10);
}
