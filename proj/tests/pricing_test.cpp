#include <doctest.h>

#include <cmath>
#include <random>

#include "smallcell/pricing.hpp"
#include "test_support.hpp"

using namespace smallcell;
using testing::u01;

namespace {

struct Instance {
    Scenario scenario;
    std::vector<CommTuple> tuples;
    ConflictGraph graph;

    explicit Instance(Scenario s) : scenario(std::move(s)) {
        tuples = enumerate_tuples(scenario);
        graph = build_conflict_graph(scenario, tuples);
    }
};

std::vector<double> random_prices(std::mt19937_64& rng, const Scenario& s,
                                  const std::vector<CommTuple>& tuples) {
    std::vector<double> prices(tuples.size(), 0.0);
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        if (u01(rng) < 0.3) continue;  // keep some zero weights
        prices[t] = 2.0 * u01(rng) / tuples[t].capacity_per_slot(s);
    }
    return prices;
}

// Exhaustive max-weight independent set over every subset, with the same
// canonical index-order summation the pricer reports.
double brute_force_beta(const Instance& in, const std::vector<double>& prices) {
    const std::size_t n = in.tuples.size();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        IndependentSet candidate(n, 0);
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (1ULL << v)) candidate[v] = 1;
        if (!is_independent(candidate, in.scenario, in.tuples)) continue;
        double beta = column_beta(in.scenario, in.tuples, prices, candidate);
        if (beta > best) best = beta;
    }
    return best;
}

}  // namespace

TEST_CASE("reduced cost basics") {
    Instance in(testing::figure3_scenario());
    std::vector<double> zero(in.tuples.size(), 0.0);
    IndependentSet column(in.tuples.size(), 0);
    column[0] = column[4] = 1;
    CHECK(reduced_cost(in.scenario, in.tuples, zero, column) == doctest::Approx(1.0));

    // A singleton column priced exactly at 1/capacity has zero reduced cost.
    std::vector<double> prices = zero;
    prices[2] = 1.0 / in.tuples[2].capacity_per_slot(in.scenario);
    IndependentSet single(in.tuples.size(), 0);
    single[2] = 1;
    CHECK(reduced_cost(in.scenario, in.tuples, prices, single) == doctest::Approx(0.0));

    CHECK_THROWS_AS(reduced_cost(in.scenario, in.tuples, {1.0}, column), std::invalid_argument);
    std::vector<double> negative(in.tuples.size(), -1.0);
    CHECK_THROWS_AS(reduced_cost(in.scenario, in.tuples, negative, column), std::invalid_argument);
}

TEST_CASE("reduced cost matches an independent dot-product recomputation") {
    std::mt19937_64 rng(8);
    Instance in(testing::random_tiny_scenario(8, 10));
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> prices = random_prices(rng, in.scenario, in.tuples);
        IndependentSet column(in.tuples.size(), 0);
        for (std::size_t t = 0; t < column.size(); ++t) column[t] = rng() & 1;
        double dot = 0.0;
        for (std::size_t t = 0; t < column.size(); ++t)
            if (column[t]) dot += prices[t] * in.tuples[t].capacity_bps * in.scenario.slot_seconds;
        CHECK(reduced_cost(in.scenario, in.tuples, prices, column) == doctest::Approx(1.0 - dot));
    }
}

TEST_CASE("exact pricing: degenerate cases") {
    Instance in(testing::figure3_scenario());
    std::vector<double> zero(in.tuples.size(), 0.0);
    PricingResult r = solve_pricing_exact(in.scenario, in.tuples, in.graph, zero);
    CHECK(r.beta == doctest::Approx(0.0));
    CHECK(r.reduced_cost == doctest::Approx(1.0));
    for (std::uint8_t v : r.column) CHECK(v == 0);  // the termination signal

    std::vector<double> one_heavy = zero;
    one_heavy[3] = 5.0 / in.tuples[3].capacity_per_slot(in.scenario);
    r = solve_pricing_exact(in.scenario, in.tuples, in.graph, one_heavy);
    CHECK(r.beta == doctest::Approx(5.0));
    CHECK(r.column[3] == 1);
    int members = 0;
    for (std::uint8_t v : r.column) members += v;
    CHECK(members == 1);  // zero-weight tuples are never branched in
}

TEST_CASE("exact pricing equals brute force over all subsets") {
    std::mt19937_64 rng(555);
    int cases = 0;
    for (std::uint64_t seed = 700; cases < 50; ++seed) {
        Instance in(testing::random_tiny_scenario(seed, 13, (seed % 3 == 0) ? 2 : 1));
        std::vector<double> prices = random_prices(rng, in.scenario, in.tuples);
        PricingResult r = solve_pricing_exact(in.scenario, in.tuples, in.graph, prices);
        CHECK(is_independent(r.column, in.scenario, in.tuples));
        CHECK(r.reduced_cost == 1.0 - r.beta);
        CHECK((r.reduced_cost < 0.0) == (r.beta > 1.0));
        double brute = brute_force_beta(in, prices);
        CHECK(r.beta == brute);  // canonical summation makes this exact
        ++cases;
    }
}

TEST_CASE("exact pricing tie-break is lexicographic and flippable") {
    Instance in(testing::two_far_links_scenario(0.5));
    REQUIRE(in.tuples.size() == 2);
    // Both singleton columns have equal weight but the pair conflicts only
    // through nothing: they are jointly independent, so the max takes both.
    std::vector<double> prices(2);
    prices[0] = 1.0 / in.tuples[0].capacity_per_slot(in.scenario);
    prices[1] = 1.0 / in.tuples[1].capacity_per_slot(in.scenario);
    PricingResult low = solve_pricing_exact(in.scenario, in.tuples, in.graph, prices);
    CHECK(low.beta == doctest::Approx(2.0));
    CHECK(low.column == IndependentSet{1, 1});

    // A genuinely tied pair: figure-3 tuples 1 and 3 serve the same user from
    // equidistant transmitters (bit-identical capacities) on one channel, so
    // exactly one of two equal-weight singletons can win.
    Instance fig(testing::figure3_scenario());
    REQUIRE(fig.tuples[1].capacity_bps == fig.tuples[3].capacity_bps);
    std::vector<double> equal(fig.tuples.size(), 0.0);
    equal[1] = 1.0 / fig.tuples[1].capacity_per_slot(fig.scenario);
    equal[3] = equal[1];
    PricingResult a = solve_pricing_exact(fig.scenario, fig.tuples, fig.graph, equal,
                                          PricingTieBreak::PreferLowIndex);
    PricingResult b = solve_pricing_exact(fig.scenario, fig.tuples, fig.graph, equal,
                                          PricingTieBreak::PreferHighIndex);
    CHECK(a.beta == doctest::Approx(1.0));
    CHECK(b.beta == doctest::Approx(1.0));
    CHECK(a.beta == b.beta);
    CHECK(a.column != b.column);  // the tie resolves to opposite ends
    CHECK(std::lexicographical_compare(a.column.begin(), a.column.end(),
                                       b.column.begin(), b.column.end()));
}

TEST_CASE("sequential fixing: degenerate and integral cases") {
    Instance in(testing::figure3_scenario());
    std::vector<double> zero(in.tuples.size(), 0.0);
    PricingResult r = solve_pricing_sequential_fixing(in.scenario, in.tuples, zero);
    CHECK(r.beta == doctest::Approx(0.0));
    for (std::uint8_t v : r.column) CHECK(v == 0);

    // Conflict-free instance with ample antennas: the relaxation is integral
    // and selects every positive-weight tuple, matching the exact solver.
    Instance free(testing::two_far_links_scenario(0.5));
    std::vector<double> prices(free.tuples.size());
    for (std::size_t t = 0; t < prices.size(); ++t)
        prices[t] = 1.5 / free.tuples[t].capacity_per_slot(free.scenario);
    PricingResult sf = solve_pricing_sequential_fixing(free.scenario, free.tuples, prices);
    PricingResult exact = solve_pricing_exact(free.scenario, free.tuples, free.graph, prices);
    CHECK(sf.column == exact.column);
    CHECK(sf.beta == doctest::Approx(exact.beta));
}

TEST_CASE("sequential fixing never beats exact and stays feasible") {
    std::mt19937_64 rng(777);
    int cases = 0;
    double ratio_sum = 0.0;
    int ratio_count = 0;
    for (std::uint64_t seed = 900; cases < 50; ++seed) {
        Instance in(testing::random_tiny_scenario(seed, 12, (seed % 4 == 0) ? 2 : 1));
        SequentialFixingPricer pricer(in.scenario, in.tuples);
        std::vector<double> prices = random_prices(rng, in.scenario, in.tuples);
        PricingResult sf = pricer.solve(prices);
        PricingResult exact = solve_pricing_exact(in.scenario, in.tuples, in.graph, prices);
        CHECK(is_independent(sf.column, in.scenario, in.tuples));
        CHECK(sf.beta <= exact.beta + 1e-9);
        if (exact.beta > 1e-12) {
            ratio_sum += sf.beta / exact.beta;
            ++ratio_count;
        }
        ++cases;
    }
    REQUIRE(ratio_count > 0);
    double mean_ratio = ratio_sum / ratio_count;
    MESSAGE("sequential fixing mean beta ratio vs exact: ", mean_ratio);
    CHECK(mean_ratio > 0.8);  // heuristic quality floor on tiny instances
}
