#include <doctest.h>

#include <cmath>

#include "smallcell/oracle.hpp"
#include "test_support.hpp"

using namespace smallcell;

TEST_CASE("oracle closed forms") {
    Scenario s = testing::single_link_scenario(0.5);
    CHECK(solve_full_lp(s).optimum == doctest::Approx(0.5));

    s.requests.alpha = {0.0};
    CHECK(solve_full_lp(s).optimum == doctest::Approx(0.0));
}

TEST_CASE("oracle refuses beyond the enumeration guard") {
    Scenario s = testing::figure3_scenario();
    CHECK_THROWS_AS(solve_full_lp(s, RmpMode{}, 3), std::invalid_argument);
}

TEST_CASE("maximal-only enumeration matches the full enumeration") {
    for (std::uint64_t seed = 9100; seed < 9103; ++seed) {
        Scenario s = testing::random_tiny_scenario(seed, 9);
        double maximal = solve_full_lp(s, RmpMode{}, 10, true).optimum;
        double everything = solve_full_lp(s, RmpMode{}, 10, false).optimum;
        CHECK(maximal == doctest::Approx(everything).epsilon(1e-9));
    }
}

TEST_CASE("oracle optimum never exceeds a restricted master's") {
    for (std::uint64_t seed = 9200; seed < 9204; ++seed) {
        Scenario s = testing::random_tiny_scenario(seed, 12);
        std::vector<CommTuple> tuples = enumerate_tuples(s);
        std::vector<IndependentSet> singletons;
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            IndependentSet col(tuples.size(), 0);
            col[t] = 1;
            singletons.push_back(std::move(col));
        }
        double restricted = solve_rmp(s, tuples, singletons, RmpMode{}).objective;
        CHECK(solve_full_lp(s, RmpMode{}, 12).optimum <= restricted + 1e-9);
    }
}

TEST_CASE("throughput oracle is infeasible exactly when demand is unsupportable") {
    RmpMode throughput;
    throughput.objective = RmpObjective::MaxThroughput;
    Scenario light = testing::single_link_scenario(0.5);
    std::vector<CommTuple> tuples = enumerate_tuples(light);
    CHECK(solve_full_lp(light, throughput).optimum == doctest::Approx(tuples[0].capacity_per_slot(light)));
    Scenario heavy = testing::single_link_scenario(1.5);
    CHECK_THROWS_AS(solve_full_lp(heavy, throughput), RmpInfeasible);
}

TEST_CASE("tiny scenario maker respects its envelope") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Scenario s = make_tiny_scenario(seed);
        CHECK(s.sbs.size() <= 3);
        CHECK(s.users.size() <= 4);
        CHECK(s.catalog.file_count() <= 4);
        CHECK(s.channels.size() <= 3);  // primary + at most 2 secondary
        std::size_t q = enumerate_tuples(s).size();
        CHECK(q >= 1);
        CHECK(q <= 15);
        CHECK(s.requests.total_demand_bits(s.catalog) > 0.0);
        // Deterministic.
        CHECK(make_tiny_scenario(seed).dump_text() == s.dump_text());
    }
}

TEST_CASE("oracle cross-check suite passes on a short run") {
    OracleCheckOptions options;
    options.count = 5;
    OracleCheckReport report = run_oracle_check(options);
    CHECK(report.scenarios == 5);
    CHECK(report.failures == 0);
    CHECK(report.pass());
}
