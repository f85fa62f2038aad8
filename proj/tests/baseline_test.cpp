#include <doctest.h>

#include "smallcell/baseline.hpp"
#include "smallcell/colgen.hpp"
#include "smallcell/oracle.hpp"
#include "test_support.hpp"

using namespace smallcell;

TEST_CASE("unlimited capacity caches every file, zero capacity caches none") {
    Scenario s = testing::random_tiny_scenario(5, 14);
    double total = 0.0;
    for (double bits : s.catalog.size_bits) total += bits;
    for (Node& n : s.sbs) n.cache_bits = total + 1.0;
    std::vector<CommTuple> tuples = enumerate_tuples(s);
    auto cache = femtocache_assign(s, tuples);
    for (const auto& row : cache)
        for (std::uint8_t c : row) CHECK(c == 1);

    for (Node& n : s.sbs) n.cache_bits = 0.0;
    cache = femtocache_assign(s, tuples);
    for (const auto& row : cache)
        for (std::uint8_t c : row) CHECK(c == 0);
}

TEST_CASE("greedy prefers the file with more local demand") {
    // Two equal-sized files, capacity for exactly one; file 1 is demanded
    // twice as much, so both caching choices enumerate to: cache file 1.
    Scenario s = testing::single_link_scenario(0.25);
    s.catalog.size_bits = {s.catalog.size_bits[0], s.catalog.size_bits[0]};
    s.catalog.popularity = {0.5, 0.5};
    s.requests.n_files = 2;
    s.requests.alpha = {1.0, 2.0};
    s.sbs[0].cache_bits = s.catalog.size_bits[0] * 1.5;  // room for one file
    std::vector<CommTuple> tuples = enumerate_tuples(s);
    auto cache = femtocache_assign(s, tuples);
    CHECK(cache[0][0] == 0);
    CHECK(cache[0][1] == 1);

    // With equal demand the tie breaks to the lower file id.
    s.requests.alpha = {1.0, 1.0};
    cache = femtocache_assign(s, tuples);
    CHECK(cache[0][0] == 1);
    CHECK(cache[0][1] == 0);
}

TEST_CASE("caching never exceeds capacity and is integral") {
    for (std::uint64_t seed = 40; seed < 48; ++seed) {
        Scenario s = testing::random_tiny_scenario(seed, 15);
        std::vector<CommTuple> tuples = enumerate_tuples(s);
        auto cache = femtocache_assign(s, tuples);
        for (std::size_t n = 0; n < s.sbs.size(); ++n) {
            double used = 0.0;
            for (int j = 0; j < s.catalog.file_count(); ++j)
                if (cache[n][static_cast<std::size_t>(j)]) used += s.catalog.size_bits[static_cast<std::size_t>(j)];
            CHECK(used <= s.sbs[n].cache_bits + 1e-9);
        }
    }
}

TEST_CASE("single served link: baseline equals column generation") {
    Scenario s = testing::single_link_scenario(0.5);
    std::vector<CommTuple> tuples = enumerate_tuples(s);
    BaselineResult b = baseline_schedule(s, tuples, femtocache_assign(s, tuples));
    CHECK(b.schedule_length == doctest::Approx(0.5));
    CHECK(b.served_bits[0] == doctest::Approx(s.catalog.size_bits[0]));
    CgResult cg = run_column_generation(s, CgOptions{});
    CHECK(b.schedule_length == doctest::Approx(cg.delta_u));
}

TEST_CASE("no spatial reuse doubles the schedule on two far links") {
    Scenario s = testing::two_far_links_scenario(0.5);
    std::vector<CommTuple> tuples = enumerate_tuples(s);
    auto cache = femtocache_assign(s, tuples);
    CHECK(cache[0][0] == 1);
    CHECK(cache[1][0] == 1);
    BaselineResult b = baseline_schedule(s, tuples, cache);
    CHECK(b.schedule_length == doctest::Approx(1.0));  // 2d/c, links serialized

    CgOptions options;
    options.epsilon = 0.0;
    CgResult cg = run_column_generation(s, options);
    CHECK(cg.delta_u == doctest::Approx(0.5));  // d/c with the channel reused
}

TEST_CASE("baseline never beats column generation") {
    for (std::uint64_t seed = 6000; seed < 6010; ++seed) {
        Scenario s = make_tiny_scenario(seed);
        std::vector<CommTuple> tuples = enumerate_tuples(s);
        BaselineResult b = baseline_schedule(s, tuples, femtocache_assign(s, tuples));
        CgOptions options;
        options.epsilon = 0.03;
        options.auto_exact_rerun = false;
        CgResult cg = run_column_generation(s, options);
        CHECK(cg.delta_u <= b.schedule_length + 1e-7);
    }
}
