#include <doctest.h>

#include <cmath>
#include <sstream>

#include "smallcell/oracle.hpp"
#include "smallcell/sweep.hpp"
#include "test_support.hpp"

using namespace smallcell;

namespace {

// A sweep profile small enough for unit tests.
const char* kTinySweep =
    "radius_m = 250\n"
    "n_sbs = 2\n"
    "n_users = 3\n"
    "n_files = 3\n"
    "cache_bytes = 2e6\n"
    "avg_file_bytes = 1e6\n"
    "n_secondary_channels = 2\n"
    "channels_per_sbs = 2\n"
    "channels_per_user = 2\n"
    "tx_range_m = 120\n"
    "epsilon = 0.03\n"
    "seed = 9\n"
    "pricer = exact\n"
    "sweep_axis = cache_size\n"
    "axis_values = 1e6, 4e6\n"
    "seeds_per_point = 2\n";

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::string drop_runtime_column(const std::string& line) {
    std::size_t comma = line.rfind(',');
    return line.substr(0, comma);
}

}  // namespace

TEST_CASE("average user rate formula") {
    Scenario s = testing::single_link_scenario(0.5);
    s.users.push_back(s.users[0]);  // K = 2
    s.requests.n_users = 2;
    s.requests.alpha = {1.0, 0.0};
    s.catalog.size_bits = {10e6};
    CHECK(avg_user_rate_mbps(s, 0.5) == doctest::Approx(10.0));  // 10 Mb over 2 users, half a slot
    CHECK(avg_user_rate_mbps(s, 1.0) == doctest::Approx(5.0));   // fully loaded: demand / K
    s.requests.alpha = {0.0, 0.0};
    CHECK(avg_user_rate_mbps(s, 0.7) == doctest::Approx(0.0));
    s.requests.alpha = {1.0, 0.0};
    CHECK_THROWS_AS(avg_user_rate_mbps(s, 0.0), std::logic_error);
}

TEST_CASE("doubling demand doubles the schedule and leaves the rate unchanged") {
    Scenario s = make_tiny_scenario(4242);
    double base = solve_full_lp(s).optimum;
    double base_rate = avg_user_rate_mbps(s, base);
    for (double& a : s.requests.alpha) a *= 2.0;
    double doubled = solve_full_lp(s).optimum;
    CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-9));
    CHECK(avg_user_rate_mbps(s, doubled) == doctest::Approx(base_rate).epsilon(1e-9));
}

TEST_CASE("config defaults encode the reference parameter table") {
    SolveSpec spec = parse_solve_spec("");
    CHECK(spec.scenario.n_sbs == 14);
    CHECK(spec.scenario.n_users == 200);
    CHECK(spec.scenario.n_files == 200);
    CHECK(spec.scenario.cache_bytes == std::vector<double>{4e9});
    CHECK(spec.scenario.zipf_zeta == doctest::Approx(0.8));
    CHECK(spec.scenario.n_secondary_channels == 10);
    CHECK(spec.scenario.secondary_bw_hz == doctest::Approx(400e3));
    CHECK(spec.scenario.primary_bw_hz == doctest::Approx(1e6));
    CHECK(spec.scenario.channels_per_sbs == 5);
    CHECK(spec.scenario.channels_per_user == 5);
    CHECK(spec.scenario.avg_file_bytes == doctest::Approx(400e6));
    CHECK(spec.scenario.tx_range_m == doctest::Approx(100.0));
    CHECK(spec.scenario.ir_factor == doctest::Approx(2.0));
    CHECK(spec.epsilon == doctest::Approx(0.03));
}

TEST_CASE("config parsing round-trips and rejects junk") {
    SolveSpec spec = parse_solve_spec(kTinySweep);
    CHECK(spec.scenario.n_users == 3);
    CHECK(spec.scenario.cache_bytes == std::vector<double>{2e6});
    SolveSpec again = parse_solve_spec(format_solve_spec(spec));
    CHECK(format_solve_spec(again) == format_solve_spec(spec));

    CHECK_THROWS_AS(parse_solve_spec("bogus_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_solve_spec("radius_m + 400\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_solve_spec("objective = fastest\n"), std::invalid_argument);

    SweepSpec sweep = parse_sweep_spec(kTinySweep);
    CHECK(sweep.axis == SweepAxis::CacheSize);
    CHECK(sweep.axis_values.size() == 2);
    CHECK(sweep.seeds_per_point == 2);
    CHECK_THROWS_AS(parse_sweep_spec("n_users = 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec("sweep_axis = n_users\naxis_values = 3, 2\n"), std::invalid_argument);
}

TEST_CASE("axis application") {
    ScenarioConfig base;
    CHECK(apply_axis(base, SweepAxis::CacheSize, 8e9).cache_bytes == std::vector<double>{8e9});
    CHECK(apply_axis(base, SweepAxis::NFiles, 40).n_files == 40);
    CHECK(apply_axis(base, SweepAxis::NUsers, 10).n_users == 10);
    CHECK(apply_axis(base, SweepAxis::NSbs, 6).n_sbs == 6);
    CHECK(apply_axis(base, SweepAxis::TxRange, 80).tx_range_m == doctest::Approx(80.0));
}

TEST_CASE("sweep emits one row per point with nonnegative gain") {
    SweepSpec spec = parse_sweep_spec(kTinySweep);
    std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 4);  // 2 axis values x 2 seeds
    for (const SweepRow& row : rows) {
        CHECK(row.status == "ok");
        CHECK(row.gain_pct >= -1e-9);
        CHECK(row.cg_rate_mbps >= row.baseline_rate_mbps - 1e-9);
        CHECK(row.pool_size > 0);
    }
    std::string csv = sweep_csv(rows);
    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] ==
          "axis,axis_value,seed,status,delta_u,delta_l,verdict,cg_rate_mbps,baseline_rate_mbps,"
          "gain_pct,iterations,pool_size,runtime_ms");
}

TEST_CASE("sweep output is deterministic apart from runtime") {
    SweepSpec spec = parse_sweep_spec(kTinySweep);
    std::vector<std::string> a = split_lines(sweep_csv(run_sweep(spec)));
    std::vector<std::string> b = split_lines(sweep_csv(run_sweep(spec)));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(drop_runtime_column(a[i]) == drop_runtime_column(b[i]));
}

TEST_CASE("sweeps reject the throughput objective") {
    SweepSpec spec = parse_sweep_spec(kTinySweep);
    spec.base.objective = RmpObjective::MaxThroughput;
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}
