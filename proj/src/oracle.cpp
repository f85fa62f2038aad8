#include "smallcell/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace smallcell {

OracleResult solve_full_lp(const Scenario& scenario, const RmpMode& mode,
                           int max_tuples_guard, bool maximal_only) {
    std::vector<CommTuple> tuples = enumerate_tuples(scenario);
    if (static_cast<int>(tuples.size()) > max_tuples_guard)
        throw std::invalid_argument("oracle refuses: tuple count exceeds the enumeration guard");
    if (tuples.empty()) {
        if (scenario.requests.total_demand_bits(scenario.catalog) > 0.0)
            throw RmpInfeasible("coverage: no communication tuples exist");
        OracleResult empty;
        return empty;
    }
    std::vector<IndependentSet> pool =
        maximal_only ? enumerate_independent_sets(scenario, tuples, max_tuples_guard)
                     : enumerate_all_independent_sets(scenario, tuples, max_tuples_guard);
    // Drop the empty set if present; it cannot carry traffic.
    pool.erase(std::remove_if(pool.begin(), pool.end(),
                              [](const IndependentSet& s) {
                                  return std::all_of(s.begin(), s.end(), [](std::uint8_t v) { return v == 0; });
                              }),
               pool.end());
    if (pool.empty()) throw std::logic_error("no nonempty independent set exists");
    OracleResult result;
    result.pool_size = pool.size();
    result.solution = solve_rmp(scenario, tuples, pool, mode);
    result.optimum = result.solution.objective;
    return result;
}

Scenario make_tiny_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    auto pick = [&rng](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };

    for (int attempt = 0; attempt < 64; ++attempt) {
        ScenarioConfig config;
        config.n_sbs = pick(1, 3);
        config.n_users = pick(1, 4);
        config.n_files = pick(1, 4);
        config.n_secondary_channels = pick(1, 2);
        config.channels_per_sbs = pick(1, config.n_secondary_channels);
        config.channels_per_user = pick(1, config.n_secondary_channels);
        config.radius_m = 150.0 + 25.0 * pick(0, 8);
        config.tx_range_m = 60.0 + 20.0 * pick(0, 6);
        config.avg_file_bytes = 1e6;
        config.cache_bytes = {config.avg_file_bytes * pick(0, 3)};
        config.zipf_zeta = 0.4 * pick(0, 3);
        config.requests_per_user = pick(1, 2);
        config.antennas_sbs = pick(1, 2);
        config.antennas_user = 1;
        config.secondary_bw_hz = 400e3;
        std::uint64_t scenario_seed = seed + 1000003ULL * static_cast<std::uint64_t>(attempt);
        Scenario s = generate_scenario(config, scenario_seed);
        std::vector<CommTuple> tuples = enumerate_tuples(s);
        if (tuples.empty() || tuples.size() > 15) continue;

        // Rescale demand toward a target load; the LP is homogeneous in the
        // request rates, so this just moves the optimum into range.
        static const double targets[] = {0.4, 0.8, 0.95, 1.05, 1.6};
        double target = targets[seed % 5];
        std::vector<IndependentSet> singletons;
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            IndependentSet col(tuples.size(), 0);
            col[t] = 1;
            singletons.push_back(std::move(col));
        }
        double rough = solve_rmp(s, tuples, singletons, RmpMode{}).objective;
        if (rough <= 0.0) continue;
        double scale = target / rough;
        for (double& a : s.requests.alpha) a *= scale;
        return s;
    }
    throw std::runtime_error("could not build a tiny scenario within the tuple guard");
}

OracleCheckReport run_oracle_check(const OracleCheckOptions& options) {
    OracleCheckReport report;
    char buf[256];
    for (int i = 0; i < options.count; ++i) {
        Scenario s = make_tiny_scenario(options.base_seed + static_cast<std::uint64_t>(i));
        double optimum = solve_full_lp(s).optimum;

        CgOptions cg;
        cg.epsilon = options.epsilon;
        cg.pricer = PricerKind::Exact;
        cg.auto_exact_rerun = false;
        CgResult bounded = run_column_generation(s, cg);

        cg.epsilon = 0.0;
        CgResult exact = run_column_generation(s, cg);

        bool sandwich = bounded.delta_l - 1e-6 <= optimum && optimum <= bounded.delta_u + 1e-6;
        bool ratio_ok = optimum <= 0.0 || bounded.delta_u / optimum <= 1.0 + options.epsilon + 1e-6;
        bool exact_ok = std::fabs(exact.delta_u - optimum) <= 1e-6;
        bool ok = sandwich && ratio_ok && exact_ok;
        ++report.scenarios;
        if (!ok) ++report.failures;
        std::snprintf(buf, sizeof(buf),
                      "seed=%llu optimum=%.8f bounds=[%.8f, %.8f] exact=%.8f iters=%d %s\n",
                      static_cast<unsigned long long>(options.base_seed + static_cast<std::uint64_t>(i)),
                      optimum, bounded.delta_l, bounded.delta_u, exact.delta_u, bounded.iterations,
                      ok ? "ok" : "FAIL");
        report.log += buf;
    }
    return report;
}

}  // namespace smallcell
