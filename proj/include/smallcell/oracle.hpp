// Ground truth for desk-size instances: the master solved once over the
// complete enumeration of independent sets, plus the cross-check suite that
// compares column generation against it on seeded tiny scenarios.
#pragma once

#include <cstdint>
#include <string>

#include "smallcell/colgen.hpp"

namespace smallcell {

struct OracleResult {
    double optimum = 0.0;
    RmpSolution solution;
    std::size_t pool_size = 0;
};

// Solves the LP over every maximal independent set (any schedule using a
// non-maximal set is weakly improved by a maximal superset; set maximal_only
// to false to verify that on very small instances). Refuses above the guard.
OracleResult solve_full_lp(const Scenario& scenario, const RmpMode& mode = {},
                           int max_tuples_guard = 20, bool maximal_only = true);

// Deterministic tiny instance (at most 3 SBS, 4 users, 2 secondary channels,
// 4 files, 15 tuples) with demand scaled into an interesting load range.
Scenario make_tiny_scenario(std::uint64_t seed);

struct OracleCheckOptions {
    int count = 20;
    double epsilon = 0.03;
    std::uint64_t base_seed = 90210;
};

struct OracleCheckReport {
    int scenarios = 0;
    int failures = 0;
    std::string log;
    bool pass() const { return scenarios > 0 && failures == 0; }
};

// For each seeded tiny scenario: the oracle optimum must sit inside the
// column-generation bounds, the epsilon run must be within 1+epsilon of it,
// and the epsilon = 0 run must match it to 1e-6.
OracleCheckReport run_oracle_check(const OracleCheckOptions& options);

}  // namespace smallcell
