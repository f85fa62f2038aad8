// Column generation driver: the epsilon-bounded loop over master and pricing,
// upper/lower bound tracking, the three-way feasibility verdict, and the
// fixed-cache re-solve.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smallcell/master.hpp"
#include "smallcell/pricing.hpp"

namespace smallcell {

enum class Verdict { Supported, Unsupported, Borderline };
enum class PricerKind { Exact, SequentialFixing };

const char* to_string(Verdict v);

struct IterationRow {
    int iteration = 0;
    double delta_u = 0.0;
    double delta_l = 0.0;
    double beta_star = 0.0;
    std::size_t pool_size = 0;
    double ms = 0.0;
};

struct CgResult {
    double delta_u = 0.0;
    double delta_l = 0.0;
    Verdict verdict = Verdict::Supported;
    std::vector<std::vector<double>> cache_x;  // empty when the cache was fixed
    std::vector<RmpSolution::RoutedFraction> routing_y;
    std::vector<double> link_bits_z;
    std::vector<double> schedule_f;            // aligned with `pool`
    std::vector<IndependentSet> pool;
    std::vector<IterationRow> trace;
    int iterations = 0;
    bool exact_rerun = false;  // borderline outcome was settled by an epsilon=0 re-run
};

struct CgOptions {
    double epsilon = 0.03;
    PricerKind pricer = PricerKind::Exact;
    std::optional<std::vector<std::vector<double>>> fixed_cache;
    long max_iterations = 0;      // 0: defaults to 10 * tuple count
    bool auto_exact_rerun = true;
};

class NonConverged : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// One singleton column per communication tuple (the identity pool).
std::vector<IndependentSet> initial_pool(const Scenario& scenario, const std::vector<CommTuple>& tuples);

// max(delta_u + omega_star, 0): the unit-weight bound. Valid whenever the
// true optimum is at most 1; the loop also applies the dual-scaling bound
// delta_u / beta_star, which holds unconditionally.
double lower_bound(double delta_u, double omega_star);

// The three-way branch: supported (delta_u <= 1), unsupported
// (delta_u > 1 + eps or delta_l > 1), else borderline.
Verdict verdict(double delta_u, double delta_l, double epsilon);

CgResult run_column_generation(const Scenario& scenario, const CgOptions& options);

// Re-solve with caching frozen (no X block in the LP or the result).
CgResult resolve_fixed_cache(const Scenario& scenario, const std::vector<std::vector<double>>& fixed_cache,
                             double epsilon, PricerKind pricer);

std::string trace_csv(const std::vector<IterationRow>& trace);

// Throughput-objective column generation. Columns price against the
// schedule-time dual; no epsilon bound is claimed for this objective.
struct MaxThroughputResult {
    double throughput_bits_per_slot = 0.0;
    RmpSolution solution;
    std::vector<IndependentSet> pool;
    int iterations = 0;
};

MaxThroughputResult run_max_throughput(const Scenario& scenario, PricerKind pricer,
                                       long max_iterations = 0);

}  // namespace smallcell
