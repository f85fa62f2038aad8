// Restricted master problem: assembles the caching/routing/scheduling LP over
// a pool of independent sets and exposes the link-row dual prices that drive
// pricing. Supports the schedule-length and total-throughput objectives and a
// fixed-cache variant where the X block becomes constants.
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "smallcell/conflict.hpp"
#include "smallcell/lp.hpp"
#include "smallcell/model.hpp"

namespace smallcell {

enum class RmpObjective { MinSchedule, MaxThroughput };

struct RoutingFix {
    int tx, user, file;
    double value;
};

struct RmpMode {
    RmpObjective objective = RmpObjective::MinSchedule;
    // When set, caching fractions are constants ([sbs][file], within capacity)
    // and the LP carries no X block.
    std::optional<std::vector<std::vector<double>>> fixed_cache;
    // When set, pins the whole Y block: listed entries take their value,
    // everything else is zero.
    std::optional<std::vector<RoutingFix>> fixed_routing;
};

// Deterministic variable/row layout of the assembled LP: X block (free-cache
// mode only), then Y, Z, f. Row order: cache capacity, demand coverage,
// cache-linking, load, link capacity, total time (throughput mode only).
struct MasterLayout {
    struct YVar {
        int tx, user, file;
        int var;
    };
    std::vector<std::vector<int>> x_var;  // [sbs][file]; empty in fixed mode
    std::vector<YVar> y_vars;
    std::vector<int> z_var;      // per tuple
    std::vector<int> f_var;      // per pool column
    std::vector<int> link_row;   // constraint row per tuple (dual = price)
    int total_time_row = -1;     // sum f <= 1, MaxThroughput only
    int n_vars = 0;
    int n_rows = 0;
};

struct RmpBuild {
    lp::LpProblem problem;
    MasterLayout layout;
};

struct RmpSolution {
    // Schedule length delta for MinSchedule; total scheduled bits/slot for
    // MaxThroughput.
    double objective = 0.0;
    std::vector<std::vector<double>> cache_x;  // [sbs][file]; empty in fixed mode
    struct RoutedFraction {
        int tx, user, file;
        double value;
    };
    std::vector<RoutedFraction> routing_y;
    std::vector<double> link_bits_z;  // per tuple, bits per slot
    std::vector<double> schedule_f;   // per pool column
    std::vector<double> link_price;   // lambda per tuple, 1/(bits per slot), >= 0
    double total_time_price = 0.0;    // dual of sum f <= 1 (throughput mode only)
};

class RmpInfeasible : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

RmpBuild build_rmp(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                   const std::vector<IndependentSet>& pool, const RmpMode& mode);

RmpSolution solve_rmp(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                      const std::vector<IndependentSet>& pool, const RmpMode& mode);

// Incremental master for the column-generation loop: the LP stays hot and new
// columns append to it. Results match solve_rmp on objective value.
class RmpSession {
  public:
    RmpSession(const Scenario& scenario, std::vector<CommTuple> tuples,
               std::vector<IndependentSet> pool, RmpMode mode);

    RmpSolution solve();
    bool contains(const IndependentSet& column) const;
    void add_column(const IndependentSet& column);
    const std::vector<IndependentSet>& pool() const { return pool_; }
    const std::vector<CommTuple>& tuples() const { return tuples_; }

  private:
    const Scenario& scenario_;
    std::vector<CommTuple> tuples_;
    std::vector<IndependentSet> pool_;
    std::set<IndependentSet> pool_set_;
    RmpMode mode_;
    MasterLayout layout_;
    std::optional<lp::LpSolver> solver_;
};

}  // namespace smallcell
