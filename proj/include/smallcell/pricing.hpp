// Pricing: generate the most profitable independent set under the master's
// link prices, either exactly (branch and bound over the conflict graph) or
// via sequential fixing of the LP relaxation.
#pragma once

#include <optional>

#include "smallcell/conflict.hpp"
#include "smallcell/lp.hpp"
#include "smallcell/model.hpp"

namespace smallcell {

struct PricingResult {
    IndependentSet column;
    double beta = 0.0;          // sum of price * capacity over the column
    double reduced_cost = 1.0;  // 1 - beta
};

// Canonical column value: sum over member tuples, in tuple-index order, of
// link_price[t] * capacity-per-slot. Prices must be nonnegative (tiny
// negative LP noise is clamped).
double column_beta(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                   const std::vector<double>& link_price, const IndependentSet& column);

// omega = 1 - beta for the given column.
double reduced_cost(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                    const std::vector<double>& link_price, const IndependentSet& column);

enum class PricingTieBreak { PreferLowIndex, PreferHighIndex };

// Exact max-weight independent set via depth-first branch and bound. Tuples
// with zero weight are never branched on; co-optimal columns tie-break to the
// lexicographically smallest incidence vector (largest under PreferHighIndex).
PricingResult solve_pricing_exact(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                                  const ConflictGraph& graph, const std::vector<double>& link_price,
                                  PricingTieBreak tie_break = PricingTieBreak::PreferLowIndex);

// Sequential fixing: solve the [0,1] relaxation of the feasibility system,
// then repeatedly fix the largest fractional variable (to 1 if the fixed
// system stays feasible, else to 0) until the solution is integral. At most
// one variable is fixed per round, so there are at most Q rounds.
class SequentialFixingPricer {
  public:
    SequentialFixingPricer(const Scenario& scenario, std::vector<CommTuple> tuples);

    PricingResult solve(const std::vector<double>& link_price);

  private:
    const Scenario& scenario_;
    std::vector<CommTuple> tuples_;
    lp::LpProblem relaxation_;
    std::optional<lp::LpSolver> warm_;  // persistent relaxation, objective swapped per call
};

// One-shot convenience wrapper.
PricingResult solve_pricing_sequential_fixing(const Scenario& scenario,
                                              const std::vector<CommTuple>& tuples,
                                              const std::vector<double>& link_price);

}  // namespace smallcell
