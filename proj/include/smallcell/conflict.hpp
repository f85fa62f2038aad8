// Conflict graph over communication tuples, the independence predicate
// (pairwise non-conflict plus per-node antenna budgets), and exhaustive
// enumeration of maximal independent sets for ground-truth use.
#pragma once

#include <string>
#include <vector>

#include "smallcell/model.hpp"

namespace smallcell {

// 0/1 incidence vector over the scenario's tuple list.
using IndependentSet = std::vector<std::uint8_t>;

struct ConflictGraph {
    int n_vertices = 0;
    std::vector<std::uint8_t> adjacency;  // row-major n x n, symmetric, no self-loops

    bool edge(int u, int v) const { return adjacency[static_cast<std::size_t>(u) * n_vertices + v] != 0; }
    int edge_count() const;
    std::string dump_edge_list(const std::vector<CommTuple>& tuples) const;
};

// True iff the two tuples cannot be active simultaneously: same channel and
// (shared transmitter, shared receiver, or either receiver inside the other
// transmitter's interference range). Distances exactly at the interference
// range count as interfering.
bool conflicts(const CommTuple& a, const CommTuple& b, const Scenario& scenario);

ConflictGraph build_conflict_graph(const Scenario& scenario, const std::vector<CommTuple>& tuples);

// Full independence predicate: pairwise non-conflict, and per transmitter /
// per receiver tuple counts within the antenna budgets. The pairwise graph
// alone is equivalent only when every antenna count is 1.
bool is_independent(const IndependentSet& candidate, const Scenario& scenario,
                    const std::vector<CommTuple>& tuples);

// True iff no single tuple can be added while keeping independence.
// Throws if the input itself is not independent.
bool is_maximal(const IndependentSet& set, const Scenario& scenario,
                const std::vector<CommTuple>& tuples);

// All maximal independent sets, each verified against is_independent.
// Refuses when the tuple count exceeds the guard (enumeration is
// exponential in the worst case).
std::vector<IndependentSet> enumerate_independent_sets(const Scenario& scenario,
                                                       const std::vector<CommTuple>& tuples,
                                                       int max_tuples_guard = 20);

// Every independent set, maximal or not (includes the empty set). For
// equivalence checks on very small instances only.
std::vector<IndependentSet> enumerate_all_independent_sets(const Scenario& scenario,
                                                           const std::vector<CommTuple>& tuples,
                                                           int max_tuples_guard = 15);

}  // namespace smallcell
