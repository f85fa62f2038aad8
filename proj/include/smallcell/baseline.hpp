// Femtocaching-style comparison system: popularity-greedy whole-file caching
// plus scheduling restricted to singleton columns, i.e. no spatial reuse of a
// channel anywhere in the macro-cell.
#pragma once

#include "smallcell/master.hpp"

namespace smallcell {

struct BaselineResult {
    std::vector<std::vector<std::uint8_t>> cache;  // [sbs][file], whole files
    double schedule_length = 0.0;
    std::vector<double> served_bits;  // per user, bits per slot
};

// Greedy per-SBS assignment: files ranked by local demanded bits per cached
// byte, ties by file id, packed until the capacity is exhausted.
std::vector<std::vector<std::uint8_t>> femtocache_assign(const Scenario& scenario,
                                                         const std::vector<CommTuple>& tuples);

// Serve each demanded (user, file) from the nearest covering SBS that caches
// the file (the MBS otherwise) and schedule over singleton columns only.
BaselineResult baseline_schedule(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                                 const std::vector<std::vector<std::uint8_t>>& cache);

}  // namespace smallcell
