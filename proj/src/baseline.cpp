#include "smallcell/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace smallcell {

std::vector<std::vector<std::uint8_t>> femtocache_assign(const Scenario& scenario,
                                                         const std::vector<CommTuple>& tuples) {
    const int n_sbs = static_cast<int>(scenario.sbs.size());
    const int n_files = scenario.catalog.file_count();
    std::vector<std::vector<std::uint8_t>> covered(static_cast<std::size_t>(n_sbs),
                                                   std::vector<std::uint8_t>(scenario.users.size(), 0));
    for (const CommTuple& t : tuples)
        if (t.tx >= 1) covered[static_cast<std::size_t>(t.tx - 1)][static_cast<std::size_t>(t.user)] = 1;

    std::vector<std::vector<std::uint8_t>> cache(static_cast<std::size_t>(n_sbs),
                                                 std::vector<std::uint8_t>(static_cast<std::size_t>(n_files), 0));
    for (int n = 0; n < n_sbs; ++n) {
        std::vector<double> demanded_bits(static_cast<std::size_t>(n_files), 0.0);
        for (int k = 0; k < static_cast<int>(scenario.users.size()); ++k) {
            if (!covered[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]) continue;
            for (int j = 0; j < n_files; ++j)
                demanded_bits[static_cast<std::size_t>(j)] +=
                    scenario.requests.at(k, j) * scenario.catalog.size_bits[static_cast<std::size_t>(j)];
        }
        std::vector<int> order(static_cast<std::size_t>(n_files));
        std::iota(order.begin(), order.end(), 0);
        auto density = [&](int j) {
            return demanded_bits[static_cast<std::size_t>(j)] / scenario.catalog.size_bits[static_cast<std::size_t>(j)];
        };
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return density(a) > density(b); });
        double remaining = scenario.sbs[static_cast<std::size_t>(n)].cache_bits;
        for (int j : order) {
            double size = scenario.catalog.size_bits[static_cast<std::size_t>(j)];
            if (size <= remaining) {
                cache[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = 1;
                remaining -= size;
            }
        }
    }
    return cache;
}

BaselineResult baseline_schedule(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                                 const std::vector<std::vector<std::uint8_t>>& cache) {
    const int n_users = static_cast<int>(scenario.users.size());
    std::vector<std::vector<std::uint8_t>> covered(scenario.sbs.size(),
                                                   std::vector<std::uint8_t>(static_cast<std::size_t>(n_users), 0));
    for (const CommTuple& t : tuples)
        if (t.tx >= 1) covered[static_cast<std::size_t>(t.tx - 1)][static_cast<std::size_t>(t.user)] = 1;

    std::vector<RoutingFix> routing;
    for (int k = 0; k < n_users; ++k)
        for (int j = 0; j < scenario.catalog.file_count(); ++j) {
            if (!scenario.requests.demanded(k, j)) continue;
            int server = 0;  // MBS fallback
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t n = 0; n < scenario.sbs.size(); ++n) {
                if (!covered[n][static_cast<std::size_t>(k)] || !cache[n][static_cast<std::size_t>(j)]) continue;
                double d = distance(scenario.sbs[n].position, scenario.users[static_cast<std::size_t>(k)].position);
                if (d < best_d) {
                    best_d = d;
                    server = static_cast<int>(n) + 1;
                }
            }
            routing.push_back({server, k, j, 1.0});
        }

    std::vector<std::vector<double>> fixed_cache(scenario.sbs.size());
    for (std::size_t n = 0; n < scenario.sbs.size(); ++n)
        fixed_cache[n].assign(cache[n].begin(), cache[n].end());

    RmpMode mode;
    mode.objective = RmpObjective::MinSchedule;
    mode.fixed_cache = std::move(fixed_cache);
    mode.fixed_routing = std::move(routing);

    // Singleton columns only: one active link at a time per unit of schedule,
    // so a channel is never reused across the cell.
    std::vector<IndependentSet> pool;
    pool.reserve(tuples.size());
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        IndependentSet column(tuples.size(), 0);
        column[t] = 1;
        pool.push_back(std::move(column));
    }

    RmpSolution sol = solve_rmp(scenario, tuples, pool, mode);
    BaselineResult result;
    result.cache = cache;
    result.schedule_length = sol.objective;
    result.served_bits.assign(static_cast<std::size_t>(n_users), 0.0);
    for (int k = 0; k < n_users; ++k)
        for (int j = 0; j < scenario.catalog.file_count(); ++j)
            result.served_bits[static_cast<std::size_t>(k)] +=
                scenario.requests.at(k, j) * scenario.catalog.size_bits[static_cast<std::size_t>(j)];
    return result;
}

}  // namespace smallcell
