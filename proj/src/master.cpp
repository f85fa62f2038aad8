#include "smallcell/master.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

namespace smallcell {
namespace {

// Capacities and file sizes enter the LP divided by 2^20 so coefficient and
// variable magnitudes stay near unity; the conversion is exact in binary and
// undone on extraction.
constexpr double kBitsScale = 1048576.0;

std::vector<std::vector<std::uint8_t>> reach_table(const Scenario& scenario,
                                                   const std::vector<CommTuple>& tuples) {
    std::vector<std::vector<std::uint8_t>> reach(
        static_cast<std::size_t>(scenario.transmitter_count()),
        std::vector<std::uint8_t>(scenario.users.size(), 0));
    for (const CommTuple& t : tuples) reach[static_cast<std::size_t>(t.tx)][static_cast<std::size_t>(t.user)] = 1;
    return reach;
}

void validate_pool(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                   const std::vector<IndependentSet>& pool) {
    if (pool.empty()) throw std::invalid_argument("column pool must be non-empty");
    for (const IndependentSet& column : pool)
        if (!is_independent(column, scenario, tuples))
            throw std::invalid_argument("column pool contains a non-independent set");
}

void validate_fixed_cache(const Scenario& scenario, const std::vector<std::vector<double>>& x) {
    if (x.size() != scenario.sbs.size())
        throw std::invalid_argument("fixed cache needs one row per SBS");
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (static_cast<int>(x[n].size()) != scenario.catalog.file_count())
            throw std::invalid_argument("fixed cache needs one entry per file");
        double used = 0.0;
        for (int j = 0; j < scenario.catalog.file_count(); ++j) {
            double v = x[n][static_cast<std::size_t>(j)];
            if (v < -1e-9 || v > 1.0 + 1e-9)
                throw std::invalid_argument("fixed cache fractions must lie in [0, 1]");
            used += v * scenario.catalog.size_bits[static_cast<std::size_t>(j)];
        }
        if (used > scenario.sbs[n].cache_bits * (1.0 + 1e-9) + 1e-6)
            throw std::invalid_argument("fixed cache exceeds capacity of SBS " + std::to_string(n));
    }
}

}  // namespace

RmpBuild build_rmp(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                   const std::vector<IndependentSet>& pool, const RmpMode& mode) {
    validate_pool(scenario, tuples, pool);
    if (mode.fixed_cache) validate_fixed_cache(scenario, *mode.fixed_cache);

    const int n_sbs = static_cast<int>(scenario.sbs.size());
    const int n_files = scenario.catalog.file_count();
    const int n_users = static_cast<int>(scenario.users.size());
    const auto reach = reach_table(scenario, tuples);

    RmpBuild out;
    lp::LpProblem& p = out.problem;
    MasterLayout& layout = out.layout;
    p.sense = mode.objective == RmpObjective::MinSchedule ? lp::Sense::Minimize : lp::Sense::Maximize;

    const bool free_cache = !mode.fixed_cache.has_value();
    if (free_cache) {
        layout.x_var.assign(static_cast<std::size_t>(n_sbs), std::vector<int>(static_cast<std::size_t>(n_files), -1));
        for (int n = 0; n < n_sbs; ++n)
            for (int j = 0; j < n_files; ++j)
                layout.x_var[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = p.add_variable(0.0, 0.0, 1.0);
    }

    std::map<std::tuple<int, int, int>, double> routing_fix;
    if (mode.fixed_routing)
        for (const RoutingFix& fix : *mode.fixed_routing) routing_fix[{fix.tx, fix.user, fix.file}] = fix.value;

    for (int tx = 0; tx < scenario.transmitter_count(); ++tx)
        for (int k = 0; k < n_users; ++k) {
            if (!reach[static_cast<std::size_t>(tx)][static_cast<std::size_t>(k)]) continue;
            for (int j = 0; j < n_files; ++j) {
                if (!scenario.requests.demanded(k, j)) continue;
                double ub = 1.0;
                if (!free_cache && tx >= 1)
                    ub = std::min(1.0, std::max(0.0, (*mode.fixed_cache)[static_cast<std::size_t>(tx - 1)][static_cast<std::size_t>(j)]));
                double lb = 0.0;
                if (mode.fixed_routing) {
                    auto it = routing_fix.find({tx, k, j});
                    double v = it == routing_fix.end() ? 0.0 : it->second;
                    if (v < -1e-9 || v > ub + 1e-9)
                        throw std::invalid_argument("routing fix outside the variable's bounds");
                    lb = ub = v;
                }
                int var = p.add_variable(0.0, lb, ub);
                layout.y_vars.push_back({tx, k, j, var});
            }
        }

    layout.z_var.resize(tuples.size());
    const double throughput_weight = mode.objective == RmpObjective::MaxThroughput ? 1.0 : 0.0;
    for (std::size_t t = 0; t < tuples.size(); ++t)
        layout.z_var[t] = p.add_variable(throughput_weight, 0.0, lp::kInfinity);

    layout.f_var.resize(pool.size());
    const double schedule_weight = mode.objective == RmpObjective::MinSchedule ? 1.0 : 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i)
        layout.f_var[i] = p.add_variable(schedule_weight, 0.0, lp::kInfinity);

    const int n_vars = p.n_vars();
    auto blank = [n_vars] { return std::vector<double>(static_cast<std::size_t>(n_vars), 0.0); };

    // Cache capacity per SBS (free-cache mode; the MBS stores everything and
    // carries no capacity row).
    if (free_cache)
        for (int n = 0; n < n_sbs; ++n) {
            auto row = blank();
            for (int j = 0; j < n_files; ++j)
                row[static_cast<std::size_t>(layout.x_var[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)])] =
                    scenario.catalog.size_bits[static_cast<std::size_t>(j)] / kBitsScale;
            p.add_row(std::move(row), lp::Relation::LessEqual, scenario.sbs[static_cast<std::size_t>(n)].cache_bits / kBitsScale);
        }

    // Demand coverage: fractions of each requested file sum to at least one.
    for (int k = 0; k < n_users; ++k)
        for (int j = 0; j < n_files; ++j) {
            if (!scenario.requests.demanded(k, j)) continue;
            auto row = blank();
            bool any = false;
            for (const MasterLayout::YVar& y : layout.y_vars)
                if (y.user == k && y.file == j) {
                    row[static_cast<std::size_t>(y.var)] = 1.0;
                    any = true;
                }
            if (!any) throw RmpInfeasible("no transmitter reaches user " + std::to_string(k) +
                                          " for file " + std::to_string(j));
            p.add_row(std::move(row), lp::Relation::GreaterEqual, 1.0);
        }

    // A user takes a file from an SBS only to the extent it is cached there.
    if (free_cache)
        for (const MasterLayout::YVar& y : layout.y_vars) {
            if (y.tx == 0) continue;  // MBS caches everything
            auto row = blank();
            row[static_cast<std::size_t>(y.var)] = 1.0;
            row[static_cast<std::size_t>(layout.x_var[static_cast<std::size_t>(y.tx - 1)][static_cast<std::size_t>(y.file)])] = -1.0;
            p.add_row(std::move(row), lp::Relation::LessEqual, 0.0);
        }

    // Routed bits must be carried by the link totals Z.
    for (int tx = 0; tx < scenario.transmitter_count(); ++tx)
        for (int k = 0; k < n_users; ++k) {
            auto row = blank();
            bool any = false;
            for (const MasterLayout::YVar& y : layout.y_vars)
                if (y.tx == tx && y.user == k) {
                    row[static_cast<std::size_t>(y.var)] =
                        scenario.requests.at(k, y.file) *
                        scenario.catalog.size_bits[static_cast<std::size_t>(y.file)] / kBitsScale;
                    any = true;
                }
            if (!any) continue;
            for (std::size_t t = 0; t < tuples.size(); ++t)
                if (tuples[t].tx == tx && tuples[t].user == k)
                    row[static_cast<std::size_t>(layout.z_var[t])] = -1.0;
            p.add_row(std::move(row), lp::Relation::LessEqual, 0.0);
        }

    // Link capacity: Z on a tuple is covered by the active time of the pool
    // columns containing it. The duals of these rows are the prices.
    layout.link_row.resize(tuples.size());
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        auto row = blank();
        row[static_cast<std::size_t>(layout.z_var[t])] = 1.0;
        double cap = tuples[t].capacity_per_slot(scenario) / kBitsScale;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (pool[i][t]) row[static_cast<std::size_t>(layout.f_var[i])] = -cap;
        layout.link_row[t] = p.n_rows();
        p.add_row(std::move(row), lp::Relation::LessEqual, 0.0);
    }

    // Total schedule time. Kept only under the throughput objective, where it
    // is the binding resource; under MinSchedule the <= 1 test is applied to
    // the optimal value instead so overloaded instances stay representable.
    if (mode.objective == RmpObjective::MaxThroughput) {
        auto row = blank();
        for (int fv : layout.f_var) row[static_cast<std::size_t>(fv)] = 1.0;
        layout.total_time_row = p.n_rows();
        p.add_row(std::move(row), lp::Relation::LessEqual, 1.0);
    }

    layout.n_vars = p.n_vars();
    layout.n_rows = p.n_rows();
    return out;
}

namespace {

RmpSolution extract_solution(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                             std::size_t pool_size, const RmpMode& mode, const MasterLayout& layout,
                             const lp::LpSolution& sol) {
    RmpSolution out;
    out.objective = mode.objective == RmpObjective::MaxThroughput ? sol.objective * kBitsScale : sol.objective;
    if (!layout.x_var.empty()) {
        out.cache_x.assign(scenario.sbs.size(), std::vector<double>(static_cast<std::size_t>(scenario.catalog.file_count()), 0.0));
        for (std::size_t n = 0; n < scenario.sbs.size(); ++n)
            for (int j = 0; j < scenario.catalog.file_count(); ++j)
                out.cache_x[n][static_cast<std::size_t>(j)] =
                    sol.primal[static_cast<std::size_t>(layout.x_var[n][static_cast<std::size_t>(j)])];
    }
    out.routing_y.reserve(layout.y_vars.size());
    for (const MasterLayout::YVar& y : layout.y_vars)
        out.routing_y.push_back({y.tx, y.user, y.file, sol.primal[static_cast<std::size_t>(y.var)]});
    out.link_bits_z.resize(tuples.size());
    out.link_price.resize(tuples.size());
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        out.link_bits_z[t] = sol.primal[static_cast<std::size_t>(layout.z_var[t])] * kBitsScale;
        double y = sol.duals[static_cast<std::size_t>(layout.link_row[t])];
        // LessEqual rows: dual <= 0 under Minimize, >= 0 under Maximize; the
        // reported price is nonnegative either way.
        double price = mode.objective == RmpObjective::MinSchedule ? -y : y;
        out.link_price[t] = std::max(0.0, price) / kBitsScale;
    }
    out.schedule_f.resize(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i)
        out.schedule_f[i] = sol.primal[static_cast<std::size_t>(layout.f_var[i])];
    if (layout.total_time_row >= 0)
        out.total_time_price = std::max(0.0, sol.duals[static_cast<std::size_t>(layout.total_time_row)]);
    return out;
}

std::string infeasibility_diagnosis(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                                    const RmpMode& mode) {
    const auto reach = reach_table(scenario, tuples);
    for (int k = 0; k < static_cast<int>(scenario.users.size()); ++k)
        for (int j = 0; j < scenario.catalog.file_count(); ++j) {
            if (!scenario.requests.demanded(k, j)) continue;
            double coverage = 0.0;
            for (int tx = 0; tx < scenario.transmitter_count(); ++tx) {
                if (!reach[static_cast<std::size_t>(tx)][static_cast<std::size_t>(k)]) continue;
                if (tx == 0)
                    coverage += 1.0;
                else if (mode.fixed_cache)
                    coverage += std::min(1.0, (*mode.fixed_cache)[static_cast<std::size_t>(tx - 1)][static_cast<std::size_t>(j)]);
                else
                    coverage += 1.0;
            }
            if (coverage < 1.0 - 1e-9)
                return "coverage: user " + std::to_string(k) + " cannot assemble file " + std::to_string(j);
        }
    return "capacity: demand exceeds the schedulable capacity";
}

}  // namespace

RmpSolution solve_rmp(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                      const std::vector<IndependentSet>& pool, const RmpMode& mode) {
    RmpBuild build = build_rmp(scenario, tuples, pool, mode);
    lp::LpSolution sol = lp::solve_lp(build.problem);
    if (sol.status == lp::LpStatus::Infeasible)
        throw RmpInfeasible(infeasibility_diagnosis(scenario, tuples, mode));
    if (sol.status == lp::LpStatus::Unbounded)
        throw lp::SolverError("master problem reported unbounded");
    return extract_solution(scenario, tuples, pool.size(), mode, build.layout, sol);
}

RmpSession::RmpSession(const Scenario& scenario, std::vector<CommTuple> tuples,
                       std::vector<IndependentSet> pool, RmpMode mode)
    : scenario_(scenario), tuples_(std::move(tuples)), pool_(std::move(pool)), mode_(std::move(mode)) {
    RmpBuild build = build_rmp(scenario_, tuples_, pool_, mode_);
    layout_ = std::move(build.layout);
    solver_.emplace(std::move(build.problem));
    pool_set_.insert(pool_.begin(), pool_.end());
}

bool RmpSession::contains(const IndependentSet& column) const {
    return pool_set_.count(column) != 0;
}

void RmpSession::add_column(const IndependentSet& column) {
    if (!is_independent(column, scenario_, tuples_))
        throw std::invalid_argument("cannot add a non-independent column");
    std::vector<std::pair<int, double>> entries;
    for (std::size_t t = 0; t < tuples_.size(); ++t)
        if (column[t])
            entries.emplace_back(layout_.link_row[t], -tuples_[t].capacity_per_slot(scenario_) / kBitsScale);
    if (layout_.total_time_row >= 0) entries.emplace_back(layout_.total_time_row, 1.0);
    double obj = mode_.objective == RmpObjective::MinSchedule ? 1.0 : 0.0;
    int var = solver_->add_variable(obj, entries, 0.0, lp::kInfinity);
    layout_.f_var.push_back(var);
    pool_.push_back(column);
    pool_set_.insert(column);
}

RmpSolution RmpSession::solve() {
    lp::LpSolution sol = solver_->solve();
    if (sol.status == lp::LpStatus::Infeasible)
        throw RmpInfeasible(infeasibility_diagnosis(scenario_, tuples_, mode_));
    if (sol.status == lp::LpStatus::Unbounded)
        throw lp::SolverError("master problem reported unbounded");
    return extract_solution(scenario_, tuples_, pool_.size(), mode_, layout_, sol);
}

}  // namespace smallcell
