#include "smallcell/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace smallcell {

double avg_user_rate_mbps(const Scenario& scenario, double schedule_length) {
    double demand = scenario.requests.total_demand_bits(scenario.catalog);
    if (demand <= 0.0) return 0.0;
    if (schedule_length <= 0.0)
        throw std::logic_error("positive demand cannot be served in zero schedule time");
    double users = static_cast<double>(scenario.users.size());
    return demand / (users * schedule_length * scenario.slot_seconds) / 1e6;
}

ScenarioConfig apply_axis(ScenarioConfig base, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::CacheSize: base.cache_bytes = {value}; break;
        case SweepAxis::NFiles: base.n_files = static_cast<int>(std::lround(value)); break;
        case SweepAxis::NUsers: base.n_users = static_cast<int>(std::lround(value)); break;
        case SweepAxis::NSbs: base.n_sbs = static_cast<int>(std::lround(value)); break;
        case SweepAxis::TxRange: base.tx_range_m = value; break;
    }
    return base;
}

RunSummary run_single(const Scenario& scenario, const SolveSpec& spec) {
    RunSummary summary;
    CgOptions options;
    options.epsilon = spec.epsilon;
    options.pricer = spec.pricer;
    options.max_iterations = spec.max_iterations;
    summary.cg = run_column_generation(scenario, options);

    std::vector<CommTuple> tuples = enumerate_tuples(scenario);
    summary.baseline = baseline_schedule(scenario, tuples, femtocache_assign(scenario, tuples));

    summary.cg_rate_mbps = avg_user_rate_mbps(scenario, summary.cg.delta_u);
    summary.baseline_rate_mbps = avg_user_rate_mbps(scenario, summary.baseline.schedule_length);
    summary.gain_pct = summary.baseline_rate_mbps > 0.0
                           ? 100.0 * (summary.cg_rate_mbps - summary.baseline_rate_mbps) / summary.baseline_rate_mbps
                           : 0.0;
    return summary;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.base.objective != RmpObjective::MinSchedule)
        throw std::invalid_argument("sweeps run the schedule-length objective");
    std::vector<SweepRow> rows;
    for (double value : spec.axis_values)
        for (int s = 0; s < spec.seeds_per_point; ++s) {
            SweepRow row;
            row.axis = to_string(spec.axis);
            row.axis_value = value;
            row.seed = spec.base.scenario.seed + static_cast<std::uint64_t>(s);
            auto t0 = std::chrono::steady_clock::now();
            try {
                ScenarioConfig config = apply_axis(spec.base.scenario, spec.axis, value);
                Scenario scenario = generate_scenario(config, row.seed);
                RunSummary summary = run_single(scenario, spec.base);
                row.status = "ok";
                row.delta_u = summary.cg.delta_u;
                row.delta_l = summary.cg.delta_l;
                row.verdict = to_string(summary.cg.verdict);
                row.cg_rate_mbps = summary.cg_rate_mbps;
                row.baseline_rate_mbps = summary.baseline_rate_mbps;
                row.gain_pct = summary.gain_pct;
                row.iterations = summary.cg.iterations;
                row.pool_size = summary.cg.pool.size();
            } catch (const NonConverged&) {
                row.status = "non_converged";
            } catch (const RmpInfeasible& e) {
                row.status = std::string("infeasible: ") + e.what();
            } catch (const std::exception& e) {
                row.status = std::string("error: ") + e.what();
            }
            for (char& ch : row.status)
                if (ch == ',' || ch == '\n') ch = ';';
            row.runtime_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            rows.push_back(std::move(row));
        }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "axis,axis_value,seed,status,delta_u,delta_l,verdict,cg_rate_mbps,baseline_rate_mbps,"
        "gain_pct,iterations,pool_size,runtime_ms\n";
    char buf[320];
    for (const SweepRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%llu,%s,%.10g,%.10g,%s,%.10g,%.10g,%.10g,%d,%zu,%.3f\n",
                      row.axis.c_str(), row.axis_value, static_cast<unsigned long long>(row.seed),
                      row.status.c_str(), row.delta_u, row.delta_l, row.verdict.c_str(), row.cg_rate_mbps,
                      row.baseline_rate_mbps, row.gain_pct, row.iterations, row.pool_size, row.runtime_ms);
        out += buf;
    }
    return out;
}

}  // namespace smallcell
