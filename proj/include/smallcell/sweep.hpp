// Experiment sweeps: run column generation and the no-reuse baseline across
// an axis of scenario parameters and emit plot-ready CSV rows.
#pragma once

#include <string>
#include <vector>

#include "smallcell/baseline.hpp"
#include "smallcell/config.hpp"

namespace smallcell {

struct SweepRow {
    std::string axis;
    double axis_value = 0.0;
    std::uint64_t seed = 0;
    std::string status;  // ok / non_converged / infeasible / error
    double delta_u = 0.0;
    double delta_l = 0.0;
    std::string verdict;
    double cg_rate_mbps = 0.0;
    double baseline_rate_mbps = 0.0;
    double gain_pct = 0.0;
    int iterations = 0;
    std::size_t pool_size = 0;
    double runtime_ms = 0.0;
};

// Average delivered rate per user in Mbit/s: total demanded bits divided by
// (users * schedule length * slot seconds). Zero for zero demand.
double avg_user_rate_mbps(const Scenario& scenario, double schedule_length);

ScenarioConfig apply_axis(ScenarioConfig base, SweepAxis axis, double value);

// One row per (axis value, seed); per-point failures land in the status
// column and the sweep continues. Deterministic apart from runtime_ms.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct RunSummary {
    CgResult cg;
    BaselineResult baseline;
    double cg_rate_mbps = 0.0;
    double baseline_rate_mbps = 0.0;
    double gain_pct = 0.0;
};

// Runs column generation and the baseline on one scenario.
RunSummary run_single(const Scenario& scenario, const SolveSpec& spec);

}  // namespace smallcell
