// Text configuration: flat `key = value` files describing a scenario, the
// solver settings, and (for sweeps) the axis to vary.
#pragma once

#include <string>
#include <vector>

#include "smallcell/colgen.hpp"
#include "smallcell/model.hpp"

namespace smallcell {

struct SolveSpec {
    ScenarioConfig scenario;
    double epsilon = 0.03;
    RmpObjective objective = RmpObjective::MinSchedule;
    PricerKind pricer = PricerKind::Exact;
    long max_iterations = 0;
};

enum class SweepAxis { CacheSize, NFiles, NUsers, NSbs, TxRange };

struct SweepSpec {
    SolveSpec base;
    SweepAxis axis = SweepAxis::CacheSize;
    std::vector<double> axis_values;
    int seeds_per_point = 1;
};

const char* to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

// Parses `key = value` lines; '#' starts a comment; lists are
// comma-separated. Unknown keys are an error.
SolveSpec parse_solve_spec(const std::string& text);

// As above, but requires sweep_axis, axis_values and seeds_per_point.
SweepSpec parse_sweep_spec(const std::string& text);

std::string format_solve_spec(const SolveSpec& spec);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace smallcell
