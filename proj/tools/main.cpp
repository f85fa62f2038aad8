// Command-line front end: single runs, parameter sweeps, the tiny-instance
// oracle cross-check, and conflict-graph dumps.
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smallcell/baseline.hpp"
#include "smallcell/config.hpp"
#include "smallcell/oracle.hpp"
#include "smallcell/sweep.hpp"

namespace {

using namespace smallcell;

void emit(const std::string& path, const std::string& content) {
    if (path == "-")
        std::fputs(content.c_str(), stdout);
    else
        write_file(path, content);
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            const std::string& lp_dump_path) {
    SolveSpec spec = parse_solve_spec(read_file(config_path));
    Scenario scenario = generate_scenario(spec.scenario, spec.scenario.seed);
    std::vector<CommTuple> tuples = enumerate_tuples(scenario);
    std::printf("scenario: %zu sbs, %zu users, %d files, %zu tuples\n", scenario.sbs.size(),
                scenario.users.size(), scenario.catalog.file_count(), tuples.size());

    if (spec.objective == RmpObjective::MaxThroughput) {
        MaxThroughputResult result = run_max_throughput(scenario, spec.pricer, spec.max_iterations);
        std::printf("throughput: %.6g bits/slot over %d iterations, pool %zu\n",
                    result.throughput_bits_per_slot, result.iterations, result.pool.size());
        return 0;
    }

    RunSummary summary = run_single(scenario, spec);
    std::printf("delta_u=%.8g delta_l=%.8g verdict=%s iterations=%d pool=%zu\n", summary.cg.delta_u,
                summary.cg.delta_l, to_string(summary.cg.verdict), summary.cg.iterations,
                summary.cg.pool.size());
    std::printf("cg_rate=%.6g Mbps baseline_rate=%.6g Mbps gain=%.2f%%\n", summary.cg_rate_mbps,
                summary.baseline_rate_mbps, summary.gain_pct);
    if (!trace_path.empty()) emit(trace_path, trace_csv(summary.cg.trace));
    if (!lp_dump_path.empty()) {
        RmpMode mode;
        emit(lp_dump_path, build_rmp(scenario, tuples, summary.cg.pool, mode).problem.to_text());
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& output_path) {
    SweepSpec spec = parse_sweep_spec(read_file(config_path));
    emit(output_path, sweep_csv(run_sweep(spec)));
    return 0;
}

int cmd_oracle_check(int count, double epsilon, std::uint64_t seed) {
    OracleCheckOptions options;
    options.count = count;
    options.epsilon = epsilon;
    options.base_seed = seed;
    OracleCheckReport report = run_oracle_check(options);
    std::fputs(report.log.c_str(), stdout);
    std::printf("oracle-check: %d scenarios, %d failures -> %s\n", report.scenarios, report.failures,
                report.pass() ? "pass" : "FAIL");
    return report.pass() ? 0 : 1;
}

int cmd_dump_graph(const std::string& config_path, const std::string& output_path) {
    SolveSpec spec = parse_solve_spec(read_file(config_path));
    Scenario scenario = generate_scenario(spec.scenario, spec.scenario.seed);
    std::vector<CommTuple> tuples = enumerate_tuples(scenario);
    emit(output_path, build_conflict_graph(scenario, tuples).dump_edge_list(tuples));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint caching, routing and channel assignment for cached small-cell networks"};
    app.require_subcommand(1);

    std::string config_path, output_path = "-", trace_path, lp_dump_path;
    int count = 20;
    double epsilon = 0.03;
    std::uint64_t seed = 90210;

    CLI::App* run = app.add_subcommand("run", "Solve a single scenario");
    run->add_option("--config", config_path, "Scenario + solver config file")->required();
    run->add_option("--trace", trace_path, "Write the iteration trace CSV here");
    run->add_option("--dump-lp", lp_dump_path, "Write the final master LP in text form");

    CLI::App* sweep = app.add_subcommand("sweep", "Run an axis sweep and emit CSV");
    sweep->add_option("--config", config_path, "Sweep config file")->required();
    sweep->add_option("--output", output_path, "Output CSV path ('-' for stdout)");

    CLI::App* oracle = app.add_subcommand("oracle-check", "Tiny-instance equivalence suite");
    oracle->add_option("--count", count, "Number of seeded scenarios");
    oracle->add_option("--epsilon", epsilon, "Approximation factor");
    oracle->add_option("--seed", seed, "Base seed");

    CLI::App* dump = app.add_subcommand("dump-graph", "Write the conflict graph edge list");
    dump->add_option("--config", config_path, "Scenario config file")->required();
    dump->add_option("--output", output_path, "Output path ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(config_path, trace_path, lp_dump_path);
        if (sweep->parsed()) return cmd_sweep(config_path, output_path);
        if (oracle->parsed()) return cmd_oracle_check(count, epsilon, seed);
        if (dump->parsed()) return cmd_dump_graph(config_path, output_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
