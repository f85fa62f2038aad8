#include "smallcell/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace smallcell {
namespace {

constexpr double kBetaTol = 1e-9;

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct Pricer {
    PricerKind kind;
    const Scenario& scenario;
    const std::vector<CommTuple>& tuples;
    std::optional<ConflictGraph> graph;
    std::optional<SequentialFixingPricer> sequential;

    Pricer(PricerKind k, const Scenario& s, const std::vector<CommTuple>& t)
        : kind(k), scenario(s), tuples(t) {
        if (kind == PricerKind::Exact)
            graph = build_conflict_graph(s, t);
        else
            sequential.emplace(s, std::vector<CommTuple>(t));
    }

    PricingResult price(const std::vector<double>& link_price,
                        PricingTieBreak tie = PricingTieBreak::PreferLowIndex) {
        if (kind == PricerKind::Exact)
            return solve_pricing_exact(scenario, tuples, *graph, link_price, tie);
        return sequential->solve(link_price);
    }
};

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Supported: return "supported";
        case Verdict::Unsupported: return "unsupported";
        case Verdict::Borderline: return "borderline";
    }
    return "?";
}

std::vector<IndependentSet> initial_pool(const Scenario& scenario, const std::vector<CommTuple>& tuples) {
    if (tuples.empty())
        throw std::invalid_argument("scenario has no communication tuples; no user is coverable");
    std::vector<IndependentSet> pool;
    pool.reserve(tuples.size());
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        IndependentSet column(tuples.size(), 0);
        column[t] = 1;
        pool.push_back(std::move(column));
    }
    (void)scenario;
    return pool;
}

double lower_bound(double delta_u, double omega_star) {
    if (!std::isfinite(omega_star)) throw std::invalid_argument("omega must be finite");
    return std::max(delta_u + omega_star, 0.0);
}

Verdict verdict(double delta_u, double delta_l, double epsilon) {
    if (delta_u <= 1.0) return Verdict::Supported;
    if (delta_u > 1.0 + epsilon || delta_l > 1.0) return Verdict::Unsupported;
    return Verdict::Borderline;
}

CgResult run_column_generation(const Scenario& scenario, const CgOptions& options) {
    if (options.epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    std::vector<CommTuple> tuples = enumerate_tuples(scenario);
    std::vector<IndependentSet> pool = initial_pool(scenario, tuples);
    const long max_iterations = options.max_iterations > 0
                                    ? options.max_iterations
                                    : 10L * static_cast<long>(tuples.size());

    RmpMode mode;
    mode.objective = RmpObjective::MinSchedule;
    mode.fixed_cache = options.fixed_cache;
    RmpSession session(scenario, tuples, std::move(pool), mode);
    Pricer pricer(options.pricer, scenario, session.tuples());

    CgResult result;
    double delta_l = 0.0;
    RmpSolution rmp;
    bool retried_duplicate = false;

    for (long iter = 1;; ++iter) {
        if (iter > max_iterations)
            throw NonConverged("column generation hit the iteration cap (" +
                               std::to_string(max_iterations) + ")");
        auto t0 = std::chrono::steady_clock::now();
        rmp = session.solve();
        const double delta_u = rmp.objective;

        PricingResult priced = pricer.price(rmp.link_price);
        const double beta_star = priced.beta;

        // Per-iteration lower bound, largest valid form. The dual-scaling
        // bound delta_u / beta_star holds for any beta_star > 1; the additive
        // unit-weight bound additionally requires the optimum (<= delta_u) to
        // be at most 1.
        double iter_bound;
        if (beta_star <= 1.0 + kBetaTol) {
            iter_bound = delta_u;  // no improving column: the master is optimal
        } else {
            iter_bound = delta_u / beta_star;
            if (delta_u <= 1.0)
                iter_bound = std::max(iter_bound, lower_bound(delta_u, priced.reduced_cost));
        }
        delta_l = std::max(delta_l, std::max(iter_bound, 0.0));

        result.trace.push_back({static_cast<int>(iter), delta_u, delta_l, beta_star,
                                session.pool().size(), elapsed_ms(t0)});
        result.delta_u = delta_u;
        result.delta_l = delta_l;
        result.iterations = static_cast<int>(iter);

        if (beta_star <= 1.0 + kBetaTol) break;
        const double ratio = delta_u <= 0.0 ? 1.0 : delta_l / delta_u;
        if (ratio >= 1.0 / (1.0 + options.epsilon) - 1e-12) break;

        if (session.contains(priced.column)) {
            // Only degenerate duals can re-price a pool column; try the
            // flipped tie-break once, then stop with the bounds we have.
            if (retried_duplicate || options.pricer != PricerKind::Exact) break;
            retried_duplicate = true;
            priced = pricer.price(rmp.link_price, PricingTieBreak::PreferHighIndex);
            if (session.contains(priced.column) || priced.beta <= 1.0 + kBetaTol) break;
        }
        session.add_column(priced.column);
    }

    result.verdict = verdict(result.delta_u, result.delta_l, options.epsilon);
    result.cache_x = rmp.cache_x;
    result.routing_y = rmp.routing_y;
    result.link_bits_z = rmp.link_bits_z;
    result.schedule_f = rmp.schedule_f;
    result.pool = session.pool();
    result.schedule_f.resize(result.pool.size(), 0.0);

    if (result.verdict == Verdict::Borderline && options.auto_exact_rerun && options.epsilon > 0.0) {
        CgOptions exact = options;
        exact.epsilon = 0.0;
        exact.auto_exact_rerun = false;
        CgResult rerun = run_column_generation(scenario, exact);
        rerun.exact_rerun = true;
        return rerun;
    }
    return result;
}

CgResult resolve_fixed_cache(const Scenario& scenario, const std::vector<std::vector<double>>& fixed_cache,
                             double epsilon, PricerKind pricer) {
    CgOptions options;
    options.epsilon = epsilon;
    options.pricer = pricer;
    options.fixed_cache = fixed_cache;
    return run_column_generation(scenario, options);
}

std::string trace_csv(const std::vector<IterationRow>& trace) {
    std::string out = "iteration,delta_u,delta_l,beta_star,pool_size,ms\n";
    char buf[160];
    for (const IterationRow& row : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%zu,%.3f\n", row.iteration,
                      row.delta_u, row.delta_l, row.beta_star, row.pool_size, row.ms);
        out += buf;
    }
    return out;
}

MaxThroughputResult run_max_throughput(const Scenario& scenario, PricerKind pricer_kind,
                                       long max_iterations) {
    std::vector<CommTuple> tuples = enumerate_tuples(scenario);
    std::vector<IndependentSet> pool = initial_pool(scenario, tuples);
    const long cap = max_iterations > 0 ? max_iterations : 10L * static_cast<long>(tuples.size());

    RmpMode mode;
    mode.objective = RmpObjective::MaxThroughput;

    std::optional<RmpSession> session;
    try {
        session.emplace(scenario, tuples, pool, mode);
        session->solve();
    } catch (const RmpInfeasible&) {
        // The restricted pool may be infeasible even when the full problem is
        // not: grow the pool with a schedule-length run first.
        CgOptions warmup;
        warmup.pricer = pricer_kind;
        warmup.auto_exact_rerun = false;
        CgResult cg = run_column_generation(scenario, warmup);
        if (cg.delta_u > 1.0) throw;
        session.emplace(scenario, tuples, cg.pool, mode);
    }

    MaxThroughputResult result;
    Pricer pricer(pricer_kind, scenario, session->tuples());
    for (long iter = 1;; ++iter) {
        if (iter > cap)
            throw NonConverged("throughput column generation hit the iteration cap");
        RmpSolution rmp = session->solve();
        result.solution = rmp;
        result.throughput_bits_per_slot = rmp.objective;
        result.iterations = static_cast<int>(iter);
        PricingResult priced = pricer.price(rmp.link_price);
        double sigma = rmp.total_time_price;
        if (priced.beta <= sigma * (1.0 + kBetaTol) + 1e-12) break;
        if (session->contains(priced.column)) break;
        session->add_column(priced.column);
    }
    result.pool = session->pool();
    return result;
}

}  // namespace smallcell
