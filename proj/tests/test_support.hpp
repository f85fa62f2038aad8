// Shared test fixtures: hand-built scenarios, random instance generators, and
// independent brute-force oracles (LP vertex enumeration, KKT checks). These
// stay deliberately separate from the solver implementation paths they check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "smallcell/lp.hpp"
#include "smallcell/model.hpp"

namespace smallcell::testing {

inline double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

constexpr double kRxThreshold = 1e-10;

inline void add_channel_constants(Scenario& s, int channel_id, double ir_factor = 2.0) {
    s.radio.rx_threshold_w[channel_id] = kRxThreshold;
    s.radio.interference_threshold_w[channel_id] = kRxThreshold / std::pow(ir_factor, s.radio.path_loss);
}

inline double sbs_power_for_range(const Scenario& s, double range_m) {
    return power_for_range(range_m, kRxThreshold, s.radio.gain, s.radio.path_loss);
}

// The two-SBS / three-user example topology: SBS 1 and user 1 (index 1 here)
// share channels {1,2}, everything else uses channel 1 only. Transmission
// range 100 m, interference range 200 m. Yields exactly five tuples:
//   v0=((1,0),1) v1=((1,1),1) v2=((1,1),2) v3=((2,1),1) v4=((2,2),1)
inline Scenario figure3_scenario() {
    Scenario s;
    s.cell_radius_m = 400.0;
    s.radio.gain = 1.0;
    s.radio.path_loss = 3.0;
    s.radio.noise_w = 1e-13;
    s.channels = {{0, 1e6}, {1, 400e3}, {2, 400e3}};
    for (const Channel& c : s.channels) add_channel_constants(s, c.id);

    const double p = sbs_power_for_range(s, 100.0);
    s.mbs.kind = NodeKind::Mbs;
    s.mbs.position = {0.0, -350.0};
    s.mbs.channels = {0, 1, 2};  // powered off: contributes no tuples

    Node sbs1{NodeKind::Sbs, {0.0, 0.0}, 2, {1, 2}, 8e6, {{1, p}, {2, p}}};
    Node sbs2{NodeKind::Sbs, {190.0, 0.0}, 2, {1}, 8e6, {{1, p}}};
    s.sbs = {sbs1, sbs2};

    Node u0{NodeKind::User, {-90.0, 0.0}, 2, {1}, 0.0, {}};
    Node u1{NodeKind::User, {95.0, 0.0}, 2, {1, 2}, 0.0, {}};
    Node u2{NodeKind::User, {280.0, 0.0}, 2, {1}, 0.0, {}};
    s.users = {u0, u1, u2};

    s.catalog.size_bits = {1e6};
    s.catalog.popularity = {1.0};
    s.requests.n_users = 3;
    s.requests.n_files = 1;
    s.requests.alpha = {1.0, 1.0, 1.0};
    return s;
}

// Single SBS, single user, single channel; the MBS is powered off. Demand is
// load_fraction times the link's per-slot capacity.
inline Scenario single_link_scenario(double load_fraction) {
    Scenario s;
    s.cell_radius_m = 400.0;
    s.radio.gain = 1.0;
    s.radio.path_loss = 3.0;
    s.radio.noise_w = 1e-13;
    s.channels = {{0, 1e6}, {1, 400e3}};
    for (const Channel& c : s.channels) add_channel_constants(s, c.id);

    const double p = sbs_power_for_range(s, 100.0);
    s.mbs.kind = NodeKind::Mbs;
    s.mbs.position = {0.0, -300.0};
    s.mbs.channels = {0, 1};

    Node sbs{NodeKind::Sbs, {0.0, 0.0}, 1, {1}, 0.0, {{1, p}}};
    Node user{NodeKind::User, {50.0, 0.0}, 1, {1}, 0.0, {}};
    double cap = link_capacity(400e3, 50.0, p, s.radio.gain, s.radio.path_loss, s.radio.noise_w);
    double size = load_fraction * cap * 1.0;
    sbs.cache_bits = size + 1.0;
    s.sbs = {sbs};
    s.users = {user};
    s.catalog.size_bits = {size};
    s.catalog.popularity = {1.0};
    s.requests.n_users = 1;
    s.requests.n_files = 1;
    s.requests.alpha = {1.0};
    return s;
}

// Two far-apart SBS-user pairs on the same channel; no interference between
// them, so one column can drive both links at once.
inline Scenario two_far_links_scenario(double load_fraction) {
    Scenario s;
    s.cell_radius_m = 200000.0;
    s.radio.gain = 1.0;
    s.radio.path_loss = 3.0;
    s.radio.noise_w = 1e-13;
    s.channels = {{0, 1e6}, {1, 400e3}};
    for (const Channel& c : s.channels) add_channel_constants(s, c.id);

    const double p = sbs_power_for_range(s, 100.0);
    s.mbs.kind = NodeKind::Mbs;
    s.mbs.position = {50000.0, -100000.0};
    s.mbs.channels = {0, 1};

    Node sbs1{NodeKind::Sbs, {0.0, 0.0}, 1, {1}, 0.0, {{1, p}}};
    Node sbs2{NodeKind::Sbs, {100000.0, 0.0}, 1, {1}, 0.0, {{1, p}}};
    Node user1{NodeKind::User, {50.0, 0.0}, 1, {1}, 0.0, {}};
    Node user2{NodeKind::User, {100050.0, 0.0}, 1, {1}, 0.0, {}};
    double cap = link_capacity(400e3, 50.0, p, s.radio.gain, s.radio.path_loss, s.radio.noise_w);
    double size = load_fraction * cap;
    sbs1.cache_bits = sbs2.cache_bits = 2.0 * size + 1.0;
    s.sbs = {sbs1, sbs2};
    s.users = {user1, user2};
    s.catalog.size_bits = {size};
    s.catalog.popularity = {1.0};
    s.requests.n_users = 2;
    s.requests.n_files = 1;
    s.requests.alpha = {1.0, 1.0};
    return s;
}

// Random small instance through the production generator, rejecting draws
// whose tuple count exceeds the cap. With single_channel the instance has one
// secondary channel, where pairwise edges and unit antenna budgets coincide.
inline Scenario random_tiny_scenario(std::uint64_t seed, int max_tuples, int antennas = 1,
                                     bool single_channel = false) {
    std::mt19937_64 rng(seed ^ 0xabcdef12345ULL);
    auto pick = [&rng](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    for (int attempt = 0; attempt < 200; ++attempt) {
        ScenarioConfig config;
        config.n_sbs = pick(1, 3);
        config.n_users = pick(1, 4);
        config.n_files = pick(1, 4);
        config.n_secondary_channels = single_channel ? 1 : pick(1, 2);
        config.channels_per_sbs = pick(1, config.n_secondary_channels);
        config.channels_per_user = pick(1, config.n_secondary_channels);
        config.radius_m = 150.0 + 25.0 * pick(0, 8);
        config.tx_range_m = 60.0 + 20.0 * pick(0, 6);
        config.avg_file_bytes = 1e6;
        config.cache_bytes = {config.avg_file_bytes * pick(0, 3)};
        config.zipf_zeta = 0.4 * pick(0, 3);
        config.requests_per_user = pick(1, 2);
        config.antennas_sbs = antennas;
        config.antennas_user = antennas;
        Scenario s = generate_scenario(config, seed + 7919ULL * static_cast<std::uint64_t>(attempt));
        std::size_t count = enumerate_tuples(s).size();
        if (count >= 1 && count <= static_cast<std::size_t>(max_tuples)) return s;
    }
    throw std::runtime_error("no tiny scenario found under the tuple cap");
}

// ---------------------------------------------------------------------------
// Brute-force LP oracle: enumerate candidate vertices as intersections of n
// active constraints (rows as equalities plus finite variable bounds), keep
// the feasible ones, and take the best objective.

struct VertexOracleResult {
    bool feasible = false;
    double objective = 0.0;
};

inline bool gaussian_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                           std::vector<double>& x) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        double best = 1e-9;
        for (int r = col; r < n; ++r)
            if (std::fabs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) > best) {
                best = std::fabs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
                pivot = r;
            }
        if (pivot < 0) return false;
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    x.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] /
                                         a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return true;
}

inline VertexOracleResult enumerate_vertices(const lp::LpProblem& p) {
    const int n = p.n_vars();
    struct Plane {
        std::vector<double> a;
        double b;
    };
    std::vector<Plane> planes;
    for (const lp::LpRow& row : p.rows) planes.push_back({row.coeffs, row.rhs});
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        planes.push_back({e, p.lower[static_cast<std::size_t>(j)]});
        if (p.upper[static_cast<std::size_t>(j)] != lp::kInfinity)
            planes.push_back({e, p.upper[static_cast<std::size_t>(j)]});
    }

    VertexOracleResult result;
    auto feasible_point = [&p, n](const std::vector<double>& x) {
        for (int j = 0; j < n; ++j) {
            if (x[static_cast<std::size_t>(j)] < p.lower[static_cast<std::size_t>(j)] - 1e-7) return false;
            if (p.upper[static_cast<std::size_t>(j)] != lp::kInfinity &&
                x[static_cast<std::size_t>(j)] > p.upper[static_cast<std::size_t>(j)] + 1e-7)
                return false;
        }
        for (const lp::LpRow& row : p.rows) {
            double act = 0.0;
            for (int j = 0; j < n; ++j)
                act += row.coeffs[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            double tol = 1e-7 * (1.0 + std::fabs(row.rhs));
            if (row.rel == lp::Relation::LessEqual && act > row.rhs + tol) return false;
            if (row.rel == lp::Relation::GreaterEqual && act < row.rhs - tol) return false;
            if (row.rel == lp::Relation::Equal && std::fabs(act - row.rhs) > tol) return false;
        }
        return true;
    };

    std::vector<int> chosen;
    auto consider = [&] {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (int idx : chosen) {
            a.push_back(planes[static_cast<std::size_t>(idx)].a);
            b.push_back(planes[static_cast<std::size_t>(idx)].b);
        }
        std::vector<double> x;
        if (!gaussian_solve(std::move(a), std::move(b), x)) return;
        if (!feasible_point(x)) return;
        double obj = 0.0;
        for (int j = 0; j < n; ++j)
            obj += p.objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        if (!result.feasible) {
            result.feasible = true;
            result.objective = obj;
        } else if (p.sense == lp::Sense::Minimize ? obj < result.objective : obj > result.objective) {
            result.objective = obj;
        }
    };
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(chosen.size()) == n) {
            consider();
            return;
        }
        for (std::size_t i = start; i < planes.size(); ++i) {
            chosen.push_back(static_cast<int>(i));
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    if (n > 0) recurse(recurse, 0);
    return result;
}

// Random feasible bounded LP: constraints are anchored on a known interior
// point and a global box keeps the polytope bounded.
inline lp::LpProblem random_lp(std::mt19937_64& rng) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int m = 2 + static_cast<int>(rng() % 5);
    lp::LpProblem p;
    p.sense = (rng() & 1) ? lp::Sense::Minimize : lp::Sense::Maximize;
    std::vector<double> anchor(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double ub = (rng() % 3 == 0) ? 2.5 + u01(rng) : lp::kInfinity;
        p.add_variable(-2.0 + 4.0 * u01(rng), 0.0, ub);
        anchor[static_cast<std::size_t>(j)] = u01(rng) * 2.0;
        if (ub != lp::kInfinity) anchor[static_cast<std::size_t>(j)] = std::min(anchor[static_cast<std::size_t>(j)], ub * 0.9);
    }
    for (int i = 0; i < m; ++i) {
        std::vector<double> a(static_cast<std::size_t>(n));
        double act = 0.0;
        for (int j = 0; j < n; ++j) {
            a[static_cast<std::size_t>(j)] = -2.0 + 4.0 * u01(rng);
            act += a[static_cast<std::size_t>(j)] * anchor[static_cast<std::size_t>(j)];
        }
        double roll = u01(rng);
        if (roll < 0.6)
            p.add_row(std::move(a), lp::Relation::LessEqual, act + u01(rng));
        else if (roll < 0.9)
            p.add_row(std::move(a), lp::Relation::GreaterEqual, act - u01(rng));
        else
            p.add_row(std::move(a), lp::Relation::Equal, act);
    }
    std::vector<double> box(static_cast<std::size_t>(n), 1.0);
    double total = 0.0;
    for (double v : anchor) total += v;
    p.add_row(std::move(box), lp::Relation::LessEqual, total + 5.0);
    return p;
}

// KKT re-check used by the LP and master tests (independent of the solver's
// internal verification code path).
inline void assert_kkt(const lp::LpProblem& p, const lp::LpSolution& sol, double tol = 1e-6) {
    const double flip = p.sense == lp::Sense::Minimize ? 1.0 : -1.0;
    double dual_value = 0.0;
    for (int i = 0; i < p.n_rows(); ++i) {
        const lp::LpRow& row = p.rows[static_cast<std::size_t>(i)];
        double act = 0.0;
        for (int j = 0; j < p.n_vars(); ++j)
            act += row.coeffs[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
        double y = flip * sol.duals[static_cast<std::size_t>(i)];
        double feas_tol = tol * (1.0 + std::fabs(row.rhs));
        if (row.rel == lp::Relation::LessEqual) {
            if (act > row.rhs + feas_tol) throw std::logic_error("kkt: primal infeasible (<=)");
            if (y > tol) throw std::logic_error("kkt: dual sign (<=)");
        } else if (row.rel == lp::Relation::GreaterEqual) {
            if (act < row.rhs - feas_tol) throw std::logic_error("kkt: primal infeasible (>=)");
            if (y < -tol) throw std::logic_error("kkt: dual sign (>=)");
        } else if (std::fabs(act - row.rhs) > feas_tol) {
            throw std::logic_error("kkt: primal infeasible (=)");
        }
        if (std::fabs(y * (act - row.rhs)) > tol * (1.0 + std::fabs(sol.objective)))
            throw std::logic_error("kkt: complementary slackness");
        dual_value += sol.duals[static_cast<std::size_t>(i)] * row.rhs;
    }
    for (int j = 0; j < p.n_vars(); ++j)
        dual_value += sol.reduced_costs[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
    if (std::fabs(sol.objective - dual_value) > tol * (1.0 + std::fabs(sol.objective)))
        throw std::logic_error("kkt: strong duality gap");
}

}  // namespace smallcell::testing
