#include "smallcell/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace smallcell::lp {
namespace {

constexpr double kCoefZero = 1e-11;  // tableau entries below this count as zero
constexpr double kFeasTol = 1e-9;    // phase-1 residual tolerance (scaled rows)
constexpr int kProgressWindow = 64;  // pivots per stall check

double power_of_two_scale(double max_abs) {
    if (max_abs <= 0.0 || !std::isfinite(max_abs)) return 1.0;
    return std::exp2(std::round(std::log2(max_abs)));
}

}  // namespace

int LpProblem::add_variable(double obj, double lb, double ub) {
    objective.push_back(obj);
    lower.push_back(lb);
    upper.push_back(ub);
    for (LpRow& row : rows) row.coeffs.push_back(0.0);
    return n_vars() - 1;
}

void LpProblem::add_row(std::vector<double> coeffs, Relation rel, double rhs) {
    if (static_cast<int>(coeffs.size()) != n_vars())
        throw std::invalid_argument("row length does not match variable count");
    rows.push_back({std::move(coeffs), rel, rhs});
}

std::string LpProblem::to_text() const {
    std::string out = sense == Sense::Minimize ? "min:" : "max:";
    char buf[64];
    for (int j = 0; j < n_vars(); ++j) {
        if (objective[static_cast<std::size_t>(j)] == 0.0) continue;
        std::snprintf(buf, sizeof(buf), " %+.12g x%d", objective[static_cast<std::size_t>(j)], j);
        out += buf;
    }
    out += ";\n";
    for (int i = 0; i < n_rows(); ++i) {
        const LpRow& row = rows[static_cast<std::size_t>(i)];
        std::snprintf(buf, sizeof(buf), "r%d:", i);
        out += buf;
        for (int j = 0; j < n_vars(); ++j) {
            if (row.coeffs[static_cast<std::size_t>(j)] == 0.0) continue;
            std::snprintf(buf, sizeof(buf), " %+.12g x%d", row.coeffs[static_cast<std::size_t>(j)], j);
            out += buf;
        }
        const char* rel = row.rel == Relation::LessEqual ? "<=" : row.rel == Relation::GreaterEqual ? ">=" : "=";
        std::snprintf(buf, sizeof(buf), " %s %.12g;\n", rel, row.rhs);
        out += buf;
    }
    for (int j = 0; j < n_vars(); ++j) {
        std::snprintf(buf, sizeof(buf), "x%d in [%.12g, %.12g];\n", j,
                      lower[static_cast<std::size_t>(j)], upper[static_cast<std::size_t>(j)]);
        out += buf;
    }
    return out;
}

LpSolver::LpSolver(LpProblem problem) : problem_(std::move(problem)) {
    for (int j = 0; j < problem_.n_vars(); ++j) {
        double lb = problem_.lower[static_cast<std::size_t>(j)];
        double ub = problem_.upper[static_cast<std::size_t>(j)];
        if (!std::isfinite(lb)) throw std::invalid_argument("structural lower bounds must be finite");
        if (lb > ub) throw std::invalid_argument("variable lower bound exceeds upper bound");
    }
    for (const LpRow& row : problem_.rows) {
        if (static_cast<int>(row.coeffs.size()) != problem_.n_vars())
            throw std::invalid_argument("row length does not match variable count");
        for (double a : row.coeffs)
            if (!std::isfinite(a)) throw std::invalid_argument("row coefficients must be finite");
        if (!std::isfinite(row.rhs)) throw std::invalid_argument("row rhs must be finite");
    }
}

double LpSolver::col_value(int c) const {
    switch (state_[static_cast<std::size_t>(c)]) {
        case VarState::Basic: return xb_[static_cast<std::size_t>(row_of_[static_cast<std::size_t>(c)])];
        case VarState::AtLower: return col_lb_[static_cast<std::size_t>(c)];
        case VarState::AtUpper: return col_ub_[static_cast<std::size_t>(c)];
    }
    return 0.0;
}

void LpSolver::build_tableau() {
    const int n = problem_.n_vars();
    m_ = problem_.n_rows();
    ncols_ = n + m_;

    // Row/column equilibration with exact powers of two: rows first, then
    // each structural column, so tableau magnitudes cluster near one.
    row_scale_.assign(static_cast<std::size_t>(m_), 1.0);
    for (int i = 0; i < m_; ++i) {
        double max_abs = 0.0;
        for (double a : problem_.rows[static_cast<std::size_t>(i)].coeffs) max_abs = std::max(max_abs, std::fabs(a));
        row_scale_[static_cast<std::size_t>(i)] = power_of_two_scale(max_abs);
    }
    col_scale_.assign(static_cast<std::size_t>(ncols_), 1.0);
    for (int j = 0; j < n; ++j) {
        double max_abs = 0.0;
        for (int i = 0; i < m_; ++i)
            max_abs = std::max(max_abs, std::fabs(problem_.rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(j)] /
                                                  row_scale_[static_cast<std::size_t>(i)]));
        col_scale_[static_cast<std::size_t>(j)] = 1.0 / power_of_two_scale(max_abs);
    }

    tab_.assign(static_cast<std::size_t>(m_), std::vector<double>(static_cast<std::size_t>(ncols_), 0.0));
    col_lb_.assign(static_cast<std::size_t>(ncols_), 0.0);
    col_ub_.assign(static_cast<std::size_t>(ncols_), kInfinity);
    state_.assign(static_cast<std::size_t>(ncols_), VarState::AtLower);
    is_artificial_.assign(static_cast<std::size_t>(ncols_), 0);
    artificial_row_.assign(static_cast<std::size_t>(ncols_), -1);
    artificial_sign_.assign(static_cast<std::size_t>(ncols_), 0.0);
    struct_col_.resize(static_cast<std::size_t>(n));
    slack_col_.resize(static_cast<std::size_t>(m_));
    basis_.assign(static_cast<std::size_t>(m_), -1);
    xb_.assign(static_cast<std::size_t>(m_), 0.0);
    row_of_.assign(static_cast<std::size_t>(ncols_), -1);

    // Internal variables are x' = x / col_scale with coefficient
    // a' = a * col_scale / row_scale; the exact power-of-two scales make the
    // transformations lossless.
    for (int j = 0; j < n; ++j) {
        struct_col_[static_cast<std::size_t>(j)] = j;
        double s = col_scale_[static_cast<std::size_t>(j)];
        col_lb_[static_cast<std::size_t>(j)] = problem_.lower[static_cast<std::size_t>(j)] / s;
        col_ub_[static_cast<std::size_t>(j)] = problem_.upper[static_cast<std::size_t>(j)] / s;
        for (int i = 0; i < m_; ++i)
            tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                problem_.rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(j)] * s /
                row_scale_[static_cast<std::size_t>(i)];
    }

    need_phase_one_ = false;
    for (int i = 0; i < m_; ++i) {
        const LpRow& row = problem_.rows[static_cast<std::size_t>(i)];
        int sc = n + i;
        slack_col_[static_cast<std::size_t>(i)] = sc;
        tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(sc)] = 1.0;
        switch (row.rel) {  // slack = rhs - activity
            case Relation::LessEqual:
                col_lb_[static_cast<std::size_t>(sc)] = 0.0;
                col_ub_[static_cast<std::size_t>(sc)] = kInfinity;
                break;
            case Relation::GreaterEqual:
                col_lb_[static_cast<std::size_t>(sc)] = -kInfinity;
                col_ub_[static_cast<std::size_t>(sc)] = 0.0;
                break;
            case Relation::Equal:
                col_lb_[static_cast<std::size_t>(sc)] = 0.0;
                col_ub_[static_cast<std::size_t>(sc)] = 0.0;
                break;
        }

        double activity = 0.0;
        for (int j = 0; j < n; ++j)
            activity += tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                        col_lb_[static_cast<std::size_t>(j)];
        double residual = row.rhs / row_scale_[static_cast<std::size_t>(i)] - activity;

        double slo = col_lb_[static_cast<std::size_t>(sc)];
        double shi = col_ub_[static_cast<std::size_t>(sc)];
        if (residual >= slo - kFeasTol && residual <= shi + kFeasTol) {
            basis_[static_cast<std::size_t>(i)] = sc;
            state_[static_cast<std::size_t>(sc)] = VarState::Basic;
            row_of_[static_cast<std::size_t>(sc)] = i;
            xb_[static_cast<std::size_t>(i)] = residual;
        } else {
            // Park the slack at its nearest bound and cover the gap with an
            // artificial that phase 1 drives to zero.
            double parked = residual < slo ? slo : shi;
            state_[static_cast<std::size_t>(sc)] = residual < slo ? VarState::AtLower : VarState::AtUpper;
            double gap = residual - parked;
            double sign = gap >= 0.0 ? 1.0 : -1.0;

            int ac = ncols_++;
            for (auto& r : tab_) r.push_back(0.0);
            tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(ac)] = sign;
            col_lb_.push_back(0.0);
            col_ub_.push_back(kInfinity);
            col_scale_.push_back(1.0);
            state_.push_back(VarState::Basic);
            is_artificial_.push_back(1);
            artificial_row_.push_back(i);
            artificial_sign_.push_back(sign);
            row_of_.push_back(i);
            basis_[static_cast<std::size_t>(i)] = ac;
            xb_[static_cast<std::size_t>(i)] = std::fabs(gap);
            if (sign < 0.0)  // keep a +1 pivot on the diagonal
                for (std::size_t c = 0; c < static_cast<std::size_t>(ncols_); ++c)
                    tab_[static_cast<std::size_t>(i)][c] = -tab_[static_cast<std::size_t>(i)][c];
            need_phase_one_ = true;
        }
    }
    built_ = true;
    bland_mode_ = force_bland_;
    pivots_since_refresh_ = 0;
}

void LpSolver::compute_costs(bool phase_one) {
    cost_.assign(static_cast<std::size_t>(ncols_), 0.0);
    if (phase_one) {
        for (int c = 0; c < ncols_; ++c)
            if (is_artificial_[static_cast<std::size_t>(c)]) cost_[static_cast<std::size_t>(c)] = 1.0;
    } else {
        double flip = problem_.sense == Sense::Minimize ? 1.0 : -1.0;
        for (int j = 0; j < problem_.n_vars(); ++j) {
            int c = struct_col_[static_cast<std::size_t>(j)];
            cost_[static_cast<std::size_t>(c)] = flip * problem_.objective[static_cast<std::size_t>(j)] *
                                                 col_scale_[static_cast<std::size_t>(c)];
        }
    }
}

// Rebuilds the tableau and basic values from the original problem data under
// the current basis (a full refactorization), clearing accumulated pivot
// drift. Returns false when the basis matrix is numerically singular.
bool LpSolver::refactorize() {
    if (m_ == 0) return true;
    const std::size_t width = static_cast<std::size_t>(m_ + ncols_ + 1);
    std::vector<int> col_struct(static_cast<std::size_t>(ncols_), -1);
    for (int j = 0; j < problem_.n_vars(); ++j)
        col_struct[static_cast<std::size_t>(struct_col_[static_cast<std::size_t>(j)])] = j;
    std::vector<int> col_slack(static_cast<std::size_t>(ncols_), -1);
    for (int i = 0; i < m_; ++i) col_slack[static_cast<std::size_t>(slack_col_[static_cast<std::size_t>(i)])] = i;

    auto raw = [&](int row, int col) -> double {
        if (int j = col_struct[static_cast<std::size_t>(col)]; j >= 0)
            return problem_.rows[static_cast<std::size_t>(row)].coeffs[static_cast<std::size_t>(j)] *
                   col_scale_[static_cast<std::size_t>(col)] / row_scale_[static_cast<std::size_t>(row)];
        if (int i = col_slack[static_cast<std::size_t>(col)]; i >= 0) return row == i ? 1.0 : 0.0;
        return artificial_row_[static_cast<std::size_t>(col)] == row ? artificial_sign_[static_cast<std::size_t>(col)] : 0.0;
    };

    // G = [B | A_all | b], reduced so the basis block becomes a permuted
    // identity; the pivot row chosen for basis column r becomes tableau row r.
    std::vector<std::vector<double>> g(static_cast<std::size_t>(m_), std::vector<double>(width, 0.0));
    for (int i = 0; i < m_; ++i) {
        for (int r = 0; r < m_; ++r) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] = raw(i, basis_[static_cast<std::size_t>(r)]);
        for (int c = 0; c < ncols_; ++c)
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(m_ + c)] = raw(i, c);
        g[static_cast<std::size_t>(i)][width - 1] =
            problem_.rows[static_cast<std::size_t>(i)].rhs / row_scale_[static_cast<std::size_t>(i)];
    }
    std::vector<int> pivot_row_of(static_cast<std::size_t>(m_), -1);
    std::vector<std::uint8_t> row_used(static_cast<std::size_t>(m_), 0);
    for (int r = 0; r < m_; ++r) {
        int pivot = -1;
        double best = 1e-10;
        for (int i = 0; i < m_; ++i) {
            if (row_used[static_cast<std::size_t>(i)]) continue;
            double v = std::fabs(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)]);
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (pivot < 0) return false;
        row_used[static_cast<std::size_t>(pivot)] = 1;
        pivot_row_of[static_cast<std::size_t>(r)] = pivot;
        std::vector<double>& prow = g[static_cast<std::size_t>(pivot)];
        double inv = 1.0 / prow[static_cast<std::size_t>(r)];
        for (double& v : prow) v *= inv;
        prow[static_cast<std::size_t>(r)] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == pivot) continue;
            double f = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
            if (f == 0.0) continue;
            std::vector<double>& row = g[static_cast<std::size_t>(i)];
            for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
            row[static_cast<std::size_t>(r)] = 0.0;
        }
    }

    for (int r = 0; r < m_; ++r) {
        const std::vector<double>& src = g[static_cast<std::size_t>(pivot_row_of[static_cast<std::size_t>(r)])];
        std::vector<double>& dst = tab_[static_cast<std::size_t>(r)];
        for (int c = 0; c < ncols_; ++c) dst[static_cast<std::size_t>(c)] = src[static_cast<std::size_t>(m_ + c)];
        double value = src[width - 1];
        for (int c = 0; c < ncols_; ++c) {
            if (state_[static_cast<std::size_t>(c)] == VarState::Basic) continue;
            double v = col_value(c);
            if (v != 0.0) value -= dst[static_cast<std::size_t>(c)] * v;
        }
        xb_[static_cast<std::size_t>(r)] = value;
    }
    for (int r = 0; r < m_; ++r) tab_[static_cast<std::size_t>(r)][static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = 1.0;
    pivots_since_refresh_ = 0;
    return true;
}

void LpSolver::recompute_zeta() {
    zeta_ = cost_;
    for (int i = 0; i < m_; ++i) {
        double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
        if (cb == 0.0) continue;
        const std::vector<double>& row = tab_[static_cast<std::size_t>(i)];
        for (int c = 0; c < ncols_; ++c) zeta_[static_cast<std::size_t>(c)] -= cb * row[static_cast<std::size_t>(c)];
    }
    for (int i = 0; i < m_; ++i) zeta_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 0.0;
}

int LpSolver::choose_entering() const {
    double obj_scale = 1.0;
    for (double c : cost_) obj_scale = std::max(obj_scale, std::fabs(c));
    const double eps = 1e-9 * obj_scale;

    int best = -1;
    double best_violation = 0.0;
    for (int c = 0; c < ncols_; ++c) {
        std::size_t ci = static_cast<std::size_t>(c);
        if (state_[ci] == VarState::Basic) continue;
        if (col_lb_[ci] == col_ub_[ci]) continue;  // fixed (includes locked artificials)
        double violation = state_[ci] == VarState::AtLower ? -zeta_[ci] : zeta_[ci];
        if (violation <= eps) continue;
        if (bland_mode_) return c;  // lowest index wins
        if (violation > best_violation) {
            best_violation = violation;
            best = c;
        }
    }
    return best;
}

LpSolver::StepResult LpSolver::run_simplex(bool phase_one) {
    const long budget = 20000L + 40L * (static_cast<long>(m_) + ncols_);
    // Bound how far pivot drift can accumulate. A refresh costs about m
    // pivots' worth of work, so very large instances amortize it over more
    // pivots.
    const long refresh_interval = m_ <= 1000 ? 64 : m_;
    long pivots = 0;
    bool budget_extended = false;
    int window = 0;
    window_progress_ = 0.0;
    double obj_scale = 1.0;
    for (double c : cost_) obj_scale = std::max(obj_scale, std::fabs(c));

    for (;;) {
        if (++pivots > budget) {
            // One refactorized retry under Bland's rule before giving up.
            if (budget_extended) throw SolverError("simplex pivot limit exceeded");
            budget_extended = true;
            pivots = 0;
            bland_mode_ = true;
            if (refactorize()) {
                compute_costs(phase_one);
                recompute_zeta();
            }
        }
        if (pivots_since_refresh_ >= refresh_interval) {
            if (refactorize()) {
                compute_costs(phase_one);
                recompute_zeta();
                // The refreshed basic values are the truth; if any sit beyond
                // their bounds, the run has lost primal feasibility and must
                // restart from a fresh basis.
                for (int i = 0; i < m_; ++i) {
                    int b = basis_[static_cast<std::size_t>(i)];
                    double v = xb_[static_cast<std::size_t>(i)];
                    double lb = col_lb_[static_cast<std::size_t>(b)];
                    double ub = col_ub_[static_cast<std::size_t>(b)];
                    if (v < lb - 1e-6 * (1.0 + std::fabs(lb)) ||
                        (ub != kInfinity && v > ub + 1e-6 * (1.0 + std::fabs(ub))))
                        return StepResult::NeedsRestart;
                }
            }
        }
        ++pivots_since_refresh_;
        int e = choose_entering();
        if (e < 0) return StepResult::Optimal;
        std::size_t ei = static_cast<std::size_t>(e);
        const double dir = state_[ei] == VarState::AtLower ? 1.0 : -1.0;

        // Harris two-pass ratio test: pass one finds the smallest step with
        // every blocking bound relaxed by a small value-space epsilon; pass
        // two picks the numerically largest pivot (lowest basic index under
        // Bland) among rows whose exact ratio fits under that relaxed
        // minimum. Bypassed rows overshoot by at most the epsilon per pivot,
        // and the periodic refactorization keeps that from accumulating.
        const double bound_step = col_ub_[ei] - col_lb_[ei];
        auto ratios = [&](int i, double coef, double& exact, double& relaxed) {
            double delta = dir * coef;  // basic value changes by -delta * t
            int b = basis_[static_cast<std::size_t>(i)];
            exact = relaxed = kInfinity;
            if (delta > 0.0) {
                double lb = col_lb_[static_cast<std::size_t>(b)];
                if (lb == -kInfinity) return;
                double eps = kFeasTol * (1.0 + std::fabs(lb));
                exact = (xb_[static_cast<std::size_t>(i)] - lb) / delta;
                relaxed = (xb_[static_cast<std::size_t>(i)] - lb + eps) / delta;
            } else {
                double ub = col_ub_[static_cast<std::size_t>(b)];
                if (ub == kInfinity) return;
                double eps = kFeasTol * (1.0 + std::fabs(ub));
                exact = (ub - xb_[static_cast<std::size_t>(i)]) / (-delta);
                relaxed = (ub - xb_[static_cast<std::size_t>(i)] + eps) / (-delta);
            }
            if (exact < 0.0) exact = 0.0;  // tolerate slight bound drift
            if (relaxed < 0.0) relaxed = 0.0;
        };

        double rows_min_relaxed = kInfinity;
        for (int i = 0; i < m_; ++i) {
            double coef = tab_[static_cast<std::size_t>(i)][ei];
            if (std::fabs(coef) <= kCoefZero) continue;
            double exact, relaxed;
            ratios(i, coef, exact, relaxed);
            rows_min_relaxed = std::min(rows_min_relaxed, relaxed);
        }

        if (!std::isfinite(rows_min_relaxed) && !std::isfinite(bound_step)) {
            if (phase_one) throw SolverError("phase 1 reported unbounded");
            return StepResult::Unbounded;
        }

        int leave_row = -1;
        double leave_pivot = 0.0;
        double t = bound_step;
        if (bound_step > rows_min_relaxed) {
            for (int i = 0; i < m_; ++i) {
                double coef = tab_[static_cast<std::size_t>(i)][ei];
                if (std::fabs(coef) <= kCoefZero) continue;
                double exact, relaxed;
                ratios(i, coef, exact, relaxed);
                if (exact > rows_min_relaxed) continue;
                bool better;
                if (leave_row < 0)
                    better = true;
                else if (bland_mode_)
                    better = basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave_row)];
                else
                    better = std::fabs(coef) > std::fabs(leave_pivot);
                if (better) {
                    leave_row = i;
                    leave_pivot = coef;
                    t = exact;  // the chosen row's variable lands exactly on its bound
                }
            }
        }

        // Stall control: judge progress by accumulated objective improvement
        // over a window of pivots; a stalled window refactorizes and engages
        // Bland's rule, a productive one may release it.
        const double violation = state_[ei] == VarState::AtLower ? -zeta_[ei] : zeta_[ei];
        window_progress_ += violation * std::min(t, 1e30);
        if (++window >= kProgressWindow) {
            if (window_progress_ <= 1e-10 * obj_scale) {
                if (refactorize()) {
                    compute_costs(phase_one);
                    recompute_zeta();
                    bland_mode_ = true;
                    window = 0;
                    window_progress_ = 0.0;
                    continue;  // re-price on clean numbers
                }
                bland_mode_ = true;
            } else if (!force_bland_ && !budget_extended) {
                bland_mode_ = false;
            }
            window = 0;
            window_progress_ = 0.0;
        }

        // Move the entering variable and update all basic values.
        double entering_value = (dir > 0.0 ? col_lb_[ei] : col_ub_[ei]) + dir * t;
        if (t != 0.0)
            for (int i = 0; i < m_; ++i) {
                double coef = tab_[static_cast<std::size_t>(i)][ei];
                if (coef != 0.0) xb_[static_cast<std::size_t>(i)] -= dir * t * coef;
            }

        if (leave_row < 0) {  // bound flip, basis unchanged
            state_[ei] = dir > 0.0 ? VarState::AtUpper : VarState::AtLower;
            continue;
        }

        std::size_t ri = static_cast<std::size_t>(leave_row);
        int leaving = basis_[ri];
        double delta = dir * leave_pivot;
        state_[static_cast<std::size_t>(leaving)] = delta > 0.0 ? VarState::AtLower : VarState::AtUpper;
        row_of_[static_cast<std::size_t>(leaving)] = -1;
        if (is_artificial_[static_cast<std::size_t>(leaving)]) {
            // Once out, an artificial never returns.
            col_lb_[static_cast<std::size_t>(leaving)] = 0.0;
            col_ub_[static_cast<std::size_t>(leaving)] = 0.0;
            state_[static_cast<std::size_t>(leaving)] = VarState::AtLower;
        }

        // Pivot: normalize the leaving row, eliminate the entering column.
        std::vector<double>& prow = tab_[ri];
        double inv = 1.0 / leave_pivot;
        for (double& v : prow) v *= inv;
        prow[ei] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == leave_row) continue;
            double f = tab_[static_cast<std::size_t>(i)][ei];
            if (std::fabs(f) <= 0.0) continue;
            std::vector<double>& row = tab_[static_cast<std::size_t>(i)];
            for (int c = 0; c < ncols_; ++c) row[static_cast<std::size_t>(c)] -= f * prow[static_cast<std::size_t>(c)];
            row[ei] = 0.0;
        }
        double zf = zeta_[ei];
        if (zf != 0.0) {
            for (int c = 0; c < ncols_; ++c) zeta_[static_cast<std::size_t>(c)] -= zf * prow[static_cast<std::size_t>(c)];
            zeta_[ei] = 0.0;
        }

        basis_[ri] = e;
        state_[ei] = VarState::Basic;
        row_of_[ei] = leave_row;
        xb_[ri] = entering_value;
    }
    throw SolverError("simplex pivot limit exceeded");
}

LpStatus LpSolver::optimize_from_tableau() {
    for (int attempt = 0;; ++attempt) {
        LpStatus status = LpStatus::Optimal;
        bool restart = false;
        if (need_phase_one_) {
            compute_costs(true);
            recompute_zeta();
            if (run_simplex(true) == StepResult::NeedsRestart) {
                restart = true;
            } else if (!phase_one_feasible()) {
                return LpStatus::Infeasible;
            } else {
                drive_out_artificials();
                need_phase_one_ = false;
            }
        }
        if (!restart) {
            compute_costs(false);
            recompute_zeta();
            StepResult r = run_simplex(false);
            if (r == StepResult::NeedsRestart)
                restart = true;
            else
                status = r == StepResult::Unbounded ? LpStatus::Unbounded : LpStatus::Optimal;
        }
        if (!restart) return status;
        if (attempt >= 2) throw SolverError("simplex lost primal feasibility repeatedly");
        built_ = false;
        build_tableau();
        bland_mode_ = true;  // restart cautiously
    }
}

bool LpSolver::phase_one_feasible() {
    {
        double infeasibility = 0.0;
        for (int i = 0; i < m_; ++i)
            if (is_artificial_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])])
                infeasibility += std::fabs(xb_[static_cast<std::size_t>(i)]);
        return infeasibility <= 1e-7;
    }
}

// Pivot remaining zero-valued artificials out where possible; a row with no
// eligible pivot is redundant and its artificial stays fixed at zero.
void LpSolver::drive_out_artificials() {
    {
        for (int i = 0; i < m_; ++i) {
            int b = basis_[static_cast<std::size_t>(i)];
            if (!is_artificial_[static_cast<std::size_t>(b)]) continue;
            for (int c = 0; c < ncols_; ++c) {
                if (is_artificial_[static_cast<std::size_t>(c)] || state_[static_cast<std::size_t>(c)] == VarState::Basic)
                    continue;
                if (col_lb_[static_cast<std::size_t>(c)] == col_ub_[static_cast<std::size_t>(c)]) continue;
                double coef = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
                if (std::fabs(coef) <= 1e-8) continue;
                std::vector<double>& prow = tab_[static_cast<std::size_t>(i)];
                double inv = 1.0 / coef;
                for (double& v : prow) v *= inv;
                prow[static_cast<std::size_t>(c)] = 1.0;
                for (int r = 0; r < m_; ++r) {
                    if (r == i) continue;
                    double f = tab_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                    if (f == 0.0) continue;
                    std::vector<double>& row = tab_[static_cast<std::size_t>(r)];
                    for (int cc = 0; cc < ncols_; ++cc)
                        row[static_cast<std::size_t>(cc)] -= f * prow[static_cast<std::size_t>(cc)];
                    row[static_cast<std::size_t>(c)] = 0.0;
                }
                row_of_[static_cast<std::size_t>(b)] = -1;
                state_[static_cast<std::size_t>(b)] = VarState::AtLower;
                col_lb_[static_cast<std::size_t>(b)] = col_ub_[static_cast<std::size_t>(b)] = 0.0;
                double v = col_value(c);
                basis_[static_cast<std::size_t>(i)] = c;
                state_[static_cast<std::size_t>(c)] = VarState::Basic;
                row_of_[static_cast<std::size_t>(c)] = i;
                xb_[static_cast<std::size_t>(i)] = v;
                break;
            }
            if (is_artificial_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])]) {
                int b2 = basis_[static_cast<std::size_t>(i)];
                col_lb_[static_cast<std::size_t>(b2)] = col_ub_[static_cast<std::size_t>(b2)] = 0.0;
                xb_[static_cast<std::size_t>(i)] = 0.0;
            }
        }
    }
}

LpSolution LpSolver::extract() const {
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    const int n = problem_.n_vars();
    sol.primal.resize(static_cast<std::size_t>(n));
    sol.reduced_costs.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        int c = struct_col_[static_cast<std::size_t>(j)];
        sol.primal[static_cast<std::size_t>(j)] = col_value(c) * col_scale_[static_cast<std::size_t>(c)];
        sol.reduced_costs[static_cast<std::size_t>(j)] =
            zeta_[static_cast<std::size_t>(c)] / col_scale_[static_cast<std::size_t>(c)];
    }
    sol.duals.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i)
        sol.duals[static_cast<std::size_t>(i)] =
            -zeta_[static_cast<std::size_t>(slack_col_[static_cast<std::size_t>(i)])] /
            row_scale_[static_cast<std::size_t>(i)];
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += problem_.objective[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
    sol.objective = obj;
    if (problem_.sense == Sense::Maximize) {
        for (double& y : sol.duals) y = -y;
        for (double& rc : sol.reduced_costs) rc = -rc;
    }
    return sol;
}

// Independent verification against the original (unscaled) problem data.
// Returns the violated condition's name, or nullptr when the solution
// passes; any violation makes the caller re-solve from scratch.
const char* LpSolver::verify(const LpSolution& sol) const {
    const int n = problem_.n_vars();
    const double flip = problem_.sense == Sense::Minimize ? 1.0 : -1.0;
    double cost_scale = 1.0;
    for (double c : problem_.objective) cost_scale = std::max(cost_scale, std::fabs(c));
    const double rc_tol = 1e-6 * cost_scale;

    for (int j = 0; j < n; ++j) {
        double x = sol.primal[static_cast<std::size_t>(j)];
        double lb = problem_.lower[static_cast<std::size_t>(j)];
        double ub = problem_.upper[static_cast<std::size_t>(j)];
        if (x < lb - 1e-7 * (1.0 + std::fabs(lb)) ||
            (ub != kInfinity && x > ub + 1e-7 * (1.0 + std::fabs(ub)))) {
            if (std::getenv("SMALLCELL_LP_DEBUG"))
                std::fprintf(stderr, "lp verify: var %d value %.6e outside [%.3e, %.3e], state %d\n", j, x,
                             lb, ub, static_cast<int>(state_[static_cast<std::size_t>(struct_col_[static_cast<std::size_t>(j)])]));
            return "bound violation";
        }
        // Canonical-min KKT: rc > 0 forces x to the lower bound, rc < 0 to the upper.
        double rc = flip * sol.reduced_costs[static_cast<std::size_t>(j)];
        if (rc > rc_tol && std::fabs(x - lb) > 1e-6 * (1.0 + std::fabs(lb))) return "reduced-cost sign";
        if (rc < -rc_tol && (ub == kInfinity || std::fabs(x - ub) > 1e-6 * (1.0 + std::fabs(ub))))
            return "reduced-cost sign";
    }

    double dual_value = 0.0;
    for (int i = 0; i < m_; ++i) {
        const LpRow& row = problem_.rows[static_cast<std::size_t>(i)];
        double act = 0.0, mag = 0.0;
        for (int j = 0; j < n; ++j) {
            double term = row.coeffs[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
            act += term;
            mag = std::max(mag, std::fabs(term));
        }
        double tol = 1e-7 * (1.0 + std::fabs(row.rhs) + mag);
        double y = flip * sol.duals[static_cast<std::size_t>(i)];
        double violation = 0.0;
        switch (row.rel) {
            case Relation::LessEqual: violation = act - row.rhs; break;
            case Relation::GreaterEqual: violation = row.rhs - act; break;
            case Relation::Equal: violation = std::fabs(act - row.rhs); break;
        }
        if (violation > tol) {
            if (std::getenv("SMALLCELL_LP_DEBUG"))
                std::fprintf(stderr, "lp verify: row %d violated by %.3e (tol %.3e, rhs %.3e, mag %.3e)\n",
                             i, violation, tol, row.rhs, mag);
            return "row feasibility";
        }
        if (row.rel == Relation::LessEqual && y > 1e-7 * (1.0 + std::fabs(y))) return "dual sign";
        if (row.rel == Relation::GreaterEqual && y < -1e-7 * (1.0 + std::fabs(y))) return "dual sign";
        // Complementary slackness.
        if (std::fabs(y * (act - row.rhs)) > 1e-6 * (1.0 + std::fabs(flip * sol.objective))) {
            if (std::getenv("SMALLCELL_LP_DEBUG")) {
                int sc = slack_col_[static_cast<std::size_t>(i)];
                std::fprintf(stderr,
                             "lp verify: row %d CS %.3e (y %.3e, slack %.3e, obj %.3e, state %d, sval %.3e)\n",
                             i, std::fabs(y * (act - row.rhs)), y, act - row.rhs, sol.objective,
                             static_cast<int>(state_[static_cast<std::size_t>(sc)]), col_value(sc));
            }
            return "complementary slackness";
        }
        dual_value += sol.duals[static_cast<std::size_t>(i)] * row.rhs;
    }

    // Reduced costs must match c - A'y on the original data.
    for (int j = 0; j < n; ++j) {
        double rc = problem_.objective[static_cast<std::size_t>(j)];
        for (int i = 0; i < m_; ++i)
            rc -= sol.duals[static_cast<std::size_t>(i)] *
                  problem_.rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(j)];
        if (std::fabs(rc - sol.reduced_costs[static_cast<std::size_t>(j)]) > 1e-6 * (1.0 + std::fabs(rc)))
            return "reduced-cost consistency";
        dual_value += sol.reduced_costs[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
    }

    // Strong duality: objective == y'b + rc'x.
    if (std::fabs(sol.objective - dual_value) > 1e-6 * (1.0 + std::fabs(sol.objective)))
        return "strong duality";
    return nullptr;
}

LpSolution LpSolver::solve() {
    bool fresh = !built_;
    if (!built_) build_tableau();
    LpStatus status = optimize_from_tableau();
    if (status == LpStatus::Unbounded && !fresh) {
        // A drifted warm tableau can fake an unbounded ray; rebuild from the
        // original data before believing it.
        built_ = false;
        build_tableau();
        status = optimize_from_tableau();
    }
    if (status != LpStatus::Optimal) {
        have_optimal_basis_ = false;
        LpSolution sol;
        sol.status = status;
        return sol;
    }
    LpSolution sol = extract();
    const char* why = verify(sol);
    if (why && refactorize()) {
        // Recompute the tableau and basic values from the original data under
        // the current basis, confirm optimality on clean numbers, re-extract.
        compute_costs(false);
        recompute_zeta();
        if (run_simplex(false) == StepResult::Optimal) {
            sol = extract();
            why = verify(sol);
        }
    }
    if (why) {
        if (!force_bland_) {
            // One deterministic retry from scratch under Bland's rule.
            force_bland_ = true;
            built_ = false;
            LpSolution retry = solve();
            force_bland_ = false;
            return retry;
        }
        throw SolverError(std::string("optimal solution failed verification: ") + why);
    }
    have_optimal_basis_ = true;
    return sol;
}

int LpSolver::add_variable(double obj, const std::vector<std::pair<int, double>>& entries,
                           double lb, double ub) {
    if (!std::isfinite(lb)) throw std::invalid_argument("new variable needs a finite lower bound");
    int j = problem_.add_variable(obj, lb, ub);
    for (const auto& [row, coeff] : entries) {
        if (row < 0 || row >= problem_.n_rows()) throw std::invalid_argument("column entry row out of range");
        problem_.rows[static_cast<std::size_t>(row)].coeffs[static_cast<std::size_t>(j)] = coeff;
    }
    if (!built_) return j;
    if (!have_optimal_basis_) throw SolverError("add_variable requires a solved tableau");

    double max_abs = 0.0;
    for (const auto& [row, coeff] : entries)
        max_abs = std::max(max_abs, std::fabs(coeff / row_scale_[static_cast<std::size_t>(row)]));
    const double s = 1.0 / power_of_two_scale(max_abs);

    // New tableau column is B^-1 a, assembled from the slack columns (they
    // hold B^-1 for +1 slacks).
    std::vector<double> col(static_cast<std::size_t>(m_), 0.0);
    for (const auto& [row, coeff] : entries) {
        double scaled = coeff * s / row_scale_[static_cast<std::size_t>(row)];
        if (scaled == 0.0) continue;
        int sc = slack_col_[static_cast<std::size_t>(row)];
        for (int i = 0; i < m_; ++i)
            col[static_cast<std::size_t>(i)] += scaled * tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(sc)];
    }
    int c = ncols_++;
    for (int i = 0; i < m_; ++i) tab_[static_cast<std::size_t>(i)].push_back(col[static_cast<std::size_t>(i)]);
    col_lb_.push_back(lb / s);
    col_ub_.push_back(ub / s);
    col_scale_.push_back(s);
    state_.push_back(VarState::AtLower);
    is_artificial_.push_back(0);
    artificial_row_.push_back(-1);
    artificial_sign_.push_back(0.0);
    row_of_.push_back(-1);
    struct_col_.push_back(c);
    double flip = problem_.sense == Sense::Minimize ? 1.0 : -1.0;
    cost_.push_back(flip * obj * s);
    double z = flip * obj * s;
    for (int i = 0; i < m_; ++i) {
        double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
        if (cb != 0.0) z -= cb * col[static_cast<std::size_t>(i)];
    }
    zeta_.push_back(z);

    if (lb != 0.0)  // entering at a nonzero bound shifts the basic values
        for (int i = 0; i < m_; ++i)
            if (col[static_cast<std::size_t>(i)] != 0.0)
                xb_[static_cast<std::size_t>(i)] -= col[static_cast<std::size_t>(i)] * (lb / s);
    return j;
}

void LpSolver::set_objective(std::vector<double> objective) {
    if (static_cast<int>(objective.size()) != problem_.n_vars())
        throw std::invalid_argument("objective length does not match variable count");
    problem_.objective = std::move(objective);
    // zeta is recomputed at the next solve.
}

LpSolution solve_lp(const LpProblem& problem) {
    LpSolver solver(problem);
    return solver.solve();
}

}  // namespace smallcell::lp
