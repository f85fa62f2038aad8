// Dense LP solver: bounded-variable two-phase primal simplex with exact dual
// prices. Deterministic pivoting (largest-violation with a Bland fallback
// after degenerate streaks), power-of-two row equilibration, and an
// incremental interface (append columns, swap objective) for column
// generation. Every Optimal result is re-verified against the original
// problem data; a result that fails verification is re-solved from scratch
// under Bland's rule and, failing that, reported as a SolverError rather
// than a wrong Optimal.
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smallcell::lp {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual, Equal };

struct LpRow {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

struct LpProblem {
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<double> lower;   // default 0
    std::vector<double> upper;   // default +infinity
    std::vector<LpRow> rows;

    int n_vars() const { return static_cast<int>(objective.size()); }
    int n_rows() const { return static_cast<int>(rows.size()); }
    int add_variable(double obj, double lb = 0.0, double ub = kInfinity);
    void add_row(std::vector<double> coeffs, Relation rel, double rhs);
    std::string to_text() const;  // human-readable dump for external cross-checks
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Dual sign convention: for a Minimize problem, duals are >= 0 on
// GreaterEqual rows, <= 0 on LessEqual rows, and free on Equal rows; for
// Maximize the signs flip. At an Optimal solution,
//   objective == sum_i duals[i]*rhs[i] + sum_j reduced_costs[j]*primal[j].
struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    double objective = 0.0;
    std::vector<double> primal;
    std::vector<double> duals;
    std::vector<double> reduced_costs;
};

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class LpSolver {
  public:
    explicit LpSolver(LpProblem problem);

    LpSolution solve();

    // Appends a structural variable with the given sparse column; the current
    // basis stays feasible (the variable enters nonbasic at its lower bound).
    // Only valid after a successful solve.
    int add_variable(double obj, const std::vector<std::pair<int, double>>& entries,
                     double lb = 0.0, double ub = kInfinity);

    // Replaces the objective, keeping the basis for a warm re-solve.
    void set_objective(std::vector<double> objective);

    const LpProblem& problem() const { return problem_; }

  private:
    enum class VarState : std::uint8_t { AtLower, AtUpper, Basic };
    enum class StepResult : std::uint8_t { Optimal, Unbounded, NeedsRestart };

    void build_tableau();
    void compute_costs(bool phase_one);
    void recompute_zeta();
    bool phase_one_feasible();
    void drive_out_artificials();
    StepResult run_simplex(bool phase_one);
    int choose_entering() const;
    double col_value(int c) const;
    LpStatus optimize_from_tableau();
    LpSolution extract() const;
    const char* verify(const LpSolution& solution) const;  // nullptr when clean
    bool refactorize();

    LpProblem problem_;
    bool built_ = false;
    bool force_bland_ = false;
    bool have_optimal_basis_ = false;

    int m_ = 0;
    int ncols_ = 0;
    std::vector<double> row_scale_;
    std::vector<double> col_scale_;  // per tableau column; slacks/artificials at 1
    std::vector<std::vector<double>> tab_;  // m rows, ncols columns
    std::vector<double> xb_;                // basic variable values
    std::vector<int> basis_;                // column basic in each row
    std::vector<int> row_of_;               // row index per column, -1 if nonbasic
    std::vector<VarState> state_;
    std::vector<double> col_lb_, col_ub_;
    std::vector<double> cost_;              // canonical (minimize) costs, current phase
    std::vector<double> zeta_;              // reduced costs per column
    std::vector<int> struct_col_, slack_col_;
    std::vector<std::uint8_t> is_artificial_;
    std::vector<int> artificial_row_;     // defining row per column (-1 if none)
    std::vector<double> artificial_sign_;
    bool need_phase_one_ = false;
    bool bland_mode_ = false;
    long pivots_since_refresh_ = 0;
    double window_progress_ = 0.0;
};

LpSolution solve_lp(const LpProblem& problem);

}  // namespace smallcell::lp
