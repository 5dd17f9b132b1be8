#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gamefit {

struct VariableBounds {
    double lower;  // -inf allowed
    double upper;  // +inf allowed
};

/// Dense LP in standard inequality/equality form:
///   minimize    objective . x
///   subject to  ineq_matrix x <= ineq_bounds
///               eq_matrix   x  = eq_values
///               var_bounds (optional, per variable)
struct StandardLP {
    Eigen::VectorXd objective;
    Eigen::MatrixXd ineq_matrix;   // may have zero rows
    Eigen::VectorXd ineq_bounds;
    Eigen::MatrixXd eq_matrix;     // may have zero rows
    Eigen::VectorXd eq_values;
    std::vector<VariableBounds> var_bounds;  // empty = all variables free

    int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;           // valid when Optimal
    double objective_value = 0;  // valid when Optimal
    std::vector<int> active_set;  // tight rows of ineq_matrix, ascending
};

struct SimplexOptions {
    double feasibility_tol = 1e-9;
    double reduced_cost_tol = 1e-9;
    long max_pivots = 200000;
};

/// Two-phase primal simplex with Bland's anti-cycling rule. The problems
/// this library produces have few variables and many rows, so the tableau
/// is built for the dual; the primal vertex is recovered from the optimal
/// basis multipliers and verified against the primal constraints.
/// Deterministic: identical input yields bit-identical output.
LpSolution solve_lp(const StandardLP& lp, const SimplexOptions& options = {});

/// Phase-1 probe: does {x : ineq x <= bounds, eq x = values} have a point?
/// An empty constraint system is feasible. Writes a witness when asked.
bool check_feasible(const Eigen::MatrixXd& ineq, const Eigen::VectorXd& bounds,
                    const Eigen::MatrixXd& eq, const Eigen::VectorXd& values,
                    const SimplexOptions& options = {}, Eigen::VectorXd* witness = nullptr);
bool check_feasible(const Eigen::MatrixXd& ineq, const Eigen::VectorXd& bounds,
                    const SimplexOptions& options = {}, Eigen::VectorXd* witness = nullptr);

/// Fixed-layout plain-text rendering for debugging:
///   minimize <c...> / subject to rows "a1 a2 ... <= b" / "e1 e2 ... == f" /
///   per-variable "lo <= x_j <= hi".
std::string dump_lp(const StandardLP& lp);

}  // namespace gamefit
