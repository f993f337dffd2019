#pragma once

#include <Eigen/Dense>

namespace bell {

/// Dense LP in equality standard form:
///   minimize c^T x   subject to  A x = b,  x >= 0.
/// Callers encode free variables by splitting into positive/negative parts
/// and inequalities by explicit slack columns.
struct LpProblem {
    Eigen::VectorXd objective;  // c
    Eigen::MatrixXd eq_matrix;  // A
    Eigen::VectorXd eq_rhs;     // b
};

enum class LpStatus { optimal, infeasible, unbounded, stalled };

struct LpSolution {
    LpStatus status = LpStatus::stalled;
    double value = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd dual;        // row multipliers y with c^T x ~= y^T b
    double duality_gap = 0.0;    // |c^T x - y^T b| when optimal
    long iterations = 0;
};

/// Two-phase primal simplex with Bland's anti-cycling rule on a dense
/// tableau. Deterministic; meant for small problems (<= ~10^4 variables).
LpSolution lp_solve(const LpProblem& prob);

}  // namespace bell
