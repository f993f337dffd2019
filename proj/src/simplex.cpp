#include "bell/simplex.hpp"

#include "bell/config.hpp"

#include <cmath>
#include <stdexcept>

namespace bell {

namespace {

constexpr double kPivotEps = 1e-9;

}  // namespace

LpSolution lp_solve(const LpProblem& prob) {
    const Eigen::Index m = prob.eq_matrix.rows();
    const Eigen::Index n = prob.eq_matrix.cols();
    if (prob.objective.size() != n || prob.eq_rhs.size() != m)
        throw std::invalid_argument("lp_solve: inconsistent dimensions");
    if (!prob.objective.allFinite() || !prob.eq_matrix.allFinite() ||
        !prob.eq_rhs.allFinite())
        throw std::invalid_argument("lp_solve: non-finite input");

    LpSolution sol;
    sol.x = Eigen::VectorXd::Zero(n);
    sol.dual = Eigen::VectorXd::Zero(m);

    if (m == 0) {
        // No constraints: x = 0 unless some cost is negative.
        for (Eigen::Index j = 0; j < n; ++j) {
            if (prob.objective(j) < -kPivotEps) {
                sol.status = LpStatus::unbounded;
                return sol;
            }
        }
        sol.status = LpStatus::optimal;
        sol.value = 0.0;
        return sol;
    }

    // Tableau: columns [original | artificial | rhs]; rows + two cost rows
    // (phase 1, phase 2) stored at indices m and m+1, convention
    // row = [reduced costs | -value].
    const Eigen::Index cols = n + m + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 2, cols);
    Eigen::VectorXd row_sign = Eigen::VectorXd::Ones(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double s = prob.eq_rhs(i) < 0.0 ? -1.0 : 1.0;
        row_sign(i) = s;
        T.row(i).head(n) = s * prob.eq_matrix.row(i);
        T(i, n + i) = 1.0;
        T(i, cols - 1) = s * prob.eq_rhs(i);
    }
    // Phase-1 costs: artificials cost 1; zero their reduced costs against
    // the initial (artificial) basis by subtracting all constraint rows.
    for (Eigen::Index i = 0; i < m; ++i) T.row(m) -= T.row(i);
    for (Eigen::Index i = 0; i < m; ++i) T(m, n + i) = 0.0;
    // Phase-2 costs.
    T.row(m + 1).head(n) = prob.objective.transpose();

    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

    const long max_iter = 50000 + 200 * static_cast<long>(m + n);
    long iter = 0;

    auto pivot = [&](Eigen::Index r, Eigen::Index s) {
        T.row(r) /= T(r, s);
        for (Eigen::Index i = 0; i < m + 2; ++i) {
            if (i == r) continue;
            const double f = T(i, s);
            if (f != 0.0) T.row(i) -= f * T.row(r);
        }
        basis[static_cast<std::size_t>(r)] = s;
        ++iter;
    };

    // Bland's rule: entering = lowest-index column with negative reduced
    // cost, leaving = lowest basic index among minimum-ratio rows.
    auto run_phase = [&](Eigen::Index cost_row, Eigen::Index priced_cols) -> LpStatus {
        while (true) {
            if (iter > max_iter) return LpStatus::stalled;
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < priced_cols; ++j) {
                if (T(cost_row, j) < -kPivotEps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::optimal;
            Eigen::Index leave = -1;
            double best_ratio = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) {
                const double a = T(i, enter);
                if (a <= kPivotEps) continue;
                const double ratio = T(i, cols - 1) / a;
                if (leave < 0 || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     basis[static_cast<std::size_t>(i)] <
                         basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);
        }
    };

    // Phase 1: minimize the sum of artificials over all columns.
    LpStatus st = run_phase(m, n + m);
    if (st == LpStatus::stalled) {
        sol.status = st;
        sol.iterations = iter;
        return sol;
    }
    const double rhs_scale = std::max(1.0, prob.eq_rhs.cwiseAbs().maxCoeff());
    const double phase1_value = -T(m, cols - 1);
    if (phase1_value > tolerances().lp * rhs_scale) {
        sol.status = LpStatus::infeasible;
        sol.iterations = iter;
        return sol;
    }
    // Pivot artificials that remain basic (at zero) onto original columns
    // where possible; rows that cannot pivot are redundant and stay inert.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (basis[static_cast<std::size_t>(i)] < n) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(T(i, j)) > 1e-7) {
                pivot(i, j);
                break;
            }
        }
    }

    // Phase 2: price original columns only.
    st = run_phase(m + 1, n);
    sol.iterations = iter;
    if (st != LpStatus::optimal) {
        sol.status = st;
        return sol;
    }

    for (Eigen::Index i = 0; i < m; ++i) {
        if (basis[static_cast<std::size_t>(i)] < n)
            sol.x(basis[static_cast<std::size_t>(i)]) = T(i, cols - 1);
    }
    // Duals from the reduced costs of the artificial columns, flipped back
    // for rows that were negated.
    for (Eigen::Index i = 0; i < m; ++i)
        sol.dual(i) = -T(m + 1, n + i) * row_sign(i);
    sol.value = prob.objective.dot(sol.x);
    sol.duality_gap = std::abs(sol.value - sol.dual.dot(prob.eq_rhs));
    sol.status = LpStatus::optimal;
    return sol;
}

}  // namespace bell
