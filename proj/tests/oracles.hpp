#pragma once

// Test-only oracles, independent of the library implementation paths they
// cross-check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bell/rng.hpp"

namespace oracles {

// inf over cap c >= 0 of c + t * sum_i max(|y_i| - c, 0); piecewise linear
// in c, so the breakpoints {0, |y_i|} suffice.
inline double cap_plus_weighted_l1(const Eigen::VectorXd& y, double t) {
    std::vector<double> cand{0.0};
    for (int i = 0; i < y.size(); ++i) cand.push_back(std::abs(y(i)));
    double best = std::numeric_limits<double>::infinity();
    for (double c : cand) {
        double v = c;
        for (int i = 0; i < y.size(); ++i) v += t * std::max(std::abs(y(i)) - c, 0.0);
        best = std::min(best, v);
    }
    return best;
}

// Brute-force primal splitting search for the K-norm: grid over the l2 part
// x2 (restricted to the signed box [0, x_i], which contains an optimum),
// with the remaining inf-convolution in closed form, then coordinate-wise
// ternary refinement of the convex objective.
inline double k_norm_bruteforce(const Eigen::VectorXd& x, double t) {
    const int m = static_cast<int>(x.size());
    auto objective = [&](const Eigen::VectorXd& x2) {
        return std::sqrt(t) * x2.norm() + cap_plus_weighted_l1(x - x2, t);
    };
    Eigen::VectorXd best_x2 = Eigen::VectorXd::Zero(m);
    double best = objective(best_x2);
    const int grid = 12;
    std::vector<int> digit(static_cast<std::size_t>(m), 0);
    while (true) {
        Eigen::VectorXd x2(m);
        for (int i = 0; i < m; ++i)
            x2(i) = x(i) * digit[static_cast<std::size_t>(i)] / grid;
        const double v = objective(x2);
        if (v < best) {
            best = v;
            best_x2 = x2;
        }
        int pos = m - 1;
        while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] > grid) {
            digit[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    // Coordinate refinement.
    for (int round = 0; round < 60; ++round) {
        for (int i = 0; i < m; ++i) {
            double lo = std::min(0.0, x(i));
            double hi = std::max(0.0, x(i));
            for (int it = 0; it < 80; ++it) {
                const double a = lo + (hi - lo) / 3.0;
                const double b = hi - (hi - lo) / 3.0;
                Eigen::VectorXd xa = best_x2, xb = best_x2;
                xa(i) = a;
                xb(i) = b;
                if (objective(xa) < objective(xb))
                    hi = b;
                else
                    lo = a;
            }
            best_x2(i) = 0.5 * (lo + hi);
        }
    }
    return std::min(best, objective(best_x2));
}

// CHSH-type quantum value from projective qubit measurements at given
// angles on the maximally entangled state: an oracle for the see-saw.
// Measurement vectors: |v(theta)> = (cos th, sin th), outcome 0 projector
// v v^T. P(ab|xy) from |phi+> = (|00> + |11>)/sqrt(2).
inline double chsh_value_at_angles(double a0, double a1, double b0, double b1) {
    auto corr = [](double ta, double tb) {
        // <A B> with A = P0 - P1 at angle ta, B likewise; on |phi+> this is
        // cos(2(ta - tb)).
        return std::cos(2.0 * (ta - tb));
    };
    return corr(a0, b0) + corr(a0, b1) + corr(a1, b0) - corr(a1, b1);
}

}  // namespace oracles
