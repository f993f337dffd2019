#pragma once

#include <Eigen/Dense>

namespace bell {

/// J-norm on vectors: max(||a||_1, sqrt(s) ||a||_2, s ||a||_inf), s > 0.
double j_norm(const Eigen::VectorXd& a, double s);

/// K-norm on vectors:
///   k_norm(x, t) = inf over x = x1 + x2 + x3 of
///                  ||x1||_inf + sqrt(t) ||x2||_2 + t ||x3||_1,   t > 0.
/// Computed through the dual characterization
///   k_norm(x, t) = sup{ <x, a> : ||a||_1 <= 1, ||a||_2 <= sqrt(t),
///                       ||a||_inf <= t }
///                = sup{ <x, a> : j_norm(a, 1/t) <= 1 },
/// i.e. the dual ball is the unit ball of j_norm(. , 1/t); see
/// docs/knorm-duality.md for the derivation. The maximizer has the
/// water-filling form a_i = clamp((|x|_i - mu) / (2 nu), 0, t) and is found
/// by bisection on the multipliers (mu, nu); primal and dual values agree
/// within 1e-6.
///
/// If `maximizer` is non-null it receives the optimal dual vector a
/// (sign-matched to x).
double k_norm(const Eigen::VectorXd& x, double t,
              Eigen::VectorXd* maximizer = nullptr);

}  // namespace bell
