#pragma once

#include <Eigen/Dense>

namespace bell {

struct EigResult {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // orthonormal columns, vectors.col(i) <-> values(i)
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Requires max|A - A^T| <= 1e-12 * max(1, max|A|); throws otherwise.
/// Satisfies ||A v - lambda v|| <= 1e-9 ||A|| per pair.
EigResult sym_eig(const Eigen::MatrixXd& A);

struct SvdResult {
    Eigen::VectorXd singular_values;  // descending, length min(n, m)
    Eigen::MatrixXd U;                // n x min(n, m)
    Eigen::MatrixXd V;                // m x min(n, m)
};

/// Thin SVD with ||A - U S V^T|| <= 1e-8 ||A||.
SvdResult svd(const Eigen::MatrixXd& A);

}  // namespace bell
