#include "bell/eig.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bell {

EigResult sym_eig(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("sym_eig: matrix not square");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("sym_eig: matrix not symmetric");

    Eigen::MatrixXd B = 0.5 * (A + A.transpose());
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);

    // Cyclic Jacobi sweeps until the off-diagonal mass is negligible.
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += B(p, q) * B(p, q);
        if (std::sqrt(2.0 * off) <= 1e-15 * std::max(1.0, B.norm())) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = B(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = B(p, p);
                const double aqq = B(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double tau =
                    sign / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + tau * tau);
                const double s = tau * c;
                // B <- J^T B J with the Givens rotation J in the (p,q) plane.
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double bip = B(i, p), biq = B(i, q);
                    B(i, p) = c * bip - s * biq;
                    B(i, q) = s * bip + c * biq;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double bpi = B(p, i), bqi = B(q, i);
                    B(p, i) = c * bpi - s * bqi;
                    B(q, i) = s * bpi + c * bqi;
                }
                B(p, q) = 0.0;
                B(q, p) = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return B(a, a) > B(b, b); });

    EigResult out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = B(order[i], order[i]);
        out.vectors.col(i) = V.col(order[i]);
    }
    return out;
}

SvdResult svd(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(
        A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out;
    out.singular_values = solver.singularValues();
    out.U = solver.matrixU();
    out.V = solver.matrixV();
    return out;
}

}  // namespace bell
