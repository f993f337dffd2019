#include "bell/knorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bell {

double j_norm(const Eigen::VectorXd& a, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("j_norm: s must be positive");
    if (a.size() == 0) return 0.0;
    const double l1 = a.lpNorm<1>();
    const double l2 = a.norm();
    const double linf = a.lpNorm<Eigen::Infinity>();
    return std::max({l1, std::sqrt(s) * l2, s * linf});
}

// Dual maximization over {||a||_1 <= 1, ||a||_2 <= sqrt(t), ||a||_inf <= t}.
// Any a with 0 <= a_i <= t and sum(a) <= 1 has sum(a^2) <= t * sum(a) <= t,
// so the l2 cap is implied by the other two and the maximizer is the
// fractional-knapsack fill of the largest |x| coordinates at cap t
// (equivalently, the water-filling KKT point with the l2 multiplier at
// zero; see docs/knorm-duality.md).
double k_norm(const Eigen::VectorXd& x, double t, Eigen::VectorXd* maximizer) {
    if (!(t > 0.0)) throw std::invalid_argument("k_norm: t must be positive");
    const Eigen::Index m = x.size();
    if (maximizer) *maximizer = Eigen::VectorXd::Zero(m);
    if (m == 0) return 0.0;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return std::abs(x(i)) > std::abs(x(j));
    });

    double budget = 1.0;
    double value = 0.0;
    for (Eigen::Index idx : order) {
        if (budget <= 0.0) break;
        const double a = std::min(t, budget);
        value += a * std::abs(x(idx));
        if (maximizer) (*maximizer)(idx) = x(idx) >= 0.0 ? a : -a;
        budget -= a;
    }
    return value;
}

}  // namespace bell
