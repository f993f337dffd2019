#include "bell/catalog.hpp"

#include <cmath>

namespace bell {

BellFunctional chsh_functional() {
    Scenario scen{2, 2, false};
    BellFunctional M{scen, Tensor4(scen)};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    M.m.at(x, y, a, b) = ((a + b + x * y) % 2 == 0) ? 1.0 : -1.0;
    return M;
}

Behavior tsirelson_behavior() {
    Scenario scen{2, 2, false};
    Behavior P{scen, Tensor4(scen), Provenance::quantum};
    const double c = 1.0 / std::sqrt(2.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double corr = ((a + b + x * y) % 2 == 0) ? c : -c;
                    P.p.at(x, y, a, b) = 0.25 * (1.0 + corr);
                }
    return P;
}

Behavior pr_box_behavior() {
    Scenario scen{2, 2, false};
    Behavior P{scen, Tensor4(scen), Provenance::nonsignalling_raw};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    P.p.at(x, y, a, b) = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
    return P;
}

Behavior random_ns_behavior(RngStream& stream, double max_pr_weight) {
    Scenario scen{2, 2, false};
    const double w_pr = max_pr_weight * stream.uniform();
    // Convex weights over the 16 deterministic points.
    double weights[16];
    double total = 0.0;
    for (double& w : weights) {
        w = stream.uniform();
        total += w;
    }
    Behavior P{scen, Tensor4(scen), Provenance::nonsignalling_raw};
    const Behavior pr = pr_box_behavior();
    for (std::size_t i = 0; i < P.p.flat().size(); ++i)
        P.p.flat()[i] = w_pr * pr.p.flat()[i];
    int idx = 0;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1) {
                    const double w = (1.0 - w_pr) * weights[idx++] / total;
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y)
                            P.p.at(x, y, x == 0 ? a0 : a1, y == 0 ? b0 : b1) += w;
                }
    return P;
}

}  // namespace bell
