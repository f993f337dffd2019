#pragma once

#include <string>

namespace bell {

/// Common result envelope for bound computations. `certificate` is "exact"
/// when the value is provably optimal and "lower_bound" when it came from a
/// heuristic or restart-limited search.
struct SolveReport {
    double value = 0.0;
    std::string certificate = "exact";
    long iterations = 0;
    double residual = 0.0;
};

}  // namespace bell
