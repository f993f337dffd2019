#pragma once

#include <stdexcept>
#include <string>

namespace bell {

/// Global numeric tolerances. Mutable in one place so the CLI can override
/// them; everything else reads through tolerances().
struct Tolerances {
    double norm = 1e-9;           // per-(x,y) normalization residual
    double nonsignalling = 1e-9;  // marginal variation residual
    double nonneg = 1e-12;        // allowed negativity of probabilities
    double lp = 1e-8;             // LP feasibility / duality gap
};

Tolerances& tolerances();

/// Thrown when an enumeration or tensor exceeds the configured budget.
/// The CLI maps this to exit code 2; callers may fall back to heuristics.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed or inconsistent input data (CLI exit code 3).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bell
