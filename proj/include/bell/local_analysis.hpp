#pragma once

#include <functional>
#include <vector>

#include "bell/model.hpp"
#include "bell/report.hpp"
#include "bell/rng.hpp"

namespace bell {

inline constexpr long kDefaultBudget = 10'000'000;

/// Number of one-party deterministic strategies: K'^N unsigned, (2K')^N
/// signed, as a double so oversized counts stay representable.
double strategy_count(const Scenario& scen, bool signed_strategies);

/// Visits every one-party strategy in lexicographic order. Unsigned
/// strategies carry sign +1 everywhere. Throws BudgetError when the count
/// exceeds `budget`.
void for_each_strategy(const Scenario& scen, bool signed_strategies, long budget,
                       const std::function<void(const SignedStrategy&)>& visit);

std::vector<SignedStrategy> enumerate_deterministic(const Scenario& scen,
                                                    bool signed_strategies,
                                                    long budget = kDefaultBudget);

enum class BoundMode { exact, heuristic, automatic };

struct ClassicalOptions {
    BoundMode mode = BoundMode::automatic;
    long budget = kDefaultBudget;
    int restarts = 20;          // heuristic multistarts
    RngStream rng{};
    int jobs = 1;               // workers over the enumeration index range
};

/// Classical bound B_C(M) = sup{ |<M,P>| : P incomplete classical }.
/// The optimum is attained on products of one-party extreme points, where
/// each input either produces one output with weight 1 or nothing at all;
/// `alice_choice`/`bob_choice` record that optimum (-1 = no output) and
/// `sign` tells whether it maximizes <M,.> (+1) or <-M,.> (-1).
struct ClassicalBoundResult {
    SolveReport report;
    std::vector<int> alice_choice;
    std::vector<int> bob_choice;
    int sign = 1;
};

/// Exact mode enumerates Bob's (K'+1)^N output-or-nothing options with the
/// closed-form greedy Alice response sum_x max(0, max_a S[x][a]); heuristic
/// mode runs alternating best-response ascent from random starts and is
/// certified "lower_bound" only.
ClassicalBoundResult classical_bound(const BellFunctional& M,
                                     const ClassicalOptions& opts = {});

/// Product sup over signed one-party strategies,
///   sup{ <M, P x Q> : sum_a |P(x,a)| <= 1, sum_b |Q(y,b)| <= 1 },
/// the epsilon-norm of M as a tensor. Satisfies
/// B_C(M) <= epsilon_norm(M) <= 4 B_C(M). Exact enumeration over (2K')^N
/// Bob strategies; throws BudgetError when oversized.
double epsilon_norm(const BellFunctional& M, long budget = kDefaultBudget);

struct NuResult {
    SolveReport report;            // value = nu(P)
    LocalDecomposition decomposition;
};

/// nu(P) = inf{ sum |alpha_i| : P = sum alpha_i P_i, P_i deterministic
/// local, sum alpha_i = 1 }, via an LP over split weights.
NuResult nu_of_behavior(const Behavior& P, long budget = kDefaultBudget);

/// One LP feasibility check: does some local P' make
/// lambda P + (1-lambda) P' local?
bool pi_mixture_feasible(const Behavior& P, double lambda,
                         long budget = kDefaultBudget);

struct PiResult {
    SolveReport report;  // value = pi(P)
};

/// Noise robustness pi(P): the threshold mixing weight; local P gives 1 by
/// convention. Bisection to `bisect_tol`.
PiResult pi_robustness(const Behavior& P, long budget = kDefaultBudget,
                       double bisect_tol = 1e-7);

struct EquivalenceResult {
    double nu = 0.0;
    double pi = 0.0;
    double residual = 0.0;  // |nu - (2/pi - 1)|
    NuResult nu_result;
    PiResult pi_result;
};

EquivalenceResult check_equivalence(const Behavior& P, long budget = kDefaultBudget);

}  // namespace bell
