#include "bell/local_analysis.hpp"

#include "bell/parallel.hpp"
#include "bell/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace bell {

double strategy_count(const Scenario& scen, bool signed_strategies) {
    const double base = scen.effective_outputs() * (signed_strategies ? 2.0 : 1.0);
    return std::pow(base, scen.inputs);
}

void for_each_strategy(const Scenario& scen, bool signed_strategies, long budget,
                       const std::function<void(const SignedStrategy&)>& visit) {
    const double count = strategy_count(scen, signed_strategies);
    if (count > static_cast<double>(budget))
        throw BudgetError("strategy enumeration needs " + std::to_string(count) +
                          " evaluations, budget is " + std::to_string(budget));
    const int n = scen.inputs;
    const int radix = scen.effective_outputs() * (signed_strategies ? 2 : 1);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    SignedStrategy s;
    s.choices.resize(static_cast<std::size_t>(n));
    while (true) {
        for (int i = 0; i < n; ++i) {
            const int d = digits[static_cast<std::size_t>(i)];
            if (signed_strategies)
                s.choices[static_cast<std::size_t>(i)] = {d / 2, (d % 2 == 0) ? 1 : -1};
            else
                s.choices[static_cast<std::size_t>(i)] = {d, 1};
        }
        visit(s);
        int pos = n - 1;
        while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == radix) {
            digits[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
}

std::vector<SignedStrategy> enumerate_deterministic(const Scenario& scen,
                                                    bool signed_strategies,
                                                    long budget) {
    std::vector<SignedStrategy> out;
    out.reserve(static_cast<std::size_t>(strategy_count(scen, signed_strategies)));
    for_each_strategy(scen, signed_strategies, budget,
                      [&](const SignedStrategy& s) { out.push_back(s); });
    return out;
}

namespace {

// Greedy Alice value against fixed Bob scores S[x][a] = sum_y M(x,y,a,b_y):
// per input, output the best positive score or nothing.
double greedy_value(const Eigen::MatrixXd& S, int sign, std::vector<int>* choice) {
    double total = 0.0;
    if (choice) choice->assign(static_cast<std::size_t>(S.rows()), -1);
    for (Eigen::Index x = 0; x < S.rows(); ++x) {
        double best = 0.0;
        int best_a = -1;
        for (Eigen::Index a = 0; a < S.cols(); ++a) {
            const double v = sign * S(x, a);
            if (v > best) {
                best = v;
                best_a = static_cast<int>(a);
            }
        }
        total += best;
        if (choice) (*choice)[static_cast<std::size_t>(x)] = best_a;
    }
    return total;
}

struct BobOdometer {
    // Digit 0 = no output, digit d >= 1 = output d-1.
    std::vector<int> digits;
    Eigen::MatrixXd S;  // Alice scores for the current Bob option

    BobOdometer(const BellFunctional& M, int n, int k)
        : digits(static_cast<std::size_t>(n), 0), S(Eigen::MatrixXd::Zero(n, k)), M_(M) {}

    void seek(long index, int radix) {
        S.setZero();
        for (int y = static_cast<int>(digits.size()) - 1; y >= 0; --y) {
            digits[static_cast<std::size_t>(y)] = static_cast<int>(index % radix);
            index /= radix;
            apply(y, digits[static_cast<std::size_t>(y)], +1.0);
        }
    }

    void apply(int y, int digit, double w) {
        if (digit == 0) return;
        const int b = digit - 1;
        for (Eigen::Index x = 0; x < S.rows(); ++x)
            for (Eigen::Index a = 0; a < S.cols(); ++a)
                S(x, a) += w * M_.m.at(static_cast<int>(x), y, static_cast<int>(a), b);
    }

    bool advance(int radix) {
        int pos = static_cast<int>(digits.size()) - 1;
        while (pos >= 0) {
            apply(pos, digits[static_cast<std::size_t>(pos)], -1.0);
            if (++digits[static_cast<std::size_t>(pos)] == radix) {
                digits[static_cast<std::size_t>(pos)] = 0;
                --pos;
            } else {
                apply(pos, digits[static_cast<std::size_t>(pos)], +1.0);
                return true;
            }
        }
        return false;
    }

private:
    const BellFunctional& M_;
};

ClassicalBoundResult classical_bound_exact(const BellFunctional& M, long budget,
                                           int jobs) {
    const Scenario& scen = M.scenario;
    const int n = scen.inputs;
    const int k = scen.effective_outputs();
    const double count = std::pow(static_cast<double>(k + 1), n);
    if (count > static_cast<double>(budget))
        throw BudgetError("exact classical bound needs " + std::to_string(count) +
                          " strategy evaluations, budget is " + std::to_string(budget));
    const long total = static_cast<long>(count);

    // Workers scan disjoint chunks of the lexicographic index range; the
    // reduction is an associative max, so the result is job-count independent.
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(
                                                            std::min<long>(total, 64))));
    std::vector<ClassicalBoundResult> partial(static_cast<std::size_t>(workers));

    parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
        const long begin = static_cast<long>(w) * total / workers;
        const long end = static_cast<long>(w + 1) * total / workers;
        ClassicalBoundResult best;
        best.report.value = 0.0;
        best.report.certificate = "exact";
        best.alice_choice.assign(static_cast<std::size_t>(n), -1);
        best.bob_choice.assign(static_cast<std::size_t>(n), -1);
        BobOdometer odo(M, n, k);
        odo.seek(begin, k + 1);
        for (long state = begin; state < end; ++state) {
            for (int sign : {+1, -1}) {
                const double v = greedy_value(odo.S, sign, nullptr);
                if (v > best.report.value) {
                    best.report.value = v;
                    best.sign = sign;
                    greedy_value(odo.S, sign, &best.alice_choice);
                    for (int y = 0; y < n; ++y)
                        best.bob_choice[static_cast<std::size_t>(y)] =
                            odo.digits[static_cast<std::size_t>(y)] - 1;
                }
            }
            if (state + 1 < end && !odo.advance(k + 1)) break;
        }
        best.report.iterations = end - begin;
        partial[w] = std::move(best);
    });

    ClassicalBoundResult best = partial[0];
    long states = 0;
    for (const auto& p : partial) states += p.report.iterations;
    for (std::size_t w = 1; w < partial.size(); ++w)
        if (partial[w].report.value > best.report.value) best = partial[w];
    best.report.iterations = states;
    best.report.residual = 0.0;
    return best;
}

// Alternating best-response ascent over output-or-nothing strategies.
ClassicalBoundResult classical_bound_heuristic(const BellFunctional& M,
                                               const ClassicalOptions& opts) {
    const Scenario& scen = M.scenario;
    const int n = scen.inputs;
    const int k = scen.effective_outputs();

    ClassicalBoundResult best;
    best.report.value = 0.0;
    best.report.certificate = "lower_bound";
    best.alice_choice.assign(static_cast<std::size_t>(n), -1);
    best.bob_choice.assign(static_cast<std::size_t>(n), -1);

    long sweeps_total = 0;
    for (int r = 0; r < opts.restarts; ++r) {
        RngStream stream = opts.rng.substream(static_cast<std::uint64_t>(r));
        std::vector<int> bob_init(static_cast<std::size_t>(n));
        for (int& b : bob_init)
            b = static_cast<int>(stream.uniform() * k) % k;
        for (int sign : {+1, -1}) {
            std::vector<int> bob = bob_init;  // output index, -1 = nothing
            std::vector<int> alice(static_cast<std::size_t>(n), -1);
            double value = 0.0;
            for (int sweep = 0; sweep < 200; ++sweep) {
                ++sweeps_total;
                // Alice responds to Bob.
                Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, k);
                for (int y = 0; y < n; ++y) {
                    const int b = bob[static_cast<std::size_t>(y)];
                    if (b < 0) continue;
                    for (int x = 0; x < n; ++x)
                        for (int a = 0; a < k; ++a) S(x, a) += M.m.at(x, y, a, b);
                }
                greedy_value(S, sign, &alice);
                // Bob responds to Alice.
                Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, k);
                for (int x = 0; x < n; ++x) {
                    const int a = alice[static_cast<std::size_t>(x)];
                    if (a < 0) continue;
                    for (int y = 0; y < n; ++y)
                        for (int b = 0; b < k; ++b) T(y, b) += M.m.at(x, y, a, b);
                }
                const double v = greedy_value(T, sign, &bob);
                if (v <= value + 1e-15) {
                    value = std::max(value, v);
                    break;
                }
                value = v;
            }
            if (value > best.report.value) {
                best.report.value = value;
                best.sign = sign;
                best.alice_choice = alice;
                best.bob_choice = bob;
            }
        }
    }
    best.report.iterations = sweeps_total;
    return best;
}

}  // namespace

ClassicalBoundResult classical_bound(const BellFunctional& M,
                                     const ClassicalOptions& opts) {
    const double count =
        std::pow(static_cast<double>(M.scenario.effective_outputs() + 1), M.scenario.inputs);
    switch (opts.mode) {
        case BoundMode::exact:
            return classical_bound_exact(M, opts.budget, opts.jobs);
        case BoundMode::heuristic:
            return classical_bound_heuristic(M, opts);
        case BoundMode::automatic:
            if (count <= static_cast<double>(opts.budget))
                return classical_bound_exact(M, opts.budget, opts.jobs);
            return classical_bound_heuristic(M, opts);
    }
    throw std::logic_error("classical_bound: bad mode");
}

double epsilon_norm(const BellFunctional& M, long budget) {
    const Scenario& scen = M.scenario;
    const int n = scen.inputs;
    const int k = scen.effective_outputs();
    const double count = std::pow(2.0 * k, n);
    if (count > static_cast<double>(budget))
        throw BudgetError("epsilon norm needs " + std::to_string(count) +
                          " strategy evaluations, budget is " + std::to_string(budget));

    // Odometer over Bob's signed strategies; digit d = (output d/2, sign from
    // parity). Alice's response is sum_x max_a |S(x,a)|.
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, k);
    auto apply = [&](int y, int digit, double w) {
        const int b = digit / 2;
        const double sgn = (digit % 2 == 0) ? 1.0 : -1.0;
        for (int x = 0; x < n; ++x)
            for (int a = 0; a < k; ++a) S(x, a) += w * sgn * M.m.at(x, y, a, b);
    };
    for (int y = 0; y < n; ++y) apply(y, 0, +1.0);  // initial all-zeros state

    double best = 0.0;
    while (true) {
        double v = 0.0;
        for (int x = 0; x < n; ++x) {
            double row = 0.0;
            for (int a = 0; a < k; ++a) row = std::max(row, std::abs(S(x, a)));
            v += row;
        }
        best = std::max(best, v);
        int pos = n - 1;
        bool done = false;
        while (true) {
            if (pos < 0) {
                done = true;
                break;
            }
            apply(pos, digits[static_cast<std::size_t>(pos)], -1.0);
            if (++digits[static_cast<std::size_t>(pos)] == 2 * k) {
                digits[static_cast<std::size_t>(pos)] = 0;
                apply(pos, 0, +1.0);
                --pos;
            } else {
                apply(pos, digits[static_cast<std::size_t>(pos)], +1.0);
                break;
            }
        }
        if (done) break;
    }
    return best;
}

namespace {

struct PointList {
    std::vector<std::vector<int>> maps;  // all one-party assignments
    long count = 0;
};

PointList one_party_maps(const Scenario& scen, long budget) {
    const double count = strategy_count(scen, false);
    const double pairs = count * count;
    if (pairs > static_cast<double>(budget))
        throw BudgetError("local polytope needs " + std::to_string(pairs) +
                          " product points, budget is " + std::to_string(budget));
    PointList out;
    for_each_strategy(scen, false, budget, [&](const SignedStrategy& s) {
        std::vector<int> map(s.choices.size());
        for (std::size_t i = 0; i < s.choices.size(); ++i) map[i] = s.choices[i].output;
        out.maps.push_back(std::move(map));
    });
    out.count = static_cast<long>(out.maps.size());
    return out;
}

long row_index(const Scenario& scen, int x, int y, int a, int b) {
    const int k = scen.effective_outputs();
    return ((static_cast<long>(x) * scen.inputs + y) * k + a) * k + b;
}

}  // namespace

NuResult nu_of_behavior(const Behavior& P, long budget) {
    const Scenario& scen = P.scenario;
    const PointList pts = one_party_maps(scen, budget);
    const long tpoints = pts.count * pts.count;
    const long rows = scen.tensor_size() + 1;
    const long nvars = 2 * tpoints;

    LpProblem lp;
    lp.objective = Eigen::VectorXd::Ones(nvars);
    lp.eq_matrix = Eigen::MatrixXd::Zero(rows, nvars);
    lp.eq_rhs = Eigen::VectorXd::Zero(rows);
    for (long i = 0; i < scen.tensor_size(); ++i) lp.eq_rhs(i) = P.p.flat()[static_cast<std::size_t>(i)];
    lp.eq_rhs(rows - 1) = 1.0;

    for (long ia = 0; ia < pts.count; ++ia)
        for (long ib = 0; ib < pts.count; ++ib) {
            const long tcol = ia * pts.count + ib;
            for (int x = 0; x < scen.inputs; ++x)
                for (int y = 0; y < scen.inputs; ++y) {
                    const long r = row_index(scen, x, y,
                                             pts.maps[static_cast<std::size_t>(ia)][static_cast<std::size_t>(x)],
                                             pts.maps[static_cast<std::size_t>(ib)][static_cast<std::size_t>(y)]);
                    lp.eq_matrix(r, tcol) += 1.0;
                    lp.eq_matrix(r, tpoints + tcol) -= 1.0;
                }
            lp.eq_matrix(rows - 1, tcol) = 1.0;
            lp.eq_matrix(rows - 1, tpoints + tcol) = -1.0;
        }

    const LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::infeasible)
        throw ValidationError(
            "nu_of_behavior: behavior lies outside the affine hull of local points "
            "(signalling or unnormalized input)");
    if (sol.status != LpStatus::optimal)
        throw std::runtime_error("nu_of_behavior: LP did not reach optimality");

    NuResult out;
    out.report.value = sol.value;
    out.report.certificate = "exact";
    out.report.iterations = sol.iterations;
    for (long ia = 0; ia < pts.count; ++ia)
        for (long ib = 0; ib < pts.count; ++ib) {
            const long tcol = ia * pts.count + ib;
            const double alpha = sol.x(tcol) - sol.x(tpoints + tcol);
            if (std::abs(alpha) > 1e-12)
                out.decomposition.terms.push_back(
                    {alpha, DeterministicLocalPoint{pts.maps[static_cast<std::size_t>(ia)],
                                                    pts.maps[static_cast<std::size_t>(ib)]}});
        }
    const Behavior recon = behavior_from_local(scen, out.decomposition);
    double resid = 0.0;
    for (std::size_t i = 0; i < recon.p.flat().size(); ++i)
        resid = std::max(resid, std::abs(recon.p.flat()[i] - P.p.flat()[i]));
    out.report.residual = resid;
    return out;
}

bool pi_mixture_feasible(const Behavior& P, double lambda, long budget) {
    const Scenario& scen = P.scenario;
    const PointList pts = one_party_maps(scen, budget);
    const long tpoints = pts.count * pts.count;
    const long rows = scen.tensor_size() + 2;
    const long nvars = 2 * tpoints;  // u (for P'), v (for P'')

    LpProblem lp;
    lp.objective = Eigen::VectorXd::Zero(nvars);
    lp.eq_matrix = Eigen::MatrixXd::Zero(rows, nvars);
    lp.eq_rhs = Eigen::VectorXd::Zero(rows);
    for (long i = 0; i < scen.tensor_size(); ++i)
        lp.eq_rhs(i) = lambda * P.p.flat()[static_cast<std::size_t>(i)];
    lp.eq_rhs(rows - 2) = 1.0;
    lp.eq_rhs(rows - 1) = 1.0;

    for (long ia = 0; ia < pts.count; ++ia)
        for (long ib = 0; ib < pts.count; ++ib) {
            const long tcol = ia * pts.count + ib;
            for (int x = 0; x < scen.inputs; ++x)
                for (int y = 0; y < scen.inputs; ++y) {
                    const long r = row_index(scen, x, y,
                                             pts.maps[static_cast<std::size_t>(ia)][static_cast<std::size_t>(x)],
                                             pts.maps[static_cast<std::size_t>(ib)][static_cast<std::size_t>(y)]);
                    lp.eq_matrix(r, tcol) -= (1.0 - lambda);  // -(1-lambda) P'
                    lp.eq_matrix(r, tpoints + tcol) += 1.0;   // +P''
                }
            lp.eq_matrix(rows - 2, tcol) = 1.0;
            lp.eq_matrix(rows - 1, tpoints + tcol) = 1.0;
        }

    const LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::optimal) return true;
    if (sol.status == LpStatus::infeasible) return false;
    throw std::runtime_error("pi_mixture_feasible: LP stalled");
}

PiResult pi_robustness(const Behavior& P, long budget, double bisect_tol) {
    PiResult out;
    out.report.certificate = "exact";
    long checks = 1;
    if (pi_mixture_feasible(P, 1.0, budget)) {
        out.report.value = 1.0;  // local behavior
        out.report.iterations = checks;
        out.report.residual = 0.0;
        return out;
    }
    double lo = 0.0, hi = 1.0;  // feasible at lo, infeasible at hi
    while (hi - lo > bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        ++checks;
        if (pi_mixture_feasible(P, mid, budget))
            lo = mid;
        else
            hi = mid;
    }
    out.report.value = 0.5 * (lo + hi);
    out.report.iterations = checks;
    out.report.residual = 0.5 * (hi - lo);
    return out;
}

EquivalenceResult check_equivalence(const Behavior& P, long budget) {
    EquivalenceResult out;
    out.nu_result = nu_of_behavior(P, budget);
    out.pi_result = pi_robustness(P, budget);
    out.nu = out.nu_result.report.value;
    out.pi = out.pi_result.report.value;
    out.residual = std::abs(out.nu - (2.0 / out.pi - 1.0));
    return out;
}

}  // namespace bell
