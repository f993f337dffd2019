#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bell/local_analysis.hpp"
#include "bell/model.hpp"
#include "bell/report.hpp"
#include "bell/rng.hpp"

namespace bell {

struct SeesawConfig {
    int dim_a = 2;
    int dim_b = 2;
    int restarts = 20;
    int max_sweeps = 500;
    double tol = 1e-8;
    RngStream rng{};
    int jobs = 1;
};

using PovmFamily = std::vector<std::vector<Eigen::MatrixXd>>;  // [input][output]

/// B = sum over (x,y,a,b) of M(x,y,a,b) E_x^a (x) F_y^b; symmetric, and
/// tr(B rho) = pair(M, behavior_from_quantum) for every state rho.
Eigen::MatrixXd bell_operator(const BellFunctional& M, const PovmFamily& povm_a,
                              const PovmFamily& povm_b);

struct StateOpt {
    Eigen::VectorXd state;  // unit top eigenvector
    double value;           // lambda_max(B)
};

StateOpt optimize_state(const Eigen::MatrixXd& B);

struct PovmOpt {
    std::vector<Eigen::MatrixXd> effects;
    double value = 0.0;          // sum_a tr(E_a R_a)
    Eigen::MatrixXd dual;        // Y >= R_a for all a and Y >= 0
    double gap = 0.0;            // tr(Y) - value
    int iterations = 0;
};

/// Per-input subproblem: maximize sum_a tr(E_a R_a) over E_a >= 0 with
/// sum_a E_a <= 1 (= 1 when complete; handled as an extra zero-reward
/// outcome). Solved by a dual cutting plane over Y with eigenvector cuts;
/// the POVM comes from the LP multipliers, so sum_a E_a = 1 holds at the LP
/// optimum and the pair (E, Y) certifies a duality gap <= ~1e-6.
/// Outcomes whose reward matrix is exactly zero keep E_a = 0.
/// If a warm start is given the returned value never drops below it.
PovmOpt optimize_povm_input(const std::vector<Eigen::MatrixXd>& rewards,
                            bool complete,
                            const std::vector<Eigen::MatrixXd>* warm_start = nullptr);

struct SeesawResult {
    SolveReport report;   // value = best lower bound on B_Q; "lower_bound"
    QuantumModel model;   // achieving model; <M, P(model)> = sign * value
    int sign = 1;
    int best_restart = 0;
    int sweeps_of_best = 0;
    bool monotone_ok = true;
};

/// Alternating maximization of |<M, P>| over states and incomplete POVMs.
/// Even restarts maximize <M,.>, odd restarts <-M,.>. If `warm_model` is
/// given it seeds restart 0. The per-sweep value sequence is nondecreasing.
SeesawResult seesaw(const BellFunctional& M, const SeesawConfig& cfg,
                    const QuantumModel* warm_model = nullptr);

struct ViolationReport {
    SolveReport classical;
    SolveReport quantum;
    double ratio = 0.0;     // lower bound on LV(M)
    bool unconfirmed = false;  // classical bound is heuristic
};

/// LV(M) lower bound: see-saw quantum value over classical bound. The input
/// is normalized by its largest coefficient magnitude first, so positive
/// rescaling cannot change the result. One see-saw restart is seeded from
/// the classical optimum, which makes the ratio at least 1 whenever the
/// classical certificate is exact. Rejects M with B_C below `degenerate_tol`.
ViolationReport violation_report(const BellFunctional& M, const SeesawConfig& cfg,
                                 const ClassicalOptions& copts = {},
                                 double degenerate_tol = 1e-9);

struct MonitorReport {
    double nu = 0.0;
    double per_dim = 0.0;      // nu / d
    double per_output = 0.0;   // nu / k^2
    double threshold = 0.0;    // 16 * min(d, k^2)
    bool failed = false;       // nu above the conservative threshold
};

MonitorReport upper_bound_monitor(const Behavior& P, int dim, int outputs,
                                  long budget = kDefaultBudget);

struct DimensionWitnessRow {
    int dim = 0;
    double value = 0.0;
    double ratio_to_prev = 1.0;
};

struct DimensionWitnessReport {
    std::vector<DimensionWitnessRow> rows;
    bool nondecreasing_ok = true;
};

/// Best see-saw value per Hilbert space dimension; values must be
/// nondecreasing in d up to restart noise since Q_d grows with d.
DimensionWitnessReport dimension_witness_report(const BellFunctional& M,
                                                const std::vector<int>& dims,
                                                const SeesawConfig& cfg);

}  // namespace bell
