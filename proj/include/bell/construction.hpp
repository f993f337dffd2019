#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bell/model.hpp"
#include "bell/quantum_analysis.hpp"
#include "bell/report.hpp"
#include "bell/rng.hpp"

namespace bell {

/// Desk-scale guardrails for constructed scenarios.
inline constexpr long kMaxConstructionInputs = 100'000;
inline constexpr long kMaxConstructionEntries = 200'000'000;

struct ConstructionParams {
    int n = 2;                     // local dimension = output count
    double q = 4.0;                // > 2
    int m = 0;                     // 0 = ceil(n^{q/2}); must stay within [n^{q/2}, 2 n^{q/2}]
    double sigma_threshold = 0.5;  // singular value retention cutoff
    std::uint64_t seed = 0;

    int resolved_m() const;
    double t() const { return static_cast<double>(n) / resolved_m(); }
    void validate() const;
};

struct SubspaceData {
    Eigen::VectorXd singular_values;       // of G/sqrt(m), descending
    Eigen::MatrixXd basis;                 // n x k retained Hilbert-side singular vectors
    std::vector<double> inversion_weights; // 1/s_j^2, all <= 1/sigma_threshold^2
    int k = 0;
};

/// The raw n x m Gaussian sample for a parameter set (deterministic in the
/// seed).
Eigen::MatrixXd sample_construction_matrix(const ConstructionParams& params);

/// SVD of G/sqrt(m); retains every singular direction at or above
/// sigma_threshold. Throws ValidationError when nothing survives.
SubspaceData singular_subspace(const Eigen::MatrixXd& g, const ConstructionParams& params);

/// Everything derived from one sample: the retained subspace, the pushed
/// column vectors h_l = G^T u_l, their Gram matrix W = sum_l h_l h_l^T and
/// the Bell functional M(w,w',k,k') = W(w_k, w'_{k'}) on m^n inputs and n
/// outputs. The overall scale is fixed at 1; the discarded embedding
/// prefactors are recorded for traceability.
struct Construction {
    ConstructionParams params;
    Eigen::MatrixXd g;            // n x m
    SubspaceData subspace;
    Eigen::MatrixXd columns;      // m x k, h_l = G^T u_l
    Eigen::MatrixXd gram;         // m x m, rank k
    BellFunctional functional;
    double prefactor_t = 1.0;     // t^{-1/q}
    double prefactor_m = 1.0;     // m^{-1/q}
    double prefactor_n = 1.0;     // n^{-n}
};

Construction construct(const ConstructionParams& params);

BellFunctional build_bell_functional(const ConstructionParams& params);

/// Classical bound specialized to constructed functionals. Because the
/// coefficients factor through (w,k) -> w_k and W is positive semidefinite,
/// B_C equals max over one-party collapsed assignments r of r^T W r =
/// ||B^T r||^2. For k <= 2 a breakpoint sweep over directions is exact; for
/// k >= 3 an alternating ascent gives a certified lower bound.
struct ConstructedClassical {
    SolveReport report;
    std::vector<int> alice_choice;  // per input: output index or -1
    std::vector<int> bob_choice;
};

ConstructedClassical constructed_classical_bound(const Construction& c,
                                                 int restarts = 20,
                                                 RngStream rng = RngStream());

struct PipelineResult {
    ConstructionParams params;
    int k = 0;
    double observed_delta = 0.0;       // k / n
    std::vector<double> singular_values;
    SolveReport classical;
    SolveReport quantum;
    double lv = 0.0;                   // quantum / classical lower bound
    double d_hat = 0.0;                // lv / n^{1/2 - 2/q}
    double prefactor_t = 1.0, prefactor_m = 1.0, prefactor_n = 1.0;
    bool tensor_symmetric = true;
};

/// Full run: sample, subspace, functional, classical bound, see-saw at
/// local dimensions (n, n) seeded from the classical optimum, ratio and
/// the D-hat diagnostic (logged, not asserted).
PipelineResult pipeline(const ConstructionParams& params, const SeesawConfig& cfg);

// ---- Monte Carlo verifiers -------------------------------------------------

enum class NormSpace { l1, l2, linf };

NormSpace norm_space_from_string(const std::string& s);
std::string to_string(NormSpace s);

/// Exact injective norm of an n x m Gaussian sample as an element of
/// lp^n (x)_eps lp'^m. Sign sides are enumerated exactly (<= 2^20 states).
double injective_norm(const Eigen::MatrixXd& g, NormSpace left, NormSpace right);

struct ChevetReport {
    NormSpace left, right;
    int n = 0, m = 0, trials = 0;
    double empirical_mean = 0.0;   // mean injective norm
    double bound = 0.0;            // b = 1 real bound, estimated from the same trials
    double slack = 1.05;
    bool pass = false;             // empirical_mean <= bound * slack
    double mean_norm_left = 0.0;   // E || gaussian ||_E over n-vectors
    double mean_norm_right = 0.0;  // E || gaussian ||_F over m-vectors
};

ChevetReport chevet_monte_carlo(NormSpace left, NormSpace right, int n, int m,
                                int trials, RngStream stream);

struct LemmaEpsilonReport {
    int n = 0;
    double q = 0.0;
    int m = 0;
    double t = 0.0;
    int trials = 0;
    std::vector<double> probe_values;  // best random-probe value per trial
    std::vector<double> estimates;     // after local ascent (>= probe)
    std::vector<double> ratios;        // estimate / sqrt(q)
    double ratio_p95 = 0.0;
    bool probe_le_ascent = true;
};

/// Lower estimate of || m^{-1/q} G : l2^n -> X_t^q || by random probing
/// plus ascent, where the X_t norm of a vector is t^{-1/q} k_norm(., t).
LemmaEpsilonReport lemma_epsilon_monitor(int n, double q, int trials, RngStream stream,
                                         int probes = 32, int ascent_iters = 60);

struct LemmaMinReport {
    int n = 0, m = 0;
    double q = 0.0, t = 0.0;
    int trials = 0;
    std::vector<double> op_norm;     // || G : linf^m -> l2^n ||, exact signs
    std::vector<double> frobenius;
    std::vector<double> max_column;  // max_j || column_j ||_2
    std::vector<double> combined;    // t^{1/q} max(op, t^{-1/2} frob, t^{-1} col)
    std::vector<double> ratio;       // combined / (m^{1-1/q} n^{1/q})
    double ratio_mean = 0.0, ratio_q1 = 0.0, ratio_median = 0.0, ratio_q3 = 0.0;
    double frob_over_sqrt_nm_mean = 0.0;
};

/// Scalar-level proxies for the three terms of the cb-norm bound; the
/// matrix-level norms themselves are out of reach, so everything here is
/// report-only. Requires m <= 20 for the exact sign enumeration.
LemmaMinReport lemma_min_monitor(int n, int m, double q, int trials, RngStream stream);

/// | ||sum T_i|| - ||sum b b^T||^(1/2) ||sum c^T c||^(1/2) | with
/// b = c = T^(1/2); the two routes agree for positive matrices.
double positive_sum_identity(const std::vector<Eigen::MatrixXd>& ts);

}  // namespace bell
