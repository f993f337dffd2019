#include "bell/construction.hpp"

#include "bell/eig.hpp"
#include "bell/knorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace bell {

int ConstructionParams::resolved_m() const {
    if (m > 0) return m;
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), q / 2.0)));
}

void ConstructionParams::validate() const {
    if (n < 1) throw ValidationError("construction: n must be >= 1");
    if (!(q > 2.0)) throw ValidationError("construction: q must be > 2");
    if (!(sigma_threshold > 0.0))
        throw ValidationError("construction: sigma_threshold must be > 0");
    const double lo = std::pow(static_cast<double>(n), q / 2.0);
    const int mm = resolved_m();
    if (mm < n) throw ValidationError("construction: m must be >= n");
    if (static_cast<double>(mm) < lo - 1e-9 || static_cast<double>(mm) > 2.0 * lo + 1e-9)
        throw ValidationError("construction: m = " + std::to_string(mm) +
                              " outside the window [n^(q/2), 2 n^(q/2)]");
    const double inputs = std::pow(static_cast<double>(mm), n);
    if (inputs > static_cast<double>(kMaxConstructionInputs))
        throw BudgetError("construction: m^n = " + std::to_string(inputs) +
                          " inputs exceed the limit of " +
                          std::to_string(kMaxConstructionInputs));
    const double entries = inputs * inputs * n * n;
    if (entries > static_cast<double>(kMaxConstructionEntries))
        throw BudgetError("construction: tensor would hold " + std::to_string(entries) +
                          " entries, limit is " + std::to_string(kMaxConstructionEntries));
}

Eigen::MatrixXd sample_construction_matrix(const ConstructionParams& params) {
    return gaussian_matrix(params.n, params.resolved_m(), RngStream(params.seed, 0));
}

SubspaceData singular_subspace(const Eigen::MatrixXd& g, const ConstructionParams& params) {
    const int n = static_cast<int>(g.rows());
    const int mm = static_cast<int>(g.cols());
    const SvdResult dec = svd(g / std::sqrt(static_cast<double>(mm)));
    SubspaceData out;
    out.singular_values = dec.singular_values;
    int k = 0;
    while (k < dec.singular_values.size() &&
           dec.singular_values(k) >= params.sigma_threshold)
        ++k;
    out.k = k;
    if (k == 0)
        throw ValidationError(
            "construction: no singular value of G/sqrt(m) reaches the threshold " +
            std::to_string(params.sigma_threshold) + " (largest is " +
            std::to_string(dec.singular_values.size() > 0 ? dec.singular_values(0) : 0.0) +
            "); pipeline aborted");
    out.basis = dec.U.leftCols(k);
    out.inversion_weights.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        out.inversion_weights[static_cast<std::size_t>(j)] =
            1.0 / (dec.singular_values(j) * dec.singular_values(j));
    (void)n;
    return out;
}

namespace {

// Input index <-> base-m digit tuple, most significant digit first.
std::vector<std::vector<int>> input_digits(int m, int n, long count) {
    std::vector<std::vector<int>> digits(static_cast<std::size_t>(count),
                                         std::vector<int>(static_cast<std::size_t>(n)));
    for (long w = 0; w < count; ++w) {
        long rest = w;
        for (int k = n - 1; k >= 0; --k) {
            digits[static_cast<std::size_t>(w)][static_cast<std::size_t>(k)] =
                static_cast<int>(rest % m);
            rest /= m;
        }
    }
    return digits;
}

}  // namespace

Construction construct(const ConstructionParams& params) {
    params.validate();
    Construction c;
    c.params = params;
    c.g = sample_construction_matrix(params);
    c.subspace = singular_subspace(c.g, params);
    c.columns = c.g.transpose() * c.subspace.basis;          // m x k
    c.gram = c.columns * c.columns.transpose();              // m x m, PSD rank k

    const int mm = params.resolved_m();
    const int n = params.n;
    const long inputs = static_cast<long>(std::llround(std::pow(static_cast<double>(mm), n)));
    Scenario scen{static_cast<int>(inputs), n, false};
    scen.validate();
    BellFunctional M{scen, Tensor4(scen)};
    const auto digits = input_digits(mm, n, inputs);
    for (long w1 = 0; w1 < inputs; ++w1)
        for (long w2 = 0; w2 < inputs; ++w2)
            for (int k1 = 0; k1 < n; ++k1)
                for (int k2 = 0; k2 < n; ++k2)
                    M.m.at(static_cast<int>(w1), static_cast<int>(w2), k1, k2) =
                        c.gram(digits[static_cast<std::size_t>(w1)][static_cast<std::size_t>(k1)],
                               digits[static_cast<std::size_t>(w2)][static_cast<std::size_t>(k2)]);
    c.functional = std::move(M);
    c.prefactor_t = std::pow(params.t(), -1.0 / params.q);
    c.prefactor_m = std::pow(static_cast<double>(mm), -1.0 / params.q);
    c.prefactor_n = std::pow(static_cast<double>(n), -static_cast<double>(n));
    return c;
}

BellFunctional build_bell_functional(const ConstructionParams& params) {
    return construct(params).functional;
}

namespace {

// Number of tuples in [m]^n whose best-ranked coordinate sits at sorted
// position r (0-indexed): (m-r)^n - (m-r-1)^n.
double rank_count(int m, int n, int r) {
    return std::pow(static_cast<double>(m - r), n) -
           std::pow(static_cast<double>(m - r - 1), n);
}

// Support value sum_w max(0, max_{j in tuple} s(j)) and the accumulated
// collapsed vector sum over tuples of the chosen column of B.
double collapsed_support(const Eigen::VectorXd& scores, int n,
                         const Eigen::MatrixXd* B, Eigen::VectorXd* acc) {
    const int m = static_cast<int>(scores.size());
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores(a) > scores(b); });
    double total = 0.0;
    if (acc) acc->setZero();
    for (int r = 0; r < m; ++r) {
        const double w = scores(order[static_cast<std::size_t>(r)]);
        if (w <= 0.0) break;
        const double cnt = rank_count(m, n, r);
        total += w * cnt;
        if (acc && B) *acc += cnt * B->row(order[static_cast<std::size_t>(r)]).transpose();
    }
    return total;
}

// Per-input output choice realizing the collapsed assignment for scores s:
// pick the first coordinate position holding the best positive score.
std::vector<int> materialize_choice(const Eigen::VectorXd& scores,
                                    const std::vector<std::vector<int>>& digits) {
    std::vector<int> choice(digits.size(), -1);
    for (std::size_t w = 0; w < digits.size(); ++w) {
        double best = 0.0;
        int best_pos = -1;
        for (std::size_t pos = 0; pos < digits[w].size(); ++pos) {
            const double v = scores(digits[w][pos]);
            if (v > best) {
                best = v;
                best_pos = static_cast<int>(pos);
            }
        }
        choice[w] = best_pos;
    }
    return choice;
}

}  // namespace

ConstructedClassical constructed_classical_bound(const Construction& c,
                                                 int restarts, RngStream rng) {
    const int k = c.subspace.k;
    const int mm = c.params.resolved_m();
    const int n = c.params.n;
    const Eigen::MatrixXd& B = c.columns;  // m x k

    double best_value = 0.0;
    Eigen::VectorXd best_scores = Eigen::VectorXd::Zero(mm);
    long evals = 0;
    bool exact = true;

    auto consider = [&](const Eigen::VectorXd& scores) {
        Eigen::VectorXd acc(k);
        collapsed_support(scores, n, &B, &acc);
        const double value = acc.squaredNorm();
        ++evals;
        if (value > best_value) {
            best_value = value;
            best_scores = scores;
        }
    };

    if (k == 1) {
        consider(B.col(0));
        consider(-B.col(0));
    } else if (k == 2) {
        // Direction sweep: the greedy assignment changes only where two
        // collapsed scores cross or one crosses zero.
        std::vector<double> angles;
        for (int j = 0; j < mm; ++j) {
            for (int j2 = j + 1; j2 < mm; ++j2) {
                const Eigen::Vector2d v = B.row(j) - B.row(j2);
                if (v.norm() < 1e-14) continue;
                const double th = std::atan2(v(0), -v(1));
                angles.push_back(th);
                angles.push_back(th + std::numbers::pi);
            }
            const Eigen::Vector2d v = B.row(j);
            if (v.norm() < 1e-14) continue;
            const double th = std::atan2(v(0), -v(1));
            angles.push_back(th);
            angles.push_back(th + std::numbers::pi);
        }
        const double two_pi = 2.0 * std::numbers::pi;
        for (double& a : angles) a = std::fmod(std::fmod(a, two_pi) + two_pi, two_pi);
        std::sort(angles.begin(), angles.end());
        if (angles.empty()) angles.push_back(0.0);
        for (std::size_t i = 0; i < angles.size(); ++i) {
            const double next = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + two_pi;
            const double mid = 0.5 * (angles[i] + next);
            const Eigen::Vector2d u(std::cos(mid), std::sin(mid));
            consider(B * u);
        }
    } else {
        // Alternating ascent on the collapsed quadratic form.
        exact = false;
        for (int r = 0; r < restarts; ++r) {
            RngStream s = rng.substream(static_cast<std::uint64_t>(r));
            Eigen::VectorXd u(k);
            for (int i = 0; i < k; ++i) u(i) = s.gaussian();
            if (u.norm() == 0.0) u(0) = 1.0;
            u.normalize();
            double value = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                Eigen::VectorXd acc(k);
                collapsed_support(B * u, n, &B, &acc);
                ++evals;
                const double v = acc.squaredNorm();
                if (v <= value * (1.0 + 1e-12)) {
                    value = std::max(value, v);
                    break;
                }
                value = v;
                if (acc.norm() == 0.0) break;
                u = acc.normalized();
            }
            Eigen::VectorXd acc(k);
            collapsed_support(B * u, n, &B, &acc);
            if (acc.squaredNorm() > best_value) {
                best_value = acc.squaredNorm();
                best_scores = B * u;
            }
        }
    }

    ConstructedClassical out;
    out.report.value = best_value;
    out.report.certificate = exact ? "exact" : "lower_bound";
    out.report.iterations = evals;
    out.report.residual = 0.0;
    const long inputs = c.functional.scenario.inputs;
    const auto digits = input_digits(mm, n, inputs);
    out.alice_choice = materialize_choice(best_scores, digits);
    out.bob_choice = out.alice_choice;  // diagonal optimum of a PSD form
    return out;
}

PipelineResult pipeline(const ConstructionParams& params, const SeesawConfig& cfg) {
    const Construction c = construct(params);
    const ConstructedClassical cb =
        constructed_classical_bound(c, cfg.restarts, cfg.rng.substream(0xc1a55));

    PipelineResult out;
    out.params = c.params;
    out.k = c.subspace.k;
    out.observed_delta = static_cast<double>(c.subspace.k) / params.n;
    out.singular_values.assign(c.subspace.singular_values.data(),
                               c.subspace.singular_values.data() +
                                   c.subspace.singular_values.size());
    out.classical = cb.report;
    out.prefactor_t = c.prefactor_t;
    out.prefactor_m = c.prefactor_m;
    out.prefactor_n = c.prefactor_n;

    // Swap symmetry M(w,w',k,k') = M(w',w,k',k) must hold exactly.
    const Scenario& scen = c.functional.scenario;
    for (int x = 0; x < scen.inputs && out.tensor_symmetric; ++x)
        for (int y = 0; y < scen.inputs && out.tensor_symmetric; ++y)
            for (int a = 0; a < scen.outputs && out.tensor_symmetric; ++a)
                for (int b = 0; b < scen.outputs; ++b)
                    if (c.functional.m.at(x, y, a, b) != c.functional.m.at(y, x, b, a)) {
                        out.tensor_symmetric = false;
                        break;
                    }

    SeesawConfig scfg = cfg;
    scfg.dim_a = scfg.dim_b = params.n;
    const QuantumModel warm = [&] {
        QuantumModel w;
        w.dim_a = w.dim_b = params.n;
        w.complete = false;
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(params.n * params.n);
        psi(0) = 1.0;
        w.state = psi * psi.transpose();
        const int k = scen.effective_outputs();
        Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(params.n, params.n);
        e1(0, 0) = 1.0;
        w.povm_a.assign(static_cast<std::size_t>(scen.inputs),
                        std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(k),
                                                     Eigen::MatrixXd::Zero(params.n, params.n)));
        w.povm_b = w.povm_a;
        for (int x = 0; x < scen.inputs; ++x) {
            if (cb.alice_choice[static_cast<std::size_t>(x)] >= 0)
                w.povm_a[static_cast<std::size_t>(x)]
                        [static_cast<std::size_t>(cb.alice_choice[static_cast<std::size_t>(x)])] = e1;
            if (cb.bob_choice[static_cast<std::size_t>(x)] >= 0)
                w.povm_b[static_cast<std::size_t>(x)]
                        [static_cast<std::size_t>(cb.bob_choice[static_cast<std::size_t>(x)])] = e1;
        }
        return w;
    }();
    const SeesawResult sw = seesaw(c.functional, scfg, &warm);
    out.quantum = sw.report;
    out.lv = sw.report.value / cb.report.value;
    out.d_hat = out.lv / std::pow(static_cast<double>(params.n), 0.5 - 2.0 / params.q);
    return out;
}

// ---- Monte Carlo verifiers -------------------------------------------------

NormSpace norm_space_from_string(const std::string& s) {
    if (s == "l1") return NormSpace::l1;
    if (s == "l2") return NormSpace::l2;
    if (s == "linf" || s == "loo") return NormSpace::linf;
    throw ValidationError("unknown norm space '" + s + "' (use l1, l2, linf)");
}

std::string to_string(NormSpace s) {
    switch (s) {
        case NormSpace::l1: return "l1";
        case NormSpace::l2: return "l2";
        case NormSpace::linf: return "linf";
    }
    return "?";
}

namespace {

double vector_norm(const Eigen::VectorXd& v, NormSpace s) {
    switch (s) {
        case NormSpace::l1: return v.lpNorm<1>();
        case NormSpace::l2: return v.norm();
        case NormSpace::linf: return v.lpNorm<Eigen::Infinity>();
    }
    return 0.0;
}

double w2_weight(NormSpace s, int dim) {
    return s == NormSpace::l1 ? std::sqrt(static_cast<double>(dim)) : 1.0;
}

// max over sign vectors u (first sign fixed) of ||A^T u|| in the given norm;
// Gray-code updates keep it O(2^(n-1) * m).
double sign_enumeration_norm(const Eigen::MatrixXd& A, NormSpace norm) {
    const int n = static_cast<int>(A.rows());
    if (n > 21)
        throw BudgetError("sign enumeration over 2^" + std::to_string(n - 1) +
                          " states exceeds the 2^20 budget");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(A.cols());
    for (int i = 0; i < n; ++i) w += A.row(i).transpose();
    std::vector<int> sign(static_cast<std::size_t>(n), 1);
    double best = vector_norm(w, norm);
    const std::uint64_t states = 1ULL << (n - 1);
    for (std::uint64_t g = 1; g < states; ++g) {
        const int bit = static_cast<int>(std::countr_zero(g)) + 1;  // fix u(0)
        sign[static_cast<std::size_t>(bit)] = -sign[static_cast<std::size_t>(bit)];
        w += 2.0 * sign[static_cast<std::size_t>(bit)] * A.row(bit).transpose();
        best = std::max(best, vector_norm(w, norm));
    }
    return best;
}

}  // namespace

double injective_norm(const Eigen::MatrixXd& g, NormSpace left, NormSpace right) {
    // Dual extreme points: l1 side -> sign vectors, linf side -> basis
    // vectors, l2 side -> sphere.
    if (left == NormSpace::l2 && right == NormSpace::l2)
        return svd(g).singular_values(0);
    if (left == NormSpace::l2 && right == NormSpace::linf)
        return g.colwise().norm().maxCoeff();
    if (left == NormSpace::linf && right == NormSpace::l2)
        return g.rowwise().norm().maxCoeff();
    if (left == NormSpace::linf && right == NormSpace::linf)
        return g.cwiseAbs().maxCoeff();
    if (left == NormSpace::l1 && right == NormSpace::linf)
        return g.cwiseAbs().colwise().sum().maxCoeff();
    if (left == NormSpace::linf && right == NormSpace::l1)
        return g.cwiseAbs().rowwise().sum().maxCoeff();
    if (left == NormSpace::l1)
        return sign_enumeration_norm(g, right);  // enumerate the n side
    // right == l1: enumerate the m side on the transpose
    return sign_enumeration_norm(g.transpose(), left);
}

ChevetReport chevet_monte_carlo(NormSpace left, NormSpace right, int n, int m,
                                int trials, RngStream stream) {
    ChevetReport rep;
    rep.left = left;
    rep.right = right;
    rep.n = n;
    rep.m = m;
    rep.trials = trials;
    double eps_sum = 0.0, left_sum = 0.0, right_sum = 0.0;
    long left_count = 0, right_count = 0;
    for (int tr = 0; tr < trials; ++tr) {
        const Eigen::MatrixXd g = gaussian_matrix(n, m, stream.substream(static_cast<std::uint64_t>(tr)));
        eps_sum += injective_norm(g, left, right);
        for (int i = 0; i < n; ++i) {
            right_sum += vector_norm(g.row(i).transpose(), right);
            ++right_count;
        }
        for (int j = 0; j < m; ++j) {
            left_sum += vector_norm(g.col(j), left);
            ++left_count;
        }
    }
    rep.empirical_mean = eps_sum / trials;
    rep.mean_norm_left = left_sum / static_cast<double>(left_count);    // n-vectors
    rep.mean_norm_right = right_sum / static_cast<double>(right_count); // m-vectors
    rep.bound = w2_weight(left, n) * rep.mean_norm_right +
                w2_weight(right, m) * rep.mean_norm_left;
    rep.pass = rep.empirical_mean <= rep.bound * rep.slack;
    return rep;
}

LemmaEpsilonReport lemma_epsilon_monitor(int n, double q, int trials, RngStream stream,
                                         int probes, int ascent_iters) {
    LemmaEpsilonReport rep;
    rep.n = n;
    rep.q = q;
    rep.m = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), q / 2.0)));
    rep.t = static_cast<double>(n) / rep.m;
    rep.trials = trials;
    const double scale = std::pow(static_cast<double>(rep.m), -1.0 / q) *
                         std::pow(rep.t, -1.0 / q);
    for (int tr = 0; tr < trials; ++tr) {
        RngStream s = stream.substream(static_cast<std::uint64_t>(tr));
        const Eigen::MatrixXd g = gaussian_matrix(n, rep.m, s.substream(0));
        RngStream probe_stream = s.substream(1);
        Eigen::VectorXd best_u;
        double best_probe = -1.0;
        for (int p = 0; p < probes; ++p) {
            Eigen::VectorXd u(n);
            for (int i = 0; i < n; ++i) u(i) = probe_stream.gaussian();
            if (u.norm() == 0.0) u(0) = 1.0;
            u.normalize();
            const double v = scale * k_norm(g.transpose() * u, rep.t);
            if (v > best_probe) {
                best_probe = v;
                best_u = u;
            }
        }
        Eigen::VectorXd u = best_u;
        double value = best_probe;
        for (int it = 0; it < ascent_iters; ++it) {
            Eigen::VectorXd a;
            k_norm(g.transpose() * u, rep.t, &a);
            const Eigen::VectorXd dir = g * a;
            if (dir.norm() < 1e-300) break;
            u = dir.normalized();
            const double v = scale * k_norm(g.transpose() * u, rep.t);
            if (v <= value + 1e-12 * std::max(1.0, value)) {
                value = std::max(value, v);
                break;
            }
            value = v;
        }
        rep.probe_values.push_back(best_probe);
        rep.estimates.push_back(value);
        rep.ratios.push_back(value / std::sqrt(q));
        if (best_probe > value + 1e-9) rep.probe_le_ascent = false;
    }
    std::vector<double> sorted = rep.ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t idx =
        sorted.empty() ? 0
                       : std::min(sorted.size() - 1,
                                  static_cast<std::size_t>(std::ceil(0.95 * sorted.size())) - 1);
    rep.ratio_p95 = sorted.empty() ? 0.0 : sorted[idx];
    return rep;
}

LemmaMinReport lemma_min_monitor(int n, int m, double q, int trials, RngStream stream) {
    if (m > 20)
        throw BudgetError("lemma_min_monitor: sign enumeration needs m <= 20, got " +
                          std::to_string(m));
    LemmaMinReport rep;
    rep.n = n;
    rep.m = m;
    rep.q = q;
    rep.t = static_cast<double>(n) / m;
    rep.trials = trials;
    const double denom =
        std::pow(static_cast<double>(m), 1.0 - 1.0 / q) * std::pow(static_cast<double>(n), 1.0 / q);
    double frob_ratio_sum = 0.0;
    for (int tr = 0; tr < trials; ++tr) {
        const Eigen::MatrixXd g =
            gaussian_matrix(n, m, stream.substream(static_cast<std::uint64_t>(tr)));
        const double op = sign_enumeration_norm(g.transpose(), NormSpace::l2);
        const double fro = g.norm();
        const double col = g.colwise().norm().maxCoeff();
        const double combined =
            std::pow(rep.t, 1.0 / q) *
            std::max({op, fro / std::sqrt(rep.t), col / rep.t});
        rep.op_norm.push_back(op);
        rep.frobenius.push_back(fro);
        rep.max_column.push_back(col);
        rep.combined.push_back(combined);
        rep.ratio.push_back(combined / denom);
        frob_ratio_sum += fro / std::sqrt(static_cast<double>(n) * m);
    }
    std::vector<double> sorted = rep.ratio;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
        if (sorted.empty()) return 0.0;
        const std::size_t i = std::min(sorted.size() - 1,
                                       static_cast<std::size_t>(p * (sorted.size() - 1) + 0.5));
        return sorted[i];
    };
    rep.ratio_mean =
        sorted.empty() ? 0.0
                       : std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
    rep.ratio_q1 = quantile(0.25);
    rep.ratio_median = quantile(0.5);
    rep.ratio_q3 = quantile(0.75);
    rep.frob_over_sqrt_nm_mean = trials > 0 ? frob_ratio_sum / trials : 0.0;
    return rep;
}

double positive_sum_identity(const std::vector<Eigen::MatrixXd>& ts) {
    if (ts.empty()) throw std::invalid_argument("positive_sum_identity: empty list");
    const int d = static_cast<int>(ts[0].rows());
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd left = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd right = Eigen::MatrixXd::Zero(d, d);
    for (const auto& t : ts) {
        const EigResult e = sym_eig(t);
        if (e.values(e.values.size() - 1) < -1e-9 * std::max(1.0, std::abs(e.values(0))))
            throw std::invalid_argument("positive_sum_identity: input not PSD");
        Eigen::MatrixXd root = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i)
            root += std::sqrt(std::max(0.0, e.values(i))) * e.vectors.col(i) *
                    e.vectors.col(i).transpose();
        total += t;
        left += root * root.transpose();
        right += root.transpose() * root;
    }
    const double lhs = sym_eig(total).values(0);
    const double rhs =
        std::sqrt(sym_eig(left).values(0)) * std::sqrt(sym_eig(right).values(0));
    return std::abs(lhs - rhs);
}

}  // namespace bell
