#include "bell/quantum_analysis.hpp"

#include "bell/eig.hpp"
#include "bell/parallel.hpp"
#include "bell/simplex.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bell {

Eigen::MatrixXd bell_operator(const BellFunctional& M, const PovmFamily& povm_a,
                              const PovmFamily& povm_b) {
    const Scenario& scen = M.scenario;
    const int k = scen.effective_outputs();
    if (static_cast<int>(povm_a.size()) != scen.inputs ||
        static_cast<int>(povm_b.size()) != scen.inputs)
        throw std::invalid_argument("bell_operator: wrong number of inputs");
    const int da = static_cast<int>(povm_a[0][0].rows());
    const int db = static_cast<int>(povm_b[0][0].rows());

    // B = sum_{x,a} E_x^a (x) (sum_{y,b} M(x,y,a,b) F_y^b)
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(da * db, da * db);
    for (int x = 0; x < scen.inputs; ++x)
        for (int a = 0; a < k; ++a) {
            Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(db, db);
            for (int y = 0; y < scen.inputs; ++y)
                for (int b = 0; b < k; ++b) {
                    const double c = M.m.at(x, y, a, b);
                    if (c != 0.0) inner += c * povm_b[y][b];
                }
            if (inner.cwiseAbs().maxCoeff() > 0.0)
                B += Eigen::kroneckerProduct(povm_a[x][a], inner);
        }
    return B;
}

StateOpt optimize_state(const Eigen::MatrixXd& B) {
    const EigResult eig = sym_eig(B);
    return {eig.vectors.col(0), eig.values(0)};
}

namespace {

struct Cut {
    int outcome;       // index into the active reward list, -1 = slack (R = 0)
    Eigen::VectorXd v;
};

Eigen::VectorXd cut_coefficients(const Eigen::VectorXd& v, int d) {
    // Linearization of v^T Y v over the packed upper triangle of Y.
    Eigen::VectorXd coef(d * (d + 1) / 2);
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            coef(idx++) = (i == j) ? v(i) * v(i) : 2.0 * v(i) * v(j);
    return coef;
}

Eigen::MatrixXd unpack_symmetric(const Eigen::VectorXd& y, int d) {
    Eigen::MatrixXd Y(d, d);
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            Y(i, j) = y(idx);
            Y(j, i) = y(idx);
            ++idx;
        }
    return Y;
}

}  // namespace

PovmOpt optimize_povm_input(const std::vector<Eigen::MatrixXd>& rewards,
                            bool complete,
                            const std::vector<Eigen::MatrixXd>* warm_start) {
    if (rewards.empty()) throw std::invalid_argument("optimize_povm_input: no rewards");
    const int d = static_cast<int>(rewards[0].rows());
    const int num_outcomes = static_cast<int>(rewards.size());
    for (const auto& R : rewards) {
        if (R.rows() != d || R.cols() != d)
            throw std::invalid_argument("optimize_povm_input: reward dimension mismatch");
        if ((R - R.transpose()).cwiseAbs().maxCoeff() >
            1e-9 * std::max(1.0, R.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("optimize_povm_input: non-symmetric reward");
    }

    PovmOpt out;
    out.effects.assign(static_cast<std::size_t>(num_outcomes),
                       Eigen::MatrixXd::Zero(d, d));
    out.dual = Eigen::MatrixXd::Zero(d, d);

    // Complete mode: shift rewards positive; the slack outcome then carries
    // no mass at the optimum, so sum E = 1 comes out of the same solver.
    double shift = 0.0;
    if (complete) {
        for (const auto& R : rewards) {
            const EigResult e = sym_eig(R);
            shift = std::max(shift, -e.values(e.values.size() - 1));
        }
        shift += 1.0;
    }

    std::vector<int> active;
    std::vector<Eigen::MatrixXd> R;  // shifted active rewards
    double scale = 0.0;
    for (int a = 0; a < num_outcomes; ++a) {
        Eigen::MatrixXd Rs =
            0.5 * (rewards[static_cast<std::size_t>(a)] +
                   rewards[static_cast<std::size_t>(a)].transpose());
        if (shift > 0.0) Rs += shift * Eigen::MatrixXd::Identity(d, d);
        if (Rs.cwiseAbs().maxCoeff() == 0.0) continue;  // zero reward: E_a stays 0
        active.push_back(a);
        R.push_back(Rs);
        scale = std::max(scale, Rs.cwiseAbs().maxCoeff());
    }

    auto warm_value = [&]() {
        double v = 0.0;
        if (warm_start)
            for (int a = 0; a < num_outcomes; ++a)
                v += ((*warm_start)[static_cast<std::size_t>(a)] *
                      rewards[static_cast<std::size_t>(a)])
                         .trace();
        return v;
    };

    if (active.empty()) {
        out.value = 0.0;
        out.gap = 0.0;
        if (warm_start && warm_value() > 0.0) {
            out.effects = *warm_start;
            out.value = warm_value();
        }
        return out;
    }

    for (auto& Rs : R) Rs /= scale;
    const int num_active = static_cast<int>(active.size());
    const int svars = d * (d + 1) / 2;

    std::vector<Cut> cuts;
    for (int a = -1; a < num_active; ++a)
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
            e(i) = 1.0;
            cuts.push_back({a, e});
        }

    const double gap_target = 1e-8;  // on normalized rewards
    const int max_rounds = 2000;
    Eigen::MatrixXd Y;
    Eigen::VectorXd mu;
    double viol = 0.0;
    int round = 0;
    // Column-generation form: maximize sum_c mu_c v^T R v over mu >= 0 with
    // sum_c mu_c v v^T = 1. The feasible set is compact (unit cut vectors
    // force sum mu = d) and never empty (the basis cuts stay in the list),
    // and the row duals recover Y with v^T Y v >= v^T R_a v on every cut.
    for (round = 0; round < max_rounds; ++round) {
        const int ncuts = static_cast<int>(cuts.size());
        LpProblem lp;
        lp.objective = Eigen::VectorXd::Zero(ncuts);
        lp.eq_matrix = Eigen::MatrixXd::Zero(svars, ncuts);
        lp.eq_rhs = Eigen::VectorXd::Zero(svars);
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) lp.eq_rhs(idx++) = (i == j) ? 1.0 : 0.0;
        for (int c = 0; c < ncuts; ++c) {
            lp.eq_matrix.col(c) = cut_coefficients(cuts[static_cast<std::size_t>(c)].v, d);
            const int a = cuts[static_cast<std::size_t>(c)].outcome;
            lp.objective(c) =
                (a >= 0)
                    ? -cuts[static_cast<std::size_t>(c)].v.dot(
                          R[static_cast<std::size_t>(a)] * cuts[static_cast<std::size_t>(c)].v)
                    : 0.0;
        }
        const LpSolution sol = lp_solve(lp);
        if (sol.status != LpStatus::optimal)
            throw std::runtime_error(
                "optimize_povm_input: cutting-plane LP ended with status " +
                std::to_string(static_cast<int>(sol.status)) + " after " +
                std::to_string(sol.iterations) + " pivots on " +
                std::to_string(ncuts) + " cuts");
        mu = sol.x;
        Y = unpack_symmetric(-sol.dual, d);

        viol = 0.0;
        std::vector<std::pair<int, Eigen::VectorXd>> new_cuts;
        for (int a = -1; a < num_active; ++a) {
            const Eigen::MatrixXd diff =
                (a >= 0) ? Eigen::MatrixXd(Y - R[static_cast<std::size_t>(a)]) : Y;
            const EigResult e = sym_eig(diff);
            const double lmin = e.values(e.values.size() - 1);
            if (lmin < -gap_target / (4.0 * d))
                new_cuts.push_back({a, e.vectors.col(e.vectors.cols() - 1)});
            viol = std::max(viol, -lmin);
        }
        if (d * viol <= gap_target || new_cuts.empty()) break;
        for (auto& [a, v] : new_cuts) cuts.push_back({a, v});
    }

    // POVM from the LP multipliers: the equality rows force
    // sum over all cuts of mu v v^T = 1, so the slack share is 1 - sum E.
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        const int a = cuts[c].outcome;
        if (a < 0) continue;
        const double w = mu(static_cast<Eigen::Index>(c));
        if (w > 0.0)
            out.effects[static_cast<std::size_t>(active[static_cast<std::size_t>(a)])] +=
                w * cuts[c].v * cuts[c].v.transpose();
    }
    // Simplex feasibility noise can leave sum E a hair above the identity;
    // rescale so the family is strictly admissible.
    {
        Eigen::MatrixXd total = Eigen::MatrixXd::Zero(d, d);
        for (const auto& e : out.effects) total += e;
        const double top = sym_eig(total).values(0);
        if (top > 1.0)
            for (auto& e : out.effects) e /= top;
    }

    double value = 0.0;
    for (int a = 0; a < num_outcomes; ++a)
        value += (out.effects[static_cast<std::size_t>(a)] *
                  rewards[static_cast<std::size_t>(a)])
                     .trace();
    Eigen::MatrixXd y_feas =
        scale * (Y + viol * Eigen::MatrixXd::Identity(d, d));
    if (shift > 0.0) y_feas -= shift * Eigen::MatrixXd::Identity(d, d);
    out.dual = y_feas;
    out.value = value;
    out.gap = y_feas.trace() - value;
    out.iterations = round + 1;

    if (complete) {
        // Fold any slack residual into the heaviest outcome so the family
        // sums to the identity exactly.
        Eigen::MatrixXd total = Eigen::MatrixXd::Zero(d, d);
        for (const auto& e : out.effects) total += e;
        Eigen::Index heavy = 0;
        double best_tr = -1.0;
        for (std::size_t a = 0; a < out.effects.size(); ++a)
            if (out.effects[a].trace() > best_tr) {
                best_tr = out.effects[a].trace();
                heavy = static_cast<Eigen::Index>(a);
            }
        out.effects[static_cast<std::size_t>(heavy)] +=
            Eigen::MatrixXd::Identity(d, d) - total;
        value = 0.0;
        for (int a = 0; a < num_outcomes; ++a)
            value += (out.effects[static_cast<std::size_t>(a)] *
                      rewards[static_cast<std::size_t>(a)])
                         .trace();
        out.value = value;
        out.gap = out.dual.trace() - value;
    }

    if (warm_start) {
        const double wv = warm_value();
        if (wv > out.value) {
            out.effects = *warm_start;
            out.value = wv;
            out.gap = out.dual.trace() - wv;
        }
    }
    return out;
}

namespace {

PovmFamily random_povm_family(int inputs, int k_eff, int d, const RngStream& base,
                              std::uint64_t party_tag) {
    // Rank-one frames from QR of a Gaussian square matrix. The randomness
    // consumed depends only on (inputs, d), never on the output count, so a
    // padded functional sees bit-identical initial measurements.
    PovmFamily fam(static_cast<std::size_t>(inputs));
    for (int x = 0; x < inputs; ++x) {
        RngStream s = base.substream(party_tag * 4096 + static_cast<std::uint64_t>(x));
        const Eigen::MatrixXd g = gaussian_matrix(d, d, s);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
        auto& effects = fam[static_cast<std::size_t>(x)];
        effects.assign(static_cast<std::size_t>(k_eff), Eigen::MatrixXd::Zero(d, d));
        for (int i = 0; i < d; ++i) {
            const int a = std::min(i, k_eff - 1);
            effects[static_cast<std::size_t>(a)] += q.col(i) * q.col(i).transpose();
        }
    }
    return fam;
}

struct RestartOutcome {
    double value = -std::numeric_limits<double>::infinity();
    PovmFamily povm_a, povm_b;
    Eigen::VectorXd psi;
    int sign = 1;
    int sweeps = 0;
    bool monotone_ok = true;
    double last_delta = 0.0;
};

}  // namespace

SeesawResult seesaw(const BellFunctional& M, const SeesawConfig& cfg,
                    const QuantumModel* warm_model) {
    const Scenario& scen = M.scenario;
    const int k = scen.effective_outputs();
    const int n = scen.inputs;
    const int da = cfg.dim_a;
    const int db = cfg.dim_b;
    if (da < 1 || db < 1) throw std::invalid_argument("seesaw: dims must be >= 1");
    if (!(cfg.tol > 0)) throw std::invalid_argument("seesaw: tol must be > 0");

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));

    auto run_restart = [&](std::size_t r) {
        RestartOutcome& res = outcomes[r];
        PovmFamily A, B;
        int sign = (r % 2 == 0) ? 1 : -1;
        if (warm_model && r == 0) {
            A = warm_model->povm_a;
            B = warm_model->povm_b;
            const Eigen::MatrixXd bop = bell_operator(M, A, B);
            const double raw = (bop * warm_model->state).trace();
            sign = raw >= 0.0 ? 1 : -1;
        } else {
            const RngStream base = cfg.rng.substream(static_cast<std::uint64_t>(r));
            A = random_povm_family(n, k, da, base, 0);
            B = random_povm_family(n, k, db, base, 1);
        }

        BellFunctional Ms = M;
        if (sign < 0)
            for (double& v : Ms.m.flat()) v = -v;

        StateOpt st = optimize_state(bell_operator(Ms, A, B));
        double prev = st.value;
        Eigen::VectorXd psi = st.state;
        bool monotone = true;
        int sweep = 0;
        double delta = 0.0;
        for (sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
            Eigen::MatrixXd Psi(da, db);
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < db; ++j) Psi(i, j) = psi(i * db + j);

            // Alice step against fixed (psi, B).
            std::vector<std::vector<Eigen::MatrixXd>> gb(
                static_cast<std::size_t>(n),
                std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(k)));
            for (int y = 0; y < n; ++y)
                for (int b = 0; b < k; ++b)
                    gb[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)] =
                        Psi * B[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)] *
                        Psi.transpose();
            for (int x = 0; x < n; ++x) {
                std::vector<Eigen::MatrixXd> rewards(
                    static_cast<std::size_t>(k), Eigen::MatrixXd::Zero(da, da));
                for (int a = 0; a < k; ++a)
                    for (int y = 0; y < n; ++y)
                        for (int b = 0; b < k; ++b) {
                            const double c = Ms.m.at(x, y, a, b);
                            if (c != 0.0)
                                rewards[static_cast<std::size_t>(a)] +=
                                    c * gb[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)];
                        }
                const PovmOpt opt = optimize_povm_input(
                    rewards, false, &A[static_cast<std::size_t>(x)]);
                if (opt.gap > 1e-6 * std::max(1.0, std::abs(prev)))
                    throw std::runtime_error(
                        "seesaw: POVM subproblem gap " + std::to_string(opt.gap) +
                        " above tolerance after " + std::to_string(opt.iterations) +
                        " rounds (objective " + std::to_string(prev) + ")");
                A[static_cast<std::size_t>(x)] = opt.effects;
            }

            // Bob step against fixed (psi, A).
            std::vector<std::vector<Eigen::MatrixXd>> ha(
                static_cast<std::size_t>(n),
                std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(k)));
            for (int x = 0; x < n; ++x)
                for (int a = 0; a < k; ++a)
                    ha[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)] =
                        Psi.transpose() *
                        A[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)] * Psi;
            for (int y = 0; y < n; ++y) {
                std::vector<Eigen::MatrixXd> rewards(
                    static_cast<std::size_t>(k), Eigen::MatrixXd::Zero(db, db));
                for (int b = 0; b < k; ++b)
                    for (int x = 0; x < n; ++x)
                        for (int a = 0; a < k; ++a) {
                            const double c = Ms.m.at(x, y, a, b);
                            if (c != 0.0)
                                rewards[static_cast<std::size_t>(b)] +=
                                    c * ha[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
                        }
                const PovmOpt opt = optimize_povm_input(
                    rewards, false, &B[static_cast<std::size_t>(y)]);
                if (opt.gap > 1e-6 * std::max(1.0, std::abs(prev)))
                    throw std::runtime_error(
                        "seesaw: POVM subproblem gap " + std::to_string(opt.gap) +
                        " above tolerance after " + std::to_string(opt.iterations) +
                        " rounds (objective " + std::to_string(prev) + ")");
                B[static_cast<std::size_t>(y)] = opt.effects;
            }

            st = optimize_state(bell_operator(Ms, A, B));
            psi = st.state;
            if (st.value < prev - 1e-9 * std::max(1.0, std::abs(prev))) monotone = false;
            delta = std::abs(st.value - prev);
            prev = st.value;
            if (delta <= cfg.tol) break;
        }
        res.value = prev;
        res.povm_a = std::move(A);
        res.povm_b = std::move(B);
        res.psi = psi;
        res.sign = sign;
        res.sweeps = std::min(sweep, cfg.max_sweeps);
        res.monotone_ok = monotone;
        res.last_delta = delta;
    };

    parallel_for(static_cast<std::size_t>(cfg.restarts), cfg.jobs, run_restart);

    std::size_t best = 0;
    for (std::size_t r = 1; r < outcomes.size(); ++r)
        if (outcomes[r].value > outcomes[best].value) best = r;

    const RestartOutcome& win = outcomes[best];
    SeesawResult out;
    out.report.value = win.value;
    out.report.certificate = "lower_bound";
    long total_sweeps = 0;
    bool monotone_all = true;
    for (const auto& res : outcomes) {
        total_sweeps += res.sweeps;
        monotone_all = monotone_all && res.monotone_ok;
    }
    out.report.iterations = total_sweeps;
    out.report.residual = win.last_delta;
    out.sign = win.sign;
    out.best_restart = static_cast<int>(best);
    out.sweeps_of_best = win.sweeps;
    out.monotone_ok = monotone_all;
    out.model.dim_a = da;
    out.model.dim_b = db;
    out.model.state = win.psi * win.psi.transpose();
    out.model.povm_a = win.povm_a;
    out.model.povm_b = win.povm_b;
    out.model.complete = false;
    return out;
}

namespace {

QuantumModel model_from_strategies(const Scenario& scen, int da, int db,
                                   const std::vector<int>& alice_choice,
                                   const std::vector<int>& bob_choice) {
    QuantumModel model;
    model.dim_a = da;
    model.dim_b = db;
    model.complete = false;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(da * db);
    psi(0) = 1.0;
    model.state = psi * psi.transpose();
    const int k = scen.effective_outputs();
    Eigen::MatrixXd ea = Eigen::MatrixXd::Zero(da, da);
    ea(0, 0) = 1.0;
    Eigen::MatrixXd eb = Eigen::MatrixXd::Zero(db, db);
    eb(0, 0) = 1.0;
    model.povm_a.assign(static_cast<std::size_t>(scen.inputs),
                        std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(k),
                                                     Eigen::MatrixXd::Zero(da, da)));
    model.povm_b.assign(static_cast<std::size_t>(scen.inputs),
                        std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(k),
                                                     Eigen::MatrixXd::Zero(db, db)));
    for (int x = 0; x < scen.inputs; ++x)
        if (alice_choice[static_cast<std::size_t>(x)] >= 0)
            model.povm_a[static_cast<std::size_t>(x)]
                        [static_cast<std::size_t>(alice_choice[static_cast<std::size_t>(x)])] = ea;
    for (int y = 0; y < scen.inputs; ++y)
        if (bob_choice[static_cast<std::size_t>(y)] >= 0)
            model.povm_b[static_cast<std::size_t>(y)]
                        [static_cast<std::size_t>(bob_choice[static_cast<std::size_t>(y)])] = eb;
    return model;
}

}  // namespace

ViolationReport violation_report(const BellFunctional& M, const SeesawConfig& cfg,
                                 const ClassicalOptions& copts,
                                 double degenerate_tol) {
    double scale = 0.0;
    for (double v : M.m.flat()) scale = std::max(scale, std::abs(v));
    if (scale == 0.0)
        throw ValidationError("violation_report: zero functional has B_C = 0");
    BellFunctional Mn = M;
    for (double& v : Mn.m.flat()) v /= scale;

    const ClassicalBoundResult cb = classical_bound(Mn, copts);
    if (cb.report.value <= degenerate_tol)
        throw ValidationError("violation_report: classical bound below tolerance, "
                              "functional rejected as degenerate");

    // Seed one restart from the deterministic optimum so the quantum lower
    // bound starts at the classical value.
    const QuantumModel warm = model_from_strategies(
        Mn.scenario, cfg.dim_a, cfg.dim_b, cb.alice_choice, cb.bob_choice);
    BellFunctional Mwarm = Mn;
    if (cb.sign < 0)
        for (double& v : Mwarm.m.flat()) v = -v;
    const SeesawResult sw = seesaw(Mwarm, cfg, &warm);

    ViolationReport out;
    out.classical = cb.report;
    out.classical.value *= scale;
    out.quantum = sw.report;
    out.quantum.value *= scale;
    out.ratio = sw.report.value / cb.report.value;
    out.unconfirmed = cb.report.certificate != "exact";
    return out;
}

MonitorReport upper_bound_monitor(const Behavior& P, int dim, int outputs,
                                  long budget) {
    MonitorReport out;
    out.nu = nu_of_behavior(P, budget).report.value;
    out.per_dim = out.nu / dim;
    out.per_output = out.nu / (static_cast<double>(outputs) * outputs);
    out.threshold = 16.0 * std::min(static_cast<double>(dim),
                                    static_cast<double>(outputs) * outputs);
    out.failed = out.nu > out.threshold;
    return out;
}

DimensionWitnessReport dimension_witness_report(const BellFunctional& M,
                                                const std::vector<int>& dims,
                                                const SeesawConfig& cfg) {
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] <= dims[i - 1])
            throw std::invalid_argument("dimension_witness_report: dims must ascend");
    DimensionWitnessReport out;
    double prev = 0.0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        SeesawConfig c = cfg;
        c.dim_a = c.dim_b = dims[i];
        c.rng = cfg.rng.substream(7000 + static_cast<std::uint64_t>(dims[i]));
        const SeesawResult sw = seesaw(M, c);
        DimensionWitnessRow row;
        row.dim = dims[i];
        row.value = sw.report.value;
        row.ratio_to_prev = (i == 0 || prev == 0.0) ? 1.0 : sw.report.value / prev;
        if (i > 0 && row.value < prev - (1e-7 + 1e-6 * std::abs(prev)))
            out.nondecreasing_ok = false;
        out.rows.push_back(row);
        prev = row.value;
    }
    return out;
}

}  // namespace bell
