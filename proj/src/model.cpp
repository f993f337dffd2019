#include "bell/model.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace bell {

void Scenario::validate() const {
    if (inputs < 1) throw ValidationError("scenario: inputs must be >= 1");
    if (outputs < 1) throw ValidationError("scenario: outputs must be >= 1");
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::quantum: return "quantum";
        case Provenance::local: return "local";
        case Provenance::nonsignalling_raw: return "nonsignalling-raw";
    }
    return "unknown";
}

double Behavior::marginal_a(int x, int a, int y_ref) const {
    double s = 0.0;
    for (int b = 0; b < scenario.effective_outputs(); ++b) s += p.at(x, y_ref, a, b);
    return s;
}

double Behavior::marginal_b(int y, int b, int x_ref) const {
    double s = 0.0;
    for (int a = 0; a < scenario.effective_outputs(); ++a) s += p.at(x_ref, y, a, b);
    return s;
}

namespace {

void check_psd(const Eigen::MatrixXd& A, double tol, const char* what) {
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, A.cwiseAbs().maxCoeff()))
        throw ValidationError(std::string(what) + ": not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw ValidationError(std::string(what) + ": not positive semidefinite");
}

}  // namespace

void QuantumModel::validate(const Scenario& scen) const {
    if (dim_a < 1 || dim_b < 1) throw ValidationError("quantum model: dims must be >= 1");
    const int d = dim_a * dim_b;
    if (state.rows() != d || state.cols() != d)
        throw ValidationError("quantum model: state dimension mismatch");
    check_psd(state, 1e-9, "state");
    if (std::abs(state.trace() - 1.0) > tolerances().norm)
        throw ValidationError("quantum model: state trace != 1");
    const int k = scen.effective_outputs();
    auto check_party = [&](const std::vector<std::vector<Eigen::MatrixXd>>& povm,
                           int dim, const char* who) {
        if (static_cast<int>(povm.size()) != scen.inputs)
            throw ValidationError(std::string(who) + ": wrong number of inputs");
        for (const auto& effects : povm) {
            if (static_cast<int>(effects.size()) != k)
                throw ValidationError(std::string(who) + ": wrong number of outputs");
            Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
            for (const auto& e : effects) {
                if (e.rows() != dim || e.cols() != dim)
                    throw ValidationError(std::string(who) + ": effect dimension mismatch");
                check_psd(e, 1e-9, who);
                sum += e;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sum, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().maxCoeff() > 1.0 + 1e-9)
                throw ValidationError(std::string(who) + ": effects sum above identity");
            if (complete && (sum - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9)
                throw ValidationError(std::string(who) + ": complete POVM does not sum to identity");
        }
    };
    check_party(povm_a, dim_a, "povm A");
    check_party(povm_b, dim_b, "povm B");
}

double LocalDecomposition::weight_sum() const {
    double s = 0.0;
    for (const auto& [w, pt] : terms) s += w;
    return s;
}

double LocalDecomposition::abs_weight_sum() const {
    double s = 0.0;
    for (const auto& [w, pt] : terms) s += std::abs(w);
    return s;
}

double pair(const BellFunctional& M, const Behavior& P) {
    if (!(M.scenario == P.scenario))
        throw ValidationError("pair: scenario shapes do not match");
    const auto& mf = M.m.flat();
    const auto& pf = P.p.flat();
    double s = 0.0;
    for (std::size_t i = 0; i < mf.size(); ++i) s += mf[i] * pf[i];
    return s;
}

Behavior behavior_from_quantum(const QuantumModel& Q, const Scenario& scen) {
    Q.validate(scen);
    Behavior out{scen, Tensor4(scen), Provenance::quantum};
    const int k = scen.effective_outputs();
    for (int x = 0; x < scen.inputs; ++x)
        for (int y = 0; y < scen.inputs; ++y)
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    const Eigen::MatrixXd op =
                        Eigen::kroneckerProduct(Q.povm_a[x][a], Q.povm_b[y][b]);
                    out.p.at(x, y, a, b) = (op * Q.state).trace();
                }
    return out;
}

Behavior behavior_from_point(const Scenario& scen, const DeterministicLocalPoint& pt) {
    Behavior out{scen, Tensor4(scen), Provenance::local};
    for (int x = 0; x < scen.inputs; ++x)
        for (int y = 0; y < scen.inputs; ++y)
            out.p.at(x, y, pt.alice_map[x], pt.bob_map[y]) = 1.0;
    return out;
}

Behavior behavior_from_local(const Scenario& scen, const LocalDecomposition& D) {
    if (D.terms.empty())
        throw ValidationError("behavior_from_local: empty decomposition");
    Behavior out{scen, Tensor4(scen), Provenance::local};
    for (const auto& [w, pt] : D.terms)
        for (int x = 0; x < scen.inputs; ++x)
            for (int y = 0; y < scen.inputs; ++y)
                out.p.at(x, y, pt.alice_map[x], pt.bob_map[y]) += w;
    return out;
}

BellFunctional pad_functional(const BellFunctional& M) {
    Scenario padded = M.scenario;
    padded.outputs = M.scenario.effective_outputs();
    padded.has_bottom = true;
    BellFunctional out{padded, Tensor4(padded)};
    const int k = M.scenario.effective_outputs();
    for (int x = 0; x < padded.inputs; ++x)
        for (int y = 0; y < padded.inputs; ++y)
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    out.m.at(x, y, a, b) = M.m.at(x, y, a, b);
    return out;
}

Behavior embed_behavior(const Behavior& P) {
    Scenario padded = P.scenario;
    padded.outputs = P.scenario.effective_outputs();
    padded.has_bottom = true;
    Behavior out{padded, Tensor4(padded), P.provenance};
    const int k = P.scenario.effective_outputs();
    for (int x = 0; x < padded.inputs; ++x)
        for (int y = 0; y < padded.inputs; ++y)
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    out.p.at(x, y, a, b) = P.p.at(x, y, a, b);
    return out;
}

Behavior mix_detector_noise(const Behavior& P, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ValidationError("mix_detector_noise: eta must be in [0, 1]");
    Behavior out = embed_behavior(P);
    out.provenance = P.provenance;
    const Scenario& scen = out.scenario;
    const int bot = scen.bottom_index();
    const int k = P.scenario.effective_outputs();
    const double e2 = eta * eta;
    const double e1 = eta * (1.0 - eta);
    const double e0 = (1.0 - eta) * (1.0 - eta);
    for (int x = 0; x < scen.inputs; ++x)
        for (int y = 0; y < scen.inputs; ++y) {
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) out.p.at(x, y, a, b) *= e2;
            for (int a = 0; a < k; ++a) out.p.at(x, y, a, bot) = e1 * P.marginal_a(x, a, y);
            for (int b = 0; b < k; ++b) out.p.at(x, y, bot, b) = e1 * P.marginal_b(y, b, x);
            out.p.at(x, y, bot, bot) = e0;
        }
    return out;
}

ValidationReport validate(const Behavior& P) {
    ValidationReport rep;
    const Scenario& scen = P.scenario;
    const int k = scen.effective_outputs();
    double min_entry = 0.0;
    for (double v : P.p.flat()) min_entry = std::min(min_entry, v);
    rep.nonneg_residual = std::max(0.0, -min_entry);

    for (int x = 0; x < scen.inputs; ++x)
        for (int y = 0; y < scen.inputs; ++y) {
            double s = 0.0;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) s += P.p.at(x, y, a, b);
            rep.normalization_residual =
                std::max(rep.normalization_residual, std::abs(s - 1.0));
        }

    // Marginal of one party must not vary with the other party's input.
    for (int x = 0; x < scen.inputs; ++x)
        for (int a = 0; a < k; ++a) {
            double lo = 0.0, hi = 0.0;
            for (int y = 0; y < scen.inputs; ++y) {
                const double mg = P.marginal_a(x, a, y);
                if (y == 0) lo = hi = mg;
                lo = std::min(lo, mg);
                hi = std::max(hi, mg);
            }
            rep.nonsignalling_residual = std::max(rep.nonsignalling_residual, hi - lo);
        }
    for (int y = 0; y < scen.inputs; ++y)
        for (int b = 0; b < k; ++b) {
            double lo = 0.0, hi = 0.0;
            for (int x = 0; x < scen.inputs; ++x) {
                const double mg = P.marginal_b(y, b, x);
                if (x == 0) lo = hi = mg;
                lo = std::min(lo, mg);
                hi = std::max(hi, mg);
            }
            rep.nonsignalling_residual = std::max(rep.nonsignalling_residual, hi - lo);
        }

    rep.nonneg_ok = rep.nonneg_residual <= tolerances().nonneg;
    rep.normalized_ok = rep.normalization_residual <= tolerances().norm;
    rep.nonsignalling_ok = rep.nonsignalling_residual <= tolerances().nonsignalling;
    return rep;
}

}  // namespace bell
