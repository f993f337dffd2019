#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bell/config.hpp"

namespace bell {

/// Bipartite measurement scenario: both parties have `inputs` settings and
/// `outputs` outcomes. When `has_bottom` is set, a distinguished
/// "no detection" outcome is appended as the last output index.
struct Scenario {
    int inputs = 1;
    int outputs = 1;
    bool has_bottom = false;

    int effective_outputs() const { return outputs + (has_bottom ? 1 : 0); }
    int bottom_index() const { return outputs; }  // valid only if has_bottom
    long tensor_size() const {
        const long k = effective_outputs();
        return static_cast<long>(inputs) * inputs * k * k;
    }
    void validate() const;
    bool operator==(const Scenario&) const = default;
};

/// Dense row-major 4-tensor keyed (x, y, a, b) over a scenario's shape.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(const Scenario& scen, double fill = 0.0)
        : scen_(scen), data_(static_cast<std::size_t>(scen.tensor_size()), fill) {}

    const Scenario& scenario() const { return scen_; }

    double& at(int x, int y, int a, int b) { return data_[index(x, y, a, b)]; }
    double at(int x, int y, int a, int b) const { return data_[index(x, y, a, b)]; }

    const std::vector<double>& flat() const { return data_; }
    std::vector<double>& flat() { return data_; }

private:
    std::size_t index(int x, int y, int a, int b) const {
        const int k = scen_.effective_outputs();
        return static_cast<std::size_t>(((static_cast<long>(x) * scen_.inputs + y) * k + a) * k + b);
    }
    Scenario scen_;
    std::vector<double> data_;
};

enum class Provenance { quantum, local, nonsignalling_raw };

std::string to_string(Provenance p);

/// Conditional probability table P(a,b|x,y).
struct Behavior {
    Scenario scenario;
    Tensor4 p;
    Provenance provenance = Provenance::nonsignalling_raw;

    double marginal_a(int x, int a, int y_ref = 0) const;
    double marginal_b(int y, int b, int x_ref = 0) const;
};

/// Linear functional M acting on behaviors by full contraction.
struct BellFunctional {
    Scenario scenario;
    Tensor4 m;
};

/// One deterministic assignment input -> output per party.
struct DeterministicLocalPoint {
    std::vector<int> alice_map;  // length = inputs, values in [0, effective_outputs)
    std::vector<int> bob_map;
};

/// Extreme point of the incomplete/signed one-party ball: one (output,
/// sign) per input.
struct SignedStrategy {
    struct Choice {
        int output = 0;
        int sign = 1;  // -1 or +1
    };
    std::vector<Choice> choices;
};

struct ValidationReport {
    double nonneg_residual = 0.0;        // max(0, -min entry)
    double normalization_residual = 0.0; // max over (x,y) of |sum - 1|
    double nonsignalling_residual = 0.0; // max marginal variation
    bool nonneg_ok = false;
    bool normalized_ok = false;
    bool nonsignalling_ok = false;
};

/// Bipartite state with per-input POVM families. Incomplete POVMs
/// (sum E <= 1) model lost outcomes.
struct QuantumModel {
    int dim_a = 1;
    int dim_b = 1;
    Eigen::MatrixXd state;                          // density matrix, dA*dB square
    std::vector<std::vector<Eigen::MatrixXd>> povm_a;  // [input][output], dA square
    std::vector<std::vector<Eigen::MatrixXd>> povm_b;  // [input][output], dB square
    bool complete = true;

    void validate(const Scenario& scen) const;
};

/// Signed affine combination of deterministic local points.
struct LocalDecomposition {
    std::vector<std::pair<double, DeterministicLocalPoint>> terms;

    double weight_sum() const;
    double abs_weight_sum() const;
};

// ---- operations -----------------------------------------------------------

/// <M, P> = sum over (x,y,a,b) of M * P; shapes must match.
double pair(const BellFunctional& M, const Behavior& P);

/// P(a,b|x,y) = tr(E_x^a (x) F_y^b rho).
Behavior behavior_from_quantum(const QuantumModel& Q, const Scenario& scen);

Behavior behavior_from_point(const Scenario& scen, const DeterministicLocalPoint& pt);

/// Affine combination sum_i alpha_i P_i of deterministic points.
Behavior behavior_from_local(const Scenario& scen, const LocalDecomposition& D);

/// Extends M with an extra bottom output whose coefficients are all zero;
/// pair(pad(M), embed(P)) == pair(M, P) exactly.
BellFunctional pad_functional(const BellFunctional& M);

/// Embeds P into the bottom-extended scenario by appending zero slices.
Behavior embed_behavior(const Behavior& P);

/// Detector-efficiency noise: with efficiency eta, the perfect P becomes
///   eta^2 P + eta(1-eta) P(a|x) delta(b,bot) + eta(1-eta) delta(a,bot) P(b|y)
///   + (1-eta)^2 delta(a,bot) delta(b,bot)
/// on the bottom-extended scenario. Output is normalized exactly.
Behavior mix_detector_noise(const Behavior& P, double eta);

/// Residual report; never throws on violations.
ValidationReport validate(const Behavior& P);

}  // namespace bell
