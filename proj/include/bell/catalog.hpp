#pragma once

#include "bell/model.hpp"
#include "bell/rng.hpp"

namespace bell {

/// CHSH functional in probability form: M(x,y,a,b) = (-1)^(a+b+xy) on the
/// 2-input/2-output scenario. Classical bound 2, quantum bound 2*sqrt(2).
BellFunctional chsh_functional();

/// CHSH-optimal quantum behavior: uniform marginals and correlators
/// E(x,y) = (-1)^(xy)/sqrt(2).
Behavior tsirelson_behavior();

/// PR box: P(a,b|x,y) = 1/2 when a xor b equals x and y, else 0.
Behavior pr_box_behavior();

/// Random normalized non-signalling behavior in the 2-input/2-output
/// scenario: a convex mixture of deterministic local points with an extra
/// PR-box component of weight up to `max_pr_weight`.
Behavior random_ns_behavior(RngStream& stream, double max_pr_weight = 0.85);

}  // namespace bell
