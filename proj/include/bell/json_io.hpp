#pragma once

#include <string>

#include <json.hpp>

#include "bell/model.hpp"

namespace bell {

/// JSON schema v1 for tensors on disk:
///   {"scenario": {"inputs": N, "outputs": K, "bottom": bool},
///    "tensor": [flat row-major (x,y,a,b)],
///    "kind": "functional" | "behavior"}
/// The flat length must equal N*N*K'*K' with K' = K + bottom.
nlohmann::json functional_to_json(const BellFunctional& M);
nlohmann::json behavior_to_json(const Behavior& P);

BellFunctional functional_from_json(const nlohmann::json& j);
Behavior behavior_from_json(const nlohmann::json& j);

/// File helpers; throw ValidationError with a field/offset diagnostic on
/// malformed content.
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

BellFunctional load_functional(const std::string& path);
Behavior load_behavior(const std::string& path);

}  // namespace bell
