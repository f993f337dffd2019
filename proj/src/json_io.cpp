#include "bell/json_io.hpp"

#include <fstream>

namespace bell {

namespace {

Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.contains("scenario") || !j["scenario"].is_object())
        throw ValidationError("missing object field 'scenario'");
    const auto& s = j["scenario"];
    for (const char* field : {"inputs", "outputs"})
        if (!s.contains(field) || !s[field].is_number_integer())
            throw ValidationError(std::string("scenario.") + field +
                                  ": missing or not an integer");
    Scenario scen;
    scen.inputs = s["inputs"].get<int>();
    scen.outputs = s["outputs"].get<int>();
    scen.has_bottom = s.value("bottom", false);
    scen.validate();
    return scen;
}

nlohmann::json scenario_to_json(const Scenario& scen) {
    return {{"inputs", scen.inputs}, {"outputs", scen.outputs}, {"bottom", scen.has_bottom}};
}

Tensor4 tensor_from_json(const nlohmann::json& j, const Scenario& scen) {
    if (!j.contains("tensor") || !j["tensor"].is_array())
        throw ValidationError("missing array field 'tensor'");
    const auto& arr = j["tensor"];
    if (static_cast<long>(arr.size()) != scen.tensor_size())
        throw ValidationError("tensor: flat length " + std::to_string(arr.size()) +
                              " != N*N*K'*K' = " + std::to_string(scen.tensor_size()));
    Tensor4 t(scen);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw ValidationError("tensor[" + std::to_string(i) + "]: not a number");
        t.flat()[i] = arr[i].get<double>();
    }
    return t;
}

std::string kind_of(const nlohmann::json& j) {
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ValidationError("missing string field 'kind'");
    return j["kind"].get<std::string>();
}

}  // namespace

nlohmann::json functional_to_json(const BellFunctional& M) {
    return {{"scenario", scenario_to_json(M.scenario)},
            {"tensor", M.m.flat()},
            {"kind", "functional"}};
}

nlohmann::json behavior_to_json(const Behavior& P) {
    return {{"scenario", scenario_to_json(P.scenario)},
            {"tensor", P.p.flat()},
            {"kind", "behavior"}};
}

BellFunctional functional_from_json(const nlohmann::json& j) {
    if (kind_of(j) != "functional")
        throw ValidationError("kind: expected 'functional', got '" + kind_of(j) + "'");
    const Scenario scen = scenario_from_json(j);
    return BellFunctional{scen, tensor_from_json(j, scen)};
}

Behavior behavior_from_json(const nlohmann::json& j) {
    if (kind_of(j) != "behavior")
        throw ValidationError("kind: expected 'behavior', got '" + kind_of(j) + "'");
    const Scenario scen = scenario_from_json(j);
    return Behavior{scen, tensor_from_json(j, scen), Provenance::nonsignalling_raw};
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

BellFunctional load_functional(const std::string& path) {
    try {
        return functional_from_json(load_json_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

Behavior load_behavior(const std::string& path) {
    try {
        return behavior_from_json(load_json_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

}  // namespace bell
