#pragma once

#include "json.hpp"

#include "coda/core/space.hpp"

namespace coda {

inline nlohmann::json space_to_json(const FactoredSpace& space) {
  auto list = [](const std::vector<ComponentSpec>& comps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : comps) arr.push_back({{"name", c.name}, {"dim", c.dim}});
    return arr;
  };
  return {{"state", list(space.state_components())}, {"action", list(space.action_components())}};
}

/// Throws DimensionError (or nlohmann::json::exception) on malformed input.
inline SpacePtr space_from_json(const nlohmann::json& j) {
  auto list = [](const nlohmann::json& arr) {
    if (!arr.is_array()) throw DimensionError("space json: component list must be an array");
    std::vector<ComponentSpec> out;
    for (const auto& c : arr) out.push_back({c.at("name").get<std::string>(), c.at("dim").get<int>()});
    return out;
  };
  return make_space(list(j.at("state")), list(j.at("action")));
}

}  // namespace coda
