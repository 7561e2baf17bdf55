#pragma once

#include <optional>
#include <string>

#include "gardner/jet.hpp"

namespace gardner {

// Scenario file: {"equation": {"A","B","C","Q"}, "params": {...}, "case": id, "initial": expr}.
// A case id fills the closed forms of the catalog subcase (or the constant-
// coefficient example for "example"); explicit equation keys override them.
// Parameter values are exact numbers or strings such as "1/2".
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace gardner
