#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gardner/conslaw.hpp"

namespace gardner {

// Displayed conservation-law data for one subcase, in abstract parameters.
struct LawDisplay {
  std::string id;      // "1.1a", "1.1b", "1.2", "2.1", "2.2", "example"
  std::string anchor;  // quote locating the display
  std::optional<Expr> multiplier;            // as displayed
  std::optional<Expr> corrected_multiplier;  // when the display is not a multiplier
  std::optional<Expr> phi;                   // self-adjointness substitution
  Expr density;
  Expr flux;

  Scenario scenario(const std::map<std::string, Expr>& params = {}) const;
  VectorField generator(const std::map<std::string, Expr>& params = {}) const;  // phi-based entries only
};

const std::vector<std::string>& law_ids();
const LawDisplay& law_display(const std::string& id);

// u_t + u u_x + u^2 u_x + u_xxx = 0
Scenario example_scenario();
// (k1 x - k1 t/2) d/dx + (3 k1 t + k2) d/dt + (-k1 u - k1/2) d/du
VectorField example_generator();

}  // namespace gardner
