#include "gardner/scenario_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gardner/laws.hpp"
#include "gardner/symmetry.hpp"

namespace gardner {

namespace {

Expr value_expr(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return parse(v.get<std::string>());
  if (v.is_number_integer()) return Expr(Rational(v.get<long>()));
  if (v.is_number()) return parse(v.dump());
  throw Error(ErrorCode::Input, "value of '" + key + "' must be a number or an expression string");
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Input, std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Input, "scenario must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "equation" && key != "params" && key != "case" && key != "initial")
      throw Error(ErrorCode::Input, "unknown scenario key '" + key + "'");
  Scenario s;
  std::map<std::string, Expr> params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw Error(ErrorCode::Input, "'params' must be an object");
    for (const auto& [k, v] : j["params"].items()) params[k] = value_expr(v, k);
  }
  if (j.contains("case")) {
    if (!j["case"].is_string()) throw Error(ErrorCode::Input, "'case' must be a string");
    std::string id = j["case"].get<std::string>();
    if (id == "example") {
      s = example_scenario();
    } else {
      const CatalogEntry& entry = catalog(id);
      entry.check_constraints(params);
      s = entry.scenario();
    }
    s.case_id = id;
  }
  bool has_equation = j.contains("equation");
  if (!has_equation && !j.contains("case")) throw Error(ErrorCode::Input, "scenario needs 'equation' or 'case'");
  if (has_equation) {
    const auto& eq = j["equation"];
    if (!eq.is_object()) throw Error(ErrorCode::Input, "'equation' must be an object");
    for (const auto& [k, v] : eq.items()) {
      if (k.size() != 1 || std::string("ABCQ").find(k[0]) == std::string::npos)
        throw Error(ErrorCode::Input, "unknown coefficient '" + k + "'");
      if (!v.is_string() && !v.is_number()) throw Error(ErrorCode::Input, "coefficient " + k + " must be an expression");
      Expr e = value_expr(v, k);
      if (contains_jets(e) || free_symbols(e).x) throw Error(ErrorCode::Input, "coefficient " + k + " must depend on t only");
      switch (k[0]) {
        case 'A': s.A = e; break;
        case 'B': s.B = e; break;
        case 'C': s.C = e; break;
        default: s.Q = e; break;
      }
    }
    if (!j.contains("case")) {
      for (const char* c : {"A", "B", "C", "Q"})
        if (!eq.contains(c)) throw Error(ErrorCode::Input, std::string("equation is missing ") + c);
    }
  }
  s.params = params;
  for (char c : {'A', 'B', 'C'})
    if (s.coefficient(c).is_zero()) throw Error(ErrorCode::Input, std::string("coefficient ") + c + " must be nonzero");
  if (j.contains("initial")) s.initial = value_expr(j["initial"], "initial");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Input, "cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

}  // namespace gardner
