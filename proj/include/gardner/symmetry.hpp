#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gardner/jet.hpp"
#include "gardner/parser.hpp"
#include "gardner/report.hpp"

namespace gardner {

// xi d/dx + tau d/dt + eta d/du; xi in (x,t), tau in t, eta in (x,t,u).
struct VectorField {
  Expr xi;
  Expr tau;
  Expr eta;
  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    return {a.xi + b.xi, a.tau + b.tau, a.eta + b.eta};
  }
};

// Gardner grammar plus the infinitesimals and auxiliary time functions:
// tau, alpha, beta, f1 of t; xi of (x,t); eta of (x,t,u).
GrammarConfig symmetry_grammar();

// Third prolongation of v applied to F (no u_t elimination).
DiffPoly apply_symmetry(const VectorField& v, const DiffPoly& F);

// Coefficients of the independent jet monomials of eliminate_ut(pr v(F)).
std::vector<Expr> determining_system(const Scenario& family, const VectorField& ansatz);

struct Constraint {
  std::string name;  // e.g. "2*d0 + k*k1 != 0"
  Expr expr;         // must not vanish
};

struct CatalogEntry {
  std::string id;
  std::string anchor;
  int family = 1;  // 1: Q != 0 with C = 1, 2: Q = 0
  std::vector<std::string> parameters;
  // closed forms of A, B, C, Q, tau, beta (and alpha in family 1) in t and parameters
  std::map<std::string, Expr> forms;
  std::vector<Constraint> constraints;

  Scenario scenario(const std::map<std::string, Expr>& params = {}) const;
  VectorField generator(const std::map<std::string, Expr>& params = {}) const;
  Expr form(const std::string& name, const std::map<std::string, Expr>& params = {}) const;
  // throws E_PARAM naming the first predicate that vanishes exactly
  void check_constraints(const std::map<std::string, Expr>& params) const;
};

const std::vector<std::string>& case_ids();
const CatalogEntry& catalog(const std::string& id);

// Family ansatz with abstract A, B, (C), Q, tau, beta, (alpha).
VectorField family_generator(int family);
Scenario family_scenario(int family);

// The ODE-level system a subcase must satisfy, as named residual expressions
// in the abstract functions.
std::vector<std::pair<std::string, Expr>> family_conditions(int family);

// Rewrites derivatives using the family ODE system (solved for B_t, A_t, Q_t,
// beta_tt, alpha in family 1; B_t, C_t, A_t, beta_t in family 2).
Expr reduce_by_family_relations(const Expr& e, int family);

// Parameters drawn from [1/2, 2] in steps of 1/10, keeping every constraint
// predicate at least 0.05 away from zero.
std::map<std::string, Expr> random_admissible_params(const std::string& id, std::mt19937_64& rng);

// Verifies the subcase closed forms against the family system and the full
// invariance condition. Unset parameters are sampled.
Report verify_case(const std::string& id, const std::map<std::string, Expr>& params, std::uint64_t seed = 0x5eedULL);

// Determining-system checks: the general ansatz contains the B-scaling
// condition, the family ansatz conditions vanish under the family relations
// and under every subcase's closed forms, and d/dx gives an empty system.
Report determining_report(std::uint64_t seed = 0x5eedULL);

// Parses "k=1,k1=1/2" into exact bindings.
std::map<std::string, Expr> parse_bindings(const std::string& src);

}  // namespace gardner
