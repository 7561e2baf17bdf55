#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gardner/expr.hpp"

namespace gardner {

using JetMonomial = std::vector<std::pair<JetVar, int>>;

struct DiffTerm {
  JetMonomial monomial;
  Expr coefficient;
};

// Differential polynomial: Expr coefficients times monomials in jet variables.
// Backed by a canonical Expr; jets must appear as top-level factors with
// positive integer exponents.
class DiffPoly {
 public:
  DiffPoly() = default;
  DiffPoly(const Expr& e);  // NOLINT(google-explicit-constructor)
  DiffPoly(int c) : DiffPoly(Expr(c)) {}  // NOLINT(google-explicit-constructor)

  const Expr& expr() const { return e_; }
  std::vector<DiffTerm> terms() const;
  Expr coefficient(const JetMonomial& m) const;
  std::vector<JetVar> jets() const;
  int max_x_order(int dep = 0) const;
  int max_t_order(int dep = 0) const;
  int max_order(int dep = 0) const;
  bool is_zero() const { return e_.is_zero(); }

  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) { return DiffPoly(a.e_ + b.e_); }
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) { return DiffPoly(a.e_ - b.e_); }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) { return DiffPoly(a.e_ * b.e_); }
  friend DiffPoly operator-(const DiffPoly& a) { return DiffPoly(-a.e_); }
  friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.e_ == b.e_; }

 private:
  Expr e_;
};

int compare_jets(const JetVar& a, const JetVar& b);
std::string jet_name(const JetVar& j, const std::string& dep = "u", char x = 'x', char t = 't');

// One member of the Gardner family u_t + A u u_x + C u^2 u_x + B u_xxx + Q u = 0.
struct Scenario {
  Expr A = Expr::func("A");
  Expr B = Expr::func("B");
  Expr C = Expr::func("C");
  Expr Q = Expr::func("Q");
  std::map<std::string, Expr> params;  // exact parameter bindings
  std::string case_id;
  std::optional<Expr> initial;

  static Scenario abstract_family() { return Scenario{}; }
  static Scenario constant(const Rational& a, const Rational& b, const Rational& c, const Rational& q);

  Expr coefficient(char name) const;  // with parameters substituted
  DiffPoly equation() const;
  DiffPoly delta() const;  // u_t = delta on solutions
  ParamEnv env() const;
};

DiffPoly total_x(const DiffPoly& p);
DiffPoly total_t(const DiffPoly& p);
DiffPoly partial(const DiffPoly& p, const JetVar& j);

DiffPoly eliminate_ut(const DiffPoly& p, const DiffPoly& delta);
DiffPoly eliminate_ut(const DiffPoly& p, const Scenario& ctx);

DiffPoly euler(const DiffPoly& p, int dep = 0);
DiffPoly higher_euler(const DiffPoly& p, int i);

DiffPoly invert_total_x(const DiffPoly& p, const ZeroTester& tester = default_zero_tester());

// Keeps only monomial groups whose coefficient is not (numerically) zero.
DiffPoly prune_zero_groups(const DiffPoly& p, const ZeroTester& tester);

}  // namespace gardner
