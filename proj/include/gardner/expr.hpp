#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gardner/error.hpp"

namespace gardner {

using Rational = mpq_class;

enum class Indep : std::uint8_t { X = 0, T = 1 };

// u_{x^m t^n} of dependent variable `dep` (0 = u, 1 = v)
struct JetVar {
  int dep = 0;
  int x_order = 0;
  int t_order = 0;
  int order() const { return x_order + t_order; }
  friend auto operator<=>(const JetVar&, const JetVar&) = default;
};

enum ArgFlags : unsigned { kArgX = 1u, kArgT = 2u, kArgU = 4u };

// Abstract function of a subset of (x, t, u) with partial derivative orders.
struct FuncSpec {
  std::string name;
  unsigned args = kArgT;
  int dx = 0;
  int dt = 0;
  int du = 0;
  friend auto operator<=>(const FuncSpec&, const FuncSpec&) = default;
};

enum class AtomKind : std::uint8_t { Number, Param, Var, Func, AntiDeriv, Elementary, Euler, Sum, Jet };
enum class ElementaryFn : std::uint8_t { Sin, Cos };

class Atom;
struct Term;
using AtomPtr = std::shared_ptr<const Atom>;

// Canonical sum of terms. Every value is normalized at construction, so
// structural equality is the normal-form equality.
class Expr {
 public:
  Expr();
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr param(const std::string& name);
  static Expr var(Indep v);
  static Expr x() { return var(Indep::X); }
  static Expr t() { return var(Indep::T); }
  static Expr jet(const JetVar& j);
  static Expr jet(int dep, int x_order, int t_order) { return jet(JetVar{dep, x_order, t_order}); }
  static Expr u(int x_order = 0, int t_order = 0) { return jet(JetVar{0, x_order, t_order}); }
  static Expr func(const FuncSpec& f);
  static Expr func(const std::string& name, unsigned args = kArgT) { return func(FuncSpec{name, args}); }
  static Expr antideriv(const Expr& integrand);
  static Expr exp(const Expr& arg);
  static Expr sin(const Expr& arg);
  static Expr cos(const Expr& arg);
  static Expr from_terms(std::vector<Term> terms);  // normalizes

  const std::vector<Term>& terms() const;
  bool is_zero() const;
  bool is_one() const;
  std::optional<Rational> as_rational() const;
  bool is_integer() const;
  bool is_positive_integer() const;
  std::size_t size() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator<(const Expr& a, const Expr& b);

  const void* identity() const { return terms_.get(); }

 private:
  explicit Expr(std::shared_ptr<const std::vector<Term>> terms) : terms_(std::move(terms)) {}
  std::shared_ptr<const std::vector<Term>> terms_;
};

class Atom {
 public:
  AtomKind kind = AtomKind::Number;
  Rational number;          // Number
  std::string name;         // Param
  Indep var = Indep::X;     // Var
  FuncSpec func;            // Func
  JetVar jet;               // Jet
  ElementaryFn fn = ElementaryFn::Sin;
  Expr inner;               // AntiDeriv integrand, Elementary argument, Sum value
};

struct Factor {
  AtomPtr base;
  Expr exponent;
};

struct Term {
  Rational coef;
  std::vector<Factor> factors;  // sorted by base, distinct bases
};

Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, long exponent);
inline Expr rational(long num, long den) { return Expr(Rational(num, den)); }

// Idempotent; values are already canonical.
inline Expr normalize(const Expr& e) { return e; }

int compare(const Expr& a, const Expr& b);
int compare(const Atom& a, const Atom& b);
int compare_monomials(const std::vector<Factor>& a, const std::vector<Factor>& b);

AtomPtr euler_atom();

// ---------------------------------------------------------------- derivation

// Derivative of a primitive atom (Param, Var, Func, AntiDeriv, Jet). Sums,
// exponentials, elementary functions and powers are handled structurally.
using AtomDerivative = std::function<Expr(const Atom&)>;
Expr derive(const Expr& e, const AtomDerivative& d);

Expr diff_param(const Expr& e, Indep v);
// Partial derivative with jets held fixed (explicit dependence only).
Expr partial_var(const Expr& e, Indep v);
Expr partial_jet(const Expr& e, const JetVar& j);
Expr total_derivative(const Expr& e, Indep v);

// ---------------------------------------------------------------- substitution

using AtomSubstitution = std::function<std::optional<Expr>(const Atom&)>;
Expr substitute(const Expr& e, const AtomSubstitution& f);
Expr substitute_params(const Expr& e, const std::map<std::string, Expr>& bindings);
// Replaces abstract functions (and their derivative chains) by closed forms.
// Bindings may refer to each other; cyclic references raise E_CYCLE.
Expr substitute_functions(const Expr& e, const std::map<std::string, Expr>& bindings);
Expr substitute_jets(const Expr& e, const std::function<std::optional<Expr>(const JetVar&)>& f);

// ---------------------------------------------------------------- queries

struct FreeSymbols {
  std::set<std::string> params;
  bool x = false;
  bool t = false;
  std::set<JetVar> jets;
  std::set<FuncSpec> funcs;
  std::vector<AtomPtr> antiderivs;
};
FreeSymbols free_symbols(const Expr& e);
bool contains_jets(const Expr& e);
bool depends_on(const Expr& e, Indep v);

// ---------------------------------------------------------------- evaluation

struct ParamEnv {
  struct Binding {
    std::optional<Rational> exact;
    double value = 0.0;
  };
  std::map<std::string, Binding> params;
  std::optional<double> x;
  std::optional<double> t;
  std::map<JetVar, double> jets;
  // closed forms for named time-functions; index n holds the n-th t-derivative
  std::map<std::string, std::vector<Expr>> functions;
  // consulted for any atom that is otherwise unbound (used by samplers)
  std::function<std::optional<double>(const Atom&)> fallback;

  void set(const std::string& name, const Rational& value);
  void set(const std::string& name, double value);
  void bind_function(const std::string& name, const Expr& closed_form, int derivatives = 6);
  std::map<std::string, Expr> exact_bindings() const;
};

double eval_num(const Expr& e, const ParamEnv& env);
// value together with the sum of absolute values of the top-level terms
std::pair<double, double> eval_with_magnitude(const Expr& e, const ParamEnv& env);

// Fast evaluator for expressions in (x, t) and u-jets u_{m,0}, m <= 4, after
// parameters and closed-form functions are bound.
class Compiled {
 public:
  struct Point {
    double x = 0.0;
    double t = 0.0;
    const double* jets = nullptr;  // u, u_x, u_xx, u_xxx, u_4x
  };
  Compiled() = default;
  double operator()(const Point& p) const { return fn_(p); }
  bool depends_on_x() const { return dep_x_; }
  bool depends_on_jets() const { return dep_jets_; }

 private:
  friend Compiled compile(const Expr& e, const ParamEnv& env);
  std::function<double(const Point&)> fn_;
  bool dep_x_ = false;
  bool dep_jets_ = false;
};
Compiled compile(const Expr& e, const ParamEnv& env);

// ---------------------------------------------------------------- zero test

enum class CheckMode { Symbolic, Numeric };

struct ZeroTest {
  bool zero = false;
  CheckMode mode = CheckMode::Symbolic;
  double max_relative = 0.0;
};

struct SampleOptions {
  std::uint64_t seed = 0x5eedULL;
  int points = 16;
  double lo = 0.5;
  double hi = 2.0;
  double tolerance = 1e-9;
  // held fixed at every sample point; anything else free is drawn at random
  ParamEnv fixed;
  // expressions that must stay away from zero at a sample point
  std::vector<Expr> nonzero;
  double nonzero_margin = 0.05;
};

class ZeroTester {
 public:
  ZeroTester() = default;
  explicit ZeroTester(SampleOptions options) : options_(std::move(options)) {}
  ZeroTest test(const Expr& e) const;
  bool is_zero(const Expr& e) const { return test(e).zero; }
  const SampleOptions& options() const { return options_; }
  SampleOptions& options() { return options_; }
  // true once any call had to fall back to sampling
  bool used_numeric() const { return used_numeric_; }
  void reset_mode() const { used_numeric_ = false; }

 private:
  SampleOptions options_;
  mutable bool used_numeric_ = false;
};

const ZeroTester& default_zero_tester();

// Resolves antiderivatives of polynomial and exponential integrands in t.
Expr resolve_antiderivatives(const Expr& e);

}  // namespace gardner
