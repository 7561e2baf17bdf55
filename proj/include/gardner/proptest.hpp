#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <string>

#include "gardner/jet.hpp"

namespace gardner::proptest {

// Generators for property checks.

// Plain expression tree with its own double evaluator, used as an
// independent oracle for the canonical Expr representation.
struct Node {
  enum Kind { Const, Param, T, X, Add, Sub, Mul, Div, PowInt, PowFrac, Exp } kind = Const;
  long num = 0;
  long den = 1;
  std::string name;
  std::shared_ptr<Node> a, b;

  double eval(const std::map<std::string, double>& env, double t, double x) const {
    switch (kind) {
      case Const: return static_cast<double>(num) / static_cast<double>(den);
      case Param: return env.at(name);
      case T: return t;
      case X: return x;
      case Add: return a->eval(env, t, x) + b->eval(env, t, x);
      case Sub: return a->eval(env, t, x) - b->eval(env, t, x);
      case Mul: return a->eval(env, t, x) * b->eval(env, t, x);
      case Div: return a->eval(env, t, x) / b->eval(env, t, x);
      case PowInt: return std::pow(a->eval(env, t, x), static_cast<double>(num));
      case PowFrac: return std::pow(a->eval(env, t, x), static_cast<double>(num) / static_cast<double>(den));
      case Exp: return std::exp(a->eval(env, t, x));
    }
    return 0.0;
  }

  gardner::Expr build() const {
    using gardner::Expr;
    switch (kind) {
      case Const: return Expr(gardner::Rational(num, den));
      case Param: return Expr::param(name);
      case T: return Expr::t();
      case X: return Expr::x();
      case Add: return a->build() + b->build();
      case Sub: return a->build() - b->build();
      case Mul: return a->build() * b->build();
      case Div: return a->build() / b->build();
      case PowInt: return gardner::pow(a->build(), Expr(num));
      case PowFrac: return gardner::pow(a->build(), Expr(gardner::Rational(num, den)));
      case Exp: return Expr::exp(a->build());
    }
    return Expr();
  }

  std::string text() const {
    switch (kind) {
      case Const: return den == 1 ? "(" + std::to_string(num) + ")" : "(" + std::to_string(num) + "/" + std::to_string(den) + ")";
      case Param: return name;
      case T: return "t";
      case X: return "x";
      case Add: return "(" + a->text() + " + " + b->text() + ")";
      case Sub: return "(" + a->text() + " - " + b->text() + ")";
      case Mul: return a->text() + "*" + b->text();
      case Div: return a->text() + "/(" + b->text() + ")";
      case PowInt: return "(" + a->text() + ")^(" + std::to_string(num) + ")";
      case PowFrac: return "(" + a->text() + ")^(" + std::to_string(num) + "/" + std::to_string(den) + ")";
      case Exp: return "exp(" + a->text() + ")";
    }
    return "";
  }
};

// Trees built from positive atoms and positive-preserving operations, so
// fractional powers and divisions stay well defined on [1/2, 2].
class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

  std::shared_ptr<Node> positive(int depth) {
    auto n = std::make_shared<Node>();
    int choice = depth <= 0 ? pick(0, 3) : pick(0, 9);
    switch (choice) {
      case 0:
        n->kind = Node::Const;
        n->num = pick(1, 5);
        n->den = pick(1, 3);
        break;
      case 1:
        n->kind = Node::Param;
        n->name = params_[static_cast<std::size_t>(pick(0, 3))];
        break;
      case 2: n->kind = Node::T; break;
      case 3: n->kind = Node::X; break;
      case 4:
      case 5:
        n->kind = Node::Add;
        n->a = positive(depth - 1);
        n->b = positive(depth - 1);
        break;
      case 6:
        n->kind = Node::Mul;
        n->a = positive(depth - 1);
        n->b = positive(depth - 1);
        break;
      case 7:
        n->kind = Node::Div;
        n->a = positive(depth - 1);
        n->b = positive(depth - 1);
        break;
      case 8:
        n->kind = pick(0, 1) ? Node::PowInt : Node::PowFrac;
        n->a = positive(depth - 1);
        n->num = pick(-2, 3);
        n->den = n->kind == Node::PowFrac ? pick(2, 3) : 1;
        break;
      default:
        n->kind = Node::Exp;
        n->a = signed_tree(depth - 2);
        break;
    }
    return n;
  }

  // arbitrary sign, used only where sign is harmless
  std::shared_ptr<Node> signed_tree(int depth) {
    if (depth <= 0 || pick(0, 2) == 0) return positive(0);
    auto n = std::make_shared<Node>();
    n->kind = pick(0, 1) ? Node::Sub : Node::Add;
    n->a = positive(depth - 1);
    n->b = positive(depth - 1);
    return n;
  }

  long pick(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  static const std::vector<std::string>& params() { return params_; }

 private:
  std::mt19937_64 rng_;
  static inline const std::vector<std::string> params_{"k", "k1", "d0", "a0"};
};

// Random differential polynomials in u with x-order <= max_order and
// degree <= max_degree; coefficients are small trees in x, t and parameters.
inline gardner::DiffPoly random_diffpoly(TreeGen& gen, int max_order = 3, int max_degree = 3, int max_terms = 4,
                                        int min_degree = 0) {
  using gardner::Expr;
  Expr out;
  long n = gen.pick(1, max_terms);
  for (long i = 0; i < n; ++i) {
    Expr term = gen.positive(1)->build();
    long deg = gen.pick(min_degree, max_degree);
    for (long d = 0; d < deg; ++d) term = term * Expr::u(static_cast<int>(gen.pick(0, max_order)));
    out = out + term;
  }
  return gardner::DiffPoly(out);
}

}  // namespace gardner::proptest
