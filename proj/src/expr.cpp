#include "gardner/expr.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <unordered_map>

namespace gardner {

namespace {

const Expr& one_expr() {
  static const Expr one(1);
  return one;
}

Rational rpow(const Rational& b, long n) {
  if (n == 0) return Rational(1);
  unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), m);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), m);
  Rational r(num, den);
  r.canonicalize();
  if (n < 0) {
    if (r == 0) throw Error(ErrorCode::Domain, "zero raised to a negative power");
    r = 1 / r;
  }
  return r;
}

// prime factorization by trial division; a large cofactor is kept whole
std::vector<std::pair<mpz_class, long>> factor_integer(mpz_class n) {
  std::vector<std::pair<mpz_class, long>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (unsigned long p = 2; p < 100000 && mpz_class(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    long m = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++m;
    }
    if (m) out.emplace_back(mpz_class(p), m);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

AtomPtr make_atom(Atom a) { return std::make_shared<const Atom>(std::move(a)); }

int cmp_rational(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return (c > 0) - (c < 0);
}

template <class T>
int three_way(const T& a, const T& b) {
  auto c = a <=> b;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool term_less(const Term& a, const Term& b) { return compare_monomials(a.factors, b.factors) < 0; }

Expr single(Rational coef, std::vector<Factor> factors) {
  std::vector<Term> ts;
  if (coef != 0) ts.push_back(Term{std::move(coef), std::move(factors)});
  return Expr::from_terms(std::move(ts));
}

Expr make_product(Rational coef, std::vector<Factor> fs);

Expr expand_power(const Expr& base, long n) {
  Expr result(1);
  Expr b = base;
  while (n > 0) {
    if (n & 1) result = result * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return result;
}

Rational content(const Expr& e) {
  mpz_class g = 0, l = 1;
  for (const auto& t : e.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  Rational c(g, l);
  c.canonicalize();
  return abs(c);
}

Expr make_product(Rational coef, std::vector<Factor> fs) {
  if (coef == 0) return Expr();
  std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) { return compare(*a.base, *b.base) < 0; });
  std::vector<Factor> merged;
  merged.reserve(fs.size());
  for (auto& f : fs) {
    if (!merged.empty() && compare(*merged.back().base, *f.base) == 0) {
      merged.back().exponent = merged.back().exponent + f.exponent;
    } else {
      merged.push_back(std::move(f));
    }
  }
  std::vector<Factor> out;
  out.reserve(merged.size());
  std::vector<Expr> expansions;
  std::map<mpz_class, Rational> primes;
  for (auto& f : merged) {
    if (f.exponent.is_zero()) continue;
    if (f.base->kind == AtomKind::Number) {
      if (auto r = f.exponent.as_rational()) {
        Rational c = f.base->number;
        c.canonicalize();
        for (const auto& [p, m] : factor_integer(c.get_num())) primes[p] += *r * m;
        for (const auto& [p, m] : factor_integer(c.get_den())) primes[p] -= *r * m;
        continue;
      }
      out.push_back(std::move(f));
      continue;
    }
    if (f.base->kind == AtomKind::Sum && f.exponent.is_positive_integer()) {
      long n = f.exponent.as_rational()->get_num().get_si();
      if (n <= 64) {
        expansions.push_back(expand_power(f.base->inner, n));
        continue;
      }
    }
    out.push_back(std::move(f));
  }
  for (auto& [p, r] : primes) {
    r.canonicalize();
    if (r == 0) continue;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    coef *= rpow(Rational(p), fl.get_si());
    Rational frac = r - Rational(fl);
    if (frac != 0) {
      Atom n;
      n.kind = AtomKind::Number;
      n.number = Rational(p);
      out.push_back(Factor{make_atom(std::move(n)), Expr(frac)});
    }
  }
  if (!primes.empty()) {
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return compare(*a.base, *b.base) < 0; });
  }
  if (coef == 0) return Expr();
  Expr result = single(std::move(coef), std::move(out));
  for (const auto& e : expansions) result = result * e;
  return result;
}

// product of two canonical terms
void multiply_terms(const Term& a, const Term& b, std::vector<Term>& acc) {
  Rational coef = a.coef * b.coef;
  std::vector<Factor> fs;
  fs.reserve(a.factors.size() + b.factors.size());
  bool clash = false;
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size()) {
      fs.push_back(a.factors[i++]);
    } else if (i == a.factors.size()) {
      fs.push_back(b.factors[j++]);
    } else {
      int c = compare(*a.factors[i].base, *b.factors[j].base);
      if (c < 0) {
        fs.push_back(a.factors[i++]);
      } else if (c > 0) {
        fs.push_back(b.factors[j++]);
      } else {
        clash = true;
        fs.push_back(a.factors[i++]);
        fs.push_back(b.factors[j++]);
      }
    }
  }
  if (!clash) {
    acc.push_back(Term{std::move(coef), std::move(fs)});
    return;
  }
  Expr p = make_product(std::move(coef), std::move(fs));
  for (const auto& t : p.terms()) acc.push_back(t);
}

bool atom_depends_on(const Atom& a, Indep v);

bool expr_depends_on(const Expr& e, Indep v) {
  for (const auto& t : e.terms()) {
    for (const auto& f : t.factors) {
      if (atom_depends_on(*f.base, v) || expr_depends_on(f.exponent, v)) return true;
    }
  }
  return false;
}

bool atom_depends_on(const Atom& a, Indep v) {
  switch (a.kind) {
    case AtomKind::Var: return a.var == v;
    case AtomKind::Func: return (a.func.args & (v == Indep::X ? kArgX : kArgT)) != 0 || (a.func.args & kArgU);
    case AtomKind::Jet: return true;
    case AtomKind::AntiDeriv: return v == Indep::T || expr_depends_on(a.inner, v);
    case AtomKind::Sum:
    case AtomKind::Elementary: return expr_depends_on(a.inner, v);
    default: return false;
  }
}

}  // namespace

// ================================================================ Expr basics

Expr::Expr() : terms_(std::make_shared<const std::vector<Term>>()) {}

Expr::Expr(int value) : Expr(Rational(value)) {}
Expr::Expr(long value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) {
  auto ts = std::make_shared<std::vector<Term>>();
  Rational v = value;
  v.canonicalize();
  if (v != 0) ts->push_back(Term{v, {}});
  terms_ = std::move(ts);
}

Expr Expr::from_terms(std::vector<Term> ts) {
  for (auto& t : ts) t.coef.canonicalize();
  std::sort(ts.begin(), ts.end(), term_less);
  auto out = std::make_shared<std::vector<Term>>();
  out->reserve(ts.size());
  for (auto& t : ts) {
    if (!out->empty() && compare_monomials(out->back().factors, t.factors) == 0) {
      out->back().coef += t.coef;
    } else {
      if (!out->empty() && out->back().coef == 0) out->pop_back();
      out->push_back(std::move(t));
    }
  }
  if (!out->empty() && out->back().coef == 0) out->pop_back();
  return Expr(std::shared_ptr<const std::vector<Term>>(std::move(out)));
}

const std::vector<Term>& Expr::terms() const { return *terms_; }
bool Expr::is_zero() const { return terms_->empty(); }
std::size_t Expr::size() const { return terms_->size(); }

bool Expr::is_one() const {
  return terms_->size() == 1 && (*terms_)[0].factors.empty() && (*terms_)[0].coef == 1;
}

std::optional<Rational> Expr::as_rational() const {
  if (terms_->empty()) return Rational(0);
  if (terms_->size() == 1 && (*terms_)[0].factors.empty()) return (*terms_)[0].coef;
  return std::nullopt;
}

bool Expr::is_integer() const {
  auto r = as_rational();
  return r && r->get_den() == 1;
}

bool Expr::is_positive_integer() const {
  auto r = as_rational();
  return r && r->get_den() == 1 && *r > 0;
}

Expr Expr::param(const std::string& name) {
  Atom a;
  a.kind = AtomKind::Param;
  a.name = name;
  return single(1, {Factor{make_atom(std::move(a)), one_expr()}});
}

Expr Expr::var(Indep v) {
  Atom a;
  a.kind = AtomKind::Var;
  a.var = v;
  return single(1, {Factor{make_atom(std::move(a)), one_expr()}});
}

Expr Expr::jet(const JetVar& j) {
  Atom a;
  a.kind = AtomKind::Jet;
  a.jet = j;
  return single(1, {Factor{make_atom(std::move(a)), one_expr()}});
}

Expr Expr::func(const FuncSpec& f) {
  Atom a;
  a.kind = AtomKind::Func;
  a.func = f;
  return single(1, {Factor{make_atom(std::move(a)), one_expr()}});
}

AtomPtr euler_atom() {
  static const AtomPtr e = [] {
    Atom a;
    a.kind = AtomKind::Euler;
    return make_atom(std::move(a));
  }();
  return e;
}

Expr Expr::exp(const Expr& arg) {
  if (arg.is_zero()) return Expr(1);
  return single(1, {Factor{euler_atom(), arg}});
}

Expr Expr::sin(const Expr& arg) {
  if (arg.is_zero()) return Expr();
  Atom a;
  a.kind = AtomKind::Elementary;
  a.fn = ElementaryFn::Sin;
  a.inner = arg;
  return single(1, {Factor{make_atom(std::move(a)), one_expr()}});
}

Expr Expr::cos(const Expr& arg) {
  if (arg.is_zero()) return Expr(1);
  Atom a;
  a.kind = AtomKind::Elementary;
  a.fn = ElementaryFn::Cos;
  a.inner = arg;
  return single(1, {Factor{make_atom(std::move(a)), one_expr()}});
}

Expr Expr::antideriv(const Expr& integrand) {
  std::vector<Term> acc;
  for (const auto& t : integrand.terms()) {
    std::vector<Factor> fixed, moving;
    for (const auto& f : t.factors) {
      if (f.base->kind == AtomKind::Jet) throw Error(ErrorCode::Jet, "antiderivative of a jet expression");
      bool dep = atom_depends_on(*f.base, Indep::T) || expr_depends_on(f.exponent, Indep::T);
      (dep ? moving : fixed).push_back(f);
    }
    Expr piece;
    if (moving.empty()) {
      piece = Expr::t();
    } else {
      Atom a;
      a.kind = AtomKind::AntiDeriv;
      a.inner = single(1, std::move(moving));
      piece = single(1, {Factor{make_atom(std::move(a)), one_expr()}});
    }
    Expr term = make_product(t.coef, std::move(fixed)) * piece;
    for (const auto& x : term.terms()) acc.push_back(x);
  }
  return Expr::from_terms(std::move(acc));
}

// ================================================================ ordering

int compare(const Atom& a, const Atom& b) {
  if (&a == &b) return 0;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case AtomKind::Number: return cmp_rational(a.number, b.number);
    case AtomKind::Param: return a.name < b.name ? -1 : (a.name > b.name ? 1 : 0);
    case AtomKind::Var: return three_way(a.var, b.var);
    case AtomKind::Func: return three_way(a.func, b.func);
    case AtomKind::Jet: {
      // dependent variable, then total order, then t-order
      if (a.jet.dep != b.jet.dep) return a.jet.dep < b.jet.dep ? -1 : 1;
      if (a.jet.order() != b.jet.order()) return a.jet.order() < b.jet.order() ? -1 : 1;
      return three_way(a.jet.t_order, b.jet.t_order);
    }
    case AtomKind::Elementary:
      if (a.fn != b.fn) return a.fn < b.fn ? -1 : 1;
      return compare(a.inner, b.inner);
    case AtomKind::AntiDeriv:
    case AtomKind::Sum: return compare(a.inner, b.inner);
    case AtomKind::Euler: return 0;
  }
  return 0;
}

int compare_monomials(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(*a[i].base, *b[i].base);
    if (c) return c;
    c = compare(a[i].exponent, b[i].exponent);
    if (c) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.identity() == b.identity()) return 0;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t n = std::min(ta.size(), tb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_monomials(ta[i].factors, tb[i].factors);
    if (c) return c;
    c = cmp_rational(ta[i].coef, tb[i].coef);
    if (c) return c;
  }
  if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
  return 0;
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

// ================================================================ arithmetic

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::vector<Term> out;
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size()) {
      out.push_back(ta[i++]);
    } else if (i == ta.size()) {
      out.push_back(tb[j++]);
    } else {
      int c = compare_monomials(ta[i].factors, tb[j].factors);
      if (c < 0) {
        out.push_back(ta[i++]);
      } else if (c > 0) {
        out.push_back(tb[j++]);
      } else {
        Rational s = ta[i].coef + tb[j].coef;
        if (s != 0) out.push_back(Term{s, ta[i].factors});
        ++i;
        ++j;
      }
    }
  }
  return Expr::from_terms(std::move(out));
}

Expr operator-(const Expr& a) {
  std::vector<Term> out = a.terms();
  for (auto& t : out) t.coef = -t.coef;
  return Expr::from_terms(std::move(out));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (auto c = a.as_rational()) {
    if (*c == 1) return b;
    std::vector<Term> out = b.terms();
    for (auto& t : out) t.coef *= *c;
    return Expr::from_terms(std::move(out));
  }
  if (auto c = b.as_rational()) return b * a;
  std::vector<Term> acc;
  acc.reserve(a.size() * b.size());
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) multiply_terms(x, y, acc);
  return Expr::from_terms(std::move(acc));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw Error(ErrorCode::Domain, "division by zero");
  if (auto c = b.as_rational()) return a * Expr(Rational(1) / *c);
  return a * pow(b, Expr(-1));
}

Expr pow(const Expr& base, long exponent) { return pow(base, Expr(exponent)); }

Expr pow(const Expr& base, const Expr& e) {
  if (e.is_zero()) return Expr(1);
  if (base.is_zero()) {
    auto r = e.as_rational();
    if (r && *r > 0) return Expr();
    throw Error(ErrorCode::Domain, "zero raised to a non-positive or symbolic power");
  }
  if (e.is_one()) return base;
  auto er = e.as_rational();
  bool integral = er && er->get_den() == 1;
  if (base.size() == 1) {
    const Term& t = base.terms()[0];
    std::vector<Factor> fs;
    fs.reserve(t.factors.size() + 1);
    for (const auto& f : t.factors) fs.push_back(Factor{f.base, f.exponent * e});
    if (integral) return make_product(rpow(t.coef, er->get_num().get_si()), std::move(fs));
    Rational sign = 1;
    Rational c = t.coef;
    if (c < 0) {
      if (er && er->get_den().get_ui() % 2 == 1) {
        if (er->get_num().get_si() % 2 != 0) sign = -1;
        c = -c;
      } else {
        throw Error(ErrorCode::Domain, "negative base raised to a non-integer power");
      }
    }
    if (c != 1) {
      Atom n;
      n.kind = AtomKind::Number;
      n.number = c;
      fs.push_back(Factor{make_atom(std::move(n)), e});
    }
    return make_product(sign, std::move(fs));
  }
  if (integral && *er > 0 && *er <= 64) return expand_power(base, er->get_num().get_si());
  Rational cont = content(base);
  Expr b = base * Expr(Rational(1) / cont);
  Rational sign = 1;
  if (integral && b.terms()[0].coef < 0) {
    b = -b;
    if (er->get_num().get_si() % 2 != 0) sign = -1;
  }
  std::vector<Factor> fs;
  Atom s;
  s.kind = AtomKind::Sum;
  s.inner = b;
  fs.push_back(Factor{make_atom(std::move(s)), e});
  if (cont != 1) {
    Atom n;
    n.kind = AtomKind::Number;
    n.number = cont;
    fs.push_back(Factor{make_atom(std::move(n)), e});
  }
  return make_product(sign, std::move(fs));
}

// ================================================================ derivation

namespace {

using DeriveMemo = std::unordered_map<const Atom*, Expr>;

Expr derive_impl(const Expr& e, const AtomDerivative& d, DeriveMemo& memo);

Expr derive_base(const Atom& a, const AtomDerivative& d, DeriveMemo& memo) {
  switch (a.kind) {
    case AtomKind::Number:
    case AtomKind::Euler: return Expr();
    case AtomKind::Sum: {
      auto it = memo.find(&a);
      if (it != memo.end()) return it->second;
      Expr r = derive_impl(a.inner, d, memo);
      memo.emplace(&a, r);
      return r;
    }
    case AtomKind::Elementary: {
      Expr darg = derive_impl(a.inner, d, memo);
      if (darg.is_zero()) return Expr();
      if (a.fn == ElementaryFn::Sin) return Expr::cos(a.inner) * darg;
      return -(Expr::sin(a.inner) * darg);
    }
    default: return d(a);
  }
}

Expr derive_impl(const Expr& e, const AtomDerivative& d, DeriveMemo& memo) {
  std::vector<Term> acc;
  for (const auto& t : e.terms()) {
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      Expr de = f.exponent.as_rational() ? Expr() : derive_impl(f.exponent, d, memo);
      if (f.base->kind == AtomKind::Euler) {
        if (de.is_zero()) continue;
        Expr p = single(t.coef, t.factors) * de;
        for (const auto& x : p.terms()) acc.push_back(x);
        continue;
      }
      if (!de.is_zero()) throw Error(ErrorCode::Domain, "derivative of a power with non-constant exponent");
      Expr db = derive_base(*f.base, d, memo);
      if (db.is_zero()) continue;
      std::vector<Factor> fs = t.factors;
      fs[i].exponent = f.exponent - one_expr();
      Expr p;
      if (auto r = f.exponent.as_rational()) {
        p = make_product(t.coef * *r, std::move(fs)) * db;
      } else {
        p = make_product(t.coef, std::move(fs)) * f.exponent * db;
      }
      for (const auto& x : p.terms()) acc.push_back(x);
    }
  }
  return Expr::from_terms(std::move(acc));
}

Expr bump(const FuncSpec& f, int which) {
  FuncSpec g = f;
  if (which == 0) ++g.dx;
  if (which == 1) ++g.dt;
  if (which == 2) ++g.du;
  return Expr::func(g);
}

unsigned bit(Indep v) { return v == Indep::X ? kArgX : kArgT; }

}  // namespace

Expr derive(const Expr& e, const AtomDerivative& d) {
  DeriveMemo memo;
  return derive_impl(e, d, memo);
}

Expr partial_var(const Expr& e, Indep v) {
  AtomDerivative d = [v](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::Var: return a.var == v ? Expr(1) : Expr();
      case AtomKind::Func: return (a.func.args & bit(v)) ? bump(a.func, v == Indep::X ? 0 : 1) : Expr();
      case AtomKind::AntiDeriv:
        if (v == Indep::T) return a.inner;
        return Expr::antideriv(partial_var(a.inner, v));
      default: return Expr();
    }
  };
  return derive(e, d);
}

Expr diff_param(const Expr& e, Indep v) {
  if (contains_jets(e)) throw Error(ErrorCode::Jet, "diff_param on an expression with jet variables");
  return partial_var(e, v);
}

Expr partial_jet(const Expr& e, const JetVar& j) {
  AtomDerivative d = [j](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::Jet: return a.jet == j ? Expr(1) : Expr();
      case AtomKind::Func:
        if ((a.func.args & kArgU) && j == JetVar{0, 0, 0}) return bump(a.func, 2);
        return Expr();
      default: return Expr();
    }
  };
  return derive(e, d);
}

Expr total_derivative(const Expr& e, Indep v) {
  AtomDerivative d = [v](const Atom& a) -> Expr {
    switch (a.kind) {
      case AtomKind::Var: return a.var == v ? Expr(1) : Expr();
      case AtomKind::Jet: {
        JetVar j = a.jet;
        (v == Indep::X ? j.x_order : j.t_order) += 1;
        return Expr::jet(j);
      }
      case AtomKind::Func: {
        Expr r;
        if (a.func.args & bit(v)) r = bump(a.func, v == Indep::X ? 0 : 1);
        if (a.func.args & kArgU) r = r + bump(a.func, 2) * Expr::u(v == Indep::X ? 1 : 0, v == Indep::T ? 1 : 0);
        return r;
      }
      case AtomKind::AntiDeriv:
        if (v == Indep::T) return a.inner;
        return Expr::antideriv(total_derivative(a.inner, v));
      default: return Expr();
    }
  };
  return derive(e, d);
}

// ================================================================ substitution

namespace {

using SubstMemo = std::unordered_map<const Atom*, std::optional<Expr>>;

std::optional<Expr> subst_impl(const Expr& e, const AtomSubstitution& f, SubstMemo& memo);

std::optional<Expr> subst_base(const Atom& a, const AtomSubstitution& f, SubstMemo& memo) {
  auto it = memo.find(&a);
  if (it != memo.end()) return it->second;
  std::optional<Expr> r = a.kind == AtomKind::Number || a.kind == AtomKind::Euler ? std::nullopt : f(a);
  if (r) {
    memo.emplace(&a, r);
    return r;
  }
  switch (a.kind) {
    case AtomKind::Number:
    case AtomKind::Euler: break;
    case AtomKind::Sum:
      r = subst_impl(a.inner, f, memo);
      break;
    case AtomKind::AntiDeriv:
      if (auto in = subst_impl(a.inner, f, memo)) r = Expr::antideriv(*in);
      break;
    case AtomKind::Elementary:
      if (auto in = subst_impl(a.inner, f, memo)) r = a.fn == ElementaryFn::Sin ? Expr::sin(*in) : Expr::cos(*in);
      break;
    default: break;
  }
  memo.emplace(&a, r);
  return r;
}

std::optional<Expr> subst_impl(const Expr& e, const AtomSubstitution& f, SubstMemo& memo) {
  bool changed = false;
  std::vector<Term> acc;
  for (const auto& t : e.terms()) {
    std::vector<Factor> kept;
    std::vector<Expr> replaced;
    for (const auto& fac : t.factors) {
      auto nb = subst_base(*fac.base, f, memo);
      std::optional<Expr> ne;
      if (!fac.exponent.as_rational()) ne = subst_impl(fac.exponent, f, memo);
      if (!nb && !ne) {
        kept.push_back(fac);
        continue;
      }
      Expr base = nb ? *nb : single(1, {Factor{fac.base, one_expr()}});
      if (fac.base->kind == AtomKind::Euler) base = Expr::exp(1);
      replaced.push_back(pow(base, ne ? *ne : fac.exponent));
    }
    if (replaced.empty()) {
      acc.push_back(t);
      continue;
    }
    changed = true;
    Expr p = make_product(t.coef, std::move(kept));
    for (const auto& r : replaced) p = p * r;
    for (const auto& x : p.terms()) acc.push_back(x);
  }
  if (!changed) return std::nullopt;
  return Expr::from_terms(std::move(acc));
}

}  // namespace

Expr substitute(const Expr& e, const AtomSubstitution& f) {
  SubstMemo memo;
  auto r = subst_impl(e, f, memo);
  return r ? *r : e;
}

Expr substitute_params(const Expr& e, const std::map<std::string, Expr>& bindings) {
  return substitute(e, [&](const Atom& a) -> std::optional<Expr> {
    if (a.kind != AtomKind::Param) return std::nullopt;
    auto it = bindings.find(a.name);
    if (it == bindings.end()) return std::nullopt;
    return it->second;
  });
}

Expr substitute_jets(const Expr& e, const std::function<std::optional<Expr>(const JetVar&)>& f) {
  return substitute(e, [&](const Atom& a) -> std::optional<Expr> {
    if (a.kind != AtomKind::Jet) return std::nullopt;
    return f(a.jet);
  });
}

namespace {

void mentioned_functions(const Expr& e, std::set<std::string>& out) {
  for (const auto& f : free_symbols(e).funcs) out.insert(f.name);
}

Expr substitute_resolved(const Expr& e, const std::map<std::string, Expr>& resolved) {
  std::map<FuncSpec, Expr> cache;
  return substitute(e, [&](const Atom& a) -> std::optional<Expr> {
    if (a.kind != AtomKind::Func) return std::nullopt;
    auto it = resolved.find(a.func.name);
    if (it == resolved.end()) return std::nullopt;
    auto c = cache.find(a.func);
    if (c != cache.end()) return c->second;
    Expr r = it->second;
    for (int i = 0; i < a.func.dx; ++i) r = partial_var(r, Indep::X);
    for (int i = 0; i < a.func.dt; ++i) r = partial_var(r, Indep::T);
    for (int i = 0; i < a.func.du; ++i) r = partial_jet(r, JetVar{0, 0, 0});
    cache.emplace(a.func, r);
    return r;
  });
}

}  // namespace

Expr substitute_functions(const Expr& e, const std::map<std::string, Expr>& bindings) {
  std::map<std::string, Expr> resolved;
  std::map<std::string, int> state;  // 1 visiting, 2 done
  std::function<void(const std::string&)> resolve = [&](const std::string& name) {
    int s = state[name];
    if (s == 2) return;
    if (s == 1) throw Error(ErrorCode::Cycle, "self-referential binding for " + name);
    state[name] = 1;
    const Expr& body = bindings.at(name);
    std::set<std::string> deps;
    mentioned_functions(body, deps);
    std::map<std::string, Expr> sub;
    for (const auto& d : deps) {
      if (!bindings.count(d)) continue;
      resolve(d);
      sub.emplace(d, resolved.at(d));
    }
    resolved[name] = sub.empty() ? body : substitute_resolved(body, sub);
    state[name] = 2;
  };
  for (const auto& [name, body] : bindings) resolve(name);
  return substitute_resolved(e, resolved);
}

// ================================================================ queries

namespace {

void collect(const Expr& e, FreeSymbols& fs, std::set<const Atom*>& seen) {
  for (const auto& t : e.terms()) {
    for (const auto& f : t.factors) {
      const Atom& a = *f.base;
      if (!f.exponent.as_rational()) collect(f.exponent, fs, seen);
      switch (a.kind) {
        case AtomKind::Param: fs.params.insert(a.name); break;
        case AtomKind::Var: (a.var == Indep::X ? fs.x : fs.t) = true; break;
        case AtomKind::Jet: fs.jets.insert(a.jet); break;
        case AtomKind::Func: fs.funcs.insert(a.func); break;
        case AtomKind::AntiDeriv:
          if (seen.insert(&a).second) {
            bool dup = false;
            for (const auto& p : fs.antiderivs) dup = dup || compare(*p, a) == 0;
            if (!dup) fs.antiderivs.push_back(f.base);
            collect(a.inner, fs, seen);
          }
          break;
        case AtomKind::Sum:
        case AtomKind::Elementary:
          if (seen.insert(&a).second) collect(a.inner, fs, seen);
          break;
        default: break;
      }
    }
  }
}

}  // namespace

FreeSymbols free_symbols(const Expr& e) {
  FreeSymbols fs;
  std::set<const Atom*> seen;
  collect(e, fs, seen);
  return fs;
}

bool contains_jets(const Expr& e) { return !free_symbols(e).jets.empty(); }

bool depends_on(const Expr& e, Indep v) { return expr_depends_on(e, v); }

// ================================================================ evaluation

void ParamEnv::set(const std::string& name, const Rational& value) {
  params[name] = Binding{value, value.get_d()};
}

void ParamEnv::set(const std::string& name, double value) { params[name] = Binding{std::nullopt, value}; }

void ParamEnv::bind_function(const std::string& name, const Expr& closed_form, int derivatives) {
  std::vector<Expr> chain{closed_form};
  for (int i = 0; i < derivatives; ++i) chain.push_back(partial_var(chain.back(), Indep::T));
  functions[name] = std::move(chain);
}

std::map<std::string, Expr> ParamEnv::exact_bindings() const {
  std::map<std::string, Expr> out;
  for (const auto& [k, b] : params)
    if (b.exact) out.emplace(k, Expr(*b.exact));
  return out;
}

namespace {

struct Evaluator {
  const ParamEnv& env;
  std::unordered_map<const Atom*, double> memo;

  double expr(const Expr& e) {
    double s = 0.0;
    for (const auto& t : e.terms()) s += term(t);
    return s;
  }

  double term(const Term& t) {
    double v = t.coef.get_d();
    for (const auto& f : t.factors) v *= factor(f);
    return v;
  }

  double factor(const Factor& f) {
    auto r = f.exponent.as_rational();
    double ev = r ? r->get_d() : expr(f.exponent);
    if (f.base->kind == AtomKind::Euler) return std::exp(ev);
    double bv = base(*f.base);
    if (r && r->get_den() == 1) {
      if (bv == 0.0 && *r < 0) throw Error(ErrorCode::Domain, "zero raised to a negative power");
      return std::pow(bv, static_cast<double>(r->get_num().get_si()));
    }
    if (bv < 0.0) throw Error(ErrorCode::Domain, "negative base raised to a non-integer power");
    if (bv == 0.0 && ev <= 0.0) throw Error(ErrorCode::Domain, "zero raised to a non-positive power");
    return std::pow(bv, ev);
  }

  std::optional<double> fallback(const Atom& a) {
    if (env.fallback) return env.fallback(a);
    return std::nullopt;
  }

  double base(const Atom& a) {
    switch (a.kind) {
      case AtomKind::Number: return a.number.get_d();
      case AtomKind::Param: {
        auto it = env.params.find(a.name);
        if (it != env.params.end()) return it->second.value;
        if (auto v = fallback(a)) return *v;
        throw Error(ErrorCode::Unbound, "parameter " + a.name);
      }
      case AtomKind::Var: {
        const auto& v = a.var == Indep::X ? env.x : env.t;
        if (v) return *v;
        if (auto fb = fallback(a)) return *fb;
        throw Error(ErrorCode::Unbound, a.var == Indep::X ? "variable x" : "variable t");
      }
      case AtomKind::Jet: {
        auto it = env.jets.find(a.jet);
        if (it != env.jets.end()) return it->second;
        if (auto v = fallback(a)) return *v;
        throw Error(ErrorCode::Unbound, "jet variable");
      }
      case AtomKind::Func: {
        auto it = env.functions.find(a.func.name);
        if (it != env.functions.end() && a.func.args == kArgT) {
          auto m = memo.find(&a);
          if (m != memo.end()) return m->second;
          const auto& chain = it->second;
          double v;
          if (static_cast<std::size_t>(a.func.dt) < chain.size()) {
            v = expr(chain[a.func.dt]);
          } else {
            Expr d = chain.back();
            for (std::size_t i = chain.size() - 1; i < static_cast<std::size_t>(a.func.dt); ++i)
              d = partial_var(d, Indep::T);
            v = expr(d);
          }
          memo.emplace(&a, v);
          return v;
        }
        if (auto v = fallback(a)) return *v;
        throw Error(ErrorCode::Unbound, "function " + a.func.name);
      }
      case AtomKind::AntiDeriv: {
        if (auto v = fallback(a)) return *v;
        if (!env.t) throw Error(ErrorCode::Unbound, "variable t");
        ParamEnv sub = env;
        double upper = *env.t;
        auto integrand = [&](double s) {
          sub.t = s;
          Evaluator ev{sub, {}};
          return ev.expr(a.inner);
        };
        try {
          return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, upper, 12, 1e-13);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::Unbound) throw Error(ErrorCode::Unbound, "antiderivative: " + e.detail());
          throw;
        }
      }
      case AtomKind::Sum:
      case AtomKind::Elementary: {
        auto m = memo.find(&a);
        if (m != memo.end()) return m->second;
        double v = expr(a.inner);
        if (a.kind == AtomKind::Elementary) v = a.fn == ElementaryFn::Sin ? std::sin(v) : std::cos(v);
        memo.emplace(&a, v);
        return v;
      }
      case AtomKind::Euler: return std::exp(1.0);
    }
    return 0.0;
  }
};

}  // namespace

double eval_num(const Expr& e, const ParamEnv& env) {
  Evaluator ev{env, {}};
  return ev.expr(e);
}

std::pair<double, double> eval_with_magnitude(const Expr& e, const ParamEnv& env) {
  Evaluator ev{env, {}};
  double s = 0.0, m = 0.0;
  for (const auto& t : e.terms()) {
    double v = ev.term(t);
    s += v;
    m += std::fabs(v);
  }
  return {s, m};
}

// ================================================================ compilation

namespace {

using Fn = std::function<double(const Compiled::Point&)>;

struct Compiler {
  const ParamEnv& env;

  static bool dynamic(const FreeSymbols& fs) { return fs.x || fs.t || !fs.jets.empty() || !fs.antiderivs.empty(); }

  Fn expr(const Expr& e) {
    FreeSymbols fs = free_symbols(e);
    if (!dynamic(fs)) {
      double c = eval_num(e, env);
      return [c](const Compiled::Point&) { return c; };
    }
    std::vector<Fn> terms;
    for (const auto& t : e.terms()) terms.push_back(term(t));
    if (terms.size() == 1) return terms[0];
    return [terms](const Compiled::Point& p) {
      double s = 0.0;
      for (const auto& f : terms) s += f(p);
      return s;
    };
  }

  Fn term(const Term& t) {
    double c = t.coef.get_d();
    std::vector<Fn> fs;
    for (const auto& f : t.factors) {
      Expr one = single(1, {f});
      if (!dynamic(free_symbols(one))) {
        c *= eval_num(one, env);
      } else {
        fs.push_back(factor(f));
      }
    }
    if (fs.empty()) return [c](const Compiled::Point&) { return c; };
    if (fs.size() == 1) {
      Fn f0 = fs[0];
      return [c, f0](const Compiled::Point& p) { return c * f0(p); };
    }
    return [c, fs](const Compiled::Point& p) {
      double v = c;
      for (const auto& f : fs) v *= f(p);
      return v;
    };
  }

  Fn factor(const Factor& f) {
    auto r = f.exponent.as_rational();
    if (f.base->kind == AtomKind::Euler) {
      Fn ex = expr(f.exponent);
      return [ex](const Compiled::Point& p) { return std::exp(ex(p)); };
    }
    Fn b = base(f.base);
    if (r && r->get_den() == 1) {
      long n = r->get_num().get_si();
      if (n == 1) return b;
      if (n == 2) return [b](const Compiled::Point& p) { double v = b(p); return v * v; };
      if (n == 3) return [b](const Compiled::Point& p) { double v = b(p); return v * v * v; };
      double dn = static_cast<double>(n);
      return [b, dn](const Compiled::Point& p) { return std::pow(b(p), dn); };
    }
    Fn ex = expr(f.exponent);
    return [b, ex](const Compiled::Point& p) {
      double v = b(p);
      if (v < 0.0) throw Error(ErrorCode::Domain, "negative base raised to a non-integer power");
      return std::pow(v, ex(p));
    };
  }

  Fn base(const AtomPtr& ap) {
    const Atom& a = *ap;
    switch (a.kind) {
      case AtomKind::Var:
        if (a.var == Indep::X) return [](const Compiled::Point& p) { return p.x; };
        return [](const Compiled::Point& p) { return p.t; };
      case AtomKind::Jet: {
        if (a.jet.dep != 0 || a.jet.t_order != 0 || a.jet.x_order > 4)
          throw Error(ErrorCode::Order, "grid evaluation supports u and its x-derivatives up to order 4");
        int m = a.jet.x_order;
        return [m](const Compiled::Point& p) { return p.jets[m]; };
      }
      case AtomKind::Sum: return expr(a.inner);
      case AtomKind::Elementary: {
        Fn in = expr(a.inner);
        if (a.fn == ElementaryFn::Sin) return [in](const Compiled::Point& p) { return std::sin(in(p)); };
        return [in](const Compiled::Point& p) { return std::cos(in(p)); };
      }
      case AtomKind::Number: {
        double c = a.number.get_d();
        return [c](const Compiled::Point&) { return c; };
      }
      default: {
        Expr one = single(1, {Factor{ap, one_expr()}});
        ParamEnv local = env;
        return [one, local](const Compiled::Point& p) mutable {
          local.x = p.x;
          local.t = p.t;
          return eval_num(one, local);
        };
      }
    }
  }
};

}  // namespace

Compiled compile(const Expr& e, const ParamEnv& env) {
  std::map<std::string, Expr> fns;
  for (const auto& [name, chain] : env.functions) fns.emplace(name, chain.front());
  Expr closed = fns.empty() ? e : substitute_functions(e, fns);
  FreeSymbols fs = free_symbols(closed);
  for (const auto& f : fs.funcs) throw Error(ErrorCode::Unbound, "function " + f.name);
  Compiler c{env};
  Compiled out;
  out.fn_ = c.expr(closed);
  out.dep_x_ = fs.x;
  out.dep_jets_ = !fs.jets.empty();
  return out;
}

// ================================================================ zero test

namespace {

struct AtomLess {
  bool operator()(const Atom* a, const Atom* b) const { return compare(*a, *b) < 0; }
};

}  // namespace

ZeroTest ZeroTester::test(const Expr& e) const {
  ZeroTest out;
  if (e.is_zero()) {
    out.zero = true;
    return out;
  }
  used_numeric_ = true;
  out.mode = CheckMode::Numeric;
  std::mt19937_64 rng(options_.seed);
  std::uniform_real_distribution<double> draw(options_.lo, options_.hi);
  double worst = 0.0;
  for (int p = 0; p < options_.points; ++p) {
    bool ok = false;
    for (int attempt = 0; attempt < 400 && !ok; ++attempt) {
      std::map<const Atom*, double, AtomLess> values;
      ParamEnv env = options_.fixed;
      env.fallback = [&](const Atom& a) -> std::optional<double> {
        if (a.kind == AtomKind::Func && env.functions.count(a.func.name)) return std::nullopt;
        auto it = values.find(&a);
        if (it != values.end()) return it->second;
        double v = draw(rng);
        values.emplace(&a, v);
        return v;
      };
      try {
        bool degenerate = false;
        for (const auto& nz : options_.nonzero) {
          double v = eval_num(nz, env);
          if (!std::isfinite(v) || std::fabs(v) < options_.nonzero_margin) degenerate = true;
        }
        if (degenerate) continue;
        auto [v, mag] = eval_with_magnitude(e, env);
        if (!std::isfinite(v) || !std::isfinite(mag)) continue;
        double rel = mag > 0 ? std::fabs(v) / mag : std::fabs(v);
        worst = std::max(worst, rel);
        ok = true;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::Domain) throw;
      }
    }
    if (!ok) throw Error(ErrorCode::Domain, "no admissible sample point found for the numeric zero test");
  }
  out.max_relative = worst;
  out.zero = worst <= options_.tolerance;
  return out;
}

const ZeroTester& default_zero_tester() {
  static const ZeroTester tester;
  return tester;
}

// ================================================================ antiderivative table

Expr resolve_antiderivatives(const Expr& e) {
  return substitute(e, [](const Atom& a) -> std::optional<Expr> {
    if (a.kind != AtomKind::AntiDeriv) return std::nullopt;
    const Expr& in = a.inner;
    if (in.size() != 1 || in.terms()[0].factors.size() != 1) return std::nullopt;
    const Factor& f = in.terms()[0].factors[0];
    if (f.base->kind == AtomKind::Var && f.base->var == Indep::T) {
      auto r = f.exponent.as_rational();
      if (!r || *r == -1) return std::nullopt;
      return pow(Expr::t(), Expr(*r + 1)) / Expr(*r + 1);
    }
    if (f.base->kind == AtomKind::Euler) {
      Expr rate = partial_var(f.exponent, Indep::T);
      if (rate.is_zero() || depends_on(rate, Indep::T) || depends_on(rate, Indep::X)) return std::nullopt;
      return Expr::exp(f.exponent) / rate;
    }
    if (f.base->kind == AtomKind::Sum) {
      Expr slope = partial_var(f.base->inner, Indep::T);
      if (slope.is_zero() || depends_on(slope, Indep::T) || depends_on(slope, Indep::X)) return std::nullopt;
      if (depends_on(f.exponent, Indep::T)) return std::nullopt;
      if (auto r = f.exponent.as_rational(); r && *r == -1) return std::nullopt;
      Expr n1 = f.exponent + Expr(1);
      return pow(f.base->inner, n1) / (n1 * slope);
    }
    return std::nullopt;
  });
}

}  // namespace gardner
