#include "gardner/jet.hpp"

#include <algorithm>

#include "gardner/parser.hpp"

namespace gardner {

namespace {

bool monomial_less(const JetMonomial& a, const JetMonomial& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_jets(a[i].first, b[i].first);
    if (c) return c < 0;
    if (a[i].second != b[i].second) return a[i].second < b[i].second;
  }
  return a.size() < b.size();
}

// splits a term into its coefficient part and jet monomial
std::pair<Term, JetMonomial> split_term(const Term& t) {
  Term coef{t.coef, {}};
  JetMonomial m;
  for (const auto& f : t.factors) {
    if (f.base->kind == AtomKind::Jet) {
      m.emplace_back(f.base->jet, static_cast<int>(f.exponent.as_rational()->get_num().get_si()));
    } else {
      coef.factors.push_back(f);
    }
  }
  return {coef, m};
}

}  // namespace

int compare_jets(const JetVar& a, const JetVar& b) {
  if (a.dep != b.dep) return a.dep < b.dep ? -1 : 1;
  if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
  if (a.t_order != b.t_order) return a.t_order < b.t_order ? -1 : 1;
  return 0;
}

std::string jet_name(const JetVar& j, const std::string& dep, char x, char t) {
  std::string s = dep;
  if (j.order() == 0) return s;
  s += "_";
  s.append(static_cast<std::size_t>(j.x_order), x);
  s.append(static_cast<std::size_t>(j.t_order), t);
  return s;
}

DiffPoly::DiffPoly(const Expr& e) : e_(e) {
  for (const auto& t : e.terms()) {
    for (const auto& f : t.factors) {
      if (f.base->kind != AtomKind::Jet) continue;
      if (!f.exponent.is_positive_integer())
        throw Error(ErrorCode::NonPoly, "jet variable with non-polynomial exponent: " + render(e));
    }
  }
}

std::vector<DiffTerm> DiffPoly::terms() const {
  std::vector<std::pair<JetMonomial, std::vector<Term>>> groups;
  for (const auto& t : e_.terms()) {
    auto [coef, m] = split_term(t);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
      return !monomial_less(g.first, m) && !monomial_less(m, g.first);
    });
    if (it == groups.end()) {
      groups.emplace_back(m, std::vector<Term>{coef});
    } else {
      it->second.push_back(coef);
    }
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return monomial_less(a.first, b.first); });
  std::vector<DiffTerm> out;
  out.reserve(groups.size());
  for (auto& g : groups) out.push_back(DiffTerm{g.first, Expr::from_terms(std::move(g.second))});
  return out;
}

Expr DiffPoly::coefficient(const JetMonomial& m) const {
  std::vector<Term> acc;
  for (const auto& t : e_.terms()) {
    auto [coef, mm] = split_term(t);
    if (!monomial_less(mm, m) && !monomial_less(m, mm)) acc.push_back(coef);
  }
  return Expr::from_terms(std::move(acc));
}

std::vector<JetVar> DiffPoly::jets() const {
  auto js = free_symbols(e_).jets;
  std::vector<JetVar> out(js.begin(), js.end());
  std::sort(out.begin(), out.end(), [](const JetVar& a, const JetVar& b) { return compare_jets(a, b) < 0; });
  return out;
}

int DiffPoly::max_x_order(int dep) const {
  int m = -1;
  for (const auto& j : jets())
    if (j.dep == dep) m = std::max(m, j.x_order);
  return m;
}

int DiffPoly::max_t_order(int dep) const {
  int m = -1;
  for (const auto& j : jets())
    if (j.dep == dep) m = std::max(m, j.t_order);
  return m;
}

int DiffPoly::max_order(int dep) const {
  int m = -1;
  for (const auto& j : jets())
    if (j.dep == dep) m = std::max(m, j.order());
  return m;
}

// ---------------------------------------------------------------- scenario

Scenario Scenario::constant(const Rational& a, const Rational& b, const Rational& c, const Rational& q) {
  Scenario s;
  s.A = Expr(a);
  s.B = Expr(b);
  s.C = Expr(c);
  s.Q = Expr(q);
  return s;
}

Expr Scenario::coefficient(char name) const {
  const Expr* e = nullptr;
  switch (name) {
    case 'A': e = &A; break;
    case 'B': e = &B; break;
    case 'C': e = &C; break;
    case 'Q': e = &Q; break;
    default: throw Error(ErrorCode::Input, std::string("unknown coefficient ") + name);
  }
  return params.empty() ? *e : substitute_params(*e, params);
}

DiffPoly Scenario::equation() const {
  Expr u = Expr::u();
  return DiffPoly(Expr::u(0, 1) + coefficient('A') * u * Expr::u(1) + coefficient('C') * u * u * Expr::u(1) +
                  coefficient('B') * Expr::u(3) + coefficient('Q') * u);
}

DiffPoly Scenario::delta() const { return DiffPoly(Expr::u(0, 1) - equation().expr()); }

ParamEnv Scenario::env() const {
  ParamEnv env;
  for (const auto& [k, v] : params) {
    auto r = v.as_rational();
    if (!r) throw Error(ErrorCode::Input, "parameter " + k + " must be bound to a number");
    env.set(k, *r);
  }
  return env;
}

// ---------------------------------------------------------------- operators

DiffPoly total_x(const DiffPoly& p) { return DiffPoly(total_derivative(p.expr(), Indep::X)); }
DiffPoly total_t(const DiffPoly& p) { return DiffPoly(total_derivative(p.expr(), Indep::T)); }
DiffPoly partial(const DiffPoly& p, const JetVar& j) { return DiffPoly(partial_jet(p.expr(), j)); }

DiffPoly eliminate_ut(const DiffPoly& p, const DiffPoly& delta) {
  std::map<int, Expr> cache;
  Expr out = substitute_jets(p.expr(), [&](const JetVar& j) -> std::optional<Expr> {
    if (j.dep != 0 || j.t_order == 0) return std::nullopt;
    if (j.t_order >= 2) throw Error(ErrorCode::Order, "cannot eliminate " + jet_name(j) + " (t-order >= 2)");
    auto it = cache.find(j.x_order);
    if (it != cache.end()) return it->second;
    Expr d = delta.expr();
    for (int i = 0; i < j.x_order; ++i) d = total_derivative(d, Indep::X);
    cache.emplace(j.x_order, d);
    return d;
  });
  return DiffPoly(out);
}

DiffPoly eliminate_ut(const DiffPoly& p, const Scenario& ctx) { return eliminate_ut(p, ctx.delta()); }

DiffPoly euler(const DiffPoly& p, int dep) {
  std::vector<JetVar> js;
  for (const auto& j : p.jets())
    if (j.dep == dep) js.push_back(j);
  JetVar base{dep, 0, 0};
  if (std::find(js.begin(), js.end(), base) == js.end()) js.insert(js.begin(), base);
  Expr out;
  for (const auto& j : js) {
    Expr q = partial_jet(p.expr(), j);
    if (q.is_zero()) continue;
    for (int i = 0; i < j.x_order; ++i) q = total_derivative(q, Indep::X);
    for (int i = 0; i < j.t_order; ++i) q = total_derivative(q, Indep::T);
    out = (j.order() % 2 == 0) ? out + q : out - q;
  }
  return DiffPoly(out);
}

DiffPoly higher_euler(const DiffPoly& p, int i) {
  if (p.max_t_order() > 0) throw Error(ErrorCode::Order, "higher Euler operator needs t-order 0");
  if (i < 1) throw Error(ErrorCode::Order, "higher Euler operator order must be at least 1");
  int n = p.max_x_order();
  Expr out;
  for (int j = i; j <= n; ++j) {
    Expr q = partial_jet(p.expr(), JetVar{0, j, 0});
    if (q.is_zero()) continue;
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(i));
    for (int r = 0; r < j - i; ++r) q = -total_derivative(q, Indep::X);
    out = out + Expr(Rational(binom)) * q;
  }
  return DiffPoly(out);
}

DiffPoly prune_zero_groups(const DiffPoly& p, const ZeroTester& tester) {
  Expr out;
  for (const auto& t : p.terms()) {
    if (tester.test(t.coefficient).zero) continue;
    Expr m(1);
    for (const auto& [j, k] : t.monomial) m = m * pow(Expr::jet(j), k);
    out = out + t.coefficient * m;
  }
  return DiffPoly(out);
}

namespace {

int top_x_order(const Expr& e) {
  int n = -1;
  for (const auto& t : e.terms())
    for (const auto& f : t.factors)
      if (f.base->kind == AtomKind::Jet && f.base->jet.dep == 0) n = std::max(n, f.base->jet.x_order);
  return n;
}

// integrates a polynomial in u_{n} termwise with respect to u_{n}
Expr integrate_in_jet(const Expr& a, const JetVar& j) {
  std::vector<Term> acc;
  for (const auto& t : a.terms()) {
    Term nt = t;
    bool found = false;
    for (auto& f : nt.factors) {
      if (f.base->kind == AtomKind::Jet && f.base->jet == j) {
        Rational k = *f.exponent.as_rational();
        f.exponent = Expr(k + 1);
        nt.coef /= (k + 1);
        found = true;
      }
    }
    Expr piece = Expr::from_terms({nt});
    if (!found) piece = piece * Expr::jet(j);
    for (const auto& x : piece.terms()) acc.push_back(x);
  }
  return Expr::from_terms(std::move(acc));
}

Expr integrate_residue_in_x(const Expr& r) {
  Expr out;
  for (const auto& t : r.terms()) {
    Term rest{t.coef, {}};
    Rational k = 0;
    for (const auto& f : t.factors) {
      if (f.base->kind == AtomKind::Var && f.base->var == Indep::X) {
        auto e = f.exponent.as_rational();
        if (!e || e->get_den() != 1 || *e < 0)
          throw Error(ErrorCode::Residue, "jet-free residue is not polynomial in x: " + render(r));
        k = *e;
      } else {
        Expr one = Expr::from_terms({Term{1, {f}}});
        if (depends_on(one, Indep::X))
          throw Error(ErrorCode::Residue, "jet-free residue is not polynomial in x: " + render(r));
        rest.factors.push_back(f);
      }
    }
    out = out + Expr::from_terms({rest}) * pow(Expr::x(), Expr(k + 1)) / Expr(k + 1);
  }
  return out;
}

struct InversionFailure {};

DiffPoly invert_core(const DiffPoly& p, const ZeroTester* pruner) {
  Expr rem = p.expr();
  Expr P;
  for (int guard = 0; guard < 64; ++guard) {
    if (pruner) rem = prune_zero_groups(DiffPoly(rem), *pruner).expr();
    int n = top_x_order(rem);
    if (n < 1) break;
    JetVar top{0, n, 0};
    Expr a = partial_jet(rem, top);
    for (const auto& j : free_symbols(a).jets)
      if (j == top) throw InversionFailure{};
    Expr I = integrate_in_jet(a, JetVar{0, n - 1, 0});
    P = P + I;
    rem = rem - total_derivative(I, Indep::X);
  }
  if (pruner) rem = prune_zero_groups(DiffPoly(rem), *pruner).expr();
  if (!free_symbols(rem).jets.empty()) throw InversionFailure{};
  return DiffPoly(P + integrate_residue_in_x(rem));
}

}  // namespace

DiffPoly invert_total_x(const DiffPoly& p, const ZeroTester& tester) {
  if (p.max_t_order() > 0) throw Error(ErrorCode::Order, "invert_total_x needs t-order 0");
  for (const auto& j : p.jets())
    if (j.dep != 0) throw Error(ErrorCode::Order, "invert_total_x acts on u-jets only");
  DiffPoly obstruction = euler(p);
  if (!tester.test(obstruction.expr()).zero)
    throw Error(ErrorCode::NotExact, "euler operator does not vanish: " + render(obstruction.expr()));
  try {
    return invert_core(p, nullptr);
  } catch (const InversionFailure&) {
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Residue) throw;
  }
  try {
    return invert_core(p, &tester);
  } catch (const InversionFailure&) {
    throw Error(ErrorCode::NotExact, "integration by parts left a non-integrable remainder");
  }
}

}  // namespace gardner
