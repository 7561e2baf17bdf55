#include "gardner/conslaw.hpp"

namespace gardner {

namespace {

long jet_power(const Term& t, const JetVar& j) {
  for (const auto& f : t.factors) {
    if (f.base->kind == AtomKind::Jet && f.base->jet == j) return f.exponent.as_rational()->get_num().get_si();
  }
  return 0;
}

Expr term_expr(const Term& t) { return Expr::from_terms({t}); }

}  // namespace

Expr integrate_in_jet(const Expr& e, const JetVar& j) {
  Expr out;
  for (const auto& t : e.terms()) out = out + term_expr(t) * Expr::jet(j) * Expr(Rational(1, jet_power(t, j) + 1));
  return out;
}

DiffPoly multiplier_residual(const DiffPoly& lambda, const DiffPoly& F) { return euler(lambda * F, 0); }

DiffPoly density_from_multiplier(const DiffPoly& lambda) {
  if (lambda.max_t_order() > 0) throw Error(ErrorCode::Order, "multiplier must not depend on t-derivatives");
  DiffPoly p = DiffPoly(Expr::u()) * lambda;
  Expr out;
  for (const auto& t : p.expr().terms()) {
    long degree = 0;
    for (const auto& f : t.factors)
      if (f.base->kind == AtomKind::Jet) degree += f.exponent.as_rational()->get_num().get_si();
    out = out + term_expr(t) * Expr(Rational(1, degree));
  }
  return DiffPoly(out);
}

DiffPoly flux_from_density(const DiffPoly& Tt, const Scenario& ctx, const ZeroTester& tester) {
  DiffPoly dt = eliminate_ut(total_t(eliminate_ut(Tt, ctx)), ctx);
  return -invert_total_x(dt, tester);
}

ConservedVector reduce_density(const ConservedVector& cv, const Scenario& ctx) {
  DiffPoly Tt = eliminate_ut(cv.Tt, ctx);
  DiffPoly Tx = cv.Tx;
  for (int n = Tt.max_x_order(); n >= 1; --n) {
    JetVar jn{0, n, 0}, jm{0, n - 1, 0};
    Expr lin;
    for (const auto& t : Tt.expr().terms())
      if (jet_power(t, jn) == 1) lin = lin + term_expr(t) / Expr::jet(jn);
    if (lin.is_zero()) continue;
    DiffPoly P(integrate_in_jet(lin, jm));
    Tt = Tt - total_x(P);
    Tx = Tx + eliminate_ut(total_t(P), ctx);
  }
  return {Tt, Tx};
}

ConservedVector ibragimov_vector(const VectorField& v, const Scenario& ctx, const Expr& phi, const ZeroTester& tester,
                                 bool reduce) {
  DiffPoly F = ctx.equation();
  for (const auto& j : F.jets()) {
    if (j.t_order > 1 || (j.t_order == 1 && j.x_order > 0))
      throw Error(ErrorCode::Order, "conserved vector formula expects u_t and pure x-derivatives only");
  }
  SelfAdjointness sa = selfadjoint_check(F, phi, tester);
  if (!sa.zero)
    throw Error(ErrorCode::NotSelfAdjoint, "F*|_{v=phi} - lambda*F does not vanish: " + render(sa.residual.expr()));
  Expr L = formal_lagrangian(F).expr();
  DiffPoly W(v.eta - v.xi * Expr::u(1) - v.tau * Expr::u(0, 1));
  Expr Tt = v.tau * L + W.expr() * partial_jet(L, JetVar{0, 0, 1});
  Expr Tx = v.xi * L;
  int n = F.max_x_order();
  DiffPoly dw = W;
  for (int a = 0; a < n; ++a) {
    Expr bracket;
    for (int b = 0; a + b + 1 <= n; ++b) {
      Expr q = partial_jet(L, JetVar{0, a + b + 1, 0});
      for (int i = 0; i < b; ++i) q = -total_derivative(q, Indep::X);
      bracket = bracket + q;
    }
    Tx = Tx + dw.expr() * bracket;
    dw = total_x(dw);
  }
  ConservedVector cv{eliminate_ut(substitute_v(DiffPoly(Tt), phi), ctx),
                     eliminate_ut(substitute_v(DiffPoly(Tx), phi), ctx)};
  return reduce ? reduce_density(cv, ctx) : cv;
}

DiffPoly divergence_residual(const ConservedVector& cv, const Scenario& ctx) {
  return eliminate_ut(total_t(cv.Tt) + total_x(cv.Tx), ctx);
}

bool equivalent_densities(const DiffPoly& T1, const DiffPoly& T2, const Scenario& ctx, const ZeroTester& tester) {
  DiffPoly d = eliminate_ut(T1 - T2, ctx);
  try {
    (void)invert_total_x(d, tester);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotExact || e.code() == ErrorCode::Residue) return false;
    throw;
  }
}

bool equivalent_fluxes(const DiffPoly& Tx1, const DiffPoly& Tx2, const Scenario& ctx, const ZeroTester& tester) {
  return tester.is_zero(total_x(eliminate_ut(Tx1 - Tx2, ctx)).expr());
}

DiffPoly characteristic_residual(const DiffPoly& lambda, const ConservedVector& cv, const DiffPoly& F) {
  return euler(total_t(cv.Tt) + total_x(cv.Tx) - lambda * F, 0);
}

}  // namespace gardner
