#include "gardner/adjoint.hpp"

#include <map>

namespace gardner {

DiffPoly formal_lagrangian(const DiffPoly& F) { return DiffPoly(Expr::jet(1, 0, 0) * F.expr()); }

DiffPoly adjoint_equation(const DiffPoly& F) {
  if (F.max_order(0) > 3) throw Error(ErrorCode::Order, "adjoint equation is limited to third-order equations");
  return euler(formal_lagrangian(F), 0);
}

DiffPoly substitute_v(const DiffPoly& p, const Expr& phi) {
  for (const auto& j : free_symbols(phi).jets)
    if (j != JetVar{0, 0, 0}) throw Error(ErrorCode::Input, "phi must depend on x, t and u only");
  std::map<JetVar, Expr> memo;
  return DiffPoly(substitute_jets(p.expr(), [&](const JetVar& j) -> std::optional<Expr> {
    if (j.dep != 1) return std::nullopt;
    auto it = memo.find(j);
    if (it != memo.end()) return it->second;
    Expr d = phi;
    for (int i = 0; i < j.x_order; ++i) d = total_derivative(d, Indep::X);
    for (int i = 0; i < j.t_order; ++i) d = total_derivative(d, Indep::T);
    memo.emplace(j, d);
    return d;
  }));
}

SelfAdjointness selfadjoint_check(const DiffPoly& F, const Expr& phi, const ZeroTester& tester) {
  if (phi.is_zero()) throw Error(ErrorCode::Input, "phi must be nonzero");
  SelfAdjointness out;
  DiffPoly fs = substitute_v(adjoint_equation(F), phi);
  JetVar ut{0, 0, 1}, uxxx{0, 3, 0};
  Expr fut = partial_jet(F.expr(), ut);
  if (fut.is_zero()) throw Error(ErrorCode::NoMatch, "equation has no u_t term");
  Expr lambda = partial_jet(fs.expr(), ut) / fut;
  if (contains_jets(partial_jet(lambda, ut)))
    throw Error(ErrorCode::NoMatch, "F*|_{v=phi} is not linear in u_t");
  Expr fxxx = partial_jet(F.expr(), uxxx);
  ZeroTest check = tester.test(partial_jet(fs.expr(), uxxx) - lambda * fxxx);
  if (!check.zero) throw Error(ErrorCode::NoMatch, "u_t and u_xxx coefficients give different factors");
  out.lambda = DiffPoly(lambda);
  out.residual = fs - out.lambda * F;
  ZeroTest z = tester.test(out.residual.expr());
  out.zero = z.zero;
  out.mode = (z.mode == CheckMode::Numeric || check.mode == CheckMode::Numeric) ? CheckMode::Numeric
                                                                                 : CheckMode::Symbolic;
  out.phi_u = !partial_jet(phi, JetVar{0, 0, 0}).is_zero();
  out.phi_x = !partial_var(phi, Indep::X).is_zero();
  return out;
}

Expr theorem_phi(const Expr& Q, const Expr& c1, const Expr& c2) {
  return c1 * Expr::exp(Expr::antideriv(Expr(2) * Q)) * Expr::u() + c2 * Expr::exp(Expr::antideriv(Q));
}

}  // namespace gardner
