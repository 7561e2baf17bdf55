#include "gardner/reduction.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "gardner/symmetry.hpp"

namespace gardner {

namespace {

Expr D(const Expr& e, Indep v) { return total_derivative(e, v); }

Expr prolonged(const VectorField& v, const Expr& T) {
  Expr W = v.eta - v.xi * Expr::u(1) - v.tau * Expr::u(0, 1);
  Expr out = v.xi * partial_var(T, Indep::X) + v.tau * partial_var(T, Indep::T);
  for (const auto& j : free_symbols(T).jets) {
    if (j.dep != 0) continue;
    Expr dw = W;
    for (int i = 0; i < j.x_order; ++i) dw = D(dw, Indep::X);
    for (int i = 0; i < j.t_order; ++i) dw = D(dw, Indep::T);
    Expr zeta = dw + v.xi * Expr::u(j.x_order + 1, j.t_order) + v.tau * Expr::u(j.x_order, j.t_order + 1);
    out = out + zeta * partial_jet(T, j);
  }
  return out;
}

mpz_class lcm_den(const Expr& e, mpz_class acc) {
  for (const auto& t : e.terms()) acc = lcm(acc, t.coef.get_den());
  return acc;
}

}  // namespace

std::pair<DiffPoly, DiffPoly> association_residual(const VectorField& v, const ConservedVector& cv,
                                                   const Scenario& ctx) {
  const Expr& Tt = cv.Tt.expr();
  const Expr& Tx = cv.Tx.expr();
  Expr div = D(v.tau, Indep::T) + D(v.xi, Indep::X);
  Expr rt = prolonged(v, Tt) + Tt * div - (Tt * D(v.tau, Indep::T) + Tx * D(v.tau, Indep::X));
  Expr rx = prolonged(v, Tx) + Tx * div - (Tt * D(v.xi, Indep::T) + Tx * D(v.xi, Indep::X));
  return {eliminate_ut(DiffPoly(rt), ctx), eliminate_ut(DiffPoly(rx), ctx)};
}

CanonicalVector to_canonical(const ConservedVector& cv, const CanonicalFrame& frame, const Scenario* ctx,
                             bool require_association, const ZeroTester& tester) {
  if (require_association) {
    if (ctx == nullptr) throw Error(ErrorCode::Input, "association check needs the equation");
    auto [a, b] = association_residual(frame.generator(), cv, *ctx);
    if (!tester.is_zero(a.expr()) || !tester.is_zero(b.expr()))
      throw Error(ErrorCode::NotAssociated,
                  "frame generator is not associated with the conserved vector: " + render(a.expr()) + "; " +
                      render(b.expr()));
  }
  // r and s as functions of (x, t)
  Expr r = Expr::x() - frame.c * Expr::t();
  Expr s = Expr::t();
  Expr rt = partial_var(r, Indep::T), rx = partial_var(r, Indep::X);
  Expr st = partial_var(s, Indep::T), sx = partial_var(s, Indep::X);
  Expr J = rt * sx - rx * st;
  if (J.is_zero()) throw Error(ErrorCode::Input, "degenerate frame");
  Expr Ts = (cv.Tt.expr() * st + cv.Tx.expr() * sx) / J;
  Expr Tr = (cv.Tt.expr() * rt + cv.Tx.expr() * rx) / J;
  // u_{x^m t^n} -> (-c)^n w_{r^(m+n)}; x -> r + c s, t -> s
  auto to_frame = [&](const Expr& e) {
    Expr jets = substitute_jets(e, [&](const JetVar& j) -> std::optional<Expr> {
      if (j.dep != 0) return std::nullopt;
      return pow(-frame.c, j.t_order) * Expr::u(j.x_order + j.t_order);
    });
    return substitute(jets, [&](const Atom& a) -> std::optional<Expr> {
      if (a.kind == AtomKind::Var && a.var == Indep::X) return Expr::x() + frame.c * Expr::t();
      return std::nullopt;
    });
  };
  return {DiffPoly(to_frame(Ts)), DiffPoly(to_frame(Tr)), J};
}

DiffPoly primitive_part(const DiffPoly& p) {
  if (p.is_zero()) return p;
  mpz_class den = lcm_den(p.expr(), 1);
  Expr scaled = p.expr() * Expr(Rational(den));
  mpz_class g = 0;
  for (const auto& t : scaled.terms()) g = gcd(g, t.coef.get_num());
  return DiffPoly(scaled * Expr(Rational(mpz_class(1), g)));
}

ReducedOde reduced_ode(const DiffPoly& Tr, const Expr& k) {
  if (free_symbols(Tr.expr()).t) throw Error(ErrorCode::ExplicitS, "T^r depends on s explicitly");
  ReducedOde out;
  out.ode = primitive_part(Tr - DiffPoly(k));
  int n = out.ode.max_x_order();
  if (n < 1) return out;
  JetVar top{0, n, 0};
  Expr a = partial_jet(out.ode.expr(), top);
  if (contains_jets(partial_jet(a, top)) || free_symbols(a).jets.count(top))
    return out;  // not linear in the highest derivative
  out.singular = a;
  if (n != 2 || free_symbols(out.ode.expr()).x) return out;
  Expr b = out.ode.expr() - a * Expr::u(2);
  Expr p = Expr::param("p");
  Expr rhs = -b / a;
  out.p_rhs = substitute_jets(rhs, [&](const JetVar& j) -> std::optional<Expr> {
    if (j == JetVar{0, 1, 0}) return p;
    return std::nullopt;
  });
  return out;
}

ConsistencyResult reduction_consistency(const Expr& p_rhs, double c, double k, double w0, double p0, int samples,
                                        double span) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  if (samples < 2) throw Error(ErrorCode::Input, "need at least two samples");
  ParamEnv env;
  env.set("c", c);
  env.set("k", k);
  // p_rhs in (w, p): w is the jet u, p a parameter
  auto rhs = [&](double w, double p) {
    ParamEnv e = env;
    e.set("p", p);
    e.jets[JetVar{0, 0, 0}] = w;
    return eval_num(p_rhs, e);
  };
  const double g = span / (samples - 1);
  const int pad = 4;  // stencil half-width in grid steps
  // states on the grid r_j = (j - pad) g, j = 0 .. samples - 1 + 2 pad
  std::vector<State> grid(samples + 2 * pad);
  auto integrate = [&](int sign, int count) {
    auto sys = [&](const State& y, State& dy, double) {
      dy[0] = sign * y[1];
      dy[1] = sign * rhs(y[0], y[1]);
    };
    State y{w0, p0};
    std::vector<double> times;
    for (int i = 0; i < count; ++i) times.push_back(i * g);
    int at = 0;
    auto observe = [&](const State& s, double) { grid[pad + sign * at++] = s; };
    odeint::integrate_times(odeint::make_controlled(1e-10, 1e-10, odeint::runge_kutta_dopri5<State>()), sys, y,
                            times.begin(), times.end(), g / 10, observe);
  };
  integrate(-1, pad + 1);
  integrate(1, samples + pad);
  ConsistencyResult out;
  const double h = 2 * g;
  for (int i = 0; i < samples; ++i) {
    int j = i + pad;
    // w''' by a fourth-order central difference of w'' = p_rhs along the trajectory
    auto d2 = [&](int m) { return rhs(grid[j + m][0], grid[j + m][1]); };
    double w3 = (d2(-4) - 8 * d2(-2) + 8 * d2(2) - d2(4)) / (12 * h);
    double w = grid[j][0], wr = grid[j][1];
    double residual = -c * wr + w * wr + w * w * wr + w3;
    out.max_residual = std::max(out.max_residual, std::fabs(residual));
    ++out.samples;
  }
  return out;
}

}  // namespace gardner
