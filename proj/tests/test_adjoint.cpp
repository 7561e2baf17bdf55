#include <catch_amalgamated.hpp>

#include <random>

#include "gardner/adjoint.hpp"
#include "gardner/parser.hpp"
#include "support/printing.hpp"
#include "support/random_tree.hpp"

using namespace gardner;

namespace {

DiffPoly P(const char* s) { return DiffPoly(parse(s)); }

auto code_is(ErrorCode c) {
  return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; });
}

Expr Dx(Expr e, int n) {
  for (int i = 0; i < n; ++i) e = total_derivative(e, Indep::X);
  return e;
}

}  // namespace

TEST_CASE("adjoint of the Gardner equation") {
  DiffPoly F = Scenario::abstract_family().equation();
  CHECK(adjoint_equation(F) == P("v*Q - u^2*v_x*C - B*v_xxx - u*v_x*A - v_t"));
  CHECK(adjoint_equation(P("u_t")) == P("-v_t"));
  CHECK(adjoint_equation(P("u_t + u_xxx")) == P("-v_t - v_xxx"));
  CHECK_THROWS_MATCHES(adjoint_equation(P("u_xxxx")), Error, code_is(ErrorCode::Order));
}

TEST_CASE("adjoint is linear in F") {
  DiffPoly F1 = P("u_t + u*u_x");
  DiffPoly F2 = P("B*u_xxx + Q*u");
  CHECK(adjoint_equation(F1 + F2) == adjoint_equation(F1) + adjoint_equation(F2));
  CHECK(adjoint_equation(DiffPoly(Expr(3)) * F1) == DiffPoly(Expr(3)) * adjoint_equation(F1));
}

TEST_CASE("adjoint of linear operators matches sum (-D)^J (a_J v)") {
  testing_support::TreeGen gen(31);
  for (int i = 0; i < 50; ++i) {
    Expr a[4], e = gen.positive(1)->build();
    Expr F = e * Expr::u(0, 1);
    Expr want = -total_derivative(e * Expr::jet(1, 0, 0), Indep::T);
    for (int n = 0; n < 4; ++n) {
      a[n] = gen.positive(1)->build();
      F = F + a[n] * Expr::u(n);
      Expr d = Dx(a[n] * Expr::jet(1, 0, 0), n);
      want = want + (n % 2 ? -d : d);
    }
    INFO(render(F));
    CHECK(adjoint_equation(DiffPoly(F)) == DiffPoly(want));
  }
}

TEST_CASE("substitution of v by phi") {
  CHECK(substitute_v(P("v_x*u"), parse("u^2")) == P("2*u^2*u_x"));
  CHECK(substitute_v(P("v_t"), parse("x*u")) == P("x*u_t"));
  CHECK_THROWS_MATCHES(substitute_v(P("v"), parse("u_x")), Error, code_is(ErrorCode::Input));
}

TEST_CASE("nonlinear self-adjointness with abstract damping") {
  DiffPoly F = Scenario::abstract_family().equation();
  Expr phi = theorem_phi(Expr::func("Q"));
  SelfAdjointness sa = selfadjoint_check(F, phi);
  CHECK(sa.zero);
  CHECK(sa.mode == CheckMode::Symbolic);
  CHECK(sa.lambda == P("-c1*exp(AD(2*Q))"));
  CHECK(sa.phi_u);
  CHECK_FALSE(sa.phi_x);
}

TEST_CASE("nonlinear self-adjointness for closed-form damping") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 9);
  const char* forms[] = {"q0", "q0*t", "q0*t^2 + q1", "q0*exp(q1*t)", "q0/(t + q1)"};
  for (int i = 0; i < 10; ++i) {
    std::string f = forms[i % 5];
    Expr Q = substitute_params(parse(f), {{"q0", Expr(Rational(num(rng), 3))}, {"q1", Expr(Rational(num(rng), 2))}});
    Scenario s = Scenario::abstract_family();
    s.Q = Q;
    Expr phi = theorem_phi(Q);
    INFO(render(Q));
    SelfAdjointness sa = selfadjoint_check(s.equation(), phi);
    CHECK(sa.zero);
    CHECK(default_zero_tester().is_zero((sa.lambda.expr() + Expr::param("c1") * Expr::exp(Expr::antideriv(Expr(2) * Q)))));
  }
}

TEST_CASE("Q = 0 reduces to strict and trivial cases") {
  Scenario s = Scenario::abstract_family();
  s.Q = Expr();
  SelfAdjointness strict = selfadjoint_check(s.equation(), Expr::u());
  CHECK(strict.zero);
  CHECK(strict.lambda == P("-1"));
  SelfAdjointness trivial = selfadjoint_check(s.equation(), Expr(1));
  CHECK(trivial.zero);
  CHECK(trivial.lambda.is_zero());
  CHECK_FALSE(trivial.phi_u);
}

TEST_CASE("non-solutions are reported") {
  DiffPoly F = Scenario::abstract_family().equation();
  SelfAdjointness sa = selfadjoint_check(F, Expr::u());
  CHECK_FALSE(sa.zero);
  CHECK_THROWS_MATCHES(selfadjoint_check(F, Expr()), Error, code_is(ErrorCode::Input));
}
