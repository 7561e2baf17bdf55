#include <catch_amalgamated.hpp>

#include "gardner/laws.hpp"
#include "gardner/parser.hpp"
#include "gardner/reduction.hpp"
#include "support/printing.hpp"

using namespace gardner;

namespace {

DiffPoly P(const char* s) { return DiffPoly(parse(s)); }
DiffPoly W(const char* s) { return DiffPoly(parse(s, GrammarConfig::frame())); }

auto code_is(ErrorCode c) {
  return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; });
}

ConservedVector example_vector() {
  const LawDisplay& d = law_display("example");
  auto params = parse_bindings("k1=1,c1=1,c2=0");
  return {DiffPoly(substitute_params(d.density, params)), DiffPoly(substitute_params(d.flux, params))};
}

}  // namespace

TEST_CASE("association of the example vector") {
  Scenario s = example_scenario();
  ConservedVector cv = example_vector();
  auto [at, ax] = association_residual(CanonicalFrame{}.generator(), cv, s);
  CHECK(at.is_zero());
  CHECK(ax.is_zero());
  VectorField full = example_generator();
  auto [bt, bx] = association_residual(full, cv, s);
  CHECK_FALSE((bt.is_zero() && bx.is_zero()));
}

TEST_CASE("translations are associated with x-independent vectors") {
  Scenario s = Scenario::constant(1, 1, 1, 0);
  ConservedVector mass{P("u"), P("u^2/2 + u^3/3 + u_xx")};
  auto [a, b] = association_residual({Expr(1), Expr(), Expr()}, mass, s);
  CHECK(a.is_zero());
  CHECK(b.is_zero());
}

TEST_CASE("canonical flux of the example vector") {
  CanonicalVector cv = to_canonical(example_vector(), CanonicalFrame{});
  CHECK(cv.jacobian == Expr(-1));
  CHECK(cv.Tr == W("1/4*((4*w + 2)*w_rr - 2*w_r^2 + w^4 + 2*w^3 + (1 - 2*c)*w^2 - 2*c*w)"));
  Scenario s = example_scenario();
  CHECK_NOTHROW(to_canonical(example_vector(), CanonicalFrame{}, &s, true));
}

TEST_CASE("identity frame and zero vector") {
  ConservedVector mass{P("u"), P("u^2/2 + u^3/3 + u_xx")};
  CanonicalVector cv = to_canonical(mass, CanonicalFrame{Expr()});
  // J = -1 for r = x, s = t
  CHECK(cv.Tr == -W("w^2/2 + w^3/3 + w_rr"));
  CHECK(cv.Ts == -W("w"));
  CanonicalVector z = to_canonical({P("0"), P("0")}, CanonicalFrame{});
  CHECK(z.Tr.is_zero());
  CHECK(z.Ts.is_zero());
}

TEST_CASE("reduction requires association") {
  Scenario s = Scenario::constant(1, 1, 1, 0);
  ConservedVector xdep{P("x*u"), P("x*(u^2/2 + u^3/3 + u_xx) - u^2/2 - u^3/3 - u_xx + u_x - u_x")};
  CHECK_THROWS_MATCHES(to_canonical(xdep, CanonicalFrame{}, &s, true), Error, code_is(ErrorCode::NotAssociated));
}

TEST_CASE("reduced ODE and first-order form") {
  CanonicalVector cv = to_canonical(example_vector(), CanonicalFrame{});
  Expr k = Expr::param("k");
  ReducedOde r = reduced_ode(cv.Tr, k / Expr(4));
  CHECK(r.ode == W("(4*w + 2)*w_rr - 2*w_r^2 - 2*c*w + (1 - 2*c)*w^2 + 2*w^3 + w^4 - k"));
  REQUIRE(r.p_rhs);
  CHECK(*r.p_rhs == parse("(k + 2*p^2 + 2*c*w + (2*c - 1)*w^2 - 2*w^3 - w^4)/(4*w + 2)", GrammarConfig::frame()));
  REQUIRE(r.singular);
  CHECK(*r.singular == parse("4*w + 2", GrammarConfig::frame()));
}

TEST_CASE("first-order and explicit-s inputs") {
  ReducedOde r = reduced_ode(W("w_r"), Expr::param("k"));
  CHECK(r.ode == W("w_r - k"));
  CHECK_FALSE(r.p_rhs);
  CHECK_THROWS_MATCHES(reduced_ode(W("s*w_r"), Expr()), Error, code_is(ErrorCode::ExplicitS));
}

TEST_CASE("reduced ODE solutions solve the PDE") {
  CanonicalVector cv = to_canonical(example_vector(), CanonicalFrame{});
  ReducedOde r = reduced_ode(cv.Tr, Expr::param("k") / Expr(4));
  ConsistencyResult res = reduction_consistency(*r.p_rhs, 1.0, 0.0, 0.1, 0.0);
  CHECK(res.samples == 200);
  CHECK(res.max_residual < 1e-6);
}
