#include <catch_amalgamated.hpp>

#include "gardner/jet.hpp"
#include "gardner/parser.hpp"
#include "support/printing.hpp"
#include "support/random_diffpoly.hpp"

using namespace gardner;

namespace {

DiffPoly P(const char* s) { return DiffPoly(parse(s)); }

auto code_is(ErrorCode c) {
  return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; });
}

}  // namespace

TEST_CASE("total derivatives") {
  CHECK(total_x(P("u^2")) == P("2*u*u_x"));
  CHECK(total_x(P("B*u_xx")) == P("B*u_xxx"));
  CHECK(total_x(P("x*u")) == P("u + x*u_x"));
  CHECK(total_t(P("u")) == P("u_t"));
  CHECK(total_t(P("B*u_x")) == P("B_t*u_x + B*u_tx"));
  CHECK(total_t(P("u^2")) == P("2*u*u_t"));
}

TEST_CASE("u_t elimination") {
  Scenario s = Scenario::abstract_family();
  DiffPoly delta = P("-A*u*u_x - C*u^2*u_x - B*u_xxx - Q*u");
  CHECK(s.delta() == delta);
  CHECK(eliminate_ut(P("u_t"), s) == delta);
  // hand expansion of D_x(delta)
  CHECK(eliminate_ut(P("u_tx"), s) == P("-A*u_x^2 - A*u*u_xx - 2*C*u*u_x^2 - C*u^2*u_xx - B*u_xxxx - Q*u_x"));
  CHECK(eliminate_ut(P("u_xx"), s) == P("u_xx"));
  CHECK_THROWS_MATCHES(eliminate_ut(P("u_tt"), s), Error, code_is(ErrorCode::Order));
}

TEST_CASE("Euler operator") {
  CHECK(euler(P("u*u_x")).is_zero());
  CHECK(euler(P("u_x^2/2")) == P("-u_xx"));
  CHECK(euler(Scenario::abstract_family().equation()) == P("Q"));
  // mixed derivative term: E(u*u_tx) = u_tx + D_x D_t u = 2*u_tx
  CHECK(euler(P("u*u_tx")) == P("2*u_tx"));
  CHECK(euler(P("v*u_t"), 0) == P("-v_t"));
}

TEST_CASE("higher Euler operators") {
  CHECK(higher_euler(P("u_x^2/2"), 1) == P("u_x"));
  CHECK(higher_euler(P("u*u_xx"), 1) == P("-2*u_x"));
  CHECK(higher_euler(P("u*u_xx"), 2) == P("u"));
  CHECK_THROWS_MATCHES(higher_euler(P("u*u_t"), 1), Error, code_is(ErrorCode::Order));
}

TEST_CASE("inverse total x-derivative") {
  CHECK(invert_total_x(P("2*u*u_x")) == P("u^2"));
  CHECK(invert_total_x(P("u_x")) == P("u"));
  CHECK_THROWS_MATCHES(invert_total_x(P("u*u_x^2")), Error, code_is(ErrorCode::NotExact));
  // jet-free residue integrates as a polynomial in x
  CHECK(invert_total_x(P("3*x^2*k + u_x")) == P("k*x^3 + u"));
  CHECK_THROWS_MATCHES(invert_total_x(P("exp(x)")), Error, code_is(ErrorCode::Residue));
}

TEST_CASE("Euler operator annihilates total derivatives") {
  testing_support::TreeGen gen(17);
  for (int i = 0; i < 200; ++i) {
    DiffPoly p = testing_support::random_diffpoly(gen);
    INFO(render(p.expr()));
    CHECK(euler(total_x(p)).is_zero());
    CHECK(euler(total_t(p)).is_zero());
  }
}

TEST_CASE("total derivatives commute and obey Leibniz") {
  testing_support::TreeGen gen(23);
  for (int i = 0; i < 100; ++i) {
    DiffPoly p = testing_support::random_diffpoly(gen);
    DiffPoly q = testing_support::random_diffpoly(gen, 2, 2, 2);
    CHECK(total_x(total_t(p)) == total_t(total_x(p)));
    CHECK(total_x(p * q) == total_x(p) * q + p * total_x(q));
  }
}

TEST_CASE("inversion round trip") {
  testing_support::TreeGen gen(29);
  for (int i = 0; i < 100; ++i) {
    // jet-free parts need not have an x-polynomial antiderivative
    DiffPoly p = testing_support::random_diffpoly(gen, 3, 3, 3, 1);
    DiffPoly dp = total_x(p);
    INFO(render(p.expr()));
    DiffPoly back = invert_total_x(dp);
    CHECK(default_zero_tester().is_zero((total_x(back) - dp).expr()));
  }
}
