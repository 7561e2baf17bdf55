#include <catch_amalgamated.hpp>

#include <cmath>

#include "gardner/numerics.hpp"
#include "gardner/parser.hpp"

using namespace gardner;

namespace {

DiffPoly P(const char* s) { return DiffPoly(parse(s)); }

auto code_is(ErrorCode c) {
  return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; });
}

const double kTwoPi = 2 * M_PI;

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(Grid(16, 1.0));
  CHECK_THROWS_MATCHES(Grid(15, 1.0), Error, code_is(ErrorCode::Input));
  CHECK_THROWS_MATCHES(Grid(8, 1.0), Error, code_is(ErrorCode::Input));
  CHECK_THROWS_MATCHES(Grid(64, 0.0), Error, code_is(ErrorCode::Input));
}

TEST_CASE("grid evaluation of densities") {
  Scenario s = Scenario::constant(1, 1, 1, 0);
  Grid g(64, kTwoPi);
  std::vector<double> st(64);
  for (int j = 0; j < 64; ++j) st[j] = std::sin(g.x(j));
  auto u = compile_eval(P("u"), s, g)(0.0, st);
  auto u2 = compile_eval(P("u^2"), s, g)(0.0, st);
  auto ux = compile_eval(P("u_x"), s, g)(0.0, st);
  double e1 = 0, e2 = 0, e3 = 0;
  for (int j = 0; j < 64; ++j) {
    e1 = std::max(e1, std::fabs(u[j] - st[j]));
    e2 = std::max(e2, std::fabs(u2[j] - st[j] * st[j]));
    e3 = std::max(e3, std::fabs(ux[j] - std::cos(g.x(j))));
  }
  CHECK(e1 == 0.0);
  CHECK(e2 < 1e-15);
  CHECK(e3 < 1e-5);
  CHECK_THROWS_MATCHES(compile_eval(P("u_t"), s, g), Error, code_is(ErrorCode::Order));
  CHECK_THROWS_MATCHES(compile_eval(P("k*u"), s, g), Error, code_is(ErrorCode::Unbound));
}

TEST_CASE("stencils are fourth order") {
  double prev[4] = {0, 0, 0, 0};
  for (int n : {32, 64}) {
    Grid g(n, kTwoPi);
    std::vector<double> st(n);
    for (int j = 0; j < n; ++j) st[j] = std::sin(g.x(j));
    std::vector<double> d[5];
    stencil_derivatives(st, g, d);
    double err[4] = {0, 0, 0, 0};
    for (int j = 0; j < n; ++j) {
      double x = g.x(j);
      double want[4] = {std::cos(x), -std::sin(x), -std::cos(x), std::sin(x)};
      for (int m = 0; m < 4; ++m) err[m] = std::max(err[m], std::fabs(d[m + 1][j] - want[m]));
    }
    if (n == 64)
      for (int m = 0; m < 4; ++m) CHECK(std::log2(prev[m] / err[m]) > 3.8);
    for (int m = 0; m < 4; ++m) prev[m] = err[m];
  }
}

TEST_CASE("constant-coefficient run conserves mass and energy") {
  Scenario s = Scenario::constant(1, 1, 1, 0);
  Grid g(128, kTwoPi);
  Trajectory tr = simulate(s, g, sample_initial(parse("sin(x)/10"), s, g));
  CHECK(tr.times.back() == Catch::Approx(1.0));
  CHECK(conserved_drift(tr, P("u"), s).max_drift < 1e-8);
  CHECK(conserved_drift(tr, P("u^2"), s).max_drift < 1e-4);
}

TEST_CASE("damped mean decays exponentially") {
  Scenario s = Scenario::constant(1, 1, 1, Rational(1, 2));
  Grid g(64, kTwoPi);
  Trajectory tr = simulate(s, g, sample_initial(parse("1/2 + sin(x)/10"), s, g));
  DriftSeries mass = conserved_drift(tr, P("u"), s);
  for (std::size_t i = 0; i < mass.times.size(); ++i)
    CHECK(mass.integrals[i] == Catch::Approx(std::exp(-0.5 * mass.times[i]) * M_PI).epsilon(1e-4));
}

TEST_CASE("zero state stays zero") {
  Scenario s = Scenario::constant(2, 1, 3, Rational(1, 3));
  Grid g(32, kTwoPi);
  Trajectory tr = simulate(s, g, std::vector<double>(32, 0.0));
  for (double v : tr.states.back()) CHECK(v == 0.0);
}

TEST_CASE("blow-up is reported") {
  Scenario s = Scenario::constant(1, 1, 1, -40);
  Grid g(16, kTwoPi);
  SimulationOptions opt;
  opt.t1 = 1.0;
  CHECK_THROWS_MATCHES(simulate(s, g, std::vector<double>(16, 1.0), opt), Error, code_is(ErrorCode::Blowup));
}

TEST_CASE("time-dependent coefficients are evaluated from closed forms") {
  Scenario s;
  s.A = parse("1");
  s.B = parse("exp(k*t)");
  s.C = parse("1");
  s.Q = parse("0");
  s.params["k"] = Expr(Rational(1, 2));
  Grid g(32, kTwoPi);
  Trajectory tr = simulate(s, g, sample_initial(parse("sin(x)/10"), s, g));
  CHECK(conserved_drift(tr, P("u"), s).max_drift < 1e-8);
  CHECK(conserved_drift(tr, P("u^2"), s).max_drift < 1e-4);
}

TEST_CASE("manufactured solution") {
  Scenario s = Scenario::constant(1, 1, 1, 0);
  ConvergenceResult r = convergence_study(s, parse("sin(x - t)"), kTwoPi, 0.05, {32, 64, 128});
  CHECK(r.min_order() >= 3.5);
  ConvergenceResult c = convergence_study(Scenario::constant(1, 1, 1, 1), parse("3/10"), kTwoPi, 0.05, {32, 64});
  for (double e : c.errors) CHECK(e < 1e-13);
  CHECK_THROWS_MATCHES(convergence_study(Scenario::constant(1, 0, 1, 0), parse("sin(x)"), kTwoPi, 0.05), Error,
                       code_is(ErrorCode::Param));
}
