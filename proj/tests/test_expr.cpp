#include <catch_amalgamated.hpp>

#include <cmath>

#include "gardner/expr.hpp"
#include "gardner/parser.hpp"
#include "support/printing.hpp"
#include "support/random_tree.hpp"

using namespace gardner;
using Catch::Matchers::WithinRel;

namespace {

Expr P(const char* s) { return parse(s); }

Expr f1() { return P("3*k1*exp(k*t) + k*k4"); }

ParamEnv env_of(std::initializer_list<std::pair<const char*, double>> vals) {
  ParamEnv env;
  for (const auto& [k, v] : vals) {
    if (std::string(k) == "t") {
      env.t = v;
    } else if (std::string(k) == "x") {
      env.x = v;
    } else {
      env.set(k, v);
    }
  }
  return env;
}

}  // namespace

TEST_CASE("normalization collapses arithmetic") {
  CHECK(P("2*t + t") == Expr(3) * Expr::t());
  CHECK(P("exp(k*t)*exp(-k*t)") == Expr(1));
  CHECK(P("(u - u)") == Expr());
  CHECK((P("x") - P("x")).is_zero());
  CHECK(P("2^(1/2)*2^(1/2)") == Expr(2));
  CHECK(P("4^(1/2)") == Expr(2));
  CHECK(P("(a+b)^2") == P("a^2 + 2*a*b + b^2"));
}

TEST_CASE("powers of a common base merge exponents") {
  Expr p = P("d0/(3*k*k1)");
  Expr q = P("1/2 - k1");
  CHECK(pow(f1(), p) * pow(f1(), q) == pow(f1(), p + q));
  CHECK(pow(f1(), Expr(0)) == Expr(1));
  CHECK(pow(f1(), p) * pow(f1(), -p) == Expr(1));
  // sign-normalized sums with integer exponents
  CHECK(P("1/(k*k1 - 2*d0)") == -P("1/(2*d0 - k*k1)"));
}

TEST_CASE("normalization is idempotent and compatible with arithmetic") {
  testing_support::TreeGen gen(11);
  for (int i = 0; i < 100; ++i) {
    Expr a = gen.positive(3)->build();
    Expr b = parse(render(a));
    Expr c = gen.positive(2)->build();
    REQUIRE(normalize(normalize(a)) == normalize(a));
    CHECK(b == a);
    CHECK(b + c == a + c);
    CHECK(b * c == a * c);
  }
}

TEST_CASE("diff_param on coefficient expressions") {
  CHECK(diff_param(P("exp(k*t)"), Indep::T) == P("k*exp(k*t)"));
  CHECK(diff_param(P("AD(Q)"), Indep::T) == P("Q"));
  Expr p = P("d0/(3*k*k1)");
  Expr lhs = diff_param(pow(f1(), p), Indep::T);
  Expr rhs = p * P("3*k1*k*exp(k*t)") * pow(f1(), p - Expr(1));
  CHECK(lhs == rhs);
  CHECK(diff_param(P("A"), Indep::T) == P("A_t"));
  CHECK(diff_param(P("A"), Indep::X).is_zero());
  CHECK_THROWS_MATCHES(diff_param(P("u_x*A"), Indep::T), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::Jet; }));
}

TEST_CASE("diff_param is linear") {
  testing_support::TreeGen gen(5);
  for (int i = 0; i < 100; ++i) {
    Expr e1 = gen.positive(3)->build();
    Expr e2 = gen.positive(3)->build();
    Expr a(Rational(gen.pick(1, 9), gen.pick(1, 4)));
    for (Indep v : {Indep::T, Indep::X}) {
      CHECK(diff_param(a * e1 + e2, v) == a * diff_param(e1, v) + diff_param(e2, v));
    }
  }
}

TEST_CASE("substitution") {
  GrammarConfig cfg = GrammarConfig::gardner();
  cfg.with_function("tau");
  Expr closed = parse("a0*tau^(-d0/(3*k1)) + a1*tau^(-1/3)", cfg);
  Expr got = substitute_functions(P("A_t"), {{"A", closed}});
  CHECK(got == diff_param(closed, Indep::T));
  Expr tau = P("3*k1*t + k3");
  Expr full = substitute_functions(P("A_t"), {{"A", closed}, {"tau", tau}});
  CHECK(full == diff_param(substitute_functions(closed, {{"tau", tau}}), Indep::T));
  CHECK(substitute_params(P("exp(k*t)"), {{"k", Expr(0)}}) == Expr(1));
  Expr e = P("t^2*exp(k*t) + A*x");
  CHECK(substitute(e, [](const Atom& a) -> std::optional<Expr> {
          if (a.kind == AtomKind::Var && a.var == Indep::T) return Expr::t();
          return std::nullopt;
        }) == e);
  CHECK_THROWS_MATCHES(substitute_functions(P("A"), {{"A", P("B + 1")}, {"B", P("A*2")}}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::Cycle; }));
}

TEST_CASE("numeric evaluation") {
  CHECK_THAT(eval_num(f1(), env_of({{"k", 1}, {"k1", 1}, {"k4", 2}, {"t", 0}})), WithinRel(5.0, 1e-15));
  CHECK(eval_num(P("exp(k*t)"), env_of({{"k", 0}, {"t", 7}})) == 1.0);
  CHECK_THROWS_MATCHES(eval_num(P("AD(Q)"), env_of({{"t", 1}})), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::Unbound; }));
  CHECK_THROWS_MATCHES(eval_num(P("k2 + 1"), env_of({{"k", 1}})), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::Unbound && e.detail().find("k2") != std::string::npos;
                       }));
  ParamEnv env = env_of({{"t", 1.5}, {"q0", 0.3}});
  env.bind_function("Q", P("q0*t^2"));
  CHECK_THAT(eval_num(P("AD(Q)"), env), WithinRel(0.3 * 1.5 * 1.5 * 1.5 / 3.0, 1e-12));
  CHECK_THAT(eval_num(P("Q_t"), env), WithinRel(2 * 0.3 * 1.5, 1e-12));
}

TEST_CASE("evaluation agrees with an independent tree evaluator") {
  testing_support::TreeGen gen(2024);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    auto tree = gen.positive(4);
    Expr e = tree->build();
    for (int p = 0; p < 8; ++p) {
      std::map<std::string, double> vals;
      ParamEnv env;
      for (const auto& name : testing_support::TreeGen::params()) {
        double v = gen.uniform(0.5, 2.0);
        vals[name] = v;
        env.set(name, v);
      }
      double t = gen.uniform(0.5, 2.0), x = gen.uniform(0.5, 2.0);
      env.t = t;
      env.x = x;
      double want = tree->eval(vals, t, x);
      if (!std::isfinite(want) || std::fabs(want) > 1e12) continue;
      double got = eval_num(e, env);
      CHECK_THAT(got, WithinRel(want, 1e-10));
      ++checked;
    }
  }
  CHECK(checked > 3000);
}

TEST_CASE("zero test") {
  // canonical zero is symbolic
  auto z = default_zero_tester().test(P("t - t"));
  CHECK(z.zero);
  CHECK(z.mode == CheckMode::Symbolic);
  // f1^(p+1) against f1^p * f1 is only numerically equal
  Expr p = P("d0/(3*k*k1)");
  Expr lhs = pow(f1(), p + Expr(1));
  Expr rhs = pow(f1(), p) * f1();
  ZeroTester tester;
  auto r = tester.test(lhs - rhs);
  CHECK(r.zero);
  CHECK(r.mode == CheckMode::Numeric);
  CHECK_FALSE(tester.test(lhs - rhs + P("k*1e-3")).zero);
}

TEST_CASE("zero test soundness for normalized zeros") {
  using testing_support::Node;
  testing_support::TreeGen gen(99);
  auto bin = [](Node::Kind k, std::shared_ptr<Node> a, std::shared_ptr<Node> b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  };
  int declared = 0;
  for (int i = 0; i < 100; ++i) {
    auto a = gen.positive(3);
    auto b = gen.positive(2);
    auto d = i % 2 ? bin(Node::Sub, bin(Node::Sub, bin(Node::Add, a, b), b), a)
                   : bin(Node::Sub, bin(Node::Div, bin(Node::Mul, a, b), b), a);
    if (!d->build().is_zero()) continue;
    ++declared;
    for (int p = 0; p < 16; ++p) {
      std::map<std::string, double> vals;
      for (const auto& name : testing_support::TreeGen::params()) vals[name] = gen.uniform(0.5, 2.0);
      double t = gen.uniform(0.5, 2.0), x = gen.uniform(0.5, 2.0);
      double mag = std::fabs(a->eval(vals, t, x)) + std::fabs(b->eval(vals, t, x));
      CHECK(std::fabs(d->eval(vals, t, x)) < 1e-9 * (1 + mag));
    }
  }
  CHECK(declared >= 50);
}

TEST_CASE("antiderivative atoms split off constant factors") {
  CHECK(P("AD(2*k*Q)") == P("2*k*AD(Q)"));
  CHECK(P("AD(k)") == P("k*t"));
  CHECK(resolve_antiderivatives(P("AD(t^2)")) == P("t^3/3"));
  CHECK(resolve_antiderivatives(P("AD(exp(k*t))")) == P("exp(k*t)/k"));
}

TEST_CASE("compiled evaluation matches eval_num") {
  ParamEnv env;
  env.set("k", 0.7);
  env.bind_function("B", P("2 + t"));
  Expr e = P("B*u_xx + exp(k*t)*u^2 + sin(x - t)");
  Compiled c = compile(e, env);
  double jets[5] = {0.3, 0.1, -0.2, 0.5, 0.0};
  ParamEnv full = env;
  full.x = 1.1;
  full.t = 0.4;
  full.jets[JetVar{0, 0, 0}] = 0.3;
  full.jets[JetVar{0, 2, 0}] = -0.2;
  CHECK_THAT(c(Compiled::Point{1.1, 0.4, jets}), WithinRel(eval_num(e, full), 1e-13));
}
