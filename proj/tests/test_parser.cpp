#include <catch_amalgamated.hpp>

#include <random>

#include "gardner/jet.hpp"
#include "gardner/parser.hpp"
#include "support/printing.hpp"
#include "support/random_tree.hpp"

using namespace gardner;

namespace {

bool has_code(const Error& e, ErrorCode c) { return e.code() == c; }

}  // namespace

TEST_CASE("parse builds the Gardner left-hand side") {
  Expr want = Expr::u(0, 1) + Expr::func("A") * Expr::u() * Expr::u(1) +
              Expr::func("C") * pow(Expr::u(), 2) * Expr::u(1) + Expr::func("B") * Expr::u(3) +
              Expr::func("Q") * Expr::u();
  Expr got = parse("u_t + A*u*u_x + C*u^2*u_x + B*u_xxx + Q*u");
  CHECK(got == want);
  CHECK(got == Scenario::abstract_family().equation().expr());
}

TEST_CASE("jet suffixes count letters") {
  CHECK(parse("u_xx") == Expr::u(2, 0));
  CHECK(parse("u_tx") == Expr::u(1, 1));
  CHECK(parse("u_xt") == Expr::u(1, 1));
  CHECK(parse("v_xxx") == Expr::jet(1, 3, 0));
  CHECK(parse("A_tt") == Expr::func(FuncSpec{"A", kArgT, 0, 2, 0}));
  CHECK_THROWS_MATCHES(parse("u_"), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return has_code(e, ErrorCode::BadDeriv);
                       }));
  CHECK_THROWS_MATCHES(parse("u_xq"), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return has_code(e, ErrorCode::BadDeriv);
                       }));
  // t-functions have no x-derivative
  CHECK_THROWS_MATCHES(parse("A_x"), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return has_code(e, ErrorCode::BadDeriv);
                       }));
}

TEST_CASE("reduction frame grammar") {
  GrammarConfig fr = GrammarConfig::frame();
  Expr e = parse("(4*w+2)*w_rr - 2*w_r^2", fr);
  Expr w = Expr::u(), wr = Expr::u(1), wrr = Expr::u(2);
  CHECK(e == (Expr(4) * w + Expr(2)) * wrr - Expr(2) * wr * wr);
  CHECK(parse(render(e, fr), fr) == e);
}

TEST_CASE("precedence and associativity") {
  CHECK(parse("2^3^2") == Expr(512));
  CHECK(parse("-2^2") == Expr(-4));
  CHECK(parse("2*3+4/2-1") == Expr(7));
  CHECK(parse("k^-1") == pow(Expr::param("k"), -1));
  CHECK(parse("1.5e-1") == Expr(Rational(3, 20)));
  CHECK_THROWS_MATCHES(parse("2 k"), SyntaxError, Catch::Matchers::Predicate<SyntaxError>([](const SyntaxError& e) {
                         return e.code() == ErrorCode::Syntax && e.line() == 1 && e.column() == 3;
                       }));
  CHECK_THROWS_AS(parse("(1 + k"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
}

TEST_CASE("render round trips") {
  for (const char* s : {"u_x^2", "u_t + A*u*u_x + C*u^2*u_x + B*u_xxx + Q*u", "exp(-k*t/2)*AD(Q)*u",
                        "(3*k1*exp(k*t) + k*k4)^(d0/(3*k*k1))", "sin(x - t)^2 + cos(x)", "2^(1/2)*x/3",
                        "-(k + 1)^(-5/3)*u_xx"}) {
    Expr e = parse(s);
    INFO(s);
    CHECK(parse(render(e)) == e);
  }
  Expr f1 = parse("3*k*exp(k*t) + k*k4");
  std::string r = render(pow(f1, parse("d0/(3*k*k1)")));
  CHECK(r.find("^(") != std::string::npos);
}

TEST_CASE("round trip on random trees") {
  testing_support::TreeGen gen(7);
  for (int i = 0; i < 1000; ++i) {
    auto tree = gen.positive(4);
    Expr built = tree->build();
    INFO(tree->text());
    CHECK(parse(tree->text()) == built);
    CHECK(parse(render(built)) == built);
  }
}

// AD of a jet is well-formed syntax but rejected as E_JET
TEST_CASE("fuzzed token streams parse or raise syntax errors") {
  const std::vector<std::string> tokens{"u", "u_x", "u_t", "A", "k1", "2", "0.5", "+", "-", "*", "/", "^", "(", ")",
                                        "exp(", "AD(", "x", "t", "u_", "A_t", ",", "#", "1e3", "w"};
  std::mt19937_64 rng(31);
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string src;
    int len = static_cast<int>(rng() % 9) + 1;
    for (int j = 0; j < len; ++j) src += tokens[rng() % tokens.size()] + (rng() % 3 == 0 ? " " : "");
    try {
      (void)parse(src);
      ++parsed;
    } catch (const Error& e) {
      INFO(src);
      CHECK((e.code() == ErrorCode::Syntax || e.code() == ErrorCode::BadDeriv || e.code() == ErrorCode::Domain ||
             e.code() == ErrorCode::Jet));
      ++rejected;
    }
  }
  CHECK(parsed > 0);
  CHECK(rejected > 0);
}

TEST_CASE("split_list") {
  auto parts = split_list(" k1*x ; 3*k1*t + k2;-k1*u ");
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == "k1*x");
  CHECK(parts[2] == "-k1*u");
}
