#include <catch_amalgamated.hpp>

#include "gardner/symmetry.hpp"
#include "support/printing.hpp"

using namespace gardner;

namespace {

Expr S(const char* s) { return parse(s, symmetry_grammar()); }

std::map<std::string, Expr> B(const char* s) { return parse_bindings(s); }

std::string failures(const Report& r) { return r.ok() ? std::string() : r.text(false); }

}  // namespace

TEST_CASE("prolongation on simple generators") {
  Scenario ex = Scenario::constant(1, 1, 1, 0);
  CHECK(apply_symmetry({Expr(1), Expr(), Expr()}, ex.equation()).is_zero());
  DiffPoly F = Scenario::abstract_family().equation();
  CHECK(apply_symmetry({Expr(), Expr(1), Expr()}, F) == DiffPoly(S("A_t*u*u_x + C_t*u^2*u_x + B_t*u_xxx + Q_t*u")));
  // the scaling-type generator of the constant-coefficient equation
  VectorField v{S("k1*x - k1/2*t"), S("3*k1*t + k2"), S("-k1*u - k1/2")};
  CHECK(eliminate_ut(apply_symmetry(v, ex.equation()), ex).is_zero());
  // the same field without the u-shift is not a symmetry
  VectorField w{S("k1*x - k1/2*t"), S("3*k1*t + k2"), S("-k1*u")};
  CHECK_FALSE(eliminate_ut(apply_symmetry(w, ex.equation()), ex).is_zero());
  CHECK_THROWS_MATCHES(apply_symmetry(v, DiffPoly(S("u_t + u_xxxx"))), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::Order; }));
}

TEST_CASE("prolongation is linear in the generator") {
  DiffPoly F = Scenario::abstract_family().equation();
  VectorField v1{S("xi"), S("tau"), S("eta")};
  VectorField v2{S("x*t"), S("t^2"), S("u^2*x + t")};
  CHECK(apply_symmetry(v1 + v2, F) == apply_symmetry(v1, F) + apply_symmetry(v2, F));
}

TEST_CASE("determining system") {
  VectorField general{S("xi"), S("tau"), S("eta")};
  auto conds = determining_system(Scenario::abstract_family(), general);
  Expr target = S("-tau*B_t - tau_t*B + 3*xi_x*B");
  bool found = false;
  for (const auto& c : conds) found = found || c == target || c == -target;
  CHECK(found);
  CHECK(determining_system(Scenario::abstract_family(), {Expr(1), Expr(), Expr()}).empty());
  for (int family : {1, 2}) {
    for (const auto& c : determining_system(family_scenario(family), family_generator(family))) {
      CHECK(reduce_by_family_relations(c, family).is_zero());
    }
  }
  // the family relations themselves reduce to zero
  for (int family : {1, 2})
    for (const auto& [name, c] : family_conditions(family)) CHECK(reduce_by_family_relations(c, family).is_zero());
}

TEST_CASE("catalog verification") {
  Report r21 = verify_case("2.1", B("k=1,k1=1,k3=1,k2=0,k4=0,b0=1,c0=1,a0=1,beta0=0"));
  CHECK(failures(r21) == "");
  Report r12 = verify_case("1.2", B("k1=1,k3=0,d0=1,a0=1,a1=1,b0=1"));
  CHECK(failures(r12) == "");
  CHECK_THROWS_MATCHES(verify_case("1.2", B("k1=0,k3=0,d0=1,a0=1,a1=1,b0=1")), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::Param && e.detail().find("k1 != 0") != std::string::npos;
                       }));
  CHECK_THROWS_MATCHES(verify_case("3.1", {}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::Input; }));
}

TEST_CASE("catalog verification at random admissible parameters") {
  std::mt19937_64 rng(3);
  for (const auto& id : case_ids()) {
    for (int i = 0; i < 3; ++i) {
      auto p = random_admissible_params(id, rng);
      Report r = verify_case(id, p, 100 + i);
      INFO(id);
      CHECK(failures(r) == "");
    }
  }
}

TEST_CASE("a corrupted closed form is caught") {
  const CatalogEntry& e = catalog("1.2");
  auto params = B("k1=1,k3=0,d0=1,a0=1,a1=1,b0=1");
  std::map<std::string, Expr> fs;
  for (const auto& [name, f] : e.forms) fs[name] = substitute_params(f, params);
  fs["Q"] = fs["Q"] * Expr(2);
  auto conds = family_conditions(1);
  Expr res = substitute_functions(conds[3].second, fs);
  CHECK_FALSE(default_zero_tester().is_zero(res));
}

TEST_CASE("determining report") {
  Report r = determining_report();
  CHECK(failures(r) == "");
}
