#include <catch_amalgamated.hpp>

#include "gardner/laws.hpp"
#include "gardner/parser.hpp"
#include "support/printing.hpp"

using namespace gardner;

namespace {

DiffPoly P(const char* s) { return DiffPoly(parse(s)); }

auto code_is(ErrorCode c) {
  return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; });
}

Scenario unit_gardner() { return Scenario::constant(1, 1, 1, 0); }

bool zero(const DiffPoly& p) { return default_zero_tester().is_zero(p.expr()); }

}  // namespace

TEST_CASE("multiplier residual") {
  Scenario s = Scenario::abstract_family();
  CHECK(multiplier_residual(P("1"), s.equation()) == P("Q"));
  CHECK(multiplier_residual(P("u"), s.equation()) == P("2*Q*u"));
  s.Q = Expr();
  CHECK(multiplier_residual(P("u"), s.equation()).is_zero());
  CHECK(multiplier_residual(P("1"), s.equation()).is_zero());
}

TEST_CASE("subcase multipliers") {
  for (const char* id : {"1.1a", "1.1b", "1.2"}) {
    const LawDisplay& d = law_display(id);
    INFO(id);
    DiffPoly F = d.scenario().equation();
    CHECK(zero(multiplier_residual(DiffPoly(*d.corrected_multiplier), F)));
    // the displayed forms are not multipliers
    CHECK_FALSE(zero(multiplier_residual(DiffPoly(*d.multiplier), F)));
  }
}

TEST_CASE("homotopy density") {
  CHECK(density_from_multiplier(P("u")) == P("u^2/2"));
  CHECK(density_from_multiplier(P("u_xx")) == P("u*u_xx/2"));
  CHECK(density_from_multiplier(P("1")) == P("u"));
  const LawDisplay& d = law_display("1.2");
  CHECK(density_from_multiplier(DiffPoly(*d.corrected_multiplier)) == DiffPoly(d.density));
  CHECK_THROWS_MATCHES(density_from_multiplier(P("u_t")), Error, code_is(ErrorCode::Order));
}

TEST_CASE("homotopy density inverts the Euler operator on multipliers") {
  std::vector<DiffPoly> lambdas{P("1"), P("u"), P("u_xx"), P("x*u + t")};
  for (const char* id : {"1.1a", "1.2"}) lambdas.emplace_back(*law_display(id).corrected_multiplier);
  for (const auto& l : lambdas) {
    INFO(render(l.expr()));
    CHECK(zero(euler(density_from_multiplier(l)) - l));
  }
}

TEST_CASE("flux reconstruction") {
  Scenario s = unit_gardner();
  CHECK(flux_from_density(P("u"), s) == P("u^2/2 + u^3/3 + u_xx"));
  CHECK(flux_from_density(P("u^2/2"), s) == P("u^3/3 + u^4/4 + u*u_xx - u_x^2/2"));
  CHECK_THROWS_MATCHES(flux_from_density(P("u^3"), s), Error, code_is(ErrorCode::NotExact));
}

TEST_CASE("subcase 1.2 density and flux") {
  const LawDisplay& d = law_display("1.2");
  Scenario s = d.scenario();
  DiffPoly Tx = flux_from_density(DiffPoly(d.density), s);
  CHECK(zero(divergence_residual({DiffPoly(d.density), Tx}, s)));
  CHECK(equivalent_fluxes(Tx, DiffPoly(d.flux), s));
  CHECK(zero(divergence_residual({DiffPoly(d.density), DiffPoly(d.flux)}, s)));
}

TEST_CASE("subcase 1.1 corrected densities are conserved") {
  for (const char* id : {"1.1a", "1.1b"}) {
    const LawDisplay& d = law_display(id);
    Scenario s = d.scenario();
    DiffPoly Tt = density_from_multiplier(DiffPoly(*d.corrected_multiplier));
    DiffPoly Tx = flux_from_density(Tt, s);
    INFO(id);
    CHECK(zero(divergence_residual({Tt, Tx}, s)));
    CHECK(zero(characteristic_residual(DiffPoly(*d.corrected_multiplier), {Tt, Tx}, s.equation())));
    // the displayed density is not conserved
    CHECK_THROWS_MATCHES(flux_from_density(DiffPoly(d.density), s), Error, code_is(ErrorCode::NotExact));
  }
}

TEST_CASE("divergence residual") {
  Scenario s = unit_gardner();
  CHECK(divergence_residual({P("u"), P("0")}, s) == s.delta());
  CHECK(divergence_residual({P("0"), P("7")}, s).is_zero());
  CHECK(divergence_residual({P("u"), P("u^2/2 + u^3/3 + u_xx")}, s).is_zero());
}

TEST_CASE("density equivalence") {
  Scenario s = unit_gardner();
  CHECK(equivalent_densities(P("u^2/2 + u*u_x"), P("u^2/2"), s));
  CHECK_FALSE(equivalent_densities(P("u^2"), P("u"), s));
  CHECK(equivalent_densities(P("u_t"), P("0"), s));
}

TEST_CASE("Ibragimov vectors for the Q = 0 subcases") {
  for (const char* id : {"2.1", "2.2"}) {
    const LawDisplay& d = law_display(id);
    Scenario s = d.scenario();
    ConservedVector cv = ibragimov_vector(d.generator(), s, *d.phi);
    INFO(id);
    CHECK(zero(divergence_residual(cv, s)));
    CHECK(equivalent_densities(cv.Tt, DiffPoly(d.density), s));
    CHECK(cv.Tt == DiffPoly(d.density));
    // unreduced vector is conserved as well
    ConservedVector raw = ibragimov_vector(d.generator(), s, *d.phi, default_zero_tester(), false);
    CHECK(zero(divergence_residual(raw, s)));
    CHECK(equivalent_densities(raw.Tt, cv.Tt, s));
  }
}

TEST_CASE("Ibragimov vector of the constant-coefficient example") {
  const LawDisplay& d = law_display("example");
  Scenario s = d.scenario();
  ConservedVector cv = ibragimov_vector(d.generator(), s, *d.phi);
  CHECK(cv.Tt == DiffPoly(d.density));
  CHECK(zero(divergence_residual(cv, s)));
  CHECK(equivalent_fluxes(cv.Tx, DiffPoly(d.flux), s));
  CHECK(zero(divergence_residual({DiffPoly(d.density), DiffPoly(d.flux)}, s)));
}

TEST_CASE("time translation with phi = 1 gives a trivial density") {
  Scenario s = unit_gardner();
  ConservedVector cv = ibragimov_vector({Expr(), Expr(1), Expr()}, s, Expr(1));
  CHECK(zero(divergence_residual(cv, s)));
  CHECK(equivalent_densities(cv.Tt, P("0"), s));
  CHECK_FALSE(equivalent_densities(cv.Tt, P("u"), s));
}

TEST_CASE("Ibragimov vector requires a self-adjoint substitution") {
  Scenario s = Scenario::abstract_family();
  CHECK_THROWS_MATCHES(ibragimov_vector({Expr(1), Expr(), Expr()}, s, Expr::u()), Error,
                       code_is(ErrorCode::NotSelfAdjoint));
}

TEST_CASE("mass and energy specializations of the Ibragimov density") {
  const LawDisplay& d = law_display("2.1");
  Scenario s = d.scenario();
  auto spec = [&](const char* b) {
    auto params = parse_bindings(b);
    return DiffPoly(substitute_params(ibragimov_vector(d.generator(), s, *d.phi).Tt.expr(), params));
  };
  CHECK(spec("k1=1,c2=1/2,k2=0,k3=0,c1=0") == P("u"));
  CHECK(spec("k1=1,c1=2/3,k2=0,k3=0,c2=0") == P("u^2"));
}
