#include "gardner/laws.hpp"

#include <algorithm>

namespace gardner {

namespace {

Expr S(const std::string& src) { return parse(src, symmetry_grammar()); }

// closed forms of f1 and tau for the subcase
Expr resolve(const std::string& case_id, const std::string& src) {
  std::map<std::string, Expr> helpers;
  if (case_id == "1.1a" || case_id == "1.1b" || case_id == "2.1") {
    helpers["f1"] = S("3*k1*exp(k*t) + k*k4");
  } else if (case_id == "1.2" || case_id == "2.2") {
    helpers["tau"] = S("3*k1*t + k3");
  }
  return substitute_functions(S(src), helpers);
}

const char* kDensity11 = "exp(-k*t/2)*f1^(2*d0/(3*k*k1) + 1)*u*(c1 + c2/2*exp(-k*t/2)*u)";
const char* kMultiplier11 = "exp(-k*t/2)*f1^(2*d0/(3*k*k1) + 1)*(c1 + c2*exp(-k*t/2)*u)";
const char* kMultiplier11Fixed = "c1*exp(-k*t/2)*f1^(d0/(3*k*k1) + 1/2) + c2*exp(-k*t)*f1^(2*d0/(3*k*k1) + 1)*u";

const char* kFlux11a =
    "exp(-k*t/2)/12*f1^(d0/(3*k*k1))*("
    "3*c2*f1^(d0/(3*k*k1) + 1)*(u^4*exp(-k*t/2) + 2*b0*exp(k*t/2)*(2*u*u_xx - u_x^2))"
    " + 4*(a0*c2 + c1)*u^3*f1 + 6*a0*c1*u^2*exp(k*t/2)*f1^(-d0/(3*k*k1))"
    " + 12*b0*c1*u_xx*exp(k*t)*f1^(1/2)"
    " + 4*a1*k/(2*d0 + k*k1)*u^2*(2*c2*u*f1^(d0/(3*k*k1) + 2/3) + 3*c1*exp(k*t/2)*f1^(1/6)))";

const char* kFlux11b =
    "exp(-k*t/2)/12*f1^(d0/(3*k*k1))*("
    "3*c2*f1^(d0/(3*k*k1) + 1)*(u^4*exp(-k*t/2) + 2*b0*exp(k*t/2)*(2*u*u_xx - u_x^2))"
    " + 4*c1*f1^(1/2)*(u^3 + 3*b0*u_xx*exp(k*t)) + 6*a0*c1*u^2*exp(k*t/2)*f1^(1/6)"
    " + 4*a0*c2*u^3*f1^(d0/(3*k*k1) + 2/3)"
    " - 4*a1*k/(2*d0 + k*k1)*u^2*(2*c2*u*f1^(1/2) + 3*c1*exp(k*t/2)))";

const char* kMultiplier12 = "tau^(d0/(3*k1))*(c1 + c2*tau^(d0/(3*k1)))";
const char* kMultiplier12Fixed = "tau^(d0/(3*k1))*(c1 + c2*tau^(d0/(3*k1))*u)";
const char* kDensity12 = "tau^(d0/(3*k1))*u*(c1 + c2/2*tau^(d0/(3*k1))*u)";
const char* kFlux12 =
    "1/12*tau^(d0/(3*k1))*(tau^(d0/(3*k1))*(6*b0*c2*(2*u*u_xx - u_x^2) + 3*c2*u^4)"
    " + 6*a0*c1*u^2*tau^(-d0/(3*k1)) + 6*a1*c1*u^2*tau^(-1/3) + 4*a1*c2*u^3*tau^(d0/(3*k1) - 1/3)"
    " + 4*c1*(u^3 + 3*b0*u_xx) + 4*a0*c2*u^3)";

const char* kDensity2 = "(k3*u + k2)*(c1*u + c2) + k1*u*(3/2*c1*u + 2*c2)";

std::string flux2(const char* g, const char* prefactor) {
  return std::string(prefactor) + "/(12*(k3 + k1))*("
         "6*b0*c1*(2*u*u_xx - u_x^2)*(2*k3^2 + 5*k1*k3 + 3*k1^2)"
         " + 12*b0*u_xx*(c2*(k3^2 + 3*k1*k3 + 2*k1^2) + c1*(k3 + k1))"
         " + " + g + "^(-k3/(3*k1) - 1)*(4*a0*c1*u^3*(2*k3^2 + 5*k1*k3 + 3*k1^2)"
         " + 6*a0*c2*u^2*(k3^2 + 3*k1*k3 + 2*k1^2) + 6*a0*c1*k2*u^2*(k3 + k1))"
         " + " + g + "^(-2*k3/(3*k1) - 4/3)*(3*c0*c1*u^4*(2*k3^2 + 5*k1*k3 + 3*k1^2)"
         " + 4*c0*c1*k1*u^3*(5*k3 + 7*k2) + 4*c0*c2*u^3*(k3^2 + 3*k1*k3 + 2*k1^2)"
         " + 12*c0*k2*u^2*(c2*k3 + c1*k2 + 2*c2*k1)))";
}

const char* kDensityExample = "-c1*k1/2*u^2 - c1*k1/2*u - c2*k1/2";
const char* kFluxExample =
    "-c1*k1*u*u_xx - c1*k1/2*u_xx + c1*k1/2*u_x^2 - c1*k1/4*u^4 - c1*k1/2*u^3 - c1*k1/4*u^2";

std::vector<LawDisplay> build() {
  std::vector<LawDisplay> out;
  auto add = [&](const std::string& id, const std::string& anchor, const char* mult, const char* fixed,
                 const char* phi, const char* density, const std::string& flux) {
    LawDisplay d;
    d.id = id;
    d.anchor = anchor;
    if (mult) d.multiplier = resolve(id, mult);
    if (fixed) d.corrected_multiplier = resolve(id, fixed);
    if (phi) d.phi = S(phi);
    d.density = resolve(id, density);
    d.flux = resolve(id, flux);
    out.push_back(std::move(d));
  };
  add("1.1a", "Subcase 1.1, 'multiplier is given by'; flux 'If A(t) is given by' the first branch", kMultiplier11,
      kMultiplier11Fixed, nullptr, kDensity11, kFlux11a);
  add("1.1b", "Subcase 1.1, 'multiplier is given by'; flux for the second A(t) branch", kMultiplier11,
      kMultiplier11Fixed, nullptr, kDensity11, kFlux11b);
  add("1.2", "Subcase 1.2, 'has been obtained the following multiplier'", kMultiplier12, kMultiplier12Fixed,
      nullptr, kDensity12, kFlux12);
  add("2.1", "Subcase 2.1, 'with the conserved vector'", nullptr, nullptr, "c1*u + c2", kDensity2,
      flux2("f1", "exp(k*t)"));
  add("2.2", "Subcase 2.2, 'As in the previous case'", nullptr, nullptr,
      "c1*u + c2", kDensity2, flux2("tau", "1"));
  add("example", "'one can get the following conserved vector'", nullptr, nullptr, "c1*u + c2", kDensityExample,
      kFluxExample);
  return out;
}

}  // namespace

Scenario LawDisplay::scenario(const std::map<std::string, Expr>& params) const {
  if (id == "example") return example_scenario();
  return catalog(id).scenario(params);
}

VectorField LawDisplay::generator(const std::map<std::string, Expr>& params) const {
  if (id == "example") {
    VectorField v = example_generator();
    if (params.empty()) return v;
    return {substitute_params(v.xi, params), substitute_params(v.tau, params), substitute_params(v.eta, params)};
  }
  return catalog(id).generator(params);
}

const std::vector<std::string>& law_ids() {
  static const std::vector<std::string> ids{"1.1a", "1.1b", "1.2", "2.1", "2.2", "example"};
  return ids;
}

const LawDisplay& law_display(const std::string& id) {
  static const std::vector<LawDisplay> all = build();
  auto it = std::find_if(all.begin(), all.end(), [&](const LawDisplay& d) { return d.id == id; });
  if (it == all.end()) throw Error(ErrorCode::Input, "unknown conservation-law case '" + id + "'");
  return *it;
}

Scenario example_scenario() {
  Scenario s = Scenario::constant(1, 1, 1, 0);
  s.case_id = "example";
  return s;
}

VectorField example_generator() { return {S("k1*x - k1/2*t"), S("3*k1*t + k2"), S("-k1*u - k1/2")}; }

}  // namespace gardner
