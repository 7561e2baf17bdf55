#include "gardner/symmetry.hpp"

#include <cmath>
#include <algorithm>
#include <random>

namespace gardner {

namespace {

Expr S(const std::string& src) { return parse(src, symmetry_grammar()); }

bool is_func(const Atom& a, const char* name, int dt) {
  return a.kind == AtomKind::Func && a.func.name == name && a.func.dt == dt && a.func.dx == 0 && a.func.du == 0;
}

Expr nth_t_derivative(Expr e, int n) {
  for (int i = 0; i < n; ++i) e = diff_param(e, Indep::T);
  return e;
}

struct RawCase {
  const char* id;
  const char* anchor;
  int family;
  std::vector<std::string> parameters;
  std::vector<std::pair<const char*, const char*>> forms;
  std::vector<std::pair<const char*, const char*>> constraints;
};

const char* kF1 = "3*k1*exp(k*t) + k*k4";
const char* kTauExp = "k4*exp(-k*t) + 3*k1/k";
const char* kTauLin = "3*k1*t + k3";

std::vector<RawCase> raw_cases() {
  std::vector<std::pair<const char*, const char*>> c11{
      {"f1", kF1},
      {"tau", kTauExp},
      {"B", "b0*exp(k*t)"},
      {"C", "1"},
      {"alpha", "(k*k4*exp(-k*t) - k1)/2"},
      {"Q", "(2*d0*exp(k*t) - k^2*k4)/(2*f1)"},
  };
  auto a = c11;
  a.emplace_back("A",
                 "exp(k*t)^(1/2)/(2*d0 + k*k1)*f1^(-d0/(3*k*k1) - 1/2)*"
                 "(2*a1*k*f1^(d0/(3*k*k1) + 1/6) + a0*(2*d0 + k*k1))");
  a.emplace_back("beta",
                 "a0/(8*d0*k*(k*k1 - 2*d0))*f1^(-2*d0/(3*k*k1))*"
                 "(a0*(4*d0^2 - k^2*k1^2) + 8*a1*d0*k*f1^(d0/(3*k*k1) + 1/6))");
  auto b = c11;
  b.emplace_back("A",
                 "exp(k*t)^(1/2)/(2*d0 + k*k1)*f1^(-d0/(3*k*k1) - 1/2)*"
                 "(a0*(2*d0 + k*k1)*f1^(d0/(3*k*k1) + 1/6) - 2*a1*k)");
  b.emplace_back("beta",
                 "a1/(2*(4*d0^2 - k^2*k1^2))*f1^(-2*d0/(3*k*k1))*"
                 "(2*a0*(2*d0 + k*k1)*f1^(d0/(3*k*k1) + 1/6) + a1*k/d0*(k*k1 - 2*d0))");
  std::vector<std::pair<const char*, const char*>> k11{
      {"k != 0", "k"},           {"k1 != 0", "k1"},
      {"a0 != 0", "a0"},         {"a1 != 0", "a1"},
      {"b0 != 0", "b0"},         {"d0 != 0", "d0"},
      {"2*d0 + k*k1 != 0", "2*d0 + k*k1"}, {"2*d0 - k*k1 != 0", "2*d0 - k*k1"},
  };
  std::vector<std::string> p11{"k", "k1", "k4", "a0", "a1", "b0", "d0"};

  std::vector<std::pair<const char*, const char*>> c12{
      {"tau", kTauLin},
      {"B", "b0"},
      {"C", "1"},
      {"alpha", "-2*k1"},
      {"A", "a0*tau^(-d0/(3*k1)) + a1*tau^(-1/3)"},
      {"beta",
       "1/2*a0*(d0 - k1)*tau^(-2*d0/(3*k1) - 1/3)*"
       "(a0*tau^(4/3)/(3*k1 - 2*d0) - a1*tau^(d0/(3*k1) + 1)/(d0 - 2*k1))"},
      {"Q", "d0/tau"},
  };
  std::vector<std::pair<const char*, const char*>> k12{
      {"k1 != 0", "k1"}, {"a0 != 0", "a0"}, {"b0 != 0", "b0"}, {"d0 != 0", "d0"},
      {"d0 - 3*k1/2 != 0", "d0 - 3*k1/2"}, {"d0 - 2*k1 != 0", "d0 - 2*k1"},
  };

  std::vector<std::pair<const char*, const char*>> c21{
      {"f1", kF1},
      {"tau", kTauExp},
      {"B", "b0*exp(k*t)"},
      {"Q", "0"},
      {"C", "c0*exp(k*t)*f1^(-2*k3/(3*k1) - 4/3)"},
      {"A", "1/(k1 + k3)*exp(k*t)*f1^(-2*k3/(3*k1) - 4/3)*(2*c0*k2 + a0*(k1 + k3)*f1^(k3/(3*k1) + 1/3))"},
      {"beta",
       "beta0 - a0*k2*f1^(-k3/(3*k1))/(k*k3) - 2*c0*k2^2*f1^(-2*k3/(3*k1) - 1/3)/(k*(k1 + k3)*(k1 + 2*k3))"},
  };
  std::vector<std::pair<const char*, const char*>> c22{
      {"tau", kTauLin},
      {"B", "b0"},
      {"Q", "0"},
      {"C", "c0*tau^(-2*k3/(3*k1) - 4/3)"},
      {"A", "1/(k1 + k3)*tau^(-2*k3/(3*k1) - 4/3)*(2*c0*k2 + a0*(k1 + k3)*tau^(k3/(3*k1) + 1/3))"},
      {"beta", "beta0 - a0*k2*tau^(-k3/(3*k1))/k3 - 2*c0*k2^2*tau^(-2*k3/(3*k1) - 1/3)/((k1 + k3)*(k1 + 2*k3))"},
  };
  std::vector<std::pair<const char*, const char*>> k2x{
      {"b0 != 0", "b0"},           {"c0 != 0", "c0"},          {"k1 != 0", "k1"},
      {"k3 != 0", "k3"},           {"k1 + k3 != 0", "k1 + k3"}, {"k1 + 2*k3 != 0", "k1 + 2*k3"},
  };
  auto k21 = k2x;
  k21.insert(k21.begin(), {"k != 0", "k"});

  return {
      {"1.1a", "Subcase 1.1, first branch of 'This system admits two solutions' (k != 0)", 1, p11, a, k11},
      {"1.1b", "Subcase 1.1, second branch of 'This system admits two solutions' (k != 0)", 1, p11, b, k11},
      {"1.2", "Subcase 1.2, 'Setting k = 0, solving'", 1, {"k1", "k3", "a0", "a1", "b0", "d0"}, c12, k12},
      {"2.1", "Subcase 2.1, 'We consider k != 0'", 2,
       {"k", "k1", "k2", "k3", "k4", "a0", "b0", "c0", "beta0"}, c21, k21},
      {"2.2", "Subcase 2.2, 'We consider k = 0'", 2, {"k1", "k2", "k3", "a0", "b0", "c0", "beta0"}, c22, k2x},
  };
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& raw : raw_cases()) {
    CatalogEntry e;
    e.id = raw.id;
    e.anchor = raw.anchor;
    e.family = raw.family;
    e.parameters = raw.parameters;
    std::map<std::string, Expr> helpers;
    for (const auto& [name, src] : raw.forms) {
      Expr v = substitute_functions(S(src), helpers);
      if (std::string(name) == "f1" || std::string(name) == "tau") helpers[name] = v;
      if (std::string(name) != "f1") e.forms[name] = v;
    }
    for (const auto& [name, src] : raw.constraints) e.constraints.push_back({name, S(src)});
    out.push_back(std::move(e));
  }
  return out;
}

Expr generic_function(const std::string& name, unsigned args) { return Expr::func(FuncSpec{name, args}); }

// draws p/q with p/q in [1/2, 2]
Expr draw_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(5, 20);
  return Expr(Rational(d(rng), 10));
}

}  // namespace

GrammarConfig symmetry_grammar() {
  GrammarConfig g = GrammarConfig::gardner();
  g.with_function("tau").with_function("alpha").with_function("beta").with_function("f1");
  g.with_function("xi", kArgX | kArgT).with_function("eta", kArgX | kArgT | kArgU);
  return g;
}

// ---------------------------------------------------------------- prolongation

DiffPoly apply_symmetry(const VectorField& v, const DiffPoly& F) {
  if (F.max_order() > 3) throw Error(ErrorCode::Order, "prolongation is limited to third-order equations");
  const Expr& e = F.expr();
  DiffPoly W(v.eta - v.xi * Expr::u(1) - v.tau * Expr::u(0, 1));
  Expr out = v.xi * partial_var(e, Indep::X) + v.tau * partial_var(e, Indep::T);
  for (const auto& j : F.jets()) {
    if (j.dep != 0) continue;
    DiffPoly dw = W;
    for (int i = 0; i < j.x_order; ++i) dw = total_x(dw);
    for (int i = 0; i < j.t_order; ++i) dw = total_t(dw);
    Expr coef = dw.expr() + v.xi * Expr::u(j.x_order + 1, j.t_order) + v.tau * Expr::u(j.x_order, j.t_order + 1);
    out = out + coef * partial_jet(e, j);
  }
  return DiffPoly(out);
}

std::vector<Expr> determining_system(const Scenario& family, const VectorField& ansatz) {
  DiffPoly p = eliminate_ut(apply_symmetry(ansatz, family.equation()), family);
  // group by the jet part of each term
  std::vector<std::pair<std::vector<Factor>, Expr>> groups;
  for (const auto& t : p.expr().terms()) {
    std::vector<Factor> key, rest;
    for (const auto& f : t.factors) (f.base->kind == AtomKind::Jet ? key : rest).push_back(f);
    Expr coef = Expr::from_terms({Term{t.coef, rest}});
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return compare_monomials(g.first, key) == 0; });
    if (it == groups.end()) {
      groups.emplace_back(key, coef);
    } else {
      it->second = it->second + coef;
    }
  }
  std::vector<Expr> out;
  for (auto& g : groups)
    if (!g.second.is_zero()) out.push_back(g.second);
  return out;
}

// ---------------------------------------------------------------- catalog

Expr CatalogEntry::form(const std::string& name, const std::map<std::string, Expr>& params) const {
  auto it = forms.find(name);
  if (it == forms.end()) throw Error(ErrorCode::Input, "subcase " + id + " has no closed form for " + name);
  return params.empty() ? it->second : substitute_params(it->second, params);
}

Scenario CatalogEntry::scenario(const std::map<std::string, Expr>& params) const {
  Scenario s;
  s.A = form("A", params);
  s.B = form("B", params);
  s.C = form("C", params);
  s.Q = form("Q", params);
  s.case_id = id;
  return s;
}

VectorField CatalogEntry::generator(const std::map<std::string, Expr>& params) const {
  std::map<std::string, Expr> fs;
  for (const auto& [name, e] : forms) fs[name] = params.empty() ? e : substitute_params(e, params);
  VectorField g = family_generator(family);
  auto inst = [&](const Expr& e) {
    Expr r = substitute_functions(e, fs);
    return params.empty() ? r : substitute_params(r, params);
  };
  return {inst(g.xi), inst(g.tau), inst(g.eta)};
}

void CatalogEntry::check_constraints(const std::map<std::string, Expr>& params) const {
  for (const auto& c : constraints) {
    Expr v = substitute_params(c.expr, params);
    if (v.is_zero()) throw Error(ErrorCode::Param, "subcase " + id + " requires " + c.name);
  }
}

const std::vector<std::string>& case_ids() {
  static const std::vector<std::string> ids{"1.1a", "1.1b", "1.2", "2.1", "2.2"};
  return ids;
}

const CatalogEntry& catalog(const std::string& id) {
  static const std::vector<CatalogEntry> entries = build_catalog();
  for (const auto& e : entries)
    if (e.id == id) return e;
  throw Error(ErrorCode::Input, "unknown case id '" + id + "' (expected 1.1a, 1.1b, 1.2, 2.1 or 2.2)");
}

VectorField family_generator(int family) {
  if (family == 1) return {S("k1*x + beta"), S("tau"), S("beta_t/A + (k1 + alpha)*u")};
  return {S("k1*x + beta"), S("tau"), S("(k1 + k3)*u + k2")};
}

Scenario family_scenario(int family) {
  Scenario s;
  if (family == 1) {
    s.C = Expr(1);
  } else {
    s.Q = Expr();
  }
  return s;
}

std::vector<std::pair<std::string, Expr>> family_conditions(int family) {
  if (family == 1) {
    return {
        {"B-tau relation", S("(3*k1 - tau_t)*B - tau*B_t")},
        {"alpha relation", S("-tau*B_t + (4*k1 + 2*alpha)*B")},
        {"A-beta relation", S("2*beta_t*B + tau*A*A_t*B - tau*A^2*B_t + (3*k1 + alpha)*A^2*B")},
        {"Q relation", S("tau*B*Q_t - tau*B_t*Q + 3*k1*B*Q + alpha_t*B")},
        {"beta-Q relation", S("beta_t*(A*Q - A_t) + beta_tt*A")},
    };
  }
  return {
      {"B-tau relation", S("(3*k1 - tau_t)*B - tau*B_t")},
      {"C relation", S("tau*B*C_t - tau*B_t*C + (4*k1 + 2*k3)*B*C")},
      {"A relation", S("tau*A_t*B - tau*A*B_t + 2*k2*B*C + (3*k1 + k3)*A*B")},
      {"beta relation", S("k2*A - beta_t")},
  };
}

Expr reduce_by_family_relations(const Expr& e, int family) {
  static const Expr bt = S("(3*k1 - tau_t)*B/tau");
  static const Expr at1 = S("(tau*A^2*B_t - (3*k1 + alpha)*A^2*B - 2*beta_t*B)/(tau*A*B)");
  static const Expr qt1 = S("(tau*B_t*Q - 3*k1*B*Q - alpha_t*B)/(tau*B)");
  static const Expr btt1 = S("beta_t*(A_t - A*Q)/A");
  static const Expr alpha1 = S("(-k1 - tau_t)/2");
  static const Expr ct2 = S("(tau*B_t*C - (4*k1 + 2*k3)*B*C)/(tau*B)");
  static const Expr at2 = S("(tau*A*B_t - 2*k2*B*C - (3*k1 + k3)*A*B)/(tau*B)");
  static const Expr a = S("A");
  Expr cur = e;
  for (int iter = 0; iter < 12; ++iter) {
    Expr next = substitute(cur, [&](const Atom& at) -> std::optional<Expr> {
      if (at.kind != AtomKind::Func) return std::nullopt;
      if (is_func(at, "B", 1)) return bt;
      if (family == 1) {
        if (is_func(at, "A", 1)) return at1;
        if (is_func(at, "Q", 1)) return qt1;
        if (is_func(at, "beta", 2)) return btt1;
      } else {
        if (is_func(at, "A", 1)) return at2;
        if (is_func(at, "C", 1)) return ct2;
        if (at.func.name == "beta" && at.func.dt >= 1) return S("k2") * nth_t_derivative(a, at.func.dt - 1);
      }
      return std::nullopt;
    });
    if (family == 1) next = substitute_functions(next, {{"alpha", alpha1}});
    if (next == cur) break;
    cur = next;
  }
  return cur;
}

std::map<std::string, Expr> parse_bindings(const std::string& src) {
  std::map<std::string, Expr> out;
  for (const auto& item : split_list(src, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Input, "expected name=value in '" + item + "'");
    auto parts = split_list(item.substr(0, eq) + ";" + item.substr(eq + 1), ';');
    if (parts[0].empty()) throw Error(ErrorCode::Input, "empty parameter name in '" + item + "'");
    Expr v = parse(parts[1]);
    if (!free_symbols(v).jets.empty()) throw Error(ErrorCode::Input, "parameter value must not contain jets");
    out[parts[0]] = v;
  }
  return out;
}

// ---------------------------------------------------------------- verification

namespace {

ZeroTester case_tester(const CatalogEntry& entry, const std::map<std::string, Expr>& params, std::uint64_t seed) {
  SampleOptions opt;
  opt.seed = seed;
  opt.points = 20;
  for (const auto& c : entry.constraints) opt.nonzero.push_back(substitute_params(c.expr, params));
  return ZeroTester(opt);
}

void flag_transcription(ReportEntry& e) {
  if (e.status == Status::Fail) e.detail += "; suspected transcription issue in the closed forms";
}

}  // namespace

Report verify_case(const std::string& id, const std::map<std::string, Expr>& params, std::uint64_t seed) {
  const CatalogEntry& entry = catalog(id);
  entry.check_constraints(params);
  ZeroTester tester = case_tester(entry, params, seed);
  std::map<std::string, Expr> fs;
  for (const auto& [name, e] : entry.forms) fs[name] = substitute_params(e, params);
  Report r;
  for (const auto& [name, cond] : family_conditions(entry.family)) {
    Expr res = substitute_params(substitute_functions(cond, fs), params);
    ReportEntry e = check_zero(id + " " + name, entry.anchor, res, tester);
    flag_transcription(e);
    r.add(std::move(e));
  }
  Scenario s = entry.scenario(params);
  VectorField v = entry.generator(params);
  DiffPoly inv = eliminate_ut(apply_symmetry(v, s.equation()), s);
  ReportEntry e = check_zero(id + " invariance of the equation", entry.anchor, inv.expr(), tester);
  flag_transcription(e);
  r.add(std::move(e));
  return r;
}

std::map<std::string, Expr> random_admissible_params(const std::string& id, std::mt19937_64& rng) {
  const CatalogEntry& entry = catalog(id);
  for (;;) {
    std::map<std::string, Expr> p;
    for (const auto& name : entry.parameters) p[name] = draw_value(rng);
    bool ok = true;
    for (const auto& c : entry.constraints) {
      auto v = substitute_params(c.expr, p).as_rational();
      if (v && std::fabs(v->get_d()) < 0.05) ok = false;
    }
    if (ok) return p;
  }
}

Report determining_report(std::uint64_t seed) {
  Report r;
  const std::string sis = "simplified determining system ('related by the following conditions')";
  {
    VectorField general{generic_function("xi", kArgX | kArgT), generic_function("tau", kArgT),
                        generic_function("eta", kArgX | kArgT | kArgU)};
    auto conds = determining_system(Scenario::abstract_family(), general);
    Expr target = S("-tau*B_t - tau_t*B + 3*xi_x*B");
    bool found = false;
    for (const auto& c : conds) {
      if (c.size() != target.size()) continue;
      Rational ratio = c.terms()[0].coef / target.terms()[0].coef;
      if ((c - Expr(ratio) * target).is_zero()) found = true;
    }
    r.add(check_bool("general ansatz contains -tau*B_t - tau_t*B + 3*xi_x*B = 0", sis, found,
                     std::to_string(conds.size()) + " coefficient conditions"));
  }
  {
    VectorField dx{Expr(1), Expr(), Expr()};
    auto conds = determining_system(Scenario::abstract_family(), dx);
    r.add(check_bool("ansatz d/dx gives no conditions", sis, conds.empty()));
  }
  for (int family : {1, 2}) {
    auto conds = determining_system(family_scenario(family), family_generator(family));
    bool all_zero = true;
    std::string first;
    for (const auto& c : conds) {
      Expr red = reduce_by_family_relations(c, family);
      if (!red.is_zero()) {
        all_zero = false;
        if (first.empty()) first = truncate_rendering(render(red, symmetry_grammar()));
      }
    }
    std::string anchor = family == 1 ? "Case 1 generators, 'must satisfy the following conditions'"
                                     : "Case 2, 'Now, the generators are given by'";
    ReportEntry e = check_bool("family " + std::to_string(family) + " ansatz conditions vanish under the family relations",
                               anchor, all_zero, std::to_string(conds.size()) + " conditions");
    e.residual = all_zero ? "0" : first;
    r.add(std::move(e));
  }
  std::mt19937_64 rng(seed);
  for (const auto& id : case_ids()) {
    const CatalogEntry& entry = catalog(id);
    auto params = random_admissible_params(id, rng);
    auto conds = determining_system(family_scenario(entry.family), family_generator(entry.family));
    std::map<std::string, Expr> fs;
    for (const auto& [name, e] : entry.forms) fs[name] = substitute_params(e, params);
    ZeroTester tester = case_tester(entry, params, seed);
    bool any_numeric = false;
    std::size_t i = 0;
    std::vector<ReportEntry> parts;
    for (const auto& c : conds) {
      Expr res = substitute_params(substitute_functions(c, fs), params);
      parts.push_back(check_zero(id + " condition " + std::to_string(++i), entry.anchor, res, tester));
    }
    ReportEntry e;
    e.name = id + " closed forms satisfy the determining conditions";
    e.anchor = entry.anchor;
    e.status = Status::Pass;
    e.residual = "0";
    for (const auto& p : parts) {
      e.seconds += p.seconds;
      if (p.mode == CheckMode::Numeric) any_numeric = true;
      if (p.status == Status::Fail) {
        e.status = Status::Fail;
        e.residual = p.residual;
        e.detail = p.name + ": " + p.detail + "; suspected transcription issue in the closed forms";
      }
    }
    if (any_numeric) {
      e.mode = CheckMode::Numeric;
      if (e.status == Status::Pass) e.status = Status::NumericPass;
    }
    r.add(std::move(e));
  }
  return r;
}

}  // namespace gardner
