#include "gardner/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "gardner/laws.hpp"
#include "gardner/numerics.hpp"
#include "gardner/reduction.hpp"
#include "gardner/scenario_io.hpp"
#include "gardner/suite.hpp"

namespace gardner {

namespace {

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::Syntax:
    case ErrorCode::BadDeriv:
    case ErrorCode::Input:
    case ErrorCode::Param:
    case ErrorCode::Unbound:
    case ErrorCode::Jet:
    case ErrorCode::Domain:
    case ErrorCode::NonPoly:
    case ErrorCode::Cycle:
      return true;
    default:
      return false;
  }
}

// Symbolic scenario (parameters kept as symbols) plus a tester bound to the
// parameter values, so residuals render in terms of the parameters.
struct Loaded {
  Scenario symbolic;
  Scenario bound;
  ZeroTester tester;
};

Loaded load(const std::string& path, std::uint64_t seed) {
  Loaded l;
  l.bound = load_scenario(path);
  l.symbolic = l.bound;
  l.symbolic.params.clear();
  SampleOptions o;
  o.seed = seed;
  o.fixed = l.bound.env();
  l.tester = ZeroTester(o);
  return l;
}

Expr parse_full(const std::string& src) { return parse(src, symmetry_grammar()); }

std::string scenario_anchor(const Scenario& s) {
  return s.case_id.empty() ? "scenario file" : "case " + s.case_id;
}

ReportEntry info(const std::string& name, const std::string& anchor, const std::string& detail) {
  return check_bool(name, anchor, true, detail);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symbolic and numeric verification for the variable-coefficient Gardner equation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  bool no_timings = false;
  std::string report_file;
  std::uint64_t seed = 0x5eedULL;
  app.add_option("--report", format, "report format on standard output")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--report-file", report_file, "also write the JSON report to this file");
  app.add_flag("--no-timings", no_timings, "omit timings from the report");
  app.add_option("--seed", seed, "seed for random sampling");

  std::string case_id, params_src, scenario_path, phi_src, lambda_src, density_src, generator_src, vector_src;
  std::string monitor_src, output_path, c_src, k_src = "0";
  int grid_n = 256;
  double length = 2 * M_PI, tmax = 1.0, tolerance = 1e-3;
  bool skip_numerics = false;

  auto* verify = app.add_subcommand("verify-symmetry", "verify a catalog subcase's closed forms");
  verify->add_option("--case", case_id, "subcase id")->required();
  verify->add_option("--params", params_src, "bindings k=v,...");
  auto* determining = app.add_subcommand("determining", "determining system for the general point-symmetry ansatz");
  determining->add_option("--scenario", scenario_path)->required();
  auto* adjoint = app.add_subcommand("adjoint", "adjoint equation");
  adjoint->add_option("--scenario", scenario_path)->required();
  auto* selfadj = app.add_subcommand("selfadjoint", "nonlinear self-adjointness of a substitution v = phi");
  selfadj->add_option("--scenario", scenario_path)->required();
  selfadj->add_option("--phi", phi_src)->required();
  auto* multiplier = app.add_subcommand("multiplier", "check a conservation-law multiplier");
  multiplier->add_option("--scenario", scenario_path)->required();
  multiplier->add_option("--lambda", lambda_src)->required();
  auto* density = app.add_subcommand("density", "homotopy density of a multiplier");
  density->add_option("--lambda", lambda_src)->required();
  auto* flux = app.add_subcommand("flux", "flux of a conserved density");
  flux->add_option("--density", density_src)->required();
  flux->add_option("--scenario", scenario_path)->required();
  auto* ibragimov = app.add_subcommand("ibragimov", "conserved vector from a symmetry and phi = c1 u + c2");
  ibragimov->add_option("--case", case_id, "2.1, 2.2 or example")->required();
  ibragimov->add_option("--params", params_src, "bindings k=v,...");
  auto* associate = app.add_subcommand("associate", "symmetry / conserved-vector association");
  associate->add_option("--scenario", scenario_path)->required();
  associate->add_option("--generator", generator_src, "xi;tau;eta")->required();
  associate->add_option("--vector", vector_src, "Tt;Tx")->required();
  auto* reduce = app.add_subcommand("double-reduce", "double reduction of the example conserved vector");
  reduce->add_option("--c", c_src, "wave speed")->required();
  reduce->add_option("--k", k_src, "integration constant (T^r = k/4)");
  auto* simulate_cmd = app.add_subcommand("simulate", "finite-difference run with conserved-integral monitors");
  simulate_cmd->add_option("--scenario", scenario_path)->required();
  simulate_cmd->add_option("--N", grid_n, "grid points")->required();
  simulate_cmd->add_option("--L", length, "domain length");
  simulate_cmd->add_option("--tmax", tmax, "final time");
  simulate_cmd->add_option("--monitor", monitor_src, "densities separated by ';'");
  simulate_cmd->add_option("--tolerance", tolerance, "allowed relative drift of each monitor");
  simulate_cmd->add_option("--output", output_path, "trajectory table file (t x u)");
  auto* suite = app.add_subcommand("paper-suite", "every reproduction check");
  suite->add_flag("--skip-numerics", skip_numerics, "omit the finite-difference cross-validation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Report report;
  try {
    if (verify->parsed()) {
      report = verify_case(case_id, parse_bindings(params_src), seed);
    } else if (determining->parsed()) {
      Loaded l = load(scenario_path, seed);
      VectorField general{Expr::func("xi", kArgX | kArgT), Expr::func("tau"),
                          Expr::func("eta", kArgX | kArgT | kArgU)};
      std::vector<Expr> eqs = determining_system(l.symbolic, general);
      std::string detail;
      for (std::size_t i = 0; i < eqs.size(); ++i)
        detail += (i ? "\n    " : "") + render(eqs[i], symmetry_grammar()) + " = 0";
      report.add(info("determining system (" + std::to_string(eqs.size()) + " equations)",
                      scenario_anchor(l.symbolic), detail));
    } else if (adjoint->parsed()) {
      Loaded l = load(scenario_path, seed);
      report.add(info("adjoint equation", "'The adjoint equation to equation'",
                      "F* = " + render(adjoint_equation(l.symbolic.equation()).expr())));
    } else if (selfadj->parsed()) {
      Loaded l = load(scenario_path, seed);
      SelfAdjointness sa = selfadjoint_check(l.symbolic.equation(), parse_full(phi_src), l.tester);
      ReportEntry e = check_zero("F*|_{v=phi} - lambda F", "nonlinear self-adjointness substitution", sa.residual.expr(), l.tester);
      e.detail += (e.detail.empty() ? "" : "; ") + std::string("lambda = ") + render(sa.lambda.expr());
      report.add(e);
    } else if (multiplier->parsed()) {
      Loaded l = load(scenario_path, seed);
      report.add(check_zero("multiplier residual delta(Lambda F)/delta u", "'is called multiplier if it verifies'",
                            multiplier_residual(DiffPoly(parse_full(lambda_src)), l.symbolic.equation()).expr(),
                            l.tester));
    } else if (density->parsed()) {
      DiffPoly Tt = density_from_multiplier(DiffPoly(parse_full(lambda_src)));
      report.add(info("homotopy density", "'conserved density using a standard method'", "T^t = " + render(Tt.expr())));
    } else if (flux->parsed()) {
      Loaded l = load(scenario_path, seed);
      DiffPoly Tt(parse_full(density_src));
      try {
        DiffPoly Tx = flux_from_density(Tt, l.symbolic, l.tester);
        ReportEntry e = check_zero("flux reconstruction is divergence-free", "'Nontrivial conservation laws are characterized'",
                                   divergence_residual({Tt, Tx}, l.symbolic).expr(), l.tester);
        e.detail += (e.detail.empty() ? "" : "; ") + std::string("T^x = ") + render(Tx.expr());
        report.add(e);
      } catch (const Error& ex) {
        if (ex.code() != ErrorCode::NotExact && ex.code() != ErrorCode::Residue) throw;
        report.add(check_bool("density is conserved", "'Nontrivial conservation laws are characterized'", false,
                              truncate_rendering(ex.what())));
      }
    } else if (ibragimov->parsed()) {
      const LawDisplay& d = law_display(case_id);
      if (!d.phi) throw Error(ErrorCode::Input, "case " + case_id + " has no self-adjointness substitution");
      auto params = parse_bindings(params_src);
      if (case_id != "example") catalog(case_id).check_constraints(params);
      Scenario s = d.scenario(params);
      ZeroTester tester;
      ConservedVector cv = ibragimov_vector(d.generator(params), s, *d.phi, tester);
      ReportEntry div = check_zero("conserved vector is divergence-free", d.anchor, divergence_residual(cv, s).expr(), tester);
      div.detail = "T^t = " + render(cv.Tt.expr()) + "\n    T^x = " + truncate_rendering(render(cv.Tx.expr()), 2000);
      report.add(div);
      DiffPoly shown(params.empty() ? d.density : substitute_params(d.density, params));
      report.add(check_bool("density equivalent to the displayed density", d.anchor,
                            equivalent_densities(cv.Tt, shown, s, tester)));
    } else if (associate->parsed()) {
      Loaded l = load(scenario_path, seed);
      auto g = split_list(generator_src);
      auto v = split_list(vector_src);
      if (g.size() != 3) throw Error(ErrorCode::Input, "generator must be 'xi;tau;eta'");
      if (v.size() != 2) throw Error(ErrorCode::Input, "vector must be 'Tt;Tx'");
      VectorField field{parse_full(g[0]), parse_full(g[1]), parse_full(g[2])};
      ConservedVector cv{DiffPoly(parse_full(v[0])), DiffPoly(parse_full(v[1]))};
      auto [rt, rx] = association_residual(field, cv, l.symbolic);
      const std::string anchor = "'is associated to T if the following equation holds'";
      report.add(check_zero("association residual, t-component", anchor, rt.expr(), l.tester));
      report.add(check_zero("association residual, x-component", anchor, rx.expr(), l.tester));
    } else if (reduce->parsed()) {
      std::map<std::string, Expr> ck{{"c", parse(c_src)}, {"k", parse(k_src)}};
      const LawDisplay& d = law_display("example");
      auto params = parse_bindings("k1=1,c1=1,c2=0");
      ConservedVector cv{DiffPoly(substitute_params(d.density, params)), DiffPoly(substitute_params(d.flux, params))};
      Scenario s = example_scenario();
      auto [at, ax] = association_residual(CanonicalFrame{}.generator(), cv, s);
      report.add(check_bool("c d/dx + d/dt is associated with the conserved vector", "example vector, 'The canonical coordinates'",
                            at.is_zero() && ax.is_zero()));
      GrammarConfig frame = GrammarConfig::frame();
      auto bind = [&](const Expr& e) { return substitute_params(e, ck); };
      auto golden = [&](const char* src) { return bind(parse(src, frame)); };
      CanonicalVector cc = to_canonical(cv, CanonicalFrame{});
      Expr Tr = bind(cc.Tr.expr());
      ReportEntry e1 = check_zero("T^r in the frame r = x - c t", "'We suppose without loss of generality that'",
                                  Tr - golden("1/4*((4*w + 2)*w_rr - 2*w_r^2 + w^4 + 2*w^3 + (1 - 2*c)*w^2 - 2*c*w)"),
                                  default_zero_tester());
      e1.detail = "T^r = " + render(Tr, frame);
      report.add(e1);
      ReducedOde ode = reduced_ode(cc.Tr, Expr::param("k") / Expr(4));
      Expr ode_e = bind(ode.ode.expr());
      ReportEntry e2 = check_zero("reduced ODE T^r = k/4", "'Setting T^r = k/4'",
                                  ode_e - golden("(4*w + 2)*w_rr - 2*w_r^2 - 2*c*w + (1 - 2*c)*w^2 + 2*w^3 + w^4 - k"),
                                  default_zero_tester());
      e2.detail = render(ode_e, frame) + " = 0";
      report.add(e2);
      ReportEntry e3 = check_bool("first-order form with w_r = p(w)", "'the substitution w_r = p(w) yields'", false,
                                  "no first-order form produced");
      if (ode.p_rhs) {
        Expr rhs = bind(*ode.p_rhs);
        e3 = check_zero(e3.name, e3.anchor,
                        rhs - golden("(k + 2*p^2 + 2*c*w + (2*c - 1)*w^2 - 2*w^3 - w^4)/(4*w + 2)"),
                        default_zero_tester());
        e3.detail = "p p' = " + render(rhs, frame);
        if (ode.singular) e3.detail += "; excluded where " + render(bind(*ode.singular), frame) + " = 0";
      }
      report.add(e3);
    } else if (simulate_cmd->parsed()) {
      Scenario s = load_scenario(scenario_path);
      if (!s.initial) throw Error(ErrorCode::Input, "scenario has no 'initial' condition");
      Grid g(grid_n, length);
      SimulationOptions opt;
      opt.t1 = tmax;
      Trajectory tr = simulate(s, g, sample_initial(*s.initial, s, g), opt);
      if (!output_path.empty()) {
        std::ofstream f(output_path);
        if (!f) throw Error(ErrorCode::Input, "cannot write '" + output_path + "'");
        f << "# t x u\n";
        char buf[96];
        for (std::size_t i = 0; i < tr.times.size(); ++i)
          for (int j = 0; j < g.N; ++j) {
            std::snprintf(buf, sizeof buf, "%.10g %.10g %.17g\n", tr.times[i], g.x(j), tr.states[i][j]);
            f << buf;
          }
      }
      char meta[160];
      std::snprintf(meta, sizeof meta, "N=%d L=%.6g dt=%.3e steps=%ld; %s", g.N, g.L, tr.dt, tr.steps, tr.scheme.c_str());
      ReportEntry run = info("simulation completed", scenario_anchor(s), meta);
      run.mode = CheckMode::Numeric;
      report.add(run);
      for (const auto& m : split_list(monitor_src)) {
        if (m.empty()) continue;
        DriftSeries ds = conserved_drift(tr, DiffPoly(parse_full(m)), s);
        ReportEntry e = check_bool("drift of int " + m + " dx", "'a space-time divergence such that'", ds.max_drift < tolerance);
        e.mode = CheckMode::Numeric;
        char buf[96];
        std::snprintf(buf, sizeof buf, "max relative drift %.3e (tolerance %.0e)", ds.max_drift, tolerance);
        e.residual = buf;
        std::string table = "t integral";
        for (std::size_t i = 0; i < ds.times.size(); ++i) {
          std::snprintf(buf, sizeof buf, "\n    %.6f %.15e", ds.times[i], ds.integrals[i]);
          table += buf;
        }
        e.detail = table;
        report.add(e);
      }
    } else if (suite->parsed()) {
      report = paper_suite(seed, !skip_numerics);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 1;
  }

  bool timings = !no_timings;
  out << (format == "json" ? report.json(timings) : report.text(timings));
  if (!report_file.empty()) {
    std::ofstream f(report_file);
    if (!f) {
      err << "error: cannot write '" << report_file << "'\n";
      return 2;
    }
    f << report.json(timings);
  }
  return report.ok() ? 0 : 1;
}

}  // namespace gardner
