#include "gardner/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gardner {

namespace {

ParamEnv scenario_env(const Scenario& s) {
  ParamEnv env = s.env();
  for (char c : {'A', 'B', 'C', 'Q'}) env.bind_function(std::string(1, c), s.coefficient(c));
  return env;
}

Compiled compile_time_function(const Expr& e, const ParamEnv& env) {
  if (contains_jets(e) || free_symbols(e).x) throw Error(ErrorCode::Input, "coefficient must depend on t only");
  return compile(e, env);
}

double at_time(const Compiled& c, double t) { return c(Compiled::Point{0.0, t, nullptr}); }

}  // namespace

Grid::Grid(int n, double length) : N(n), L(length) {
  if (n < 16 || n % 2 != 0) throw Error(ErrorCode::Input, "grid size must be even and at least 16");
  if (!(length > 0.0)) throw Error(ErrorCode::Input, "domain length must be positive");
}

void stencil_derivatives(const std::vector<double>& u, const Grid& g, std::vector<double> (&out)[5]) {
  const int n = g.N;
  const double h = g.dx();
  for (auto& v : out) v.assign(n, 0.0);
  auto at = [&](int j) { return u[static_cast<std::size_t>(((j % n) + n) % n)]; };
  for (int j = 0; j < n; ++j) {
    double m3 = at(j - 3), m2 = at(j - 2), m1 = at(j - 1), z = at(j), p1 = at(j + 1), p2 = at(j + 2), p3 = at(j + 3);
    out[0][j] = z;
    out[1][j] = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
    out[2][j] = (-p2 + 16 * p1 - 30 * z + 16 * m1 - m2) / (12 * h * h);
    out[3][j] = (-p3 + 8 * p2 - 13 * p1 + 13 * m1 - 8 * m2 + m3) / (8 * h * h * h);
    out[4][j] = (-p3 + 12 * p2 - 39 * p1 + 56 * z - 39 * m1 + 12 * m2 - m3) / (6 * h * h * h * h);
  }
}

std::vector<double> GridEvaluator::operator()(double t, const std::vector<double>& state) const {
  if (static_cast<int>(state.size()) != grid_.N) throw Error(ErrorCode::Input, "state length differs from grid size");
  std::vector<double> d[5];
  stencil_derivatives(state, grid_, d);
  std::vector<double> out(state.size());
  double jets[5];
  for (int j = 0; j < grid_.N; ++j) {
    for (int m = 0; m < 5; ++m) jets[m] = d[m][j];
    out[j] = fn_(Compiled::Point{grid_.x(j), t, jets});
  }
  return out;
}

GridEvaluator compile_eval(const DiffPoly& e, const Scenario& s, const Grid& g) {
  if (e.max_t_order() > 0) throw Error(ErrorCode::Order, "density must not contain t-derivatives");
  if (e.max_x_order() > 4) throw Error(ErrorCode::Order, "stencils cover x-derivatives up to order 4");
  return GridEvaluator(compile(e.expr(), scenario_env(s)), g);
}

std::vector<double> sample_initial(const Expr& e, const Scenario& s, const Grid& g) {
  if (contains_jets(e)) throw Error(ErrorCode::Input, "initial condition must not contain u");
  Compiled c = compile(e, scenario_env(s));
  std::vector<double> out(g.N);
  for (int j = 0; j < g.N; ++j) out[j] = c(Compiled::Point{g.x(j), 0.0, nullptr});
  return out;
}

Trajectory simulate(const Scenario& s, const Grid& g, const std::vector<double>& u0, const SimulationOptions& opt) {
  if (static_cast<int>(u0.size()) != g.N) throw Error(ErrorCode::Input, "initial state length differs from grid size");
  if (!(opt.t1 > opt.t0)) throw Error(ErrorCode::Input, "empty time span");
  ParamEnv env = scenario_env(s);
  Compiled A = compile_time_function(s.coefficient('A'), env);
  Compiled B = compile_time_function(s.coefficient('B'), env);
  Compiled C = compile_time_function(s.coefficient('C'), env);
  Compiled Q = compile_time_function(s.coefficient('Q'), env);

  double bmax = 0.0;
  for (int i = 0; i <= 200; ++i) bmax = std::max(bmax, std::fabs(at_time(B, opt.t0 + (opt.t1 - opt.t0) * i / 200.0)));
  const double h = g.dx();
  double dt = opt.dt_max;
  if (bmax > 0.0) dt = std::min(dt, opt.c_safe * h * h * h / bmax);
  const double span = opt.t1 - opt.t0;
  if (!(dt > span * 1e-12)) throw Error(ErrorCode::Dt, "time step underflows");
  long steps = static_cast<long>(std::ceil(span / dt));
  dt = span / static_cast<double>(steps);

  const int n = g.N;
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j) xs[j] = g.x(j);
  // ghost-padded copies of u, u^2, u^3 (3 cells each side)
  std::vector<double> pu(n + 6), pu2(n + 6), pu3(n + 6);
  auto rhs = [&](double t, const std::vector<double>& u, std::vector<double>& out) {
    const double a = at_time(A, t), b = at_time(B, t), c = at_time(C, t), q = at_time(Q, t);
    for (int j = 0; j < n; ++j) {
      double v = u[j];
      pu[j + 3] = v;
      pu2[j + 3] = v * v;
      pu3[j + 3] = v * v * v;
    }
    for (auto* p : {&pu, &pu2, &pu3}) {
      auto& w = *p;
      for (int k = 0; k < 3; ++k) {
        w[k] = w[n + k];
        w[n + 3 + k] = w[3 + k];
      }
    }
    const double i12 = 1.0 / (12 * h), i8 = 1.0 / (8 * h * h * h);
    const double* U = pu.data() + 3;
    const double* U2 = pu2.data() + 3;
    const double* U3 = pu3.data() + 3;
    double* o = out.data();
    for (int j = 0; j < n; ++j) {
      double ux = (-U[j + 2] + 8 * U[j + 1] - 8 * U[j - 1] + U[j - 2]) * i12;
      double u2x = (-U2[j + 2] + 8 * U2[j + 1] - 8 * U2[j - 1] + U2[j - 2]) * i12;
      double u3x = (-U3[j + 2] + 8 * U3[j + 1] - 8 * U3[j - 1] + U3[j - 2]) * i12;
      // average of advective and conservative forms
      double adv2 = 0.5 * (U[j] * ux + 0.5 * u2x);
      double adv3 = 0.5 * (U2[j] * ux + u3x / 3.0);
      double uxxx = (-U[j + 3] + 8 * U[j + 2] - 13 * U[j + 1] + 13 * U[j - 1] - 8 * U[j - 2] + U[j - 3]) * i8;
      o[j] = -(a * adv2 + c * adv3 + b * uxxx + q * U[j]);
    }
    if (opt.forcing)
      for (int j = 0; j < n; ++j) o[j] += opt.forcing(xs[j], t);
  };

  Trajectory traj{g, {}, {}, dt, steps};
  traj.times.push_back(opt.t0);
  traj.states.push_back(u0);
  std::vector<double> u = u0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  const int snaps = std::max(1, opt.snapshots);
  long next_store = 1;
  for (long step = 1; step <= steps; ++step) {
    double t = opt.t0 + (step - 1) * dt;
    rhs(t, u, k1);
    for (int j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * dt * k1[j];
    rhs(t + 0.5 * dt, tmp, k2);
    for (int j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * dt * k2[j];
    rhs(t + 0.5 * dt, tmp, k3);
    for (int j = 0; j < n; ++j) tmp[j] = u[j] + dt * k3[j];
    rhs(t + dt, tmp, k4);
    double umax = 0.0;
    for (int j = 0; j < n; ++j) {
      u[j] += dt / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
      umax = std::max(umax, std::fabs(u[j]));
    }
    if (!(umax <= 1e6)) {
      std::ostringstream msg;
      msg << "max|u| exceeded 1e6; last stable time " << t;
      throw Error(ErrorCode::Blowup, msg.str());
    }
    if (step * snaps >= next_store * steps || step == steps) {
      traj.times.push_back(opt.t0 + step * dt);
      traj.states.push_back(u);
      while (next_store * steps <= step * snaps) ++next_store;
    }
  }
  return traj;
}

DriftSeries conserved_drift(const Trajectory& traj, const DiffPoly& Tt, const Scenario& s) {
  GridEvaluator ev = compile_eval(Tt, s, traj.grid);
  DriftSeries out;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> v = ev(traj.times[i], traj.states[i]);
    double sum = 0.0;
    for (double x : v) sum += x;  // periodic trapezoid rule
    out.times.push_back(traj.times[i]);
    out.integrals.push_back(sum * traj.grid.dx());
  }
  double scale = std::max(1.0, std::fabs(out.integrals.front()));
  for (double I : out.integrals) out.max_drift = std::max(out.max_drift, std::fabs(I - out.integrals.front()) / scale);
  return out;
}

double ConvergenceResult::min_order() const {
  double m = INFINITY;
  for (double o : orders) m = std::min(m, o);
  return m;
}

ConvergenceResult convergence_study(const Scenario& s, const Expr& exact, double L, double tmax,
                                    const std::vector<int>& sizes) {
  if (s.coefficient('B').is_zero()) throw Error(ErrorCode::Param, "the family requires B(t) != 0");
  if (contains_jets(exact)) throw Error(ErrorCode::Input, "manufactured solution must be a function of x and t");
  // residual of u* gives the source term
  Expr g = substitute_jets(s.equation().expr(), [&](const JetVar& j) -> std::optional<Expr> {
    Expr d = exact;
    for (int i = 0; i < j.x_order; ++i) d = partial_var(d, Indep::X);
    for (int i = 0; i < j.t_order; ++i) d = partial_var(d, Indep::T);
    return d;
  });
  ParamEnv env = scenario_env(s);
  Compiled gc = compile(g, env);
  Compiled uc = compile(exact, env);
  ConvergenceResult out;
  for (int n : sizes) {
    Grid grid(n, L);
    std::vector<double> u0(n);
    for (int j = 0; j < n; ++j) u0[j] = uc(Compiled::Point{grid.x(j), 0.0, nullptr});
    SimulationOptions opt;
    opt.t1 = tmax;
    opt.snapshots = 1;
    opt.forcing = [&](double x, double t) { return gc(Compiled::Point{x, t, nullptr}); };
    Trajectory tr = simulate(s, grid, u0, opt);
    double err = 0.0;
    for (int j = 0; j < n; ++j)
      err = std::max(err, std::fabs(tr.states.back()[j] - uc(Compiled::Point{grid.x(j), tmax, nullptr})));
    out.N.push_back(n);
    out.errors.push_back(err);
  }
  for (std::size_t i = 1; i < out.errors.size(); ++i) out.orders.push_back(std::log2(out.errors[i - 1] / out.errors[i]));
  return out;
}

}  // namespace gardner
