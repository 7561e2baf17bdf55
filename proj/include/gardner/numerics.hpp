#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gardner/jet.hpp"

namespace gardner {

// Uniform periodic grid x_j = j dx, dx = L / N.
struct Grid {
  int N = 0;
  double L = 0.0;
  Grid(int n, double length);  // E_INPUT unless N >= 16, N even, L > 0
  double dx() const { return L / N; }
  double x(int j) const { return j * dx(); }
};

// Fourth-order central periodic stencils; out[m] holds the m-th x-derivative, m = 0..4.
void stencil_derivatives(const std::vector<double>& u, const Grid& g, std::vector<double> (&out)[5]);

// Per-gridpoint evaluation of a differential polynomial of t-order 0.
class GridEvaluator {
 public:
  GridEvaluator(Compiled fn, Grid grid) : fn_(std::move(fn)), grid_(grid) {}
  std::vector<double> operator()(double t, const std::vector<double>& state) const;
  const Grid& grid() const { return grid_; }

 private:
  Compiled fn_;
  Grid grid_;
};

// Binds the scenario coefficients and parameters. E_ORDER for u_t terms.
GridEvaluator compile_eval(const DiffPoly& e, const Scenario& s, const Grid& g);

struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double dt = 0.0;
  long steps = 0;
  std::string scheme = "skew-split advection, 4th-order central stencils, classical RK4";
};

struct SimulationOptions {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt_max = 1e9;  // upper bound on the step
  double c_safe = 0.4;
  int snapshots = 20;   // stored states besides the initial one
  // optional source term g(x, t) added to the right-hand side
  std::function<double(double, double)> forcing;
};

// Method of lines for u_t = -(A u u_x + C u^2 u_x + B u_xxx + Q u). The scenario
// coefficients must be closed forms in t. E_BLOWUP above 1e6, E_DT on underflow.
Trajectory simulate(const Scenario& s, const Grid& g, const std::vector<double>& u0, const SimulationOptions& opt = {});

// Samples an expression in x (and parameters) on the grid.
std::vector<double> sample_initial(const Expr& e, const Scenario& s, const Grid& g);

struct DriftSeries {
  std::vector<double> times;
  std::vector<double> integrals;
  double max_drift = 0.0;  // max |I(t) - I(0)| / max(1, |I(0)|)
};

DriftSeries conserved_drift(const Trajectory& traj, const DiffPoly& Tt, const Scenario& s);

struct ConvergenceResult {
  std::vector<int> N;
  std::vector<double> errors;  // max-norm error at the final time
  std::vector<double> orders;  // log2(e_N / e_2N)
  double min_order() const;
};

// Manufactured solution u*(x, t): the residual of u* is added as a source.
// E_PARAM when B vanishes identically.
ConvergenceResult convergence_study(const Scenario& s, const Expr& exact, double L, double tmax,
                                    const std::vector<int>& sizes = {64, 128, 256, 512});

}  // namespace gardner
