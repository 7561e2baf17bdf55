#pragma once

#include <optional>
#include <utility>

#include "gardner/conslaw.hpp"

namespace gardner {

// r = x - c t, s = t, w(r) = u for the generator c d/dx + d/dt. Frame
// expressions use the frame grammar: jets of u stand for w, x for r, t for s.
struct CanonicalFrame {
  Expr c = Expr::param("c");
  VectorField generator() const { return {c, Expr(1), Expr()}; }
};

// (t-component, x-component) of v(T^i) + T^i D_k xi^k - T^k D_k xi^i on solutions.
std::pair<DiffPoly, DiffPoly> association_residual(const VectorField& v, const ConservedVector& cv,
                                                   const Scenario& ctx);

struct CanonicalVector {
  DiffPoly Ts;
  DiffPoly Tr;
  Expr jacobian;  // D_t(r) D_x(s) - D_x(r) D_t(s)
};

// With require_association the frame generator must be associated with cv
// (E_NOTASSOC otherwise).
CanonicalVector to_canonical(const ConservedVector& cv, const CanonicalFrame& frame, const Scenario* ctx = nullptr,
                             bool require_association = false, const ZeroTester& tester = default_zero_tester());

struct ReducedOde {
  DiffPoly ode;  // primitive integer-content form of Tr - k = 0
  // autonomous second-order case: p*dp/dw = p_rhs with w_r = p (p is the parameter "p")
  std::optional<Expr> p_rhs;
  std::optional<Expr> singular;  // coefficient of the highest derivative; excluded where zero
};

ReducedOde reduced_ode(const DiffPoly& Tr, const Expr& k);

// Clears rational denominators and common integer content.
DiffPoly primitive_part(const DiffPoly& p);

struct ConsistencyResult {
  double max_residual = 0.0;
  int samples = 0;
};

// Integrates w_r = p, p_r = p_rhs from (w0, p0) with a Dormand-Prince stepper at
// tolerance 1e-10 and evaluates u_t + u u_x + u^2 u_x + u_xxx for u = w(x - c t)
// at `samples` points with x - c t in [0, span].
ConsistencyResult reduction_consistency(const Expr& p_rhs, double c, double k, double w0, double p0, int samples = 200,
                                        double span = 1.0);

}  // namespace gardner
