#pragma once

#include "gardner/jet.hpp"

namespace gardner {

// v*F with v the dependent variable of index 1.
DiffPoly formal_lagrangian(const DiffPoly& F);

// delta(v F)/delta u.
DiffPoly adjoint_equation(const DiffPoly& F);

// Replaces v and its derivatives by phi(x,t,u) and its total derivatives.
DiffPoly substitute_v(const DiffPoly& p, const Expr& phi);

struct SelfAdjointness {
  DiffPoly lambda;
  DiffPoly residual;  // F*|_{v=phi} - lambda*F
  bool zero = false;  // residual vanishes
  CheckMode mode = CheckMode::Symbolic;
  bool phi_u = false;  // phi depends on u
  bool phi_x = false;  // phi depends on x
};

// lambda from the u_t coefficient, cross-checked against u_xxx (E_NOMATCH).
SelfAdjointness selfadjoint_check(const DiffPoly& F, const Expr& phi, const ZeroTester& tester = default_zero_tester());

// c1 e^{AD(2Q)} u + c2 e^{AD(Q)} for the given damping coefficient
Expr theorem_phi(const Expr& Q, const Expr& c1 = Expr::param("c1"), const Expr& c2 = Expr::param("c2"));

}  // namespace gardner
