#pragma once

#include "gardner/adjoint.hpp"
#include "gardner/symmetry.hpp"

namespace gardner {

struct ConservedVector {
  DiffPoly Tt;  // density
  DiffPoly Tx;  // flux
};

// delta/delta u (Lambda * F); zero iff Lambda is a multiplier.
DiffPoly multiplier_residual(const DiffPoly& lambda, const DiffPoly& F);

// int_0^1 u Lambda[s u] ds, termwise
DiffPoly density_from_multiplier(const DiffPoly& lambda);

// -D_x^{-1} of D_t Tt on solutions
DiffPoly flux_from_density(const DiffPoly& Tt, const Scenario& ctx, const ZeroTester& tester = default_zero_tester());

// Conserved vector of the symmetry v for the nonlinearly self-adjoint
// substitution phi. The density is reduced by moving x-exact parts (terms
// linear in their highest derivative) into the flux.
ConservedVector ibragimov_vector(const VectorField& v, const Scenario& ctx, const Expr& phi,
                                 const ZeroTester& tester = default_zero_tester(), bool reduce_density = true);

// Removes x-exact parts of the density, compensating in the flux.
ConservedVector reduce_density(const ConservedVector& cv, const Scenario& ctx);

DiffPoly divergence_residual(const ConservedVector& cv, const Scenario& ctx);

// T1 - T2 is a total x-derivative on solutions
bool equivalent_densities(const DiffPoly& T1, const DiffPoly& T2, const Scenario& ctx,
                          const ZeroTester& tester = default_zero_tester());

// Tx1 - Tx2 has no x-dependence on solutions (fluxes of one density)
bool equivalent_fluxes(const DiffPoly& Tx1, const DiffPoly& Tx2, const Scenario& ctx,
                       const ZeroTester& tester = default_zero_tester());

// euler(D_t Tt + D_x Tx - Lambda F)
DiffPoly characteristic_residual(const DiffPoly& lambda, const ConservedVector& cv, const DiffPoly& F);

// c * j * term / (k + 1) for each term carrying j^k
Expr integrate_in_jet(const Expr& e, const JetVar& j);

}  // namespace gardner
