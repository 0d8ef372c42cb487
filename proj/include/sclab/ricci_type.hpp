#pragma once

#include <vector>

#include "sclab/curvature.hpp"
#include "sclab/field.hpp"

namespace sclab {

// Fully symmetrized covariant derivative of the Ricci trace: the cyclic sum
//   (nabla_X r)(Y,Z) + (nabla_Y r)(Z,X) + (nabla_Z r)(X,Y)
// over a coordinate basis.  Returns the largest component.  Vanishing
// characterizes the preferred class of symplectic connections.
double preferred_residual(const GammaProvider& gamma,
                          const FormProvider& omega,
                          const std::vector<double>& x);

// Derived fields of a connection whose curvature is pure Ricci part, all
// evaluated at one point:
//   rho   raised Ricci endomorphism, omega * rho = r
//   u     vector field solving
//            (nabla_k rho)(i,j) = -[delta(i,k) u_flat(j)
//                                   + u(i) omega(k,j)] / (2n+1)
//         in the least-squares sense over all d^3 component equations
//   f     scalar with nabla_X u = -(2n+1)/(2n+2) rho^2 X + f X
//   k     the constant  trace(rho^2) + 4(n+1)/(2n+1) f
struct RicciTypeInvariants {
  int d = 0;
  MatJets rho;             // order 2
  VecJets u;               // order 1
  double f = 0;
  double k = 0;
  double grad_rho_residual = 0;   // remainder of the u-field equation
  double grad_u_residual = 0;     // remainder of the f-field equation
  double rebuild_residual = 0;    // curvature vs its Ricci-part rebuild
};

RicciTypeInvariants ricci_type_invariants(const GammaProvider& gamma,
                                          const FormProvider& omega,
                                          const std::vector<double>& x);

// Curvature reconstructed from the raised Ricci endomorphism alone:
//   R(X,Y) = -[-2 w(X,Y) rho - rho Y (x) X_flat + rho X (x) Y_flat
//              - X (x) (rho Y)_flat + Y (x) (rho X)_flat] / (2n+2).
Curv4 curvature_from_rho(const MatJets& rho, const MatJets& omega);

}  // namespace sclab
