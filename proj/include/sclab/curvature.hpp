#pragma once

#include <vector>

#include "sclab/field.hpp"

namespace sclab {

// Curvature of a connection from its coefficient jets, one order lower:
//   R(i,j,k,l) e_i = R(e_k, e_l) e_j.
Curv4 curvature(const ConnJets& g);

// Ricci trace r(X, Y) = trace of Z -> R(X, Z) Y, i.e. r(a,b) = R(m,b,a,m).
MatJets ricci(const Curv4& r);

// Second Ricci trace r'(X, Y) = sum_i omega(R(e_i, e^i) X, Y) with e^i the
// omega-dual basis.  For a symplectic connection r' = -2 r.
MatJets ricci_prime(const Curv4& r, const MatJets& omega);

// All-indices-lowered curvature, ordered (k, l, z, t):
//   low(k,l,z,t) = sum_i R(i,z,k,l) omega(i,t).
// Alternating in (k,l), symmetric in (z,t) for symplectic connections.
Curv4 lower_curvature(const Curv4& r, const MatJets& omega);

// Ricci-determined part of the curvature:
//   E(i,j,k,l) = [2 w(k,l) rho(i,j) + w(k,j) rho(i,l) - w(l,j) rho(i,k)
//                 + r(k,j) delta(i,l) - r(l,j) delta(i,k)] / (2n + 2).
Curv4 ricci_part(const MatJets& ric, const MatJets& rho, const MatJets& omega);

// Raised Ricci endomorphism rho solving omega * rho = r.
MatJets solve_rho(const MatJets& omega, const MatJets& ric);

// Covariant derivative of a (0,2)-tensor:  out(k,a,b) = (nabla_k t)(a,b).
std::vector<Jet> nabla_02(const MatJets& t, const ConnJets& g);

// Covariant derivative of a (1,1)-tensor rho:
//   out(k,i,j) = d_k rho(i,j) + G(i,k,m) rho(m,j) - G(m,k,j) rho(i,m).
std::vector<Jet> nabla_11(const MatJets& t, const ConnJets& g);

// Covariant derivative of a vector field: out(k,i) = (nabla_k u)^i.
std::vector<Jet> nabla_vec(const VecJets& u, const ConnJets& g);

// Pointwise residual magnitudes.
double torsion_max(const ConnJets& g);
double nabla_omega_max(const ConnJets& g, const MatJets& omega);
double bianchi_cyclic_max(const Curv4& r);
// Alternation of the lowered curvature in its three leading slots, computed
// with the dense degree operator on two alternating and two symmetric slots.
double bianchi_alternation_max(const Curv4& low);

// Residuals of the curvature decomposition R = E + W at one point.
struct DecompositionCheck {
  double ricci_of_e_vs_r = 0;  // |Ricci(E) - r|
  double ricci_of_w = 0;       // |Ricci(W)|
  double idempotent = 0;       // |E(E-part of R) - E|
};
DecompositionCheck check_decomposition(const Curv4& r, const MatJets& omega);

// The five pointwise identities every symplectic connection satisfies,
// evaluated from provider data at one point.
struct IdentityReport {
  double torsion = 0;          // antisymmetric part of the coefficients
  double nabla_omega = 0;      // covariant constancy of the two-form
  double bianchi_cyclic = 0;   // cyclic sum over the three lower slots
  double bianchi_alternation = 0;  // degree-operator form of the same sum
  double ricci_prime = 0;      // |r' + 2 r|
  double max() const;
};
IdentityReport check_identities(const GammaProvider& gamma,
                                const FormProvider& omega,
                                const std::vector<double>& x);

}  // namespace sclab
