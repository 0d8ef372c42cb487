#pragma once

#include <vector>

#include "sclab/curvature.hpp"
#include "sclab/field.hpp"

namespace sclab {

// Corrects a torsion-free connection so the given closed two-form becomes
// covariantly constant:
//   G = G0 + (N(X,Y) + N(Y,X)) / 3,  omega(N(X,Y), Z) = (nabla0_X omega)(Y,Z).
// The result loses one jet order to the derivative of the form.
GammaProvider symplectize(GammaProvider gamma0, FormProvider omega);

// Pointwise version used by the provider.
ConnJets symplectize_at(const ConnJets& g0, const MatJets& omega);

// Connection canonically attached to a family of symmetries s(p, .): the
// coefficients are minus half the second derivative of the symmetry map
// through p, evaluated at the base point.  `sym` has 2d variables: the
// first d are the base point p, the last d the argument x.
GammaProvider canonical_symmetric_connection(const std::vector<Expr>& sym,
                                             int d);

// Exterior derivative of a one-form given by expression-tree components:
//   (d lambda)(i,j) = d_i lambda_j - d_j lambda_i.
ExprForm exterior_derivative(const std::vector<Expr>& lambda);

// Symmetry map of the curved two-dimensional model (coordinates a, l):
//   s_(a,l)(a', l') = (2a - a', 2 cosh(a - a') l - l').
// Returned with 4 variables: (p0, p1, x0, x1).
std::vector<Expr> hyperbolic_cylinder_symmetry();

// Flat analogue: s_(a,l)(a', l') = (2a - a', 2l - l').
std::vector<Expr> flat_cylinder_symmetry();

}  // namespace sclab
