#pragma once

#include <vector>

#include "sclab/field.hpp"
#include "sclab/rng.hpp"

namespace sclab {

// Pairing of the constant ambient symplectic structure.
double pair_omega(const std::vector<double>& w, int n,
                  const std::vector<double>& u, const std::vector<double>& v);

// Rescales a vector onto the unit level set of the quadratic x -> w(x, Ax).
std::vector<double> sigma_project(const std::vector<double>& amat, int big,
                                  const std::vector<double>& v);

// Random element of the linear symplectic group, the exponential of a
// random Hamiltonian generator of the given magnitude.
std::vector<double> random_sp(int d, double scale, Rng& rng);

// Infinitesimally symplectic map A with a prescribed symmetric quadratic
// form S:  A = W^{-1} S, so that w(x, Ax) = x.S x.
std::vector<double> sp_from_symmetric(const std::vector<double>& s, int d);

// Local coordinates on the quotient of the unit level set of x -> w(x,Ax)
// by the flow of x -> Ax, together with the descended connection and
// two-form.  The chart is centered at x0 and built from a symplectic frame
// of the subspace transverse to x0 and A x0.
struct ReducedChart {
  int big = 0;  // ambient dimension
  int dim = 0;  // quotient dimension, big - 2
  std::vector<double> amat;
  std::vector<double> x0;
  std::vector<std::vector<double>> frame;  // (e_1..e_n, f_1..f_n)

  // Ambient components of the chart map and of the horizontal frame, as
  // expression trees in the chart coordinates.
  std::vector<Expr> x;
  std::vector<std::vector<Expr>> fvec;

  GammaProvider gamma;
  FormProvider omega;
};

// Builds the chart.  `x0_raw` is rescaled onto the level set; the frame
// seeds default to the ambient basis.  Throws when the point is not
// transverse or the pivoting degenerates.
ReducedChart build_chart(const std::vector<double>& amat, int big,
                         const std::vector<double>& x0_raw);

// Residuals of the closed-form descriptions of the descended geometry:
// the Ricci endomorphism, derived vector field, and scalar curvature are
// projections of powers of A.
struct ChartCertificate {
  double rho_residual = 0;
  double u_residual = 0;
  double f_residual = 0;
  double k_value = 0;
  double rebuild_residual = 0;   // trace-free part of the curvature
  double preferred = 0;          // symmetrized derivative of the Ricci trace
  double grad_rho_residual = 0;
  double grad_u_residual = 0;
};
ChartCertificate certify_chart(const ReducedChart& chart,
                               const std::vector<double>& y);

// Quadratic generator realizing prescribed pointwise data (rho0, u0, f0)
// as a reduction: ambient dimension dim + 2, base point the first basis
// vector.  rho0 must be infinitesimally symplectic for the standard form.
std::vector<double> model_generator(const std::vector<double>& rho0,
                                    const std::vector<double>& u0, double f0,
                                    int dim);

}  // namespace sclab
