#pragma once

#include <functional>
#include <vector>

#include "sclab/expr.hpp"
#include "sclab/field.hpp"

namespace sclab {

using MatProvider = std::function<MatJets(const std::vector<double>&, int)>;
using VecProvider = std::function<VecJets(const std::vector<double>&, int)>;
using JetProvider = std::function<Jet(const std::vector<double>&, int)>;

// Data inducing a geometry on the rank-two extension of a symplectic base.
// Total-space coordinates are (y_1..y_{2n}, t, s): t parametrizes the flow
// direction E, s the dilation direction S.  `lambda` is a potential of the
// base form (d lambda = omega), `sigma` an endomorphism field whose lowered
// form is symmetric, `u` a vector field and `f` a scalar field on the base.
struct InducedData {
  int n2 = 0;  // base dimension
  GammaProvider base_gamma;
  FormProvider base_omega;
  VecProvider lambda;
  MatProvider sigma;  // entries sigma^i_j, row index raised
  VecProvider u;
  JetProvider f;
};

// Connection on the total space.  Its coefficients do not depend on t or s.
// Supports jet orders 0..2 (one order is spent on the potential).
GammaProvider induced_connection(const InducedData& data);

// Symplectic form on the total space: the base form scaled by exp(2s),
// coupled to the two extension directions through the potential.
FormProvider induced_form(const InducedData& data);

// Exact potential of a closed two-form, vanishing at the origin, via the
// radial homotopy evaluated with Gauss-Legendre quadrature in the scale.
VecProvider radial_potential(const FormProvider& omega, int d, int nodes = 32);

// Potential of the constant standard form: lambda_j = (1/2) sum_i y^i w_ij.
std::vector<Expr> linear_potential(int d);

// Inducing data with vanishing total-space Ricci curvature, built
// symbolically from an expression-backed base: the endomorphism is the
// scaled Ricci endomorphism, the vector field solves the divergence
// equation, and the scalar balances the traces.
InducedData ricci_flat_expr_data(const ExprConnection& gamma,
                                 const ExprForm& omega,
                                 const std::vector<Expr>& lambda);

// The same Ricci-flat choice for a base whose curvature is trace-built with
// constant quadratic invariant (e.g. quotient charts).  Higher jets of the
// vector and scalar data are bootstrapped from the base field equations, so
// only third-order coefficients of the base connection are consumed.
InducedData ricci_flat_special_data(const GammaProvider& gamma,
                                    const FormProvider& omega, int n2);

// Curvature of the induced connection evaluated on the frame
// (X_1..X_{2n}, E, S), where X_i are the horizontal lifts.  Components with
// argument S vanish; each remaining block splits into a horizontal part, an
// E-part (zero in closed form) and an S-part.  Layouts, with m the frame
// slot of the result:
//   xxx_h[((i*2n + j)*2n + k)*2n + m],  xxx_e / xxx_s[(i*2n + j)*2n + k]
//   xxe_h[(i*2n + j)*2n + m],           xxe_e / xxe_s[i*2n + j]
//   xex_h[(i*2n + j)*2n + m],           xex_e / xex_s[i*2n + j]
//   xee_h[i*2n + m],                    xee_e / xee_s[i]
// `s_arg_max` is the largest component over blocks with S as an argument.
struct FrameCurvature {
  int n2 = 0;
  std::vector<double> xxx_h, xxx_e, xxx_s;
  std::vector<double> xxe_h, xxe_e, xxe_s;
  std::vector<double> xex_h, xex_e, xex_s;
  std::vector<double> xee_h, xee_e, xee_s;
  double s_arg_max = 0;
};

// Closed-form blocks predicted from the base data.  When `doubled_variant`
// is set, the four single-contraction terms of the horizontal block carry
// an extra factor two (a published variant of the formula); it is kept only
// so tests can document that this variant disagrees with the assembled
// connection.
FrameCurvature closed_form_frame_curvature(const InducedData& data,
                                           const std::vector<double>& y,
                                           bool doubled_variant = false);

// The same blocks measured from the assembled connection by contracting
// its curvature with the frame at the lifted point (y, t0, s0).
FrameCurvature numeric_frame_curvature(const InducedData& data,
                                       const std::vector<double>& y,
                                       double t0 = 0.0, double s0 = 0.0);

// Ricci curvature of the induced connection on the frame, in closed form.
struct FrameRicci {
  int n2 = 0;
  std::vector<double> xx;  // r(X_i, X_j)
  std::vector<double> xe;  // r(X_i, E)
  double ee = 0;           // r(E, E)
};
FrameRicci closed_form_frame_ricci(const InducedData& data,
                                   const std::vector<double>& y);

// Ricci curvature measured from the assembled connection at (y, t0, s0)
// and contracted with the frame.  `s_pair_max` is the largest trace against
// a pair with an S argument; those must vanish.
struct NumericFrameRicci {
  FrameRicci frame;
  double s_pair_max = 0;
};
NumericFrameRicci numeric_frame_ricci(const InducedData& data,
                                      const std::vector<double>& y,
                                      double t0 = 0.0, double s0 = 0.0);

// Structural residuals of a candidate extension at a total-space point:
// the form must scale with weight two along s, be invariant along t, and
// the connection must be invariant along both directions.
struct ExtensionChecks {
  double form_scaling = 0;     // |d_s mu - 2 mu|
  double form_flow = 0;        // |d_t mu|
  double conn_flow = 0;        // |d_t Gamma|
  double conn_dilation = 0;    // |d_s Gamma|
  double max() const;
};
ExtensionChecks check_extension_structure(const GammaProvider& gamma,
                                          const FormProvider& mu,
                                          const std::vector<double>& x);

// Recovers base geometry from the total space alone: horizontal lifts are
// solved from the form against the two distinguished directions, the
// covariant derivative is projected back to the horizontal distribution,
// and everything is restricted to the slice {t = 0, s = 0}.
struct ReducedBack {
  GammaProvider gamma;
  FormProvider omega;
};
ReducedBack reduce_back(const GammaProvider& gamma_p, const FormProvider& mu,
                        int n2);

}  // namespace sclab
