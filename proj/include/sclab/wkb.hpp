#pragma once

#include <complex>
#include <functional>

#include "sclab/rng.hpp"

namespace sclab {

// Point on the two-dimensional solvable symmetric surface, charted by a
// dilation coordinate `a` and a fibre coordinate `l`.
struct SPoint {
  double a = 0;
  double l = 0;
};

// The curved kernel uses hyperbolic functions of the dilation differences;
// the flat comparison model replaces sinh by the identity and cosh by 1.
enum class KernelModel { kCurved, kFlat };

// Geodesic point reflection through x.
SPoint symmetry(const SPoint& x, const SPoint& y);
SPoint symmetry_flat(const SPoint& x, const SPoint& y);
SPoint symmetry_m(KernelModel model, const SPoint& x, const SPoint& y);

// Three-point oscillation phase: totally antisymmetric, invariant under the
// diagonal reflection action, and flipped in sign by reflecting the middle
// argument through the first.
double phase(const SPoint& x, const SPoint& y, const SPoint& z);
double phase_flat(const SPoint& x, const SPoint& y, const SPoint& z);
double phase_m(KernelModel model, const SPoint& x, const SPoint& y,
               const SPoint& z);

// Unique fixed point of the composed reflections s_x s_y s_z.  The dilation
// component is affine with total slope -1, and the fibre component is solved
// from the induced one-dimensional affine chain; the chain slope is checked
// to be -1 at runtime (violation -> std::runtime_error).
SPoint triple_fixed_point(KernelModel model, const SPoint& x,
                          const SPoint& y, const SPoint& z);

// Triangle map (x, y, z) -> (X, Y, Z): X the triple fixed point,
// Y = s_z(X), Z = s_y(Y); its closure property is s_x(Z) = X.
struct PhiImage {
  SPoint X, Y, Z;
};
PhiImage phi_map(KernelModel model, const SPoint& x, const SPoint& y,
                 const SPoint& z);

// Determinant of the 6x6 Jacobian of the curved triangle map, computed with
// first-order jets through the closed-form solve; positive and independent
// of all fibre coordinates.
double phase_jacobian(const SPoint& x, const SPoint& y, const SPoint& z);
// Closed form of the same determinant.
double phase_jacobian_closed(const SPoint& x, const SPoint& y,
                             const SPoint& z);

// Kernel amplitudes, functions of the three dilation coordinates only.
enum class Amplitude {
  kLeading,       // cosh(ay - az)
  kJacobianRoot,  // quarter square root of the triangle-map Jacobian
};
double amplitude(Amplitude kind, double ax, double ay, double az);

// One-parameter family of amplitudes built from a profile function:
// p(ax-az) p(ay-ax) / p(ay-az) * cosh(ay-az).  The constant profile gives
// the leading amplitude; the root-cosh profile reproduces the Jacobian
// root exactly.
double amplitude_family(const std::function<double(double)>& p, double ax,
                        double ay, double az);

// Residuals of the structural phase properties: total antisymmetry,
// invariance under the diagonal reflection action, and the sign flip under
// reflection of the middle argument through the first.
struct AdmissibilityReport {
  double antisymmetry = 0;
  double invariance = 0;
  double reflection = 0;
  double max() const;
};
AdmissibilityReport check_admissible(KernelModel model, Rng& rng,
                                     int trials = 1000, double box = 1.5);

// Max over sampled 4-tuples of the alternating four-point sum
// S(x,y,z) - S(w,y,z) + S(w,x,z) - S(w,x,y).  Identically zero for the flat
// model, bounded away from zero for the curved phase.
double cocycle_defect(KernelModel model, Rng& rng, int tuples = 50,
                      double box = 1.0);

// Four-point compatibility through a barycentre: search for g such that
//   S(a,b,t) + S(t,c,d) = S(a,s_g(t),d) + S(s_g(t),b,c)   for every t.
// The anchor is fitted to two probe positions by damped Gauss-Newton on
// first-order jets; the identity residual is the max over fresh random
// t-samples.  The flat model admits an exact barycentre; the curved phase
// leaves an obstruction no anchor can remove.
struct BarycentreReport {
  SPoint anchor;
  bool found = false;         // anchor certified on fresh samples, not just
                              // the fitting probes
  double probe_residual = 0;  // residual at the two fitting probes
  double identity_residual = 0;
};
BarycentreReport geometric_associativity(KernelModel model, const SPoint& a,
                                         const SPoint& b, const SPoint& c,
                                         const SPoint& d,
                                         int n_samples = 100,
                                         unsigned long long seed = 991);

// Symbols are real functions of (a, l).
using SymbolFn = std::function<double(double, double)>;

// Gaussian bump exp(-((a-ca)^2 + (l-cl)^2) / (2 w^2)).
SymbolFn gaussian(double ca, double cl, double w);

// Canonical bracket with the normalization {a, l} = 2, by central
// differences; this is the normalization under which the deformed product
// expands as uv - i (theta/2) {u, v} + O(theta^2).
double poisson_bracket(const SymbolFn& u, const SymbolFn& v, const SPoint& x,
                       double h = 1e-5);

// Tensor Gauss-Legendre grid on [-box, box]^2 per leg, with n_a dilation
// and n_l fibre nodes.
struct StarGrid {
  double box = 4.1;
  int n_a = 200;
  int n_l = 256;
};

// Oscillatory deformed product
//   (u * v)(x) = (2 pi theta)^{-2} iint A e^{i phase/theta} u(y) v(z) dy dz
// by factorized quadrature: the phase is linear in both fibre variables, so
// the fibre integrals reduce to one-dimensional transforms and the
// remaining sum runs over the dilation grids.  Both symbols must decay
// below 1e-12 on the grid boundary (violation -> std::runtime_error).
std::complex<double> star_product(const SymbolFn& u, const SymbolFn& v,
                                  const SPoint& x, double theta,
                                  const StarGrid& grid,
                                  Amplitude kind = Amplitude::kJacobianRoot);

// Doubly deformed product ((u*v)*w or u*(v*w)) on a deliberately small box:
// the inner fibre variable is integrated exactly, pinning one dilation leg
// and leaving a three-fold dilation sum with factorized fibre transforms.
std::complex<double> nested_star(const SymbolFn& u, const SymbolFn& v,
                                 const SymbolFn& w, const SPoint& x,
                                 double theta, const StarGrid& grid,
                                 bool left_first,
                                 Amplitude kind = Amplitude::kJacobianRoot);

}  // namespace sclab
