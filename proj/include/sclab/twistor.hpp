#pragma once

#include <complex>
#include <vector>

#include "sclab/field.hpp"
#include "sclab/rng.hpp"

namespace sclab {

// Columns of L form a basis bringing a constant antisymmetric nondegenerate
// matrix w to the standard pairing: (L^T w L) = [[0, I], [-I, 0]].
// Throws std::runtime_error when w is degenerate.
std::vector<double> darboux_basis(const std::vector<double>& w, int d);

// Random almost complex structure j compatible with the form w:
// j^2 = -1, w(jX, jY) = w(X, Y), and w(X, jX) > 0 for X != 0.
std::vector<double> random_compatible_j(const std::vector<double>& w, int d,
                                        double scale, Rng& rng);

// Anti-holomorphic obstruction vector: the +i-eigenspace projection of
// R(P u, P v) P z where P projects onto the -i eigenspace of j.  The input
// curvature uses the layout rten[((i*d + z)*d + k)*d + l] = R^i_{z k l},
// meaning R(e_k, e_l) e_z = sum_i R^i_{z k l} e_i.
std::vector<std::complex<double>> holomorphy_obstruction(
    const std::vector<double>& rten, int d, const std::vector<double>& j,
    const std::vector<double>& u, const std::vector<double>& v,
    const std::vector<double>& z);

// Largest obstruction component over all basis triples: zero exactly when
// the fibrewise complex structure built from j is unobstructed by rten.
double integrability_defect(const std::vector<double>& rten, int d,
                            const std::vector<double>& j);

// Defect of a connection at the point x, maximized over n_j random
// compatible complex structures of its form there.
double connection_defect(const GammaProvider& gamma, const FormProvider& omega,
                         const std::vector<double>& x, int n_j, Rng& rng);

// Raise the last slot of a lowered curvature (antisymmetric pair first,
// symmetric pair second, layout [((k*d + l)*d + z)*d + t]) back to the
// endomorphism-valued layout used by holomorphy_obstruction.
std::vector<double> raise_lowered_curvature(const std::vector<double>& rlow,
                                            const std::vector<double>& w,
                                            int d);

// Algebraic torsion removal.  Produces the connection
//   w(D'_X Y, Z) = w(D_X Y, Z) - 1/2 w(T(X,Y), Z)
//                  + 1/6 w(X, T(Y,Z)) + 1/6 w(Y, T(X,Z)),
// which is torsion-free for any input and preserves w whenever the input
// does (w closed).  Idempotent on torsion-free input.
GammaProvider torsion_correct(const GammaProvider& gamma,
                              const FormProvider& omega);

// Dimension of the space of totally symmetric cubic forms in d variables.
int sym3_dim(int d);

// Rank of the linear map sending a totally symmetric cubic form to its
// fully anti-holomorphic components, stacked over n_j random compatible
// complex structures of the standard form.  Full rank (= sym3_dim) means
// only the zero form is invisible to every fibre.
int uniqueness_rank(int d, int n_j, Rng& rng);

}  // namespace sclab
