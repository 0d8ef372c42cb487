#include "sclab/connection_build.hpp"

#include <stdexcept>

namespace sclab {

ConnJets symplectize_at(const ConnJets& g0, const MatJets& omega) {
  int d = g0.d;
  int ord = std::min(g0.order, omega.order - 1);
  if (ord < 0)
    throw std::invalid_argument("symplectize: form jets need order >= 1");

  // (nabla0_k omega)(j, l) from the base connection.
  auto nw = nabla_02(omega, g0);
  auto nw_at = [&](int k, int j, int l) -> const Jet& {
    return nw[(static_cast<size_t>(k) * d + j) * d + l];
  };

  // Solve omega^T N(.,k,j) = (nabla0_k omega)(j, .) for the correction
  // vector N(m,k,j):  sum_m omega(m,l) N(m) = c(l).
  std::vector<Jet> wt(static_cast<size_t>(d) * d);
  for (int l = 0; l < d; ++l)
    for (int m = 0; m < d; ++m)
      wt[static_cast<size_t>(l) * d + m] = omega.at(m, l).truncated(ord);
  JetLu lu(wt, d);

  ConnJets n(d, ord);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      std::vector<Jet> c(d);
      for (int l = 0; l < d; ++l) c[l] = nw_at(k, j, l).truncated(ord);
      auto col = lu.solve(c);
      for (int m = 0; m < d; ++m) n.at(m, k, j) = col[m];
    }

  ConnJets g(d, ord);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        g.at(i, k, j) = g0.at(i, k, j).truncated(ord) +
                        (1.0 / 3.0) * (n.at(i, k, j) + n.at(i, j, k));
  return g;
}

GammaProvider symplectize(GammaProvider gamma0, FormProvider omega) {
  return [gamma0, omega](const std::vector<double>& x, int ord) {
    int want = std::min(ord + 1, 3);
    ConnJets g0 = gamma0(x, ord);
    MatJets w = omega(x, want);
    return symplectize_at(g0, w);
  };
}

GammaProvider canonical_symmetric_connection(const std::vector<Expr>& sym,
                                             int d) {
  if (static_cast<int>(sym.size()) != d)
    throw std::invalid_argument("canonical connection: component count");
  // Differentiate the symmetry map twice in its argument slots, then pin
  // the argument to the base point.  Variables 0..d-1 are the base point,
  // d..2d-1 the argument.
  std::vector<Expr> diag(2 * static_cast<size_t>(d), Expr::constant(0.0));
  for (int v = 0; v < d; ++v) {
    diag[v] = Expr::coord(v);
    diag[d + v] = Expr::coord(v);
  }
  ExprConnection conn(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Expr second = sym[k].diff(d + i).diff(d + j).subst(diag);
        conn.at(k, i, j) = Expr::constant(-0.5) * second;
      }
  return conn.provider();
}

ExprForm exterior_derivative(const std::vector<Expr>& lambda) {
  int d = static_cast<int>(lambda.size());
  ExprForm w(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      w.at(i, j) = lambda[j].diff(i) - lambda[i].diff(j);
  return w;
}

std::vector<Expr> hyperbolic_cylinder_symmetry() {
  Expr a = Expr::coord(0), l = Expr::coord(1);
  Expr ax = Expr::coord(2), lx = Expr::coord(3);
  return {2.0 * a - ax, 2.0 * Expr::cosh(a - ax) * l - lx};
}

std::vector<Expr> flat_cylinder_symmetry() {
  Expr a = Expr::coord(0), l = Expr::coord(1);
  Expr ax = Expr::coord(2), lx = Expr::coord(3);
  return {2.0 * a - ax, 2.0 * l - lx};
}

}  // namespace sclab
