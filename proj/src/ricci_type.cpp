#include "sclab/ricci_type.hpp"

#include <algorithm>
#include <cmath>

namespace sclab {

double preferred_residual(const GammaProvider& gamma,
                          const FormProvider& omega,
                          const std::vector<double>& x) {
  (void)omega;
  ConnJets g = gamma(x, 2);
  int d = g.d;
  Curv4 r = curvature(g);        // order 1
  MatJets ric = ricci(r);        // order 1
  auto nr = nabla_02(ric, g);    // (k,a,b) values
  auto at = [&](int k, int a, int b) {
    return nr[(static_cast<size_t>(k) * d + a) * d + b].val();
  };
  double m = 0;
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        m = std::max(m, std::abs(at(k, a, b) + at(a, b, k) + at(b, k, a)));
  return m;
}

Curv4 curvature_from_rho(const MatJets& rho, const MatJets& omega) {
  int d = rho.d;
  int ord = std::min(rho.order, omega.order);
  double c = -1.0 / (d + 2);
  Curv4 out(d, ord);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Jet acc = -2.0 * omega.at(k, l).truncated(ord) *
                        rho.at(i, j).truncated(ord) -
                    rho.at(i, l).truncated(ord) * omega.at(k, j).truncated(ord) +
                    rho.at(i, k).truncated(ord) * omega.at(l, j).truncated(ord);
          for (int m = 0; m < d; ++m) {
            if (i == k)
              acc = acc - rho.at(m, l).truncated(ord) *
                              omega.at(m, j).truncated(ord);
            if (i == l)
              acc = acc + rho.at(m, k).truncated(ord) *
                              omega.at(m, j).truncated(ord);
          }
          out.at(i, j, k, l) = c * acc;
        }
  return out;
}

RicciTypeInvariants ricci_type_invariants(const GammaProvider& gamma,
                                          const FormProvider& omega,
                                          const std::vector<double>& x) {
  ConnJets g = gamma(x, 3);
  MatJets w = omega(x, 3);
  int d = g.d;
  int n2 = d;  // 2n
  double c_u = 1.0 / (n2 + 1);            // 1/(2n+1)
  double c_rr = double(n2 + 1) / (n2 + 2);  // (2n+1)/(2n+2)

  RicciTypeInvariants out;
  out.d = d;

  Curv4 r = curvature(g);                   // order 2
  MatJets ric = ricci(r);                   // order 2
  out.rho = solve_rho(w, ric);              // order 2
  auto grad_rho = nabla_11(out.rho, g);     // (k,i,j), order 1
  auto gr = [&](int k, int i, int j) -> const Jet& {
    return grad_rho[(static_cast<size_t>(k) * d + i) * d + j];
  };

  // Least squares for u over all d^3 equations
  //   (nabla_k rho)(i,j) = -c_u [delta(i,k) omega(m,j) u(m) + u(i) omega(k,j)]
  // via the normal equations, carried at jet order 1 so that u keeps first
  // derivatives.
  int uord = 1;
  auto arow = [&](int k, int i, int j, int m) {
    Jet a = Jet::constant(d, uord, 0.0);
    if (i == k) a = a + w.at(m, j).truncated(uord);
    if (i == m) a = a + w.at(k, j).truncated(uord);
    return a;
  };
  std::vector<Jet> ata(static_cast<size_t>(d) * d, Jet::constant(d, uord, 0.0));
  std::vector<Jet> atb(d, Jet::constant(d, uord, 0.0));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Jet b = (-1.0 / c_u) * gr(k, i, j).truncated(uord);
        for (int m = 0; m < d; ++m) {
          Jet am = arow(k, i, j, m);
          atb[m] = atb[m] + am * b;
          for (int mp = m; mp < d; ++mp)
            ata[static_cast<size_t>(m) * d + mp] =
                ata[static_cast<size_t>(m) * d + mp] + am * arow(k, i, j, mp);
        }
      }
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < m; ++mp)
      ata[static_cast<size_t>(m) * d + mp] =
          ata[static_cast<size_t>(mp) * d + m];
  auto usol = jet_solve(ata, d, atb);
  out.u = VecJets(d, uord);
  for (int m = 0; m < d; ++m) out.u.at(m) = usol[m];

  // Residual of the u-field equation at the value level.
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double lhs = gr(k, i, j).val();
        double rhs = 0;
        for (int m = 0; m < d; ++m)
          rhs += (i == k ? w.at(m, j).val() * usol[m].val() : 0.0) +
                 (i == m ? w.at(k, j).val() * usol[m].val() : 0.0);
        out.grad_rho_residual =
            std::max(out.grad_rho_residual, std::abs(lhs + c_u * rhs));
      }

  // f from the trace of nabla u + c_rr rho^2, then the remainder of the
  // derivative equation for u.
  auto grad_u = nabla_vec(out.u, g);  // (k,i) values
  auto gu = [&](int k, int i) {
    return grad_u[static_cast<size_t>(k) * d + i].val();
  };
  auto rho2 = [&](int i, int j) {
    double s = 0;
    for (int m = 0; m < d; ++m)
      s += out.rho.at(i, m).val() * out.rho.at(m, j).val();
    return s;
  };
  double tr = 0;
  for (int i = 0; i < d; ++i) tr += gu(i, i) + c_rr * rho2(i, i);
  out.f = tr / d;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      double want = -c_rr * rho2(i, k) + (i == k ? out.f : 0.0);
      out.grad_u_residual =
          std::max(out.grad_u_residual, std::abs(gu(k, i) - want));
    }

  // The scalar that stays constant on preferred Ricci-type geometries.
  double trr2 = 0;
  for (int i = 0; i < d; ++i) trr2 += rho2(i, i);
  out.k = trr2 + (2.0 * (n2 + 2) / (n2 + 1)) * out.f;

  // Curvature against its rebuild from rho alone.
  Curv4 rebuilt = curvature_from_rho(out.rho, w);
  for (size_t idx = 0; idx < r.R.size(); ++idx)
    out.rebuild_residual = std::max(
        out.rebuild_residual, std::abs(r.R[idx].val() - rebuilt.R[idx].val()));
  return out;
}

}  // namespace sclab
