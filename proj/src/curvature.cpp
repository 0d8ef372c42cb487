#include "sclab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sclab/koszul.hpp"

namespace sclab {

Curv4 curvature(const ConnJets& g) {
  if (g.order < 1) throw std::invalid_argument("curvature: need order >= 1");
  int d = g.d;
  Curv4 out(d, g.order - 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Jet acc = jet_partial(g.at(i, l, j), k) -
                    jet_partial(g.at(i, k, j), l);
          for (int m = 0; m < d; ++m)
            acc = acc +
                  g.at(i, k, m).truncated(g.order - 1) *
                      g.at(m, l, j).truncated(g.order - 1) -
                  g.at(i, l, m).truncated(g.order - 1) *
                      g.at(m, k, j).truncated(g.order - 1);
          out.at(i, j, k, l) = acc;
        }
  return out;
}

MatJets ricci(const Curv4& r) {
  int d = r.d;
  MatJets out(d, r.order);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Jet acc = Jet::constant(d, r.order, 0.0);
      for (int m = 0; m < d; ++m) acc = acc + r.at(m, b, a, m);
      out.at(a, b) = acc;
    }
  return out;
}

MatJets ricci_prime(const Curv4& r, const MatJets& omega) {
  int d = r.d;
  int ord = std::min(r.order, omega.order);
  MatJets winv = mat_inverse(omega);
  MatJets out(d, ord);
  for (int j = 0; j < d; ++j)
    for (int t = 0; t < d; ++t) {
      Jet acc = Jet::constant(d, ord, 0.0);
      for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a)
          for (int m = 0; m < d; ++m)
            acc = acc + winv.at(a, i).truncated(ord) *
                            r.at(m, j, i, a).truncated(ord) *
                            omega.at(m, t).truncated(ord);
      out.at(j, t) = acc;
    }
  return out;
}

Curv4 lower_curvature(const Curv4& r, const MatJets& omega) {
  int d = r.d;
  int ord = std::min(r.order, omega.order);
  Curv4 out(d, ord);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int z = 0; z < d; ++z)
        for (int t = 0; t < d; ++t) {
          Jet acc = Jet::constant(d, ord, 0.0);
          for (int i = 0; i < d; ++i)
            acc = acc +
                  r.at(i, z, k, l).truncated(ord) * omega.at(i, t).truncated(ord);
          out.at(k, l, z, t) = acc;
        }
  return out;
}

Curv4 ricci_part(const MatJets& ric, const MatJets& rho,
                 const MatJets& omega) {
  int d = ric.d;
  int ord = std::min({ric.order, rho.order, omega.order});
  double c = 1.0 / (d + 2);  // 2n + 2 with d = 2n
  Curv4 out(d, ord);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Jet acc = 2.0 * omega.at(k, l).truncated(ord) *
                        rho.at(i, j).truncated(ord) +
                    omega.at(k, j).truncated(ord) * rho.at(i, l).truncated(ord) -
                    omega.at(l, j).truncated(ord) * rho.at(i, k).truncated(ord);
          if (i == l) acc = acc + ric.at(k, j).truncated(ord);
          if (i == k) acc = acc - ric.at(l, j).truncated(ord);
          out.at(i, j, k, l) = c * acc;
        }
  return out;
}

MatJets solve_rho(const MatJets& omega, const MatJets& ric) {
  int d = omega.d;
  int ord = std::min(omega.order, ric.order);
  std::vector<Jet> a(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      a[static_cast<size_t>(i) * d + j] = omega.at(i, j).truncated(ord);
  JetLu lu(a, d);
  MatJets rho(d, ord);
  for (int j = 0; j < d; ++j) {
    std::vector<Jet> b(d);
    for (int i = 0; i < d; ++i) b[i] = ric.at(i, j).truncated(ord);
    auto col = lu.solve(b);
    for (int i = 0; i < d; ++i) rho.at(i, j) = col[i];
  }
  return rho;
}

std::vector<Jet> nabla_02(const MatJets& t, const ConnJets& g) {
  int d = t.d;
  int ord = std::min(t.order - 1, g.order);
  if (ord < 0) throw std::invalid_argument("nabla_02: need tensor order >= 1");
  std::vector<Jet> out(static_cast<size_t>(d) * d * d,
                       Jet::constant(d, ord, 0.0));
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        Jet acc = jet_partial(t.at(a, b), k).truncated(ord);
        for (int m = 0; m < d; ++m)
          acc = acc -
                g.at(m, k, a).truncated(ord) * t.at(m, b).truncated(ord) -
                g.at(m, k, b).truncated(ord) * t.at(a, m).truncated(ord);
        out[(static_cast<size_t>(k) * d + a) * d + b] = acc;
      }
  return out;
}

std::vector<Jet> nabla_11(const MatJets& t, const ConnJets& g) {
  int d = t.d;
  int ord = std::min(t.order - 1, g.order);
  if (ord < 0) throw std::invalid_argument("nabla_11: need tensor order >= 1");
  std::vector<Jet> out(static_cast<size_t>(d) * d * d,
                       Jet::constant(d, ord, 0.0));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Jet acc = jet_partial(t.at(i, j), k).truncated(ord);
        for (int m = 0; m < d; ++m)
          acc = acc +
                g.at(i, k, m).truncated(ord) * t.at(m, j).truncated(ord) -
                g.at(m, k, j).truncated(ord) * t.at(i, m).truncated(ord);
        out[(static_cast<size_t>(k) * d + i) * d + j] = acc;
      }
  return out;
}

std::vector<Jet> nabla_vec(const VecJets& u, const ConnJets& g) {
  int d = u.d;
  int ord = std::min(u.order - 1, g.order);
  if (ord < 0) throw std::invalid_argument("nabla_vec: need field order >= 1");
  std::vector<Jet> out(static_cast<size_t>(d) * d, Jet::constant(d, ord, 0.0));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      Jet acc = jet_partial(u.at(i), k).truncated(ord);
      for (int m = 0; m < d; ++m)
        acc = acc + g.at(i, k, m).truncated(ord) * u.at(m).truncated(ord);
      out[static_cast<size_t>(k) * d + i] = acc;
    }
  return out;
}

double torsion_max(const ConnJets& g) {
  double m = 0;
  for (int i = 0; i < g.d; ++i)
    for (int k = 0; k < g.d; ++k)
      for (int j = 0; j < g.d; ++j)
        m = std::max(m, std::abs(g.at(i, k, j).val() - g.at(i, j, k).val()));
  return m;
}

double nabla_omega_max(const ConnJets& g, const MatJets& omega) {
  auto nw = nabla_02(omega, g);
  double m = 0;
  for (const auto& j : nw) m = std::max(m, std::abs(j.val()));
  return m;
}

double bianchi_cyclic_max(const Curv4& r) {
  double m = 0;
  for (int i = 0; i < r.d; ++i)
    for (int j = 0; j < r.d; ++j)
      for (int k = 0; k < r.d; ++k)
        for (int l = 0; l < r.d; ++l)
          m = std::max(m, std::abs(r.at(i, j, k, l).val() +
                                   r.at(i, k, l, j).val() +
                                   r.at(i, l, j, k).val()));
  return m;
}

double bianchi_alternation_max(const Curv4& low) {
  // The lowered curvature lives on two alternating slots followed by two
  // symmetric ones; the first structure identity says the alternation
  // operator annihilates it.
  int d = low.d;
  std::vector<double> t(qp_size(d, 2, 2));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w)
          t[((static_cast<size_t>(k) * d + l) * d + z) * d + w] =
              low.at(k, l, z, w).val();
  auto at = koszul_a(t, d, 2, 2);
  double m = 0;
  for (double v : at) m = std::max(m, std::abs(v));
  return m;
}

DecompositionCheck check_decomposition(const Curv4& r, const MatJets& omega) {
  int d = r.d;
  MatJets ric = ricci(r);
  MatJets rho = solve_rho(omega, ric);
  Curv4 e = ricci_part(ric, rho, omega);
  DecompositionCheck out;
  MatJets ric_e = ricci(e);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      out.ricci_of_e_vs_r = std::max(
          out.ricci_of_e_vs_r,
          std::abs(ric_e.at(a, b).val() - ric.at(a, b).val()));
  // W = R - E has vanishing Ricci trace.
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double w = 0;
      for (int m = 0; m < d; ++m)
        w += r.at(m, b, a, m).val() - e.at(m, b, a, m).val();
      out.ricci_of_w = std::max(out.ricci_of_w, std::abs(w));
    }
  // Rebuilding the Ricci part from E itself reproduces E.
  MatJets rho_e = solve_rho(omega, ric_e);
  Curv4 ee = ricci_part(ric_e, rho_e, omega);
  for (size_t n = 0; n < e.R.size(); ++n)
    out.idempotent =
        std::max(out.idempotent, std::abs(ee.R[n].val() - e.R[n].val()));
  return out;
}

double IdentityReport::max() const {
  return std::max({torsion, nabla_omega, bianchi_cyclic, bianchi_alternation,
                   ricci_prime});
}

IdentityReport check_identities(const GammaProvider& gamma,
                                const FormProvider& omega,
                                const std::vector<double>& x) {
  ConnJets g = gamma(x, 1);
  MatJets w = omega(x, 1);
  IdentityReport rep;
  rep.torsion = torsion_max(g);
  rep.nabla_omega = nabla_omega_max(g, w);
  Curv4 r = curvature(g);
  rep.bianchi_cyclic = bianchi_cyclic_max(r);
  rep.bianchi_alternation = bianchi_alternation_max(lower_curvature(r, w));
  MatJets ric = ricci(r);
  MatJets rp = ricci_prime(r, w);
  for (int a = 0; a < g.d; ++a)
    for (int b = 0; b < g.d; ++b)
      rep.ricci_prime =
          std::max(rep.ricci_prime,
                   std::abs(rp.at(a, b).val() + 2.0 * ric.at(a, b).val()));
  return rep;
}

}  // namespace sclab
