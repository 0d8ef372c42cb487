#include "sclab/induction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sclab/curvature.hpp"
#include "sclab/quadrature.hpp"
#include "sclab/ricci_type.hpp"

namespace sclab {

namespace {

// Restricts a total-space jet to the slice spanned by the first `d`
// variables; derivative data in the dropped slots describes variation off
// the slice and is discarded.
Jet jet_restrict(const Jet& f, int d) {
  Jet r(d, f.order());
  r.val() = f.val();
  if (f.order() >= 1)
    for (int i = 0; i < d; ++i) r.g(i) = f.g(i);
  if (f.order() >= 2)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r.h(i, j) = f.h(i, j);
  if (f.order() >= 3)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) r.t(i, j, k) = f.t(i, j, k);
  return r;
}

std::vector<int> identity_slots(int d) {
  std::vector<int> m(d);
  for (int i = 0; i < d; ++i) m[i] = i;
  return m;
}

std::vector<double> base_point(const std::vector<double>& xb, int n2) {
  return std::vector<double>(xb.begin(), xb.begin() + n2);
}

}  // namespace

GammaProvider induced_connection(const InducedData& data) {
  InducedData d = data;
  return [d](const std::vector<double>& xb, int ord) {
    const int n2 = d.n2;
    const int big = n2 + 2;
    const int ti = n2, si = n2 + 1;
    if (ord < 0 || ord > 2)
      throw std::invalid_argument("induced connection: order must be 0..2");
    if (static_cast<int>(xb.size()) != big)
      throw std::invalid_argument("induced connection: bad point dimension");
    auto y = base_point(xb, n2);

    ConnJets g0 = d.base_gamma(y, ord);
    MatJets w = d.base_omega(y, ord);
    VecJets lam = d.lambda(y, ord + 1);  // one order spent on its gradient
    MatJets sig = d.sigma(y, ord);
    VecJets uu = d.u(y, ord);
    Jet ff = d.f(y, ord);

    // lowered endomorphism and form-contracted vector field
    std::vector<Jet> shat(static_cast<size_t>(n2) * n2, Jet(n2, ord));
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j) {
        Jet acc(n2, ord);
        for (int m = 0; m < n2; ++m) acc += w.at(i, m) * sig.at(m, j);
        shat[static_cast<size_t>(i) * n2 + j] = acc;
      }
    std::vector<Jet> wu(n2, Jet(n2, ord));
    for (int i = 0; i < n2; ++i) {
      Jet acc(n2, ord);
      for (int m = 0; m < n2; ++m) acc += w.at(i, m) * uu.at(m);
      wu[i] = acc;
    }
    auto lam_dot = [&](const std::vector<Jet>& v) {
      Jet acc(n2, ord);
      for (int m = 0; m < n2; ++m) acc += lam.at(m) * v[m];
      return acc;
    };

    ConnJets out(big, ord);
    auto slots = identity_slots(n2);
    auto put = [&](int i, int k, int j, const Jet& val) {
      out.at(i, k, j) = jet_embed(val.truncated(ord), big, slots);
    };

    // both lower indices horizontal
    std::vector<Jet> v(n2, Jet(n2, ord));
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j) {
        for (int k = 0; k < n2; ++k)
          v[k] = g0.at(k, i, j) + 2.0 * (lam.at(j) * sig.at(k, i)) +
                 2.0 * (lam.at(i) * sig.at(k, j)) -
                 2.0 * (lam.at(i) * lam.at(j) * uu.at(k));
        for (int k = 0; k < n2; ++k) put(k, i, j, v[k]);
        put(ti, i, j,
            -lam_dot(v) - 0.5 * w.at(i, j) + jet_partial(lam.at(j), i));
        put(si, i, j,
            -shat[static_cast<size_t>(i) * n2 + j] + lam.at(i) * wu[j] +
                lam.at(j) * wu[i] + lam.at(i) * lam.at(j) * ff);
      }

    // one horizontal and one flow index, both orders
    for (int i = 0; i < n2; ++i) {
      for (int k = 0; k < n2; ++k)
        v[k] = 2.0 * sig.at(k, i) - 2.0 * (lam.at(i) * uu.at(k));
      for (int k = 0; k < n2; ++k) {
        put(k, i, ti, v[k]);
        put(k, ti, i, v[k]);
      }
      Jet tpart = -lam_dot(v);
      put(ti, i, ti, tpart);
      put(ti, ti, i, tpart);
      Jet spart = wu[i] + lam.at(i) * ff;
      put(si, i, ti, spart);
      put(si, ti, i, spart);
    }

    // both indices along the flow
    for (int k = 0; k < n2; ++k) v[k] = -2.0 * uu.at(k);
    for (int k = 0; k < n2; ++k) put(k, ti, ti, v[k]);
    put(ti, ti, ti, -lam_dot(v));
    put(si, ti, ti, ff);

    // the dilation direction acts as the identity
    for (int k = 0; k < n2; ++k) {
      out.at(k, k, si) = Jet::constant(big, ord, 1.0);
      out.at(k, si, k) = Jet::constant(big, ord, 1.0);
    }
    out.at(ti, ti, si) = Jet::constant(big, ord, 1.0);
    out.at(ti, si, ti) = Jet::constant(big, ord, 1.0);
    out.at(si, si, si) = Jet::constant(big, ord, 1.0);
    return out;
  };
}

FormProvider induced_form(const InducedData& data) {
  InducedData d = data;
  return [d](const std::vector<double>& xb, int ord) {
    const int n2 = d.n2;
    const int big = n2 + 2;
    const int ti = n2, si = n2 + 1;
    if (ord < 0 || ord > 3)
      throw std::invalid_argument("induced form: order must be 0..3");
    if (static_cast<int>(xb.size()) != big)
      throw std::invalid_argument("induced form: bad point dimension");
    auto y = base_point(xb, n2);

    MatJets w = d.base_omega(y, ord);
    VecJets lam = d.lambda(y, ord);
    auto slots = identity_slots(n2);
    Jet e2s = jet_exp(2.0 * Jet::coordinate(big, ord, si, xb[si]));

    MatJets mu(big, ord);
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j)
        mu.at(i, j) = e2s * jet_embed(w.at(i, j), big, slots);
    for (int i = 0; i < n2; ++i) {
      Jet li = e2s * jet_embed(lam.at(i), big, slots);
      mu.at(i, si) = -2.0 * li;
      mu.at(si, i) = 2.0 * li;
    }
    mu.at(ti, si) = -2.0 * e2s;
    mu.at(si, ti) = 2.0 * e2s;
    return mu;
  };
}

VecProvider radial_potential(const FormProvider& omega, int d, int nodes) {
  std::vector<double> xs, ws;
  gauss_legendre_ab(nodes, 0.0, 1.0, xs, ws);
  FormProvider om = omega;
  return [om, d, xs, ws](const std::vector<double>& y, int ord) {
    VecJets out(d, ord);
    auto ypt = jet_point(y, ord);
    std::vector<double> ty(d);
    for (size_t q = 0; q < xs.size(); ++q) {
      const double tq = xs[q];
      for (int i = 0; i < d; ++i) ty[i] = tq * y[i];
      MatJets wj = om(ty, ord);
      for (int j = 0; j < d; ++j) {
        Jet acc(d, ord);
        for (int i = 0; i < d; ++i)
          acc += ypt[i] * jet_rescale_args(wj.at(i, j), tq);
        out.at(j) += (ws[q] * tq) * acc;
      }
    }
    return out;
  };
}

std::vector<Expr> linear_potential(int d) {
  auto w = standard_form_matrix(d);
  std::vector<Expr> lam(d, Expr::constant(0.0));
  for (int j = 0; j < d; ++j) {
    Expr acc = Expr::constant(0.0);
    for (int i = 0; i < d; ++i) {
      double c = w[static_cast<size_t>(i) * d + j];
      if (c != 0.0) acc = acc + (0.5 * c) * Expr::coord(i);
    }
    lam[j] = acc;
  }
  return lam;
}

namespace {

Expr expr_det(const std::vector<Expr>& m, int d) {
  if (d == 1) return m[0];
  Expr acc = Expr::constant(0.0);
  double sign = 1.0;
  for (int c = 0; c < d; ++c) {
    std::vector<Expr> sub;
    sub.reserve(static_cast<size_t>(d - 1) * (d - 1));
    for (int r = 1; r < d; ++r)
      for (int cc = 0; cc < d; ++cc)
        if (cc != c) sub.push_back(m[static_cast<size_t>(r) * d + cc]);
    acc = acc + sign * (m[c] * expr_det(sub, d - 1));
    sign = -sign;
  }
  return acc;
}

// Cofactor inverse; fine for the small dimensions the base fields live in.
std::vector<Expr> expr_mat_inverse(const std::vector<Expr>& m, int d) {
  if (d > 4)
    throw std::invalid_argument("expression inverse: dimension too large");
  std::vector<Expr> inv(static_cast<size_t>(d) * d, Expr::constant(0.0));
  Expr det = expr_det(m, d);
  if (d == 1) {
    inv[0] = Expr::constant(1.0) / det;
    return inv;
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<Expr> sub;
      sub.reserve(static_cast<size_t>(d - 1) * (d - 1));
      for (int r = 0; r < d; ++r) {
        if (r == i) continue;
        for (int c = 0; c < d; ++c) {
          if (c == j) continue;
          sub.push_back(m[static_cast<size_t>(r) * d + c]);
        }
      }
      double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      inv[static_cast<size_t>(j) * d + i] = sign * expr_det(sub, d - 1) / det;
    }
  return inv;
}

}  // namespace

InducedData ricci_flat_expr_data(const ExprConnection& gamma,
                                 const ExprForm& omega,
                                 const std::vector<Expr>& lambda) {
  const int d = gamma.d;
  auto at4 = [d](int i, int z, int k, int l) {
    return ((static_cast<size_t>(i) * d + z) * d + k) * d + l;
  };

  // curvature and Ricci trace of the base connection
  std::vector<Expr> curv(static_cast<size_t>(d) * d * d * d);
  for (int i = 0; i < d; ++i)
    for (int z = 0; z < d; ++z)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Expr acc = gamma.at(i, l, z).diff(k) - gamma.at(i, k, z).diff(l);
          for (int m = 0; m < d; ++m)
            acc = acc + gamma.at(i, k, m) * gamma.at(m, l, z) -
                  gamma.at(i, l, m) * gamma.at(m, k, z);
          curv[at4(i, z, k, l)] = acc;
        }
  std::vector<Expr> ric(static_cast<size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Expr acc = Expr::constant(0.0);
      for (int m = 0; m < d; ++m) acc = acc + curv[at4(m, b, a, m)];
      ric[static_cast<size_t>(a) * d + b] = acc;
    }

  // raised Ricci endomorphism, scaled to the inducing endomorphism
  std::vector<Expr> winv = expr_mat_inverse(omega.w, d);
  std::vector<Expr> rho(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Expr acc = Expr::constant(0.0);
      for (int m = 0; m < d; ++m)
        acc = acc + winv[static_cast<size_t>(i) * d + m] *
                        ric[static_cast<size_t>(m) * d + j];
      rho[static_cast<size_t>(i) * d + j] = acc;
    }
  const double c_sig = -1.0 / (d + 2);
  std::vector<Expr> sig(static_cast<size_t>(d) * d);
  for (size_t n = 0; n < rho.size(); ++n) sig[n] = c_sig * rho[n];

  // vector field solving the divergence equation
  auto dsig = [&](int k, int i, int j) {
    Expr acc = sig[static_cast<size_t>(i) * d + j].diff(k);
    for (int m = 0; m < d; ++m)
      acc = acc + gamma.at(i, k, m) * sig[static_cast<size_t>(m) * d + j] -
            gamma.at(m, k, j) * sig[static_cast<size_t>(i) * d + m];
    return acc;
  };
  std::vector<Expr> tau(d);
  for (int j = 0; j < d; ++j) {
    Expr acc = Expr::constant(0.0);
    for (int m = 0; m < d; ++m) acc = acc + dsig(m, m, j);
    tau[j] = (2.0 / (d + 1)) * acc;
  }
  std::vector<Expr> uvec(d);
  for (int i = 0; i < d; ++i) {
    Expr acc = Expr::constant(0.0);
    for (int j = 0; j < d; ++j)
      acc = acc + winv[static_cast<size_t>(j) * d + i] * tau[j];
    uvec[i] = acc;
  }

  // scalar balancing the Ricci trace along the flow direction
  Expr trsig2 = Expr::constant(0.0);
  for (int i = 0; i < d; ++i)
    for (int m = 0; m < d; ++m)
      trsig2 = trsig2 + sig[static_cast<size_t>(i) * d + m] *
                            sig[static_cast<size_t>(m) * d + i];
  Expr trdu = Expr::constant(0.0);
  for (int k = 0; k < d; ++k) {
    Expr acc = uvec[k].diff(k);
    for (int m = 0; m < d; ++m) acc = acc + gamma.at(k, k, m) * uvec[m];
    trdu = trdu + acc;
  }
  Expr fexpr = (1.0 / d) * (4.0 * trsig2 + 2.0 * trdu);

  InducedData data;
  data.n2 = d;
  data.base_gamma = gamma.provider();
  data.base_omega = omega.provider();
  data.lambda = [lambda, d](const std::vector<double>& y, int ord) {
    VecJets out(d, ord);
    auto pt = jet_point(y, ord);
    Expr::JetCache cache;
    for (int j = 0; j < d; ++j) out.at(j) = lambda[j].eval_jet(pt, cache);
    return out;
  };
  data.sigma = [sig, d](const std::vector<double>& y, int ord) {
    MatJets out(d, ord);
    auto pt = jet_point(y, ord);
    Expr::JetCache cache;
    for (size_t n = 0; n < sig.size(); ++n)
      out.m[n] = sig[n].eval_jet(pt, cache);
    return out;
  };
  data.u = [uvec, d](const std::vector<double>& y, int ord) {
    VecJets out(d, ord);
    auto pt = jet_point(y, ord);
    Expr::JetCache cache;
    for (int i = 0; i < d; ++i) out.at(i) = uvec[i].eval_jet(pt, cache);
    return out;
  };
  data.f = [fexpr](const std::vector<double>& y, int ord) {
    auto pt = jet_point(y, ord);
    return fexpr.eval_jet(pt);
  };
  return data;
}

InducedData ricci_flat_special_data(const GammaProvider& gamma,
                                    const FormProvider& omega, int n2) {
  const double c_sig = -1.0 / (n2 + 2);
  const double c_u = 2.0 / (static_cast<double>(n2 + 2) * (n2 + 1));
  const double c_f = 2.0 / (static_cast<double>(n2 + 2) * (n2 + 2));
  const double c_rr = (n2 + 1.0) / (n2 + 2.0);
  const double c_fb = (n2 + 1.0) / (2.0 * (n2 + 2.0));

  InducedData data;
  data.n2 = n2;
  data.base_gamma = gamma;
  data.base_omega = omega;
  data.lambda = radial_potential(omega, n2);
  data.sigma = [gamma, omega, n2, c_sig](const std::vector<double>& y,
                                         int ord) {
    if (ord > 2)
      throw std::invalid_argument("trace-built data: order must be 0..2");
    auto inv = ricci_type_invariants(gamma, omega, y);
    MatJets out(n2, ord);
    for (size_t n = 0; n < out.m.size(); ++n)
      out.m[n] = c_sig * inv.rho.m[n].truncated(ord);
    return out;
  };
  // The vector field comes out of the pointwise solve at first order only;
  // its higher coefficients follow from the field equation
  //   d_k u^i = -c (rho^2)^i_k + f0 delta^i_k - G(i,k,m) u^m
  // applied once per extra order.
  data.u = [gamma, omega, n2, c_u, c_rr, c_fb](const std::vector<double>& y,
                                               int ord) {
    if (ord > 3)
      throw std::invalid_argument("trace-built data: order must be 0..3");
    auto inv = ricci_type_invariants(gamma, omega, y);
    const int target = ord;
    std::vector<Jet> ub(n2, Jet(n2, target));
    for (int i = 0; i < n2; ++i) {
      ub[i].val() = inv.u.at(i).val();
      if (target >= 1)
        for (int m = 0; m < n2; ++m) ub[i].g(m) = inv.u.at(i).g(m);
    }
    if (target >= 2) {
      ConnJets g2 = gamma(y, 2);
      std::vector<Jet> rho2(static_cast<size_t>(n2) * n2, Jet(n2, 2));
      for (int i = 0; i < n2; ++i)
        for (int k = 0; k < n2; ++k) {
          Jet acc(n2, 2);
          for (int m = 0; m < n2; ++m)
            acc += inv.rho.at(i, m) * inv.rho.at(m, k);
          rho2[static_cast<size_t>(i) * n2 + k] = acc;
        }
      Jet trrho2(n2, 2);
      for (int i = 0; i < n2; ++i)
        trrho2 += rho2[static_cast<size_t>(i) * n2 + i];
      Jet f0 = c_fb * (Jet::constant(n2, 2, inv.k) - trrho2);
      auto rhs = [&](int i, int k) {
        Jet acc = (-c_rr) * rho2[static_cast<size_t>(i) * n2 + k];
        if (i == k) acc += f0;
        for (int m = 0; m < n2; ++m) acc -= g2.at(i, k, m) * ub[m];
        return acc;
      };
      for (int pass = 2; pass <= target; ++pass) {
        std::vector<Jet> r(static_cast<size_t>(n2) * n2, Jet(n2, 1));
        for (int i = 0; i < n2; ++i)
          for (int k = 0; k < n2; ++k)
            r[static_cast<size_t>(i) * n2 + k] = rhs(i, k);
        if (pass == 2) {
          for (int i = 0; i < n2; ++i)
            for (int k = 0; k < n2; ++k)
              for (int m = 0; m < n2; ++m)
                ub[i].h(k, m) =
                    0.5 * (r[static_cast<size_t>(i) * n2 + k].g(m) +
                           r[static_cast<size_t>(i) * n2 + m].g(k));
        } else {
          for (int i = 0; i < n2; ++i) {
            for (int k = 0; k < n2; ++k)
              for (int m = 0; m < n2; ++m)
                for (int q = 0; q < n2; ++q)
                  ub[i].t(k, m, q) =
                      r[static_cast<size_t>(i) * n2 + k].h(m, q);
            Jet sym = ub[i];
            for (int k = 0; k < n2; ++k)
              for (int m = 0; m < n2; ++m)
                for (int q = 0; q < n2; ++q)
                  sym.t(k, m, q) =
                      (ub[i].t(k, m, q) + ub[i].t(k, q, m) +
                       ub[i].t(m, k, q) + ub[i].t(m, q, k) +
                       ub[i].t(q, k, m) + ub[i].t(q, m, k)) /
                      6.0;
            ub[i] = sym;
          }
        }
      }
    }
    VecJets out(n2, ord);
    for (int i = 0; i < n2; ++i) out.at(i) = c_u * ub[i];
    return out;
  };
  data.f = [gamma, omega, n2, c_f](const std::vector<double>& y, int ord) {
    if (ord > 2)
      throw std::invalid_argument("trace-built data: order must be 0..2");
    auto inv = ricci_type_invariants(gamma, omega, y);
    Jet tr(n2, 2);
    for (int i = 0; i < n2; ++i)
      for (int m = 0; m < n2; ++m) tr += inv.rho.at(i, m) * inv.rho.at(m, i);
    Jet f = c_f * (Jet::constant(n2, 2, inv.k) - tr);
    return f.truncated(ord);
  };
  return data;
}

namespace {

// Pointwise base quantities shared by the closed-form blocks.
struct BaseVals {
  int n2 = 0;
  std::vector<double> w, sv, shat, sig2, uv, wu, ds, duv, r0, ric, dfv;
  double fv = 0;

  double dmat(int j, int k, int m) const {
    // covariant building block of the mixed curvature rows
    double acc = ds[(static_cast<size_t>(j) * n2 + m) * n2 + k];
    if (m == j) acc += 0.5 * wu[k];
    acc -= 0.5 * w[static_cast<size_t>(j) * n2 + k] * uv[m];
    return acc;
  }
};

BaseVals base_values(const InducedData& data, const std::vector<double>& y) {
  BaseVals b;
  const int n2 = data.n2;
  b.n2 = n2;
  ConnJets g2 = data.base_gamma(y, 2);
  MatJets w = data.base_omega(y, 1);
  MatJets sig = data.sigma(y, 1);
  VecJets uu = data.u(y, 1);
  Jet ff = data.f(y, 1);
  Curv4 r0 = curvature(g2);
  MatJets ric = ricci(r0);
  auto dsj = nabla_11(sig, g2);
  auto duj = nabla_vec(uu, g2);

  auto sz2 = static_cast<size_t>(n2) * n2;
  b.w.resize(sz2);
  b.sv.resize(sz2);
  b.shat.resize(sz2);
  b.sig2.resize(sz2);
  b.ric.resize(sz2);
  b.duv.resize(sz2);
  b.uv.resize(n2);
  b.wu.resize(n2);
  b.dfv.resize(n2);
  b.ds.resize(sz2 * n2);
  b.r0.resize(sz2 * sz2);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) {
      b.w[static_cast<size_t>(i) * n2 + j] = w.at(i, j).val();
      b.sv[static_cast<size_t>(i) * n2 + j] = sig.at(i, j).val();
      b.ric[static_cast<size_t>(i) * n2 + j] = ric.at(i, j).val();
    }
  for (int i = 0; i < n2; ++i) {
    b.uv[i] = uu.at(i).val();
    b.dfv[i] = ff.g(i);
  }
  b.fv = ff.val();
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) {
      double sh = 0, s2 = 0;
      for (int m = 0; m < n2; ++m) {
        sh += b.w[static_cast<size_t>(i) * n2 + m] *
              b.sv[static_cast<size_t>(m) * n2 + j];
        s2 += b.sv[static_cast<size_t>(i) * n2 + m] *
              b.sv[static_cast<size_t>(m) * n2 + j];
      }
      b.shat[static_cast<size_t>(i) * n2 + j] = sh;
      b.sig2[static_cast<size_t>(i) * n2 + j] = s2;
    }
  for (int i = 0; i < n2; ++i) {
    double acc = 0;
    for (int m = 0; m < n2; ++m)
      acc += b.w[static_cast<size_t>(i) * n2 + m] * b.uv[m];
    b.wu[i] = acc;
  }
  for (size_t n = 0; n < b.ds.size(); ++n) b.ds[n] = dsj[n].val();
  for (int k = 0; k < n2; ++k)
    for (int i = 0; i < n2; ++i)
      b.duv[static_cast<size_t>(k) * n2 + i] =
          duj[static_cast<size_t>(k) * n2 + i].val();
  for (size_t n = 0; n < b.r0.size(); ++n) b.r0[n] = r0.R[n].val();
  return b;
}

void size_frame_curvature(FrameCurvature& fc, int n2) {
  fc.n2 = n2;
  auto s2 = static_cast<size_t>(n2) * n2;
  fc.xxx_h.assign(s2 * s2, 0.0);
  fc.xxx_e.assign(s2 * n2, 0.0);
  fc.xxx_s.assign(s2 * n2, 0.0);
  fc.xxe_h.assign(s2 * n2, 0.0);
  fc.xxe_e.assign(s2, 0.0);
  fc.xxe_s.assign(s2, 0.0);
  fc.xex_h.assign(s2 * n2, 0.0);
  fc.xex_e.assign(s2, 0.0);
  fc.xex_s.assign(s2, 0.0);
  fc.xee_h.assign(static_cast<size_t>(n2) * n2, 0.0);
  fc.xee_e.assign(n2, 0.0);
  fc.xee_s.assign(n2, 0.0);
}

}  // namespace

FrameCurvature closed_form_frame_curvature(const InducedData& data,
                                           const std::vector<double>& y,
                                           bool doubled_variant) {
  const int n2 = data.n2;
  BaseVals b = base_values(data, y);
  FrameCurvature fc;
  size_frame_curvature(fc, n2);
  const double dv = doubled_variant ? 2.0 : 1.0;
  auto wv = [&](int i, int j) { return b.w[static_cast<size_t>(i) * n2 + j]; };
  auto sv = [&](int i, int j) {
    return b.sv[static_cast<size_t>(i) * n2 + j];
  };
  auto sh = [&](int i, int j) {
    return b.shat[static_cast<size_t>(i) * n2 + j];
  };
  auto s2 = [&](int i, int j) {
    return b.sig2[static_cast<size_t>(i) * n2 + j];
  };
  auto du = [&](int k, int i) {
    return b.duv[static_cast<size_t>(k) * n2 + i];
  };
  auto r0 = [&](int m, int k, int i, int j) {
    return b.r0[((static_cast<size_t>(m) * n2 + k) * n2 + i) * n2 + j];
  };

  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) {
      for (int k = 0; k < n2; ++k) {
        for (int m = 0; m < n2; ++m) {
          double acc = r0(m, k, i, j) + 2.0 * wv(i, j) * sv(m, k) +
                       dv * (-wv(j, k) * sv(m, i) + wv(i, k) * sv(m, j));
          if (m == i) acc += dv * (-sh(j, k));
          if (m == j) acc += dv * sh(i, k);
          fc.xxx_h[((static_cast<size_t>(i) * n2 + j) * n2 + k) * n2 + m] =
              acc;
        }
        double accs = 0;
        for (int a = 0; a < n2; ++a)
          accs += wv(i, a) * b.dmat(j, k, a) - wv(j, a) * b.dmat(i, k, a);
        fc.xxx_s[(static_cast<size_t>(i) * n2 + j) * n2 + k] = accs;
      }
      for (int m = 0; m < n2; ++m)
        fc.xxe_h[(static_cast<size_t>(i) * n2 + j) * n2 + m] =
            2.0 * b.dmat(i, j, m) - 2.0 * b.dmat(j, i, m);
      double aij = 0.5 * b.fv * wv(i, j);
      double aji = 0.5 * b.fv * wv(j, i);
      for (int a = 0; a < n2; ++a) {
        aij -= wv(i, a) * (du(j, a) + 2.0 * s2(a, j));
        aji -= wv(j, a) * (du(i, a) + 2.0 * s2(a, i));
      }
      fc.xxe_s[static_cast<size_t>(i) * n2 + j] = aij - aji;
      for (int m = 0; m < n2; ++m)
        fc.xex_h[(static_cast<size_t>(i) * n2 + j) * n2 + m] =
            2.0 * b.dmat(i, j, m);
      double accx = 0.5 * b.fv * wv(i, j);
      for (int m = 0; m < n2; ++m)
        accx += wv(j, m) * (du(i, m) + 2.0 * s2(m, i));
      fc.xex_s[static_cast<size_t>(i) * n2 + j] = accx;
    }
  for (int i = 0; i < n2; ++i) {
    for (int m = 0; m < n2; ++m) {
      double acc = -2.0 * du(i, m) - 4.0 * s2(m, i);
      if (m == i) acc += b.fv;
      fc.xee_h[static_cast<size_t>(i) * n2 + m] = acc;
    }
    double accs = b.dfv[i];
    for (int m = 0; m < n2; ++m) accs += 4.0 * sh(i, m) * b.uv[m];
    fc.xee_s[i] = accs;
  }
  return fc;
}

namespace {

// Frame vectors at a lifted point and the machinery to contract the
// assembled curvature with them.
struct FrameAtPoint {
  int n2 = 0, big = 0;
  std::vector<std::vector<double>> vecs;  // X_1..X_{2n}, E, S
  std::vector<double> lamv;

  std::vector<double> expand(const std::vector<double>& w) const {
    std::vector<double> out(big, 0.0);
    double e = w[n2];
    for (int m = 0; m < n2; ++m) {
      out[m] = w[m];
      e += w[m] * lamv[m];
    }
    out[n2] = e;
    out[n2 + 1] = w[n2 + 1];
    return out;
  }
};

FrameAtPoint make_frame(const InducedData& data,
                        const std::vector<double>& y) {
  FrameAtPoint f;
  f.n2 = data.n2;
  f.big = data.n2 + 2;
  VecJets lam = data.lambda(y, 0);
  f.lamv.resize(f.n2);
  for (int i = 0; i < f.n2; ++i) f.lamv[i] = lam.at(i).val();
  f.vecs.assign(f.big, std::vector<double>(f.big, 0.0));
  for (int i = 0; i < f.n2; ++i) {
    f.vecs[i][i] = 1.0;
    f.vecs[i][f.n2] = -f.lamv[i];
  }
  f.vecs[f.n2][f.n2] = 1.0;
  f.vecs[f.n2 + 1][f.n2 + 1] = 1.0;
  return f;
}

std::vector<double> contract_curvature(const Curv4& r,
                                       const std::vector<double>& a,
                                       const std::vector<double>& bb,
                                       const std::vector<double>& c) {
  const int d = r.d;
  std::vector<double> out(d, 0.0);
  for (int p = 0; p < d; ++p) {
    if (a[p] == 0.0) continue;
    for (int q = 0; q < d; ++q) {
      if (bb[q] == 0.0) continue;
      for (int z = 0; z < d; ++z) {
        if (c[z] == 0.0) continue;
        const double coef = a[p] * bb[q] * c[z];
        for (int mu = 0; mu < d; ++mu)
          out[mu] += coef * r.at(mu, z, p, q).val();
      }
    }
  }
  return out;
}

}  // namespace

FrameCurvature numeric_frame_curvature(const InducedData& data,
                                       const std::vector<double>& y,
                                       double t0, double s0) {
  const int n2 = data.n2;
  auto gp = induced_connection(data);
  std::vector<double> xb = y;
  xb.push_back(t0);
  xb.push_back(s0);
  Curv4 r = curvature(gp(xb, 1));
  FrameAtPoint f = make_frame(data, y);

  FrameCurvature fc;
  size_frame_curvature(fc, n2);
  const auto& e = f.vecs[n2];
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) {
      for (int k = 0; k < n2; ++k) {
        auto w = f.expand(contract_curvature(r, f.vecs[i], f.vecs[j],
                                             f.vecs[k]));
        for (int m = 0; m < n2; ++m)
          fc.xxx_h[((static_cast<size_t>(i) * n2 + j) * n2 + k) * n2 + m] =
              w[m];
        fc.xxx_e[(static_cast<size_t>(i) * n2 + j) * n2 + k] = w[n2];
        fc.xxx_s[(static_cast<size_t>(i) * n2 + j) * n2 + k] = w[n2 + 1];
      }
      auto wxe = f.expand(contract_curvature(r, f.vecs[i], f.vecs[j], e));
      auto wex = f.expand(contract_curvature(r, f.vecs[i], e, f.vecs[j]));
      for (int m = 0; m < n2; ++m) {
        fc.xxe_h[(static_cast<size_t>(i) * n2 + j) * n2 + m] = wxe[m];
        fc.xex_h[(static_cast<size_t>(i) * n2 + j) * n2 + m] = wex[m];
      }
      fc.xxe_e[static_cast<size_t>(i) * n2 + j] = wxe[n2];
      fc.xxe_s[static_cast<size_t>(i) * n2 + j] = wxe[n2 + 1];
      fc.xex_e[static_cast<size_t>(i) * n2 + j] = wex[n2];
      fc.xex_s[static_cast<size_t>(i) * n2 + j] = wex[n2 + 1];
    }
  for (int i = 0; i < n2; ++i) {
    auto w = f.expand(contract_curvature(r, f.vecs[i], e, e));
    for (int m = 0; m < n2; ++m)
      fc.xee_h[static_cast<size_t>(i) * n2 + m] = w[m];
    fc.xee_e[i] = w[n2];
    fc.xee_s[i] = w[n2 + 1];
  }
  // blocks with the dilation direction as an argument must vanish
  double worst = 0;
  const int big = n2 + 2;
  for (int a = 0; a < big; ++a)
    for (int bidx = 0; bidx < big; ++bidx)
      for (int c = 0; c < big; ++c) {
        if (a != n2 + 1 && bidx != n2 + 1 && c != n2 + 1) continue;
        auto w = contract_curvature(r, f.vecs[a], f.vecs[bidx], f.vecs[c]);
        for (double x : w) worst = std::max(worst, std::abs(x));
      }
  fc.s_arg_max = worst;
  return fc;
}

FrameRicci closed_form_frame_ricci(const InducedData& data,
                                   const std::vector<double>& y) {
  const int n2 = data.n2;
  BaseVals b = base_values(data, y);
  FrameRicci out;
  out.n2 = n2;
  out.xx.assign(static_cast<size_t>(n2) * n2, 0.0);
  out.xe.assign(n2, 0.0);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j)
      out.xx[static_cast<size_t>(i) * n2 + j] =
          b.ric[static_cast<size_t>(i) * n2 + j] +
          (n2 + 2.0) * b.shat[static_cast<size_t>(i) * n2 + j];
  for (int i = 0; i < n2; ++i) {
    double div = 0;
    for (int m = 0; m < n2; ++m)
      div += b.ds[(static_cast<size_t>(m) * n2 + m) * n2 + i];
    out.xe[i] = -(n2 + 1.0) * b.wu[i] - 2.0 * div;
  }
  double trs2 = 0, trdu = 0;
  for (int i = 0; i < n2; ++i) {
    trs2 += b.sig2[static_cast<size_t>(i) * n2 + i];
    trdu += b.duv[static_cast<size_t>(i) * n2 + i];
  }
  out.ee = 4.0 * trs2 - n2 * b.fv + 2.0 * trdu;
  return out;
}

NumericFrameRicci numeric_frame_ricci(const InducedData& data,
                                      const std::vector<double>& y,
                                      double t0, double s0) {
  const int n2 = data.n2;
  const int big = n2 + 2;
  auto gp = induced_connection(data);
  std::vector<double> xb = y;
  xb.push_back(t0);
  xb.push_back(s0);
  MatJets ric = ricci(curvature(gp(xb, 1)));
  FrameAtPoint f = make_frame(data, y);
  auto pair = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (int p = 0; p < big; ++p) {
      if (a[p] == 0.0) continue;
      for (int q = 0; q < big; ++q)
        if (b[q] != 0.0) acc += a[p] * b[q] * ric.at(p, q).val();
    }
    return acc;
  };

  NumericFrameRicci out;
  out.frame.n2 = n2;
  out.frame.xx.assign(static_cast<size_t>(n2) * n2, 0.0);
  out.frame.xe.assign(n2, 0.0);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j)
      out.frame.xx[static_cast<size_t>(i) * n2 + j] =
          pair(f.vecs[i], f.vecs[j]);
  for (int i = 0; i < n2; ++i)
    out.frame.xe[i] = pair(f.vecs[i], f.vecs[n2]);
  out.frame.ee = pair(f.vecs[n2], f.vecs[n2]);
  double worst = 0;
  for (int a = 0; a < big; ++a) {
    worst = std::max(worst, std::abs(pair(f.vecs[a], f.vecs[n2 + 1])));
    worst = std::max(worst, std::abs(pair(f.vecs[n2 + 1], f.vecs[a])));
  }
  out.s_pair_max = worst;
  return out;
}

double ExtensionChecks::max() const {
  double m = form_scaling;
  m = std::max(m, form_flow);
  m = std::max(m, conn_flow);
  m = std::max(m, conn_dilation);
  return m;
}

ExtensionChecks check_extension_structure(const GammaProvider& gamma,
                                          const FormProvider& mu,
                                          const std::vector<double>& x) {
  const int big = static_cast<int>(x.size());
  const int ti = big - 2, si = big - 1;
  MatJets m = mu(x, 1);
  ConnJets g = gamma(x, 1);
  ExtensionChecks out;
  for (const Jet& j : m.m) {
    out.form_scaling =
        std::max(out.form_scaling, std::abs(j.g(si) - 2.0 * j.val()));
    out.form_flow = std::max(out.form_flow, std::abs(j.g(ti)));
  }
  for (const Jet& j : g.G) {
    out.conn_flow = std::max(out.conn_flow, std::abs(j.g(ti)));
    out.conn_dilation = std::max(out.conn_dilation, std::abs(j.g(si)));
  }
  return out;
}

ReducedBack reduce_back(const GammaProvider& gamma_p, const FormProvider& mu,
                        int n2) {
  ReducedBack rb;
  FormProvider mp = mu;
  GammaProvider gp = gamma_p;

  // Horizontal-lift coefficients against the two distinguished directions:
  // F_j = e_j + a_j e_t + b_j e_s with mu(F_j, e_t) = mu(F_j, e_s) = 0.
  auto lifts = [n2](const MatJets& m, std::vector<Jet>& a,
                    std::vector<Jet>& b) {
    const int ti = n2, si = n2 + 1;
    Jet inv_st = jet_inv(m.at(si, ti));
    Jet inv_ts = jet_inv(m.at(ti, si));
    a.resize(n2);
    b.resize(n2);
    for (int j = 0; j < n2; ++j) {
      b[j] = -(m.at(j, ti) * inv_st);
      a[j] = -(m.at(j, si) * inv_ts);
    }
  };

  rb.omega = [mp, n2, lifts](const std::vector<double>& y, int ord) {
    const int big = n2 + 2, ti = n2, si = n2 + 1;
    std::vector<double> xb(big, 0.0);
    for (int i = 0; i < n2; ++i) xb[i] = y[i];
    MatJets m = mp(xb, ord);
    std::vector<Jet> a, b;
    lifts(m, a, b);
    MatJets out(n2, ord);
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j) {
        Jet w = m.at(i, j);
        w += a[j] * m.at(i, ti) + b[j] * m.at(i, si);
        w += a[i] * m.at(ti, j) + b[i] * m.at(si, j);
        w += a[i] * a[j] * m.at(ti, ti) + a[i] * b[j] * m.at(ti, si);
        w += b[i] * a[j] * m.at(si, ti) + b[i] * b[j] * m.at(si, si);
        out.at(i, j) = jet_restrict(w, n2);
      }
    return out;
  };

  rb.gamma = [mp, gp, n2, lifts](const std::vector<double>& y, int ord) {
    if (ord < 0 || ord > 2)
      throw std::invalid_argument("reduce back: order must be 0..2");
    const int big = n2 + 2, ti = n2, si = n2 + 1;
    std::vector<double> xb(big, 0.0);
    for (int i = 0; i < n2; ++i) xb[i] = y[i];
    MatJets m = mp(xb, ord + 1);
    ConnJets g = gp(xb, ord);
    std::vector<Jet> a, b;
    lifts(m, a, b);
    auto fcomp = [&](int j, int c) -> Jet {
      if (c < n2) return Jet::constant(big, ord + 1, c == j ? 1.0 : 0.0);
      if (c == ti) return a[j];
      return b[j];
    };

    ConnJets out(n2, ord);
    for (int i = 0; i < n2; ++i)
      for (int j = 0; j < n2; ++j) {
        std::vector<Jet> dv(big, Jet(big, ord));
        for (int c = 0; c < big; ++c) {
          // derivative of the lift along the lift
          Jet acc = jet_partial(fcomp(j, c), i);
          acc += a[i].truncated(ord) * jet_partial(fcomp(j, c), ti);
          acc += b[i].truncated(ord) * jet_partial(fcomp(j, c), si);
          // connection applied to the pair of lifts
          const int ps[3] = {i, ti, si};
          const int qs[3] = {j, ti, si};
          for (int pi = 0; pi < 3; ++pi)
            for (int qi = 0; qi < 3; ++qi) {
              Jet term = g.at(c, ps[pi], qs[qi]);
              if (pi == 1) term = term * a[i];
              if (pi == 2) term = term * b[i];
              if (qi == 1) term = term * a[j];
              if (qi == 2) term = term * b[j];
              acc += term;
            }
          dv[c] = acc;
        }
        // project out the distinguished directions against the form
        Jet mu_de(big, ord);
        for (int c = 0; c < big; ++c) mu_de += dv[c] * m.at(c, ti);
        dv[si] -= mu_de / m.at(si, ti);
        Jet mu_ds(big, ord);
        for (int c = 0; c < big; ++c) mu_ds += dv[c] * m.at(c, si);
        dv[ti] -= mu_ds / m.at(ti, si);
        for (int k = 0; k < n2; ++k)
          out.at(k, i, j) = jet_restrict(dv[k], n2);
      }
    return out;
  };
  return rb;
}

}  // namespace sclab
