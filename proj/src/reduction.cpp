#include "sclab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sclab/curvature.hpp"
#include "sclab/ricci_type.hpp"

namespace sclab {

namespace {

size_t idx(int i, int j, int n) { return static_cast<size_t>(i) * n + j; }

std::vector<double> matvec(const std::vector<double>& m, int n,
                           const std::vector<double>& v) {
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += m[idx(i, j, n)] * v[j];
  return r;
}

}  // namespace

double pair_omega(const std::vector<double>& w, int n,
                  const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += w[idx(i, j, n)] * u[i] * v[j];
  return s;
}

std::vector<double> sigma_project(const std::vector<double>& amat, int big,
                                  const std::vector<double>& v) {
  auto w = standard_form_matrix(big);
  double q = pair_omega(w, big, v, matvec(amat, big, v));
  if (q <= 0)
    throw std::invalid_argument("sigma_project: point not in the positive cone");
  std::vector<double> out(v);
  double s = 1.0 / std::sqrt(q);
  for (auto& c : out) c *= s;
  return out;
}

std::vector<double> random_sp(int d, double scale, Rng& rng) {
  // Generator W^{-1} S with S symmetric keeps the form invariant.
  std::vector<double> s(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      s[idx(i, j, d)] = s[idx(j, i, d)] = scale * rng.uniform(-1.0, 1.0);
  return mat_exp(sp_from_symmetric(s, d), d);
}

std::vector<double> sp_from_symmetric(const std::vector<double>& s, int d) {
  auto w = standard_form_matrix(d);
  // W^{-1} = -W for the standard form.
  std::vector<double> a(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0;
      for (int k = 0; k < d; ++k) acc += -w[idx(i, k, d)] * s[idx(k, j, d)];
      a[idx(i, j, d)] = acc;
    }
  return a;
}

ReducedChart build_chart(const std::vector<double>& amat, int big,
                         const std::vector<double>& x0_raw) {
  if (big < 4 || big % 2 != 0)
    throw std::invalid_argument("build_chart: ambient dimension");
  ReducedChart chart;
  chart.big = big;
  chart.dim = big - 2;
  chart.amat = amat;
  auto w = standard_form_matrix(big);
  chart.x0 = sigma_project(amat, big, x0_raw);
  auto ax0 = matvec(amat, big, chart.x0);

  // Horizontal projection at the base point: remove the components along
  // x0 and A x0 using the pairing.
  auto proj = [&](const std::vector<double>& v) {
    double ca = pair_omega(w, big, v, ax0);   // coefficient of x0
    double cx = pair_omega(w, big, v, chart.x0);
    std::vector<double> r(v);
    for (int i = 0; i < big; ++i) r[i] += -ca * chart.x0[i] + cx * ax0[i];
    return r;
  };

  // Symplectic pairing-driven pivoting on the projected ambient basis.
  std::vector<std::vector<double>> pool;
  for (int i = 0; i < big; ++i) {
    std::vector<double> e(big, 0.0);
    e[i] = 1.0;
    auto p = proj(e);
    double n2 = 0;
    for (double c : p) n2 += c * c;
    if (n2 > 1e-12) pool.push_back(p);
  }
  int half = chart.dim / 2;
  std::vector<std::vector<double>> es, fs;
  for (int pair = 0; pair < half; ++pair) {
    // Choose the two pool vectors with the strongest pairing.
    double best = 0;
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < pool.size(); ++i)
      for (size_t j = i + 1; j < pool.size(); ++j) {
        double p = std::abs(pair_omega(w, big, pool[i], pool[j]));
        if (p > best) {
          best = p;
          bi = i;
          bj = j;
        }
      }
    if (best < 1e-10)
      throw std::runtime_error("build_chart: frame pivoting degenerated");
    auto e = pool[bi];
    auto f = pool[bj];
    double p = pair_omega(w, big, e, f);
    for (auto& c : f) c /= p;  // now pairing(e, f) = 1
    // Normalize the pair scale for conditioning.
    double ne = std::sqrt(std::inner_product(e.begin(), e.end(), e.begin(), 0.0));
    for (auto& c : e) c /= ne;
    for (auto& c : f) c *= ne;
    es.push_back(e);
    fs.push_back(f);
    std::vector<std::vector<double>> next;
    for (size_t t = 0; t < pool.size(); ++t) {
      if (t == bi || t == bj) continue;
      auto v = pool[t];
      double vf = pair_omega(w, big, v, f);
      double ve = pair_omega(w, big, v, e);
      for (int c = 0; c < big; ++c) v[c] += -vf * e[c] + ve * f[c];
      double n2 = 0;
      for (double c : v) n2 += c * c;
      if (n2 > 1e-12) next.push_back(v);
    }
    pool = std::move(next);
  }
  chart.frame.insert(chart.frame.end(), es.begin(), es.end());
  chart.frame.insert(chart.frame.end(), fs.begin(), fs.end());

  // Symbolic chart chain in the quotient coordinates y_1..y_dim:
  //   c(y) = x0 + sum y_k frame_k,   x(y) = c / sqrt(w(c, A c)).
  int dim = chart.dim;
  std::vector<Expr> c(big, Expr::constant(0.0));
  for (int a = 0; a < big; ++a) {
    Expr e = Expr::constant(chart.x0[a]);
    for (int k = 0; k < dim; ++k)
      e = e + Expr::constant(chart.frame[k][a]) * Expr::coord(k);
    c[a] = e;
  }
  auto apply_a = [&](const std::vector<Expr>& v) {
    std::vector<Expr> r(big, Expr::constant(0.0));
    for (int i = 0; i < big; ++i) {
      Expr acc = Expr::constant(0.0);
      for (int j = 0; j < big; ++j) {
        double aij = amat[idx(i, j, big)];
        if (aij != 0.0) acc = acc + Expr::constant(aij) * v[j];
      }
      r[i] = acc;
    }
    return r;
  };
  auto pair_expr = [&](const std::vector<Expr>& u, const std::vector<Expr>& v) {
    Expr acc = Expr::constant(0.0);
    for (int i = 0; i < big; ++i)
      for (int j = 0; j < big; ++j) {
        double wij = w[idx(i, j, big)];
        if (wij != 0.0) acc = acc + Expr::constant(wij) * u[i] * v[j];
      }
    return acc;
  };

  auto ac = apply_a(c);
  Expr q = pair_expr(c, ac);
  Expr invsq = Expr::constant(1.0) / Expr::sqrt(q);
  chart.x.assign(big, Expr::constant(0.0));
  for (int a = 0; a < big; ++a) chart.x[a] = c[a] * invsq;
  auto ax = apply_a(chart.x);

  // Horizontal frame: F_i = d_i x + w(d_i x, x) A x.
  std::vector<std::vector<Expr>> dx(dim,
                                    std::vector<Expr>(big, Expr::constant(0.0)));
  for (int i = 0; i < dim; ++i)
    for (int a = 0; a < big; ++a) dx[i][a] = chart.x[a].diff(i);
  chart.fvec.assign(dim, std::vector<Expr>(big, Expr::constant(0.0)));
  std::vector<Expr> si(dim, Expr::constant(0.0));  // w(d_i x, x)
  for (int i = 0; i < dim; ++i) {
    si[i] = pair_expr(dx[i], chart.x);
    for (int a = 0; a < big; ++a)
      chart.fvec[i][a] = dx[i][a] + si[i] * ax[a];
  }

  // Flow-invariant covariant derivative, projected horizontally:
  //   G_ij = d_i F_j + w(d_i x, x) A F_j - w(A F_i, F_j) x + w(F_i, F_j) A x.
  std::vector<std::vector<Expr>> af(dim);
  for (int i = 0; i < dim; ++i) af[i] = apply_a(chart.fvec[i]);
  std::vector<std::vector<std::vector<Expr>>> gder(
      dim, std::vector<std::vector<Expr>>(
               dim, std::vector<Expr>(big, Expr::constant(0.0))));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Expr caf = pair_expr(af[i], chart.fvec[j]);
      Expr cff = pair_expr(chart.fvec[i], chart.fvec[j]);
      for (int a = 0; a < big; ++a)
        gder[i][j][a] = chart.fvec[j][a].diff(i) + si[i] * af[j][a] -
                        caf * chart.x[a] + cff * ax[a];
    }

  // Descended two-form: entries w(F_i, F_j).
  ExprForm wred(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      wred.at(i, j) = pair_expr(chart.fvec[i], chart.fvec[j]);
  chart.omega = wred.provider();

  // Connection provider: evaluate the frame and derivative expressions as
  // jets, then expand G_ij over (F_1..F_dim, A x, x).
  auto xs = chart.x;
  auto fvecs = chart.fvec;
  auto axs = ax;
  chart.gamma = [big, dim, xs, fvecs, axs, gder](const std::vector<double>& y,
                                                 int ord) {
    auto pt = jet_point(y, ord);
    Expr::JetCache cache;
    std::vector<Jet> m(static_cast<size_t>(big) * big,
                       Jet::constant(dim, ord, 0.0));
    for (int a = 0; a < big; ++a) {
      for (int k = 0; k < dim; ++k)
        m[idx(a, k, big)] = fvecs[k][a].eval_jet(pt, cache);
      m[idx(a, dim, big)] = axs[a].eval_jet(pt, cache);
      m[idx(a, dim + 1, big)] = xs[a].eval_jet(pt, cache);
    }
    JetLu lu(m, big);
    ConnJets g(dim, ord);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        std::vector<Jet> rhs(big);
        for (int a = 0; a < big; ++a) rhs[a] = gder[i][j][a].eval_jet(pt, cache);
        auto coef = lu.solve(rhs);
        double leak = std::max(std::abs(coef[dim].val()),
                               std::abs(coef[dim + 1].val()));
        if (leak > 1e-6)
          throw std::runtime_error("reduced connection: derivative not tangent");
        for (int k = 0; k < dim; ++k) g.at(k, i, j) = coef[k];
      }
    return g;
  };
  return chart;
}

ChartCertificate certify_chart(const ReducedChart& chart,
                               const std::vector<double>& y) {
  int big = chart.big, dim = chart.dim;
  auto w = standard_form_matrix(big);
  int n = dim / 2;
  double c1 = 2.0 * (n + 1);            // 2n + 2
  double c2 = c1 * (dim + 1);           // (2n+2)(2n+1)

  ChartCertificate cert;
  auto inv = ricci_type_invariants(chart.gamma, chart.omega, y);
  cert.grad_rho_residual = inv.grad_rho_residual;
  cert.grad_u_residual = inv.grad_u_residual;
  cert.rebuild_residual = inv.rebuild_residual;
  cert.k_value = inv.k;
  cert.preferred = preferred_residual(chart.gamma, chart.omega, y);

  // Numeric chart data at y.
  Expr::ValCache cache;
  std::vector<double> x(big);
  for (int a = 0; a < big; ++a) x[a] = chart.x[a].eval(y, cache);
  std::vector<std::vector<double>> fr(dim, std::vector<double>(big));
  for (int i = 0; i < dim; ++i)
    for (int a = 0; a < big; ++a) fr[i][a] = chart.fvec[i][a].eval(y, cache);
  auto ax = matvec(chart.amat, big, x);
  auto a2x = matvec(chart.amat, big, ax);

  auto hproj = [&](const std::vector<double>& v) {
    double ca = pair_omega(w, big, v, ax);
    double cx = pair_omega(w, big, v, x);
    std::vector<double> r(v);
    for (int i = 0; i < big; ++i) r[i] += -ca * x[i] + cx * ax[i];
    return r;
  };

  // Expand a horizontal ambient vector over the frame (F, A x, x).
  std::vector<double> m(static_cast<size_t>(big) * big, 0.0);
  for (int a = 0; a < big; ++a) {
    for (int k = 0; k < dim; ++k) m[idx(a, k, big)] = fr[k][a];
    m[idx(a, dim, big)] = ax[a];
    m[idx(a, dim + 1, big)] = x[a];
  }
  std::vector<Jet> mj(m.size());
  for (size_t t = 0; t < m.size(); ++t) mj[t] = Jet::constant(1, 0, m[t]);
  JetLu lu(mj, big);
  auto expand = [&](const std::vector<double>& v) {
    std::vector<Jet> rhs(big);
    for (int a = 0; a < big; ++a) rhs[a] = Jet::constant(1, 0, v[a]);
    auto sol = lu.solve(rhs);
    std::vector<double> out(dim);
    for (int k = 0; k < dim; ++k) out[k] = sol[k].val();
    return out;
  };

  // Ricci endomorphism against the projected generator.
  for (int i = 0; i < dim; ++i) {
    auto afi = hproj(matvec(chart.amat, big, fr[i]));
    auto coef = expand(afi);
    for (int k = 0; k < dim; ++k) {
      double want = -c1 * coef[k];
      cert.rho_residual = std::max(
          cert.rho_residual, std::abs(inv.rho.at(k, i).val() - want));
    }
  }

  // Derived vector field against the projected square of the generator.
  auto pa2x = hproj(a2x);
  auto ucoef = expand(pa2x);
  for (int k = 0; k < dim; ++k) {
    double want = -c2 * ucoef[k];
    cert.u_residual =
        std::max(cert.u_residual, std::abs(inv.u.at(k).val() - want));
  }

  // Scalar against the pairing of the generator powers.
  double fwant = c2 * pair_omega(w, big, a2x, ax);
  cert.f_residual = std::abs(inv.f - fwant);
  return cert;
}

std::vector<double> model_generator(const std::vector<double>& rho0,
                                    const std::vector<double>& u0, double f0,
                                    int dim) {
  int n = dim / 2;
  int big = dim + 2;
  double cu = 2.0 * (n + 1) * (2 * n + 1);
  double cr = 2.0 * (n + 1);
  auto ws = standard_form_matrix(dim);

  // Local ordering (a1, a2, b_1..b_n, c_1..c_n) with the pairing of
  // (a1, a2) standard; the block structure is pinned by requiring the
  // generator to be infinitesimally symplectic and to project onto the
  // prescribed data.
  std::vector<double> local(static_cast<size_t>(big) * big, 0.0);
  auto L = [&](int r, int c) -> double& { return local[idx(r, c, big)]; };
  double fh = f0 / cu;
  std::vector<double> uh(dim);
  for (int i = 0; i < dim; ++i) uh[i] = u0[i] / cu;
  // Corner block on (a1, a2).
  L(0, 1) = fh;
  L(1, 0) = 1.0;
  // Top-right block: first row carries minus the lowered uh.
  for (int j = 0; j < dim; ++j) {
    double low = 0;
    for (int m = 0; m < dim; ++m) low += uh[m] * ws[idx(m, j, dim)];
    L(0, 2 + j) = -low;
  }
  // Bottom-left block: second column is -uh.
  for (int i = 0; i < dim; ++i) L(2 + i, 1) = -uh[i];
  // Bottom-right block: -rho0 / (2n + 2).
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      L(2 + i, 2 + j) = -rho0[idx(i, j, dim)] / cr;

  // Permute (a1, a2, b, c) into the global ordering where a1 -> 0,
  // b_i -> i, a2 -> n+1, c_i -> n+1+i.
  std::vector<int> to_global(big);
  to_global[0] = 0;
  to_global[1] = n + 1;
  for (int i = 0; i < n; ++i) {
    to_global[2 + i] = 1 + i;
    to_global[2 + n + i] = n + 2 + i;
  }
  std::vector<double> out(static_cast<size_t>(big) * big, 0.0);
  for (int r = 0; r < big; ++r)
    for (int c = 0; c < big; ++c)
      out[idx(to_global[r], to_global[c], big)] = local[idx(r, c, big)];
  return out;
}

}  // namespace sclab
