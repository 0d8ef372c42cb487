#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sclab/connection_build.hpp"
#include "sclab/curvature.hpp"
#include "sclab/fd.hpp"
#include "sclab/induction.hpp"
#include "sclab/reduction.hpp"
#include "sclab/rng.hpp"

using namespace sclab;

namespace {

Expr random_affine(int d, double c0, double c1, Rng& rng) {
  Expr e = Expr::constant(c0 * rng.uniform(-1.0, 1.0));
  for (int v = 0; v < d; ++v)
    e = e + Expr::constant(c1 * rng.uniform(-1.0, 1.0)) * Expr::coord(v);
  return e;
}

// A torsion-free connection preserving the standard form: raise a totally
// symmetric cubic with affine entries.
ExprConnection raised_symmetric_connection(int d, double scale, Rng& rng) {
  auto w = standard_form_matrix(d);
  std::vector<double> winv(w.size());
  for (size_t i = 0; i < w.size(); ++i) winv[i] = -w[i];
  std::vector<Expr> low(static_cast<size_t>(d) * d * d, Expr::constant(0.0));
  auto li = [d](int a, int b, int c) {
    return (static_cast<size_t>(a) * d + b) * d + c;
  };
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b)
      for (int c = b; c < d; ++c) {
        Expr e = random_affine(d, scale, 0.5 * scale, rng);
        int tri[3] = {a, b, c};
        static const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (const auto& pm : perm)
          low[li(tri[pm[0]], tri[pm[1]], tri[pm[2]])] = e;
      }
  ExprConnection conn(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        Expr acc = Expr::constant(0.0);
        for (int t = 0; t < d; ++t)
          acc = acc + low[li(k, j, t)] *
                          Expr::constant(winv[static_cast<size_t>(t) * d + i]);
        conn.at(i, k, j) = acc;
      }
  return conn;
}

ExprForm standard_expr_form(int d) {
  auto w = standard_form_matrix(d);
  ExprForm form(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      form.at(i, j) = Expr::constant(w[static_cast<size_t>(i) * d + j]);
  return form;
}

VecProvider expr_vec_provider(std::vector<Expr> v, int d) {
  return [v, d](const std::vector<double>& y, int ord) {
    VecJets out(d, ord);
    auto pt = jet_point(y, ord);
    Expr::JetCache cache;
    for (int i = 0; i < d; ++i) out.at(i) = v[i].eval_jet(pt, cache);
    return out;
  };
}

MatProvider expr_mat_provider(std::vector<Expr> m, int d) {
  return [m, d](const std::vector<double>& y, int ord) {
    MatJets out(d, ord);
    auto pt = jet_point(y, ord);
    Expr::JetCache cache;
    for (size_t n = 0; n < m.size(); ++n) out.m[n] = m[n].eval_jet(pt, cache);
    return out;
  };
}

JetProvider expr_jet_provider(Expr e) {
  return [e](const std::vector<double>& y, int ord) {
    auto pt = jet_point(y, ord);
    return e.eval_jet(pt);
  };
}

// Inducing data over a two-dimensional base with the standard form: a
// generic symplectic base connection, an endomorphism with symmetric
// lowered form, and unconstrained vector and scalar fields.
InducedData make_generic_data(Rng& rng) {
  const int d = 2;
  ExprConnection conn = raised_symmetric_connection(d, 0.3, rng);
  ExprForm form = standard_expr_form(d);
  auto w = standard_form_matrix(d);
  std::vector<double> winv(w.size());
  for (size_t i = 0; i < w.size(); ++i) winv[i] = -w[i];

  std::vector<Expr> slow(static_cast<size_t>(d) * d, Expr::constant(0.0));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Expr e = random_affine(d, 0.4, 0.2, rng);
      slow[static_cast<size_t>(a) * d + b] = e;
      slow[static_cast<size_t>(b) * d + a] = e;
    }
  std::vector<Expr> sig(static_cast<size_t>(d) * d, Expr::constant(0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Expr acc = Expr::constant(0.0);
      for (int t = 0; t < d; ++t)
        acc = acc + Expr::constant(winv[static_cast<size_t>(i) * d + t]) *
                        slow[static_cast<size_t>(t) * d + j];
      sig[static_cast<size_t>(i) * d + j] = acc;
    }
  std::vector<Expr> uvec = {random_affine(d, 0.5, 0.25, rng),
                            random_affine(d, 0.5, 0.25, rng)};
  Expr fexpr = random_affine(d, 0.6, 0.3, rng);

  InducedData data;
  data.n2 = d;
  data.base_gamma = conn.provider();
  data.base_omega = form.provider();
  data.lambda = expr_vec_provider(linear_potential(d), d);
  data.sigma = expr_mat_provider(sig, d);
  data.u = expr_vec_provider(uvec, d);
  data.f = expr_jet_provider(fexpr);
  return data;
}

double mat_jet_diff(const MatJets& a, const MatJets& b) {
  REQUIRE(a.d == b.d);
  int o = std::min(a.order, b.order);
  double worst = 0;
  for (size_t i = 0; i < a.m.size(); ++i) {
    const Jet& x = a.m[i];
    const Jet& y = b.m[i];
    worst = std::max(worst, std::abs(x.val() - y.val()));
    if (o >= 1)
      for (int m = 0; m < a.d; ++m)
        worst = std::max(worst, std::abs(x.g(m) - y.g(m)));
    if (o >= 2)
      for (int m = 0; m < a.d; ++m)
        for (int n = 0; n < a.d; ++n)
          worst = std::max(worst, std::abs(x.h(m, n) - y.h(m, n)));
  }
  return worst;
}

double conn_jet_diff(const ConnJets& a, const ConnJets& b) {
  REQUIRE(a.d == b.d);
  int o = std::min(a.order, b.order);
  double worst = 0;
  for (size_t i = 0; i < a.G.size(); ++i) {
    const Jet& x = a.G[i];
    const Jet& y = b.G[i];
    worst = std::max(worst, std::abs(x.val() - y.val()));
    if (o >= 1)
      for (int m = 0; m < a.d; ++m)
        worst = std::max(worst, std::abs(x.g(m) - y.g(m)));
    if (o >= 2)
      for (int m = 0; m < a.d; ++m)
        for (int n = 0; n < a.d; ++n)
          worst = std::max(worst, std::abs(x.h(m, n) - y.h(m, n)));
  }
  return worst;
}

double vec_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double frame_curvature_diff(const FrameCurvature& a,
                            const FrameCurvature& b) {
  double w = vec_abs_diff(a.xxx_h, b.xxx_h);
  w = std::max(w, vec_abs_diff(a.xxx_e, b.xxx_e));
  w = std::max(w, vec_abs_diff(a.xxx_s, b.xxx_s));
  w = std::max(w, vec_abs_diff(a.xxe_h, b.xxe_h));
  w = std::max(w, vec_abs_diff(a.xxe_e, b.xxe_e));
  w = std::max(w, vec_abs_diff(a.xxe_s, b.xxe_s));
  w = std::max(w, vec_abs_diff(a.xex_h, b.xex_h));
  w = std::max(w, vec_abs_diff(a.xex_e, b.xex_e));
  w = std::max(w, vec_abs_diff(a.xex_s, b.xex_s));
  w = std::max(w, vec_abs_diff(a.xee_h, b.xee_h));
  w = std::max(w, vec_abs_diff(a.xee_e, b.xee_e));
  w = std::max(w, vec_abs_diff(a.xee_s, b.xee_s));
  return w;
}

double frame_ricci_max(const FrameRicci& r) {
  double w = std::abs(r.ee);
  for (double v : r.xx) w = std::max(w, std::abs(v));
  for (double v : r.xe) w = std::max(w, std::abs(v));
  return w;
}

}  // namespace

TEST_CASE("radial integration produces an exact potential of a closed form") {
  // Constant standard form: the potential is linear and known in closed
  // form.
  for (int d : {2, 4}) {
    auto omega = standard_form(d);
    auto lam = radial_potential(omega, d);
    auto exact = expr_vec_provider(linear_potential(d), d);
    for (auto y : {std::vector<double>(d, 0.25), std::vector<double>(d, -0.4)}) {
      VecJets got = lam(y, 1);
      VecJets want = exact(y, 1);
      for (int j = 0; j < d; ++j) {
        CHECK(std::abs(got.at(j).val() - want.at(j).val()) < 1e-13);
        for (int i = 0; i < d; ++i)
          CHECK(std::abs(got.at(j).g(i) - want.at(j).g(i)) < 1e-13);
      }
    }
    VecJets origin = lam(std::vector<double>(d, 0.0), 0);
    for (int j = 0; j < d; ++j) CHECK(std::abs(origin.at(j).val()) < 1e-15);
  }

  // Variable-coefficient closed form in two dimensions.
  {
    int d = 2;
    ExprForm form(d);
    Expr g = Expr::exp(Expr::constant(0.3) * Expr::coord(0)) +
             Expr::constant(0.2) * Expr::coord(1);
    form.at(0, 1) = g;
    form.at(1, 0) = -g;
    auto omega = form.provider();
    auto lam = radial_potential(omega, d);
    for (auto y : {std::vector<double>{0.3, -0.5}, std::vector<double>{-0.7, 0.4}}) {
      VecJets lj = lam(y, 1);
      MatJets wj = omega(y, 0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          CHECK(std::abs(lj.at(j).g(i) - lj.at(i).g(j) -
                         wj.at(i, j).val()) < 1e-12);
    }
  }

  // Quotient-chart form: non-constant, closed by construction.
  {
    auto a = sp_from_symmetric(
        [] {
          std::vector<double> s(16, 0.0);
          s[0] = 1.0;
          s[5] = 1.6;
          s[10] = 0.7;
          s[15] = 1.2;
          return s;
        }(),
        4);
    std::vector<double> x0 = {0.9, -0.3, 0.4, 0.8};
    auto chart = build_chart(a, 4, x0);
    auto lam = radial_potential(chart.omega, 2);
    for (auto y : {std::vector<double>{0.1, -0.05}, std::vector<double>{-0.08, 0.12}}) {
      VecJets lj = lam(y, 1);
      MatJets wj = chart.omega(y, 0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(std::abs(lj.at(j).g(i) - lj.at(i).g(j) -
                         wj.at(i, j).val()) < 1e-9);
    }
  }
}

TEST_CASE("assembled extension satisfies the connection identities off the slice") {
  Rng rng(5001);
  InducedData data = make_generic_data(rng);
  auto gp = induced_connection(data);
  auto mp = induced_form(data);

  for (auto xb : {std::vector<double>{0.3, -0.2, 0.7, 0.25},
                  std::vector<double>{-0.1, 0.4, -0.3, -0.15}}) {
    auto rep = check_identities(gp, mp, xb);
    CHECK(rep.torsion < 1e-12);
    CHECK(rep.nabla_omega < 1e-12);
    CHECK(rep.bianchi_cyclic < 1e-11);
    CHECK(rep.bianchi_alternation < 1e-11);
    CHECK(rep.ricci_prime < 1e-11);

    auto checks = check_extension_structure(gp, mp, xb);
    CHECK(checks.max() < 1e-12);

    // Flow invariance and dilation weight, measured by displacement.
    const double eps = 1e-3;
    auto shifted = xb;
    shifted[2] += eps;
    CHECK(conn_jet_diff(gp(xb, 1), gp(shifted, 1)) < 1e-12);
    shifted = xb;
    shifted[3] += eps;
    MatJets mu0 = mp(xb, 0);
    MatJets mu1 = mp(shifted, 0);
    double scale = std::exp(2.0 * eps);
    for (size_t n = 0; n < mu0.m.size(); ++n)
      CHECK(std::abs(mu1.m[n].val() - scale * mu0.m[n].val()) < 1e-12);
  }

  CHECK_THROWS_AS(gp(std::vector<double>{0.1, 0.1, 0.0, 0.0}, 3),
                  std::invalid_argument);
}

TEST_CASE("closed-form curvature blocks match the assembled connection") {
  Rng rng(5002);
  InducedData data = make_generic_data(rng);
  std::vector<double> y = {0.3, -0.2};

  FrameCurvature numeric = numeric_frame_curvature(data, y, 0.4, -0.2);
  FrameCurvature closed = closed_form_frame_curvature(data, y);
  CHECK(frame_curvature_diff(closed, numeric) < 1e-10);
  CHECK(numeric.s_arg_max < 1e-11);
  CHECK(closed.s_arg_max == 0.0);

  // The variant with the doubled single-contraction terms does not
  // reproduce the assembled connection.
  FrameCurvature doubled = closed_form_frame_curvature(data, y, true);
  CHECK(vec_abs_diff(doubled.xxx_h, numeric.xxx_h) > 1e-3);

  // Position independence along the two extension directions.
  FrameCurvature at_origin = numeric_frame_curvature(data, y, 0.0, 0.0);
  CHECK(frame_curvature_diff(at_origin, numeric) < 1e-12);

  // Ricci blocks on the frame.
  FrameRicci rc = closed_form_frame_ricci(data, y);
  NumericFrameRicci rn = numeric_frame_ricci(data, y, 0.4, -0.2);
  CHECK(rn.s_pair_max < 1e-11);
  CHECK(vec_abs_diff(rc.xx, rn.frame.xx) < 1e-10);
  CHECK(vec_abs_diff(rc.xe, rn.frame.xe) < 1e-10);
  CHECK(std::abs(rc.ee - rn.frame.ee) < 1e-10);
  // Generic inducing data does not flatten the Ricci trace.
  CHECK(frame_ricci_max(rn.frame) > 1e-2);
}

TEST_CASE("trace-balanced data built symbolically flattens the Ricci trace") {
  Rng rng(5003);
  const int d = 2;
  ExprConnection conn = raised_symmetric_connection(d, 0.4, rng);
  ExprForm form = standard_expr_form(d);
  InducedData data = ricci_flat_expr_data(conn, form, linear_potential(d));

  // The inducing endomorphism is the scaled Ricci endomorphism.
  for (auto y : {std::vector<double>{0.3, -0.1}, std::vector<double>{-0.25, 0.2}}) {
    ConnJets g = data.base_gamma(y, 1);
    MatJets w = data.base_omega(y, 1);
    MatJets rho = solve_rho(w, ricci(curvature(g)));
    MatJets sig = data.sigma(y, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        CHECK(std::abs(sig.at(i, j).val() +
                       rho.at(i, j).val() / (d + 2.0)) < 1e-11);
  }

  auto gp = induced_connection(data);
  auto mp = induced_form(data);
  for (auto y : {std::vector<double>{0.3, -0.1}, std::vector<double>{-0.25, 0.2},
                 std::vector<double>{0.05, 0.35}}) {
    NumericFrameRicci rn = numeric_frame_ricci(data, y, 0.2, -0.3);
    CHECK(frame_ricci_max(rn.frame) < 1e-9);
    CHECK(rn.s_pair_max < 1e-10);
    FrameRicci rc = closed_form_frame_ricci(data, y);
    CHECK(frame_ricci_max(rc) < 1e-9);

    std::vector<double> xb = {y[0], y[1], 0.2, -0.3};
    CHECK(check_identities(gp, mp, xb).max() < 1e-10);
    CHECK(check_extension_structure(gp, mp, xb).max() < 1e-11);
  }

  // Coefficient jets of the assembled connection are available above the
  // value level.
  ConnJets g2 = gp(std::vector<double>{0.3, -0.1, 0.2, -0.3}, 2);
  CHECK(g2.order == 2);
  CHECK(conn_jet_diff(g2, gp(std::vector<double>{0.3, -0.1, 0.2, -0.3}, 1)) <
        1e-14);
}

TEST_CASE("trace-balanced data from a quotient chart flattens the Ricci trace") {
  auto a = sp_from_symmetric(
      [] {
        std::vector<double> s(16, 0.0);
        s[0] = 1.0;
        s[5] = 1.6;
        s[10] = 0.7;
        s[15] = 1.2;
        return s;
      }(),
      4);
  std::vector<double> x0 = {0.9, -0.3, 0.4, 0.8};
  auto chart = build_chart(a, 4, x0);
  InducedData data = ricci_flat_special_data(chart.gamma, chart.omega, 2);

  auto gp = induced_connection(data);
  auto mp = induced_form(data);
  for (auto y : {std::vector<double>{0.05, -0.1}, std::vector<double>{0.12, 0.08}}) {
    NumericFrameRicci rn = numeric_frame_ricci(data, y, 0.15, -0.1);
    CHECK(frame_ricci_max(rn.frame) < 1e-7);
    CHECK(rn.s_pair_max < 1e-8);
    FrameRicci rc = closed_form_frame_ricci(data, y);
    CHECK(frame_ricci_max(rc) < 1e-7);

    std::vector<double> xb = {y[0], y[1], 0.15, -0.1};
    CHECK(check_identities(gp, mp, xb).max() < 1e-8);
    CHECK(check_extension_structure(gp, mp, xb).max() < 1e-9);
  }

  // Bootstrapped higher coefficients of the vector and scalar data agree
  // with finite differences of their pointwise values.
  std::vector<double> y = {0.05, -0.1};
  VecJets uj = data.u(y, 2);
  for (int i = 0; i < 2; ++i) {
    auto f = [&data, i](const std::vector<double>& p) {
      return data.u(p, 0).at(i).val();
    };
    Jet fd = fd_jet(f, y, 2);
    CHECK(std::abs(uj.at(i).val() - fd.val()) < 1e-12);
    for (int m = 0; m < 2; ++m)
      CHECK(std::abs(uj.at(i).g(m) - fd.g(m)) < 1e-6);
    for (int m = 0; m < 2; ++m)
      for (int q = 0; q < 2; ++q)
        CHECK(std::abs(uj.at(i).h(m, q) - fd.h(m, q)) < 1e-5);
  }
  Jet fj = data.f(y, 2);
  auto fscalar = [&data](const std::vector<double>& p) {
    return data.f(p, 0).val();
  };
  Jet ffd = fd_jet(fscalar, y, 2);
  CHECK(std::abs(fj.val() - ffd.val()) < 1e-12);
  for (int m = 0; m < 2; ++m) CHECK(std::abs(fj.g(m) - ffd.g(m)) < 1e-6);
  for (int m = 0; m < 2; ++m)
    for (int q = 0; q < 2; ++q)
      CHECK(std::abs(fj.h(m, q) - ffd.h(m, q)) < 1e-5);
}

TEST_CASE("reduction from the total space recovers the base geometry") {
  Rng rng(5004);

  // Generic inducing data: the roundtrip is an algebraic identity.
  {
    InducedData data = make_generic_data(rng);
    auto rb = reduce_back(induced_connection(data), induced_form(data), 2);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> y = {rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
      CHECK(mat_jet_diff(rb.omega(y, 1), data.base_omega(y, 1)) < 1e-12);
      CHECK(conn_jet_diff(rb.gamma(y, 2), data.base_gamma(y, 2)) < 1e-10);
    }
    CHECK_THROWS_AS(rb.gamma(std::vector<double>{0.1, 0.1}, 3),
                    std::invalid_argument);
  }

  // Trace-balanced data over a quotient chart.
  {
    auto a = sp_from_symmetric(
        [] {
          std::vector<double> s(16, 0.0);
          s[0] = 1.0;
          s[5] = 1.6;
          s[10] = 0.7;
          s[15] = 1.2;
          return s;
        }(),
        4);
    std::vector<double> x0 = {0.9, -0.3, 0.4, 0.8};
    auto chart = build_chart(a, 4, x0);
    InducedData data = ricci_flat_special_data(chart.gamma, chart.omega, 2);
    auto rb = reduce_back(induced_connection(data), induced_form(data), 2);
    for (auto y : {std::vector<double>{0.06, -0.04}, std::vector<double>{-0.1, 0.12}}) {
      CHECK(mat_jet_diff(rb.omega(y, 1), chart.omega(y, 1)) < 1e-10);
      CHECK(conn_jet_diff(rb.gamma(y, 1), chart.gamma(y, 1)) < 1e-8);
    }
  }
}
