// Acceptance gate for the laboratory: twelve end-to-end criteria, one
// PASS/FAIL line each.  Exit code 0 only when every criterion holds.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "sclab/connection_build.hpp"
#include "sclab/curvature.hpp"
#include "sclab/induction.hpp"
#include "sclab/koszul.hpp"
#include "sclab/reduction.hpp"
#include "sclab/ricci_type.hpp"
#include "sclab/runner.hpp"
#include "sclab/scenario.hpp"
#include "sclab/twistor.hpp"
#include "sclab/wkb.hpp"

using namespace sclab;

namespace {

// --- shared constructions ---------------------------------------------------

std::vector<double> random_point(int d, Rng& rng, double box) {
  std::vector<double> x(static_cast<size_t>(d));
  for (auto& v : x) v = rng.uniform(-box, box);
  return x;
}

// Torsion-free polynomial connection with small symmetric coefficients.
ExprConnection random_symmetric_connection(int d, double scale, Rng& rng) {
  ExprConnection c(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = k; j < d; ++j) {
        Expr e = Expr::constant(scale * rng.uniform(-1.0, 1.0));
        for (int v = 0; v < d; ++v)
          e = e + Expr::constant(scale * rng.uniform(-1.0, 1.0)) *
                      Expr::coord(v);
        c.at(i, k, j) = e;
        c.at(i, j, k) = e;
      }
  return c;
}

// Closed, non-constant perturbation of the standard form: the exterior
// derivative of an explicit cubic potential.
ExprForm curved_standard_form(int d, double eps, Rng& rng) {
  std::vector<Expr> lambda(static_cast<size_t>(d), Expr::constant(0.0));
  auto wstd = standard_form_matrix(d);
  for (int j = 0; j < d; ++j) {
    Expr e = Expr::constant(0.0);
    for (int i = 0; i < d; ++i)
      e = e + Expr::constant(0.5 * wstd[static_cast<size_t>(i) * d + j]) *
                  Expr::coord(i);
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b)
        e = e + Expr::constant(eps * rng.uniform(-1.0, 1.0)) * Expr::coord(a) *
                    Expr::coord(b) * Expr::coord(j % d);
    lambda[static_cast<size_t>(j)] = e;
  }
  return exterior_derivative(lambda);
}

// Torsion-free connection preserving the standard form: raise one slot of a
// totally symmetric cubic with polynomial entries.
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
        Expr e = Expr::constant(scale * rng.uniform(-1.0, 1.0));
        for (int v = 0; v < d; ++v)
          e = e + Expr::constant(scale * rng.uniform(-1.0, 1.0)) *
                      Expr::coord(v);
        int idx[3] = {a, b, c};
        int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (auto& pm : perms)
          low[li(idx[pm[0]], idx[pm[1]], idx[pm[2]])] = e;
      }
  ExprConnection conn(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        Expr acc = Expr::constant(0.0);
        for (int t = 0; t < d; ++t)
          acc = acc + low[li(t, k, j)] *
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

ExprConnection cylinder_connection() {
  ExprConnection c(2);
  c.at(1, 0, 0) = -Expr::coord(1);
  return c;
}

size_t idx4(int d, int i, int z, int k, int l) {
  return ((static_cast<size_t>(i) * d + z) * d + k) * d + l;
}

// Algebraic curvature tensor: bidegree (2,2), first-identity kernel.
std::vector<double> random_algebraic_curvature(int d, Rng& rng) {
  std::vector<double> t(qp_size(d, 2, 2));
  for (auto& v : t) v = rng.uniform(-1.0, 1.0);
  t = alternate_q(t, d, 2, 2);
  t = symmetrize_p(t, d, 2, 2);
  t = project_ker_a22(t, d);
  return t;
}

double frame_ricci_max(const FrameRicci& r) {
  double m = std::abs(r.ee);
  for (double v : r.xx) m = std::max(m, std::abs(v));
  for (double v : r.xe) m = std::max(m, std::abs(v));
  return m;
}

double blocks_abs_max(const FrameCurvature& c) {
  using Block = std::vector<double> FrameCurvature::*;
  double m = c.s_arg_max;
  for (Block p : {&FrameCurvature::xxx_h, &FrameCurvature::xxx_e,
                  &FrameCurvature::xxx_s, &FrameCurvature::xxe_h,
                  &FrameCurvature::xxe_e, &FrameCurvature::xxe_s,
                  &FrameCurvature::xex_h, &FrameCurvature::xex_e,
                  &FrameCurvature::xex_s, &FrameCurvature::xee_h,
                  &FrameCurvature::xee_e, &FrameCurvature::xee_s})
    for (double v : c.*p) m = std::max(m, std::abs(v));
  return m;
}

double blocks_diff(const FrameCurvature& a, const FrameCurvature& b) {
  using Block = std::vector<double> FrameCurvature::*;
  double m = 0;
  for (Block p : {&FrameCurvature::xxx_h, &FrameCurvature::xxx_e,
                  &FrameCurvature::xxx_s, &FrameCurvature::xxe_h,
                  &FrameCurvature::xxe_e, &FrameCurvature::xxe_s,
                  &FrameCurvature::xex_h, &FrameCurvature::xex_e,
                  &FrameCurvature::xex_s, &FrameCurvature::xee_h,
                  &FrameCurvature::xee_e, &FrameCurvature::xee_s})
    for (size_t i = 0; i < (a.*p).size(); ++i)
      m = std::max(m, std::abs((a.*p)[i] - (b.*p)[i]));
  return m;
}

double jet_diff1(const Jet& a, const Jet& b) {
  double m = std::abs(a.val() - b.val());
  for (int i = 0; i < a.dim(); ++i)
    m = std::max(m, std::abs(a.g(i) - b.g(i)));
  return m;
}

// --- criterion harness ------------------------------------------------------

bool g_all_ok = true;

void criterion(int id, const char* desc, double budget_s,
               const std::function<bool()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (budget_s > 0 && secs >= budget_s) ok = false;
  std::printf("%s  %2d  %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, desc, secs);
  if (!note.empty()) std::fprintf(stderr, "  criterion %d threw: %s\n", id,
                                  note.c_str());
  if (!ok) g_all_ok = false;
}

}  // namespace

int main() {
  criterion(1, "construction: symplectized charts in dims 2, 4, 6 stay parallel",
            10.0, [] {
    Rng rng(9001);
    double worst = 0, variation = 0;
    for (int d : {2, 4, 6}) {
      ExprConnection base = random_symmetric_connection(d, 0.15, rng);
      ExprForm form = curved_standard_form(d, 0.05, rng);
      auto gamma = symplectize(base.provider(), form.provider());
      auto omega = form.provider();
      MatJets w0 = omega(std::vector<double>(static_cast<size_t>(d), 0.0), 0);
      for (int t = 0; t < 100; ++t) {
        auto x = random_point(d, rng, 0.7);
        ConnJets g = gamma(x, 0);
        MatJets w = omega(x, 1);
        worst = std::max({worst, torsion_max(g), nabla_omega_max(g, w)});
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            variation = std::max(
                variation, std::abs(w.at(i, j).val() - w0.at(i, j).val()));
      }
    }
    return worst < 1e-9 && variation > 1e-4;  // the form really varies
  });

  criterion(2, "curvature identities hold on every connection in the suite",
            30.0, [] {
    Rng rng(9002);
    struct Case {
      GammaProvider gamma;
      FormProvider omega;
      int d;
      double box;
    };
    std::vector<Case> cases;
    for (int d : {2, 4, 6}) {
      ExprConnection base = random_symmetric_connection(d, 0.15, rng);
      ExprForm form = curved_standard_form(d, 0.05, rng);
      cases.push_back(
          {symplectize(base.provider(), form.provider()), form.provider(), d,
           0.6});
    }
    cases.push_back({canonical_symmetric_connection(
                         hyperbolic_cylinder_symmetry(), 2),
                     standard_expr_form(2).provider(), 2, 0.6});
    {
      std::vector<double> id(16, 0.0);
      for (int i = 0; i < 4; ++i) id[static_cast<size_t>(i) * 4 + i] = 1.0;
      auto chart = build_chart(sp_from_symmetric(id, 4), 4,
                               {0.9, -0.3, 0.4, 0.8});
      cases.push_back({chart.gamma, chart.omega, chart.dim, 0.2});
    }
    {
      InducedData data = ricci_flat_expr_data(
          cylinder_connection(), standard_expr_form(2), linear_potential(2));
      cases.push_back({induced_connection(data), induced_form(data), 4, 0.3});
    }

    double worst = 0;
    for (const Case& c : cases) {
      for (int t = 0; t < 4; ++t) {
        auto x = random_point(c.d, rng, c.box);
        worst = std::max(worst, check_identities(c.gamma, c.omega, x).max());
        ConnJets g = c.gamma(x, 1);
        MatJets w = c.omega(x, 1);
        Curv4 r = curvature(g);
        MatJets ric = ricci(r);
        for (int a = 0; a < c.d; ++a)
          for (int b = a + 1; b < c.d; ++b)
            worst = std::max(worst, std::abs(ric.at(a, b).val() -
                                             ric.at(b, a).val()));
        DecompositionCheck dc = check_decomposition(r, w);
        worst = std::max({worst, dc.ricci_of_e_vs_r, dc.ricci_of_w,
                          dc.idempotent});
      }
    }
    return worst < 1e-8;
  });

  criterion(3, "Koszul operators: a^2 = s^2 = 0 and a s + s a = (p+q) id, exactly",
            0.0, [] {
    Rng rng(9003);
    double worst = 0;
    for (int d : {2, 4})
      for (int q = 1; q <= std::min(3, d); ++q)
        for (int p = 1; q + p <= 4; ++p)
          for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> t(qp_size(d, q, p));
            for (auto& v : t) v = rng.uniform(-1.0, 1.0);
            t = symmetrize_p(alternate_q(t, d, q, p), d, q, p);
            if (p >= 2) {
              auto a2 = koszul_a(koszul_a(t, d, q, p), d, q + 1, p - 1);
              for (double v : a2) worst = std::max(worst, std::abs(v));
            }
            if (q >= 2) {
              auto s2 = koszul_s(koszul_s(t, d, q, p), d, q - 1, p + 1);
              for (double v : s2) worst = std::max(worst, std::abs(v));
            }
            auto as = koszul_s(koszul_a(t, d, q, p), d, q + 1, p - 1);
            auto sa = koszul_a(koszul_s(t, d, q, p), d, q - 1, p + 1);
            for (size_t i = 0; i < t.size(); ++i)
              worst = std::max(worst,
                               std::abs(as[i] + sa[i] - (q + p) * t[i]));
          }
    return worst < 1e-12;
  });

  criterion(4, "reduction charts certify their descended geometry (N = 4 and 6)",
            60.0, [] {
    Rng rng(9004);
    double cert = 0, wnorm = 0, pref = 0, kspread = 0;
    for (int big : {4, 6}) {
      std::vector<double> bp(static_cast<size_t>(big));
      const double pat[6] = {0.9, -0.3, 0.4, 0.8, -0.5, 0.7};
      for (int i = 0; i < big; ++i) bp[static_cast<size_t>(i)] = pat[i];
      for (int which = 0; which < 2; ++which) {
        // The chart needs its basepoint inside the positive cone of the
        // symmetric matrix, so the random draw stays diagonally dominant.
        std::vector<double> sym(static_cast<size_t>(big) * big, 0.0);
        if (which == 0) {
          for (int i = 0; i < big; ++i)
            sym[static_cast<size_t>(i) * big + i] = 1.0;
        } else {
          for (int i = 0; i < big; ++i) {
            sym[static_cast<size_t>(i) * big + i] = rng.uniform(0.8, 1.6);
            for (int j = i + 1; j < big; ++j) {
              const double v = rng.uniform(-0.1, 0.1);
              sym[static_cast<size_t>(i) * big + j] = v;
              sym[static_cast<size_t>(j) * big + i] = v;
            }
          }
        }
        auto chart = build_chart(sp_from_symmetric(sym, big), big, bp);
        double klo = 0, khi = 0;
        for (int t = 0; t < 20; ++t) {
          auto y = random_point(chart.dim, rng, 0.25);
          ChartCertificate c = certify_chart(chart, y);
          wnorm = std::max(wnorm, c.rebuild_residual);
          pref = std::max(pref, c.preferred);
          cert = std::max({cert, c.rho_residual, c.u_residual, c.f_residual,
                           c.grad_rho_residual, c.grad_u_residual});
          if (t == 0) klo = khi = c.k_value;
          klo = std::min(klo, c.k_value);
          khi = std::max(khi, c.k_value);
        }
        kspread = std::max(kspread, khi - klo);
      }
    }
    return wnorm < 1e-7 && pref < 1e-7 && cert < 1e-6 && kspread < 1e-6;
  });

  criterion(5, "curvature rebuilt from the Ricci endomorphism on Ricci-type data",
            0.0, [] {
    Rng rng(9005);
    double worst = 0;
    // Descended chart connections are Ricci type by construction.
    for (int big : {4, 6}) {
      std::vector<double> id(static_cast<size_t>(big) * big, 0.0);
      for (int i = 0; i < big; ++i) id[static_cast<size_t>(i) * big + i] = 1.0;
      std::vector<double> bp(static_cast<size_t>(big));
      const double pat[6] = {0.9, -0.3, 0.4, 0.8, -0.5, 0.7};
      for (int i = 0; i < big; ++i) bp[static_cast<size_t>(i)] = pat[i];
      auto chart = build_chart(sp_from_symmetric(id, big), big, bp);
      for (int t = 0; t < 5; ++t)
        worst = std::max(
            worst,
            certify_chart(chart, random_point(chart.dim, rng, 0.25))
                .rebuild_residual);
    }
    // Every two-dimensional symplectic connection is Ricci type.
    auto gamma = cylinder_connection().provider();
    auto omega = standard_expr_form(2).provider();
    for (int t = 0; t < 10; ++t)
      worst = std::max(
          worst, ricci_type_invariants(gamma, omega, random_point(2, rng, 0.5))
                     .rebuild_residual);
    return worst < 1e-7;
  });

  criterion(6, "induction flattens Ricci; flat total space iff Ricci-type base",
            60.0, [] {
    Rng rng(9006);
    // Trace-balanced extension over a base whose curvature is not pure
    // Ricci part: the Ricci trace vanishes upstairs, the curvature does not.
    ExprConnection conn = raised_symmetric_connection(4, 0.3, rng);
    InducedData generic = ricci_flat_expr_data(conn, standard_expr_form(4),
                                               linear_potential(4));
    double ricci_up = 0, match = 0, zero_blocks = 0, magnitude = 0;
    for (int t = 0; t < 2; ++t) {
      auto y = random_point(4, rng, 0.3);
      NumericFrameRicci nr = numeric_frame_ricci(generic, y);
      ricci_up = std::max({ricci_up, frame_ricci_max(nr.frame),
                           nr.s_pair_max});
      FrameCurvature cf = closed_form_frame_curvature(generic, y);
      FrameCurvature nf = numeric_frame_curvature(generic, y, 0.0, 0.0);
      match = std::max(match, blocks_diff(cf, nf));
      zero_blocks = std::max(zero_blocks, nf.s_arg_max);
      magnitude = std::max(magnitude, blocks_abs_max(nf));
    }
    if (!(ricci_up < 1e-7 && magnitude > 1e-2)) return false;

    // Over a Ricci-type base the whole extension is flat.
    InducedData flat = ricci_flat_expr_data(
        cylinder_connection(), standard_expr_form(2), linear_potential(2));
    double flat_mag = 0;
    for (int t = 0; t < 3; ++t) {
      auto y = random_point(2, rng, 0.3);
      FrameCurvature cf = closed_form_frame_curvature(flat, y);
      FrameCurvature nf = numeric_frame_curvature(flat, y, 0.0, 0.0);
      match = std::max(match, blocks_diff(cf, nf));
      zero_blocks = std::max(zero_blocks, nf.s_arg_max);
      flat_mag = std::max(flat_mag, blocks_abs_max(nf));
    }
    return flat_mag < 1e-6 && match < 1e-6 && zero_blocks < 1e-9;
  });

  criterion(7, "roundtrip: reduce-back recovers the base connection and form",
            0.0, [] {
    Rng rng(9007);
    double worst = 0;
    for (int d : {2, 4}) {
      InducedData data =
          d == 2 ? ricci_flat_expr_data(cylinder_connection(),
                                        standard_expr_form(2),
                                        linear_potential(2))
                 : ricci_flat_expr_data(raised_symmetric_connection(4, 0.3, rng),
                                        standard_expr_form(4),
                                        linear_potential(4));
      ReducedBack rb =
          reduce_back(induced_connection(data), induced_form(data), d);
      for (int t = 0; t < 25; ++t) {
        auto y = random_point(d, rng, 0.3);
        ConnJets ga = rb.gamma(y, 1), gb = data.base_gamma(y, 1);
        for (int i = 0; i < d; ++i)
          for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
              worst = std::max(worst, jet_diff1(ga.at(i, k, j), gb.at(i, k, j)));
        MatJets wa = rb.omega(y, 1), wb = data.base_omega(y, 1);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            worst = std::max(worst, jet_diff1(wa.at(i, j), wb.at(i, j)));
      }
    }
    return worst < 1e-7;
  });

  criterion(8, "twistor: fibre obstruction detects exactly the trace-free part",
            0.0, [] {
    Rng rng(9008);
    auto gamma = cylinder_connection().provider();
    auto omega = standard_expr_form(2).provider();
    double defect = 0;
    for (int t = 0; t < 10; ++t)
      defect = std::max(defect, connection_defect(gamma, omega,
                                                  random_point(2, rng, 0.5),
                                                  50, rng));
    if (!(defect < 1e-9)) return false;

    // A unit-size trace-free curvature must be visible to some fibre.
    const int d = 4;
    auto w = standard_form_matrix(d);
    auto rlow = random_algebraic_curvature(d, rng);
    auto rten = raise_lowered_curvature(rlow, w, d);
    Curv4 curv(d, 0);
    MatJets wj(d, 0);
    for (int i = 0; i < d; ++i)
      for (int z = 0; z < d; ++z)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            curv.at(i, z, k, l) =
                Jet::constant(d, 0, rten[idx4(d, i, z, k, l)]);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        wj.at(a, b) = Jet::constant(d, 0, w[static_cast<size_t>(a) * d + b]);
    MatJets ric = ricci(curv);
    Curv4 epart = ricci_part(ric, solve_rho(wj, ric), wj);
    std::vector<double> wten(rten.size());
    double wmax = 0;
    for (int i = 0; i < d; ++i)
      for (int z = 0; z < d; ++z)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            wten[idx4(d, i, z, k, l)] =
                rten[idx4(d, i, z, k, l)] - epart.at(i, z, k, l).val();
            wmax = std::max(wmax, std::abs(wten[idx4(d, i, z, k, l)]));
          }
    for (auto& v : wten) v /= wmax;  // unit max-norm
    double wdefect = 0;
    for (int t = 0; t < 50; ++t)
      wdefect = std::max(wdefect,
                         integrability_defect(
                             wten, d, random_compatible_j(w, d, 0.4, rng)));
    if (!(wdefect > 1e-3)) return false;

    if (uniqueness_rank(2, 50, rng) != sym3_dim(2)) return false;
    if (uniqueness_rank(4, 50, rng) != sym3_dim(4)) return false;

    // Torsion removal drives an injected antisymmetric part to zero.
    std::vector<double> noise(8, 0.0);
    for (int i = 0; i < 2; ++i) {
      const double v = 0.3 * rng.uniform(-1.0, 1.0);
      noise[(static_cast<size_t>(i) * 2 + 0) * 2 + 1] = v;
      noise[(static_cast<size_t>(i) * 2 + 1) * 2 + 0] = -v;
    }
    GammaProvider torsionful = [gamma, noise](const std::vector<double>& x,
                                              int order) {
      ConnJets g = gamma(x, order);
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
          for (int j = 0; j < 2; ++j)
            g.at(i, k, j) =
                g.at(i, k, j) + noise[(static_cast<size_t>(i) * 2 + k) * 2 + j];
      return g;
    };
    GammaProvider corrected = torsion_correct(torsionful, omega);
    double torsion = 0;
    for (int t = 0; t < 5; ++t)
      torsion = std::max(torsion,
                         torsion_max(corrected(random_point(2, rng, 0.5), 1)));
    return torsion < 1e-12;
  });

  criterion(9, "kernel identities of the point symmetries, phase, and amplitude",
            20.0, [] {
    Rng rng(9009);
    std::vector<Expr> sym = hyperbolic_cylinder_symmetry();
    double invol = 0, law = 0, symp = 0, fixed = 0;
    for (int t = 0; t < 1000; ++t) {
      const SPoint x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      const SPoint y{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      const SPoint z{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      const SPoint yy = symmetry(x, symmetry(x, y));
      invol = std::max({invol, std::abs(yy.a - y.a), std::abs(yy.l - y.l)});
      const SPoint lhs = symmetry(symmetry(x, y), z);
      const SPoint rhs = symmetry(x, symmetry(y, symmetry(x, z)));
      law = std::max({law, std::abs(lhs.a - rhs.a), std::abs(lhs.l - rhs.l)});
      // Area preservation of y -> s_x(y), differentiated through the
      // expression form of the same symmetry map.
      std::vector<Jet> c = {Jet::constant(4, 1, x.a), Jet::constant(4, 1, x.l),
                            Jet::coordinate(4, 1, 2, y.a),
                            Jet::coordinate(4, 1, 3, y.l)};
      Jet s0 = sym[0].eval_jet(c), s1 = sym[1].eval_jet(c);
      symp = std::max({symp,
                       std::abs(s0.g(2) * s1.g(3) - s0.g(3) * s1.g(2) - 1.0),
                       std::abs(s0.val() - symmetry(x, y).a),
                       std::abs(s1.val() - symmetry(x, y).l)});
      const SPoint p = triple_fixed_point(KernelModel::kCurved, x, y, z);
      const SPoint q = symmetry(x, symmetry(y, symmetry(z, p)));
      fixed = std::max({fixed, std::abs(q.a - p.a), std::abs(q.l - p.l)});
    }
    if (!(invol < 1e-10 && law < 1e-10 && symp < 1e-10 && fixed < 1e-10))
      return false;

    AdmissibilityReport adm =
        check_admissible(KernelModel::kCurved, rng, 1000, 1.5);
    if (!(adm.max() < 1e-10)) return false;

    double amp = 0, fibre = 0;
    for (int t = 0; t < 100; ++t) {
      const SPoint x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      const SPoint y{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      const SPoint z{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      const double root = std::sqrt(phase_jacobian(x, y, z)) / 4.0;
      amp = std::max(amp,
                     std::abs(amplitude(Amplitude::kJacobianRoot, x.a, y.a,
                                        z.a) -
                              root) /
                         root);
      const SPoint x2{x.a, rng.uniform(-2.0, 2.0)};
      const SPoint y2{y.a, rng.uniform(-2.0, 2.0)};
      const SPoint z2{z.a, rng.uniform(-2.0, 2.0)};
      fibre = std::max(fibre, std::abs(phase_jacobian(x2, y2, z2) -
                                       phase_jacobian(x, y, z)));
    }
    return amp < 1e-6 && fibre < 1e-9;
  });

  criterion(10, "deformation residual decays quadratically with certified quadrature",
            300.0, [] {
    struct PairCase {
      SymbolFn u, v;
      double box;
    };
    const std::vector<PairCase> pairs = {
        {gaussian(0.30, 0.30, 0.50), gaussian(-0.30, -0.30, 0.50), 4.10},
        {gaussian(0.35, 0.30, 0.50), gaussian(-0.30, -0.30, 0.50), 4.15},
    };
    const std::vector<double> thetas = {0.4, 0.2, 0.1, 0.05};
    const SPoint origin{0.0, 0.0};
    for (const PairCase& pc : pairs) {
      const double uv = pc.u(0, 0) * pc.v(0, 0);
      const double pb = poisson_bracket(pc.u, pc.v, origin);
      const StarGrid coarse{pc.box, 200, 256};
      const StarGrid fine{pc.box, 400, 512};
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (const double th : thetas) {
        const std::complex<double> model(uv, -0.5 * th * pb);
        const auto sc = star_product(pc.u, pc.v, origin, th, coarse);
        const auto sf = star_product(pc.u, pc.v, origin, th, fine);
        const double err = std::abs(sf - model);
        const double refine = std::abs(sf - sc);
        if (!(err > 10.0 * refine)) return false;
        sx += std::log(th);
        sy += std::log(err);
        sxx += std::log(th) * std::log(th);
        sxy += std::log(th) * std::log(err);
      }
      const double n = static_cast<double>(thetas.size());
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      if (!(slope >= 1.8)) return false;
    }
    return true;
  });

  criterion(11, "flat kernel is cocyclic with a barycentre; curved kernel is not",
            10.0, [] {
    Rng rng(9011);
    const double flat = cocycle_defect(KernelModel::kFlat, rng, 200, 1.0);
    const double curved = cocycle_defect(KernelModel::kCurved, rng, 200, 1.0);
    const BarycentreReport bc = geometric_associativity(
        KernelModel::kFlat, {0.31, -0.42}, {-0.25, 0.17}, {0.52, 0.33},
        {-0.11, -0.58});
    return flat < 1e-12 && curved > 1e-3 && bc.found &&
           bc.probe_residual < 1e-10 && bc.identity_residual < 1e-8;
  });

  criterion(12, "identical scenarios and seeds yield byte-identical reports",
            0.0, [] {
    for (const char* name : {"hyperbolic_cylinder.json", "round_reduction.json",
                             "koszul_degrees.json"}) {
      const Scenario s =
          load_scenario(std::string(SCLAB_FIXTURES) + "/" + name);
      const Report r1 = run(s);
      const Report r2 = run(s);
      if (emit_json(r1) != emit_json(r2)) return false;
      if (emit_csv(r1) != emit_csv(r2)) return false;
    }
    // The worker cap must not leak into the bytes either.
    const Scenario s = load_scenario(std::string(SCLAB_FIXTURES) +
                                     "/hyperbolic_cylinder.json");
    ::setenv("SCLAB_THREADS", "1", 1);
    const std::string one = emit_json(run(s));
    ::setenv("SCLAB_THREADS", "6", 1);
    const std::string six = emit_json(run(s));
    ::unsetenv("SCLAB_THREADS");
    return one == six;
  });

  return g_all_ok ? 0 : 1;
}
