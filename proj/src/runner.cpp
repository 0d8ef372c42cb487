#include "sclab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <thread>

#include "sclab/connection_build.hpp"
#include "sclab/curvature.hpp"
#include "sclab/induction.hpp"
#include "sclab/koszul.hpp"
#include "sclab/reduction.hpp"
#include "sclab/ricci_type.hpp"
#include "sclab/twistor.hpp"
#include "sclab/wkb.hpp"

namespace sclab {

namespace {

double tol_or(const Scenario& s, double dflt) {
  return s.tolerance > 0 ? s.tolerance : dflt;
}

void add_row(Report& r, std::string name, double value, double bound,
             bool at_most = true) {
  CheckRow row;
  row.name = std::move(name);
  row.value = value;
  row.bound = bound;
  row.at_most = at_most;
  row.pass = at_most ? value <= bound : value >= bound;
  r.checks.push_back(std::move(row));
}

std::vector<double> random_box_point(Rng& rng, int d, double box) {
  std::vector<double> x(static_cast<size_t>(d));
  for (double& c : x) c = rng.uniform(-box, box);
  return x;
}

// Max-norm difference of two jets over shared coefficients.
double jet_diff(const Jet& a, const Jet& b) {
  const int d = a.dim();
  const int ord = std::min(a.order(), b.order());
  double m = std::abs(a.val() - b.val());
  if (ord >= 1)
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(a.g(i) - b.g(i)));
  if (ord >= 2)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        m = std::max(m, std::abs(a.h(i, j) - b.h(i, j)));
  return m;
}

double conn_diff(const ConnJets& a, const ConnJets& b) {
  double m = 0;
  const int d = a.d;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        m = std::max(m, jet_diff(a.at(i, k, j), b.at(i, k, j)));
  return m;
}

double mat_diff(const MatJets& a, const MatJets& b) {
  double m = 0;
  for (int i = 0; i < a.d; ++i)
    for (int j = 0; j < a.d; ++j)
      m = std::max(m, jet_diff(a.at(i, j), b.at(i, j)));
  return m;
}

double vec_abs_max(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double vec_diff_max(const std::vector<double>& a,
                    const std::vector<double>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Applies `body(point_index, local_maxima)` to every index, split into
// contiguous chunks across at most worker_cap() threads.  Each chunk
// accumulates into its own copy of the maxima vector; the copies are
// max-merged afterwards, so the result does not depend on the thread count.
std::vector<double> chunked_max(int n_points, int n_values,
                                const std::function<void(int, std::vector<double>&)>& body) {
  const int workers = std::max(1, std::min({worker_cap(), n_points}));
  std::vector<std::vector<double>> local(
      static_cast<size_t>(workers), std::vector<double>(n_values, 0.0));
  if (workers == 1) {
    for (int i = 0; i < n_points; ++i) body(i, local[0]);
    return local[0];
  }
  const int chunk = (n_points + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        const int lo = w * chunk;
        const int hi = std::min(n_points, lo + chunk);
        for (int i = lo; i < hi; ++i) body(i, local[static_cast<size_t>(w)]);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<double> merged(static_cast<size_t>(n_values), 0.0);
  for (const auto& l : local)
    for (int v = 0; v < n_values; ++v) merged[v] = std::max(merged[v], l[v]);
  return merged;
}

// ---------------------------------------------------------------------------

void run_connection_check(const Scenario& s, Report& rep) {
  const GammaProvider gp = s.gamma.provider();
  const FormProvider fp = s.omega.provider();
  const int d = s.dimension;

  Rng rng(s.seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<size_t>(s.samples));
  for (int i = 0; i < s.samples; ++i)
    pts.push_back(random_box_point(rng, d, s.box));

  enum {
    kTorsion, kNablaOmega, kBianchi, kBianchiAlt, kRicciPrime,
    kRicciSym, kEPartRicci, kWPartRicci, kIdempotent, kCount
  };
  auto maxima = chunked_max(s.samples, kCount, [&](int i, std::vector<double>& m) {
    const std::vector<double>& x = pts[static_cast<size_t>(i)];
    const IdentityReport idr = check_identities(gp, fp, x);
    m[kTorsion] = std::max(m[kTorsion], idr.torsion);
    m[kNablaOmega] = std::max(m[kNablaOmega], idr.nabla_omega);
    m[kBianchi] = std::max(m[kBianchi], idr.bianchi_cyclic);
    m[kBianchiAlt] = std::max(m[kBianchiAlt], idr.bianchi_alternation);
    m[kRicciPrime] = std::max(m[kRicciPrime], idr.ricci_prime);

    const ConnJets g = gp(x, 2);
    const MatJets w = fp(x, 2);
    const Curv4 r = curvature(g);
    const MatJets ric = ricci(r);
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b)
        m[kRicciSym] = std::max(
            m[kRicciSym], std::abs(ric.at(a, b).val() - ric.at(b, a).val()));
    const DecompositionCheck dc = check_decomposition(r, w);
    m[kEPartRicci] = std::max(m[kEPartRicci], dc.ricci_of_e_vs_r);
    m[kWPartRicci] = std::max(m[kWPartRicci], dc.ricci_of_w);
    m[kIdempotent] = std::max(m[kIdempotent], dc.idempotent);
  });

  const double t = tol_or(s, 1e-8);
  add_row(rep, "torsion: Gamma^i_kj = Gamma^i_jk", maxima[kTorsion], t);
  add_row(rep, "nabla omega = 0", maxima[kNablaOmega], t);
  add_row(rep, "first Bianchi: cyclic sum of R = 0", maxima[kBianchi], t);
  add_row(rep, "alternation operator kills the lowered curvature",
          maxima[kBianchiAlt], t);
  add_row(rep, "r' = -2r", maxima[kRicciPrime], t);
  add_row(rep, "r symmetric: r(a,b) = r(b,a)", maxima[kRicciSym], t);
  add_row(rep, "Ricci of the E-part = r", maxima[kEPartRicci], t);
  add_row(rep, "Ricci of the W-part = 0", maxima[kWPartRicci], t);
  add_row(rep, "E-part extraction is idempotent", maxima[kIdempotent], t);
}

void run_koszul(const Scenario& s, Report& rep) {
  const int d = s.dimension;
  Rng rng(s.seed);
  const double t = tol_or(s, 1e-12);
  for (const auto& [q, p] : s.degrees) {
    double aa = 0, ss = 0, anti = 0;
    for (int trial = 0; trial < s.samples; ++trial) {
      std::vector<double> tensor(qp_size(d, q, p));
      for (double& v : tensor) v = rng.uniform(-1.0, 1.0);
      tensor = symmetrize_p(alternate_q(tensor, d, q, p), d, q, p);
      if (p >= 2) {
        const auto a1 = koszul_a(tensor, d, q, p);
        aa = std::max(aa, vec_abs_max(koszul_a(a1, d, q + 1, p - 1)));
      }
      if (q >= 2) {
        const auto s1 = koszul_s(tensor, d, q, p);
        ss = std::max(ss, vec_abs_max(koszul_s(s1, d, q - 1, p + 1)));
      }
      const auto as = koszul_s(koszul_a(tensor, d, q, p), d, q + 1, p - 1);
      const auto sa = koszul_a(koszul_s(tensor, d, q, p), d, q - 1, p + 1);
      for (size_t i = 0; i < tensor.size(); ++i)
        anti = std::max(anti,
                        std::abs(as[i] + sa[i] - (q + p) * tensor[i]));
    }
    const std::string deg =
        " at (q,p)=(" + std::to_string(q) + "," + std::to_string(p) + ")";
    if (p >= 2) add_row(rep, "a^2 = 0" + deg, aa, t);
    if (q >= 2) add_row(rep, "s^2 = 0" + deg, ss, t);
    add_row(rep, "a s + s a = (p+q) id" + deg, anti, t);
  }
}

void run_reduce(const Scenario& s, Report& rep) {
  const int big = s.dimension;
  Rng rng(s.seed);
  std::vector<double> amat;
  if (s.generator_form == "round") {
    std::vector<double> id(static_cast<size_t>(big) * big, 0.0);
    for (int i = 0; i < big; ++i) id[static_cast<size_t>(i) * big + i] = 1.0;
    amat = sp_from_symmetric(id, big);
  } else if (s.generator_form == "random") {
    // Seeded positive-definite symmetric matrix (diagonally dominant), so
    // every nonzero basepoint lies in the generator's positive cone.
    std::vector<double> sym(static_cast<size_t>(big) * big, 0.0);
    const double c = s.generator_scale;
    for (int i = 0; i < big; ++i) {
      sym[static_cast<size_t>(i) * big + i] = rng.uniform(c, 2.0 * c);
      for (int j = i + 1; j < big; ++j) {
        const double v = rng.uniform(-c, c) / (2.0 * big);
        sym[static_cast<size_t>(i) * big + j] = v;
        sym[static_cast<size_t>(j) * big + i] = v;
      }
    }
    amat = sp_from_symmetric(sym, big);
  } else {
    amat = s.generator;
  }

  const ReducedChart chart = build_chart(amat, big, s.basepoint);
  const int n = chart.dim;

  double w_part = 0, preferred = 0, rho_r = 0, u_r = 0, f_r = 0;
  double grho = 0, gu = 0, k_lo = 0, k_hi = 0;
  for (int i = 0; i < s.samples; ++i) {
    const std::vector<double> y = random_box_point(rng, n, s.box);
    const ChartCertificate c = certify_chart(chart, y);
    w_part = std::max(w_part, c.rebuild_residual);
    preferred = std::max(preferred, c.preferred);
    rho_r = std::max(rho_r, c.rho_residual);
    u_r = std::max(u_r, c.u_residual);
    f_r = std::max(f_r, c.f_residual);
    grho = std::max(grho, c.grad_rho_residual);
    gu = std::max(gu, c.grad_u_residual);
    if (i == 0) k_lo = k_hi = c.k_value;
    k_lo = std::min(k_lo, c.k_value);
    k_hi = std::max(k_hi, c.k_value);
  }
  add_row(rep, "W-part of the descended curvature = 0", w_part, tol_or(s, 1e-7));
  add_row(rep, "preferred criterion: symmetrized nabla(tr rho) = 0", preferred,
          tol_or(s, 1e-7));
  add_row(rep, "Ricci endomorphism matches its generator projection", rho_r,
          tol_or(s, 1e-6));
  add_row(rep, "derived vector field matches its generator projection", u_r,
          tol_or(s, 1e-6));
  add_row(rep, "scalar invariant matches its generator projection", f_r,
          tol_or(s, 1e-6));
  add_row(rep, "nabla rho is carried by the derived vector field", grho,
          tol_or(s, 1e-6));
  add_row(rep, "nabla U is carried by the scalar invariant", gu,
          tol_or(s, 1e-6));
  add_row(rep, "quadratic invariant K constant across chart points",
          k_hi - k_lo, tol_or(s, 1e-6));
}

void run_twistor(const Scenario& s, Report& rep) {
  const GammaProvider gp = s.gamma.provider();
  const FormProvider fp = s.omega.provider();
  const int d = s.dimension;
  Rng rng(s.seed);

  double defect = 0;
  for (int i = 0; i < s.samples; ++i) {
    const std::vector<double> x = random_box_point(rng, d, s.box);
    defect = std::max(defect, connection_defect(gp, fp, x, s.structures, rng));
  }
  add_row(rep, "fibrewise holomorphy obstruction vanishes", defect,
          tol_or(s, 1e-9));

  const int rank = uniqueness_rank(d, s.structures, rng);
  add_row(rep, "cubic form determined by its fibre components: rank = dim S^3",
          rank, sym3_dim(d), /*at_most=*/false);

  // Torsion removal: perturb the connection by a constant antisymmetric
  // part, correct it, and measure what torsion remains.
  ConnJets probe = gp(std::vector<double>(static_cast<size_t>(d), 0.0), 0);
  std::vector<double> noise(static_cast<size_t>(d) * d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = k + 1; j < d; ++j) {
        const double v = 0.3 * rng.uniform(-1.0, 1.0);
        noise[(static_cast<size_t>(i) * d + k) * d + j] = v;
        noise[(static_cast<size_t>(i) * d + j) * d + k] = -v;
      }
  const GammaProvider torsionful = [gp, noise, d](const std::vector<double>& x,
                                                  int order) {
    ConnJets g = gp(x, order);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
          g.at(i, k, j) = g.at(i, k, j) +
                          noise[(static_cast<size_t>(i) * d + k) * d + j];
    return g;
  };
  const GammaProvider corrected = torsion_correct(torsionful, fp);
  double torsion = 0;
  for (int i = 0; i < std::min(s.samples, 5); ++i) {
    const std::vector<double> x = random_box_point(rng, d, s.box);
    torsion = std::max(torsion, torsion_max(corrected(x, 1)));
  }
  add_row(rep, "algebraic correction removes all torsion", torsion,
          tol_or(s, 1e-12));
}

InducedData build_induced(const Scenario& s) {
  return ricci_flat_expr_data(s.gamma, s.omega, s.lambda);
}

void run_induce(const Scenario& s, Report& rep) {
  const InducedData data = build_induced(s);
  const GammaProvider gp = induced_connection(data);
  const FormProvider mu = induced_form(data);
  const int n2 = s.dimension;
  Rng rng(s.seed);

  double ricci_h = 0, ricci_s = 0, blocks = 0, s_blocks = 0;
  double structure = 0, torsion = 0, nabla = 0;
  for (int i = 0; i < s.samples; ++i) {
    const std::vector<double> y = random_box_point(rng, n2, s.box);

    const NumericFrameRicci nr = numeric_frame_ricci(data, y);
    ricci_h = std::max({ricci_h, vec_abs_max(nr.frame.xx),
                        vec_abs_max(nr.frame.xe), std::abs(nr.frame.ee)});
    ricci_s = std::max(ricci_s, nr.s_pair_max);

    const FrameCurvature closed = closed_form_frame_curvature(data, y);
    const FrameCurvature numeric = numeric_frame_curvature(data, y);
    using Block = std::vector<double> FrameCurvature::*;
    for (Block pair :
         {&FrameCurvature::xxx_h, &FrameCurvature::xxx_e, &FrameCurvature::xxx_s,
          &FrameCurvature::xxe_h, &FrameCurvature::xxe_e, &FrameCurvature::xxe_s,
          &FrameCurvature::xex_h, &FrameCurvature::xex_e, &FrameCurvature::xex_s,
          &FrameCurvature::xee_h, &FrameCurvature::xee_e, &FrameCurvature::xee_s})
      blocks = std::max(blocks, vec_diff_max(closed.*pair, numeric.*pair));
    s_blocks = std::max(s_blocks, numeric.s_arg_max);

    std::vector<double> x = y;
    x.push_back(rng.uniform(-s.box, s.box));  // flow coordinate
    x.push_back(rng.uniform(-s.box, s.box));  // dilation coordinate
    structure = std::max(structure, check_extension_structure(gp, mu, x).max());
    const IdentityReport idr = check_identities(gp, mu, x);
    torsion = std::max(torsion, idr.torsion);
    nabla = std::max(nabla, idr.nabla_omega);
  }
  add_row(rep, "total-space Ricci = 0", ricci_h, tol_or(s, 1e-7));
  add_row(rep, "Ricci pairings with the dilation direction vanish", ricci_s,
          tol_or(s, 1e-9));
  add_row(rep, "closed-form curvature blocks match the generic engine", blocks,
          tol_or(s, 1e-6));
  add_row(rep, "curvature blocks with a dilation argument vanish", s_blocks,
          tol_or(s, 1e-9));
  add_row(rep, "coefficients flow-invariant and dilation-homogeneous",
          structure, tol_or(s, 1e-9));
  add_row(rep, "torsion = 0 on the total space", torsion, tol_or(s, 1e-9));
  add_row(rep, "nabla mu = 0 on the total space", nabla, tol_or(s, 1e-9));
}

void run_roundtrip(const Scenario& s, Report& rep) {
  const InducedData data = build_induced(s);
  const ReducedBack rb =
      reduce_back(induced_connection(data), induced_form(data), s.dimension);
  Rng rng(s.seed);
  double dg = 0, dw = 0;
  for (int i = 0; i < s.samples; ++i) {
    const std::vector<double> y = random_box_point(rng, s.dimension, s.box);
    dg = std::max(dg, conn_diff(rb.gamma(y, 2), data.base_gamma(y, 2)));
    dw = std::max(dw, mat_diff(rb.omega(y, 1), data.base_omega(y, 1)));
  }
  add_row(rep, "base connection recovered from the extension", dg,
          tol_or(s, 1e-7));
  add_row(rep, "base two-form recovered from the extension", dw,
          tol_or(s, 1e-7));
}

void run_wkb(const Scenario& s, Report& rep) {
  Rng rng(s.seed);

  // Kernel identities for the point symmetries.
  double involution = 0, law = 0;
  for (int i = 0; i < s.samples; ++i) {
    const SPoint x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const SPoint y{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const SPoint z{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const SPoint yy = symmetry(x, symmetry(x, y));
    involution = std::max({involution, std::abs(yy.a - y.a), std::abs(yy.l - y.l)});
    const SPoint lhs = symmetry(symmetry(x, y), z);
    const SPoint rhs = symmetry(x, symmetry(y, symmetry(x, z)));
    law = std::max({law, std::abs(lhs.a - rhs.a), std::abs(lhs.l - rhs.l)});
  }
  add_row(rep, "s_x(s_x(y)) = y", involution, tol_or(s, 1e-10));
  add_row(rep, "s_{s_x(y)} = s_x s_y s_x", law, tol_or(s, 1e-10));

  const AdmissibilityReport adm =
      check_admissible(KernelModel::kCurved, rng, s.samples, 1.5);
  add_row(rep, "S totally antisymmetric", adm.antisymmetry, tol_or(s, 1e-10));
  add_row(rep, "S invariant under each diagonal symmetry", adm.invariance,
          tol_or(s, 1e-10));
  add_row(rep, "S(x, s_x(y), z) = -S(x, y, z)", adm.reflection,
          tol_or(s, 1e-10));

  double fixed = 0;
  for (int i = 0; i < std::min(s.samples, 200); ++i) {
    const SPoint x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const SPoint y{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const SPoint z{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const PhiImage im = phi_map(KernelModel::kCurved, x, y, z);
    const SPoint w = symmetry(x, symmetry(y, symmetry(z, im.X)));
    fixed = std::max({fixed, std::abs(w.a - im.X.a), std::abs(w.l - im.X.l)});
  }
  add_row(rep, "median point fixed by the symmetry chain", fixed,
          tol_or(s, 1e-10));

  double amp = 0, fibre = 0;
  for (int i = 0; i < 100; ++i) {
    const SPoint x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const SPoint y{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const SPoint z{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const double root = std::sqrt(phase_jacobian(x, y, z)) / 4.0;
    const double a = amplitude(Amplitude::kJacobianRoot, x.a, y.a, z.a);
    amp = std::max(amp, std::abs(a - root) / root);
    const SPoint x2{x.a, rng.uniform(-2.0, 2.0)};
    const SPoint y2{y.a, rng.uniform(-2.0, 2.0)};
    const SPoint z2{z.a, rng.uniform(-2.0, 2.0)};
    fibre = std::max(fibre, std::abs(phase_jacobian(x2, y2, z2) -
                                     phase_jacobian(x, y, z)));
  }
  add_row(rep, "amplitude = sqrt(Jac)/4 (relative)", amp, tol_or(s, 1e-6));
  add_row(rep, "Jac independent of the fibre coordinates", fibre,
          tol_or(s, 1e-9));

  // Deformation sweep per Gaussian pair: quadratic residual decay with
  // node-doubling quadrature certification.
  const SPoint origin{0.0, 0.0};
  for (size_t pi = 0; pi < s.pairs.size(); ++pi) {
    const auto& [gu, gv] = s.pairs[pi];
    const SymbolFn u = gaussian(gu.center_a, gu.center_l, gu.width);
    const SymbolFn v = gaussian(gv.center_a, gv.center_l, gv.width);
    const double uv = u(0, 0) * v(0, 0);
    const double pb = poisson_bracket(u, v, origin);
    const StarGrid coarse{s.wkb_box, s.grid_a, s.grid_l};
    const StarGrid fine{s.wkb_box, 2 * s.grid_a, 2 * s.grid_l};
    const std::string tag = " (pair " + std::to_string(pi + 1) + ")";

    std::vector<double> lx, ly;
    for (const double th : s.thetas) {
      const std::complex<double> model(uv, -0.5 * th * pb);
      const auto sc = star_product(u, v, origin, th, coarse);
      const auto sf = star_product(u, v, origin, th, fine);
      const double err = std::abs(sf - model);
      const double refine = std::abs(sf - sc);
      char tname[64];
      std::snprintf(tname, sizeof tname, "refinement margin at theta=%g", th);
      add_row(rep, tname + tag, refine > 0 ? err / refine : 1e300, 10.0,
              /*at_most=*/false);
      lx.push_back(std::log(th));
      ly.push_back(std::log(err));
    }
    if (s.thetas.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(s.thetas.size());
      for (size_t k = 0; k < s.thetas.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      add_row(rep, "residual slope over the sweep" + tag, slope, 1.8,
              /*at_most=*/false);
    }
  }

  // Four-point alternation: exact for the flat kernel, obstructed for the
  // curved one.
  const double flat_defect =
      cocycle_defect(KernelModel::kFlat, rng, std::min(s.samples, 200), 1.0);
  const double curved_defect =
      cocycle_defect(KernelModel::kCurved, rng, std::min(s.samples, 200), 1.0);
  add_row(rep, "flat kernel four-point alternation = 0", flat_defect,
          tol_or(s, 1e-12));
  add_row(rep, "curved kernel four-point alternation obstructed",
          curved_defect, 1e-3, /*at_most=*/false);

  const SPoint qa{rng.uniform(-0.75, 0.75), rng.uniform(-0.75, 0.75)};
  const SPoint qb{rng.uniform(-0.75, 0.75), rng.uniform(-0.75, 0.75)};
  const SPoint qc{rng.uniform(-0.75, 0.75), rng.uniform(-0.75, 0.75)};
  const SPoint qd{rng.uniform(-0.75, 0.75), rng.uniform(-0.75, 0.75)};
  const BarycentreReport flat_bc =
      geometric_associativity(KernelModel::kFlat, qa, qb, qc, qd);
  add_row(rep, "flat barycentre certified on fresh samples",
          flat_bc.found ? 1.0 : 0.0, 1.0, /*at_most=*/false);
  add_row(rep, "flat barycentre identity residual", flat_bc.identity_residual,
          tol_or(s, 1e-8));
  const BarycentreReport curved_bc =
      geometric_associativity(KernelModel::kCurved, qa, qb, qc, qd);
  add_row(rep, "curved kernel: no anchor clears the obstruction",
          curved_bc.identity_residual, 1e-3, /*at_most=*/false);
}

}  // namespace

bool Report::pass() const {
  for (const CheckRow& c : checks)
    if (!c.pass) return false;
  return true;
}

Report run(const Scenario& s) {
  Report rep;
  rep.kind = s.kind;
  rep.seed = s.seed;
  rep.scenario = save_scenario(s);
  if (s.kind == "connection-check") run_connection_check(s, rep);
  else if (s.kind == "koszul") run_koszul(s, rep);
  else if (s.kind == "reduce") run_reduce(s, rep);
  else if (s.kind == "twistor") run_twistor(s, rep);
  else if (s.kind == "induce") run_induce(s, rep);
  else if (s.kind == "roundtrip") run_roundtrip(s, rep);
  else run_wkb(s, rep);
  return rep;
}

std::string emit_json(const Report& r) {
  nlohmann::json j;
  j["spec_version"] = kSpecVersion;
  j["kind"] = r.kind;
  j["seed"] = r.seed;
  j["scenario"] = r.scenario;
  j["pass"] = r.pass();
  nlohmann::json rows = nlohmann::json::array();
  for (const CheckRow& c : r.checks)
    rows.push_back(nlohmann::json{{"name", c.name},
                                  {"residual", c.value},
                                  {"tolerance", c.bound},
                                  {"direction", c.at_most ? "<=" : ">="},
                                  {"pass", c.pass}});
  j["checks"] = rows;
  return j.dump(2) + "\n";
}

std::string emit_csv(const Report& r) {
  std::string out = "name,residual,tolerance,direction,pass\n";
  char buf[64];
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  };
  for (const CheckRow& c : r.checks) {
    out += quote(c.name);
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,", c.value, c.bound);
    out += buf;
    out += c.at_most ? "<=" : ">=";
    out += c.pass ? ",true\n" : ",false\n";
  }
  return out;
}

}  // namespace sclab
