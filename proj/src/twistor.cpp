#include "sclab/twistor.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

#include "sclab/curvature.hpp"
#include "sclab/reduction.hpp"

namespace sclab {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using cd = std::complex<double>;

RowMat to_eigen(const std::vector<double>& m, int d) {
  return Eigen::Map<const RowMat>(m.data(), d, d);
}

std::vector<double> from_eigen(const RowMat& m) {
  std::vector<double> out(static_cast<size_t>(m.rows()) * m.cols());
  Eigen::Map<RowMat>(out.data(), m.rows(), m.cols()) = m;
  return out;
}

double pair_w(const std::vector<double>& w, int d, const std::vector<double>& u,
              const std::vector<double>& v) {
  double s = 0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      s += u[i] * w[static_cast<size_t>(i) * d + k] * v[k];
  return s;
}

}  // namespace

std::vector<double> darboux_basis(const std::vector<double>& w, int d) {
  if (d % 2 != 0 || d <= 0) throw std::invalid_argument("darboux: bad dimension");
  int n = d / 2;
  std::vector<std::vector<double>> pool;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    pool.push_back(e);
  }
  std::vector<std::vector<double>> es, fs;
  for (int step = 0; step < n; ++step) {
    int bi = -1, bj = -1;
    double best = 0;
    for (size_t i = 0; i < pool.size(); ++i)
      for (size_t k = i + 1; k < pool.size(); ++k) {
        double p = std::abs(pair_w(w, d, pool[i], pool[k]));
        if (p > best) {
          best = p;
          bi = static_cast<int>(i);
          bj = static_cast<int>(k);
        }
      }
    if (best < 1e-12) throw std::runtime_error("darboux: degenerate form");
    auto e = pool[bi];
    auto f = pool[bj];
    double ne = 0;
    for (double c : e) ne += c * c;
    ne = std::sqrt(ne);
    for (auto& c : e) c /= ne;
    double p = pair_w(w, d, e, f);
    for (auto& c : f) c /= p;
    std::vector<std::vector<double>> next;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (static_cast<int>(i) == bi || static_cast<int>(i) == bj) continue;
      auto v = pool[i];
      double cf = pair_w(w, d, v, f);
      double ce = pair_w(w, d, v, e);
      for (int c = 0; c < d; ++c) v[c] += -cf * e[c] + ce * f[c];
      next.push_back(std::move(v));
    }
    pool = std::move(next);
    es.push_back(std::move(e));
    fs.push_back(std::move(f));
  }
  std::vector<double> basis(static_cast<size_t>(d) * d, 0.0);
  for (int a = 0; a < n; ++a)
    for (int r = 0; r < d; ++r) {
      basis[static_cast<size_t>(r) * d + a] = es[a][r];
      basis[static_cast<size_t>(r) * d + n + a] = fs[a][r];
    }
  return basis;
}

std::vector<double> random_compatible_j(const std::vector<double>& w, int d,
                                        double scale, Rng& rng) {
  auto basis = darboux_basis(w, d);
  auto g = random_sp(d, scale, rng);
  int n = d / 2;
  RowMat j0 = RowMat::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    j0(i, n + i) = -1.0;
    j0(n + i, i) = 1.0;
  }
  RowMat ge = to_eigen(g, d);
  RowMat le = to_eigen(basis, d);
  RowMat jmat = le * (ge * j0 * ge.inverse()) * le.inverse();
  return from_eigen(jmat);
}

std::vector<std::complex<double>> holomorphy_obstruction(
    const std::vector<double>& rten, int d, const std::vector<double>& j,
    const std::vector<double>& u, const std::vector<double>& v,
    const std::vector<double>& z) {
  auto minus_project = [&](const std::vector<double>& x) {
    std::vector<cd> out(d);
    for (int r = 0; r < d; ++r) {
      double jr = 0;
      for (int c = 0; c < d; ++c) jr += j[static_cast<size_t>(r) * d + c] * x[c];
      out[r] = 0.5 * cd(x[r], jr);
    }
    return out;
  };
  auto cu = minus_project(u);
  auto cv = minus_project(v);
  auto cz = minus_project(z);
  std::vector<cd> rv(d, cd(0, 0));
  for (int i = 0; i < d; ++i) {
    cd acc(0, 0);
    for (int zz = 0; zz < d; ++zz)
      for (int k = 0; k < d; ++k) {
        cd partial(0, 0);
        for (int l = 0; l < d; ++l)
          partial +=
              rten[((static_cast<size_t>(i) * d + zz) * d + k) * d + l] * cv[l];
        acc += partial * cu[k] * cz[zz];
      }
    rv[i] = acc;
  }
  std::vector<cd> out(d);
  for (int r = 0; r < d; ++r) {
    cd jr(0, 0);
    for (int c = 0; c < d; ++c) jr += j[static_cast<size_t>(r) * d + c] * rv[c];
    out[r] = 0.5 * (rv[r] - cd(0, 1) * jr);
  }
  return out;
}

double integrability_defect(const std::vector<double>& rten, int d,
                            const std::vector<double>& j) {
  double worst = 0;
  std::vector<double> ea(d, 0.0), eb(d, 0.0), ec(d, 0.0);
  for (int a = 0; a < d; ++a) {
    ea.assign(d, 0.0);
    ea[a] = 1.0;
    for (int b = 0; b < d; ++b) {
      eb.assign(d, 0.0);
      eb[b] = 1.0;
      for (int c = 0; c < d; ++c) {
        ec.assign(d, 0.0);
        ec[c] = 1.0;
        auto obs = holomorphy_obstruction(rten, d, j, ea, eb, ec);
        for (const auto& val : obs) worst = std::max(worst, std::abs(val));
      }
    }
  }
  return worst;
}

double connection_defect(const GammaProvider& gamma, const FormProvider& omega,
                         const std::vector<double>& x, int n_j, Rng& rng) {
  int d = static_cast<int>(x.size());
  ConnJets g = gamma(x, 1);
  Curv4 r = curvature(g);
  std::vector<double> rten(static_cast<size_t>(d) * d * d * d);
  for (int i = 0; i < d; ++i)
    for (int z = 0; z < d; ++z)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          rten[((static_cast<size_t>(i) * d + z) * d + k) * d + l] =
              r.at(i, z, k, l).val();
  MatJets wj = omega(x, 0);
  std::vector<double> w(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) w[static_cast<size_t>(i) * d + k] = wj.at(i, k).val();
  double worst = 0;
  for (int t = 0; t < n_j; ++t) {
    auto j = random_compatible_j(w, d, 0.3, rng);
    worst = std::max(worst, integrability_defect(rten, d, j));
  }
  return worst;
}

std::vector<double> raise_lowered_curvature(const std::vector<double>& rlow,
                                            const std::vector<double>& w,
                                            int d) {
  RowMat winv = to_eigen(w, d).inverse();
  std::vector<double> rten(static_cast<size_t>(d) * d * d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int z = 0; z < d; ++z)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double acc = 0;
          for (int t = 0; t < d; ++t)
            acc += rlow[((static_cast<size_t>(k) * d + l) * d + z) * d + t] *
                   winv(t, i);
          rten[((static_cast<size_t>(i) * d + z) * d + k) * d + l] = acc;
        }
  return rten;
}

GammaProvider torsion_correct(const GammaProvider& gamma,
                              const FormProvider& omega) {
  return [gamma, omega](const std::vector<double>& x, int ord) -> ConnJets {
    ConnJets g = gamma(x, ord);
    MatJets w = omega(x, ord);
    int o = std::min(g.order, w.order);
    int d = g.d;
    if (w.d != d) throw std::invalid_argument("torsion correction: dim mismatch");
    if (g.order != o) {
      ConnJets t(d, o);
      for (size_t i = 0; i < g.G.size(); ++i) t.G[i] = g.G[i].truncated(o);
      g = std::move(t);
    }
    if (w.order != o) {
      MatJets t(d, o);
      for (size_t i = 0; i < w.m.size(); ++i) t.m[i] = w.m[i].truncated(o);
      w = std::move(t);
    }
    MatJets winv = mat_inverse(w);
    auto idx = [d](int a, int b, int c) {
      return (static_cast<size_t>(a) * d + b) * d + c;
    };
    std::vector<Jet> glow(static_cast<size_t>(d) * d * d,
                          Jet::constant(d, o, 0.0));
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int t = 0; t < d; ++t) {
          Jet acc = Jet::constant(d, o, 0.0);
          for (int i = 0; i < d; ++i) acc = acc + g.at(i, k, j) * w.at(i, t);
          glow[idx(k, j, t)] = acc;
        }
    std::vector<Jet> corrected(static_cast<size_t>(d) * d * d,
                               Jet::constant(d, o, 0.0));
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int t = 0; t < d; ++t) {
          Jet tor = glow[idx(k, j, t)] - glow[idx(j, k, t)];
          Jet acc = glow[idx(k, j, t)] - 0.5 * tor;
          for (int b = 0; b < d; ++b) {
            Jet tjt = g.at(b, j, t) - g.at(b, t, j);
            Jet tkt = g.at(b, k, t) - g.at(b, t, k);
            acc = acc + (1.0 / 6.0) * (w.at(k, b) * tjt + w.at(j, b) * tkt);
          }
          corrected[idx(k, j, t)] = acc;
        }
    ConnJets out(d, o);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
          Jet acc = Jet::constant(d, o, 0.0);
          for (int t = 0; t < d; ++t)
            acc = acc + corrected[idx(k, j, t)] * winv.at(t, i);
          out.at(i, k, j) = acc;
        }
    return out;
  };
}

int sym3_dim(int d) { return d * (d + 1) * (d + 2) / 6; }

int uniqueness_rank(int d, int n_j, Rng& rng) {
  auto w = standard_form_matrix(d);
  std::vector<std::array<int, 3>> basis;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b)
      for (int c = b; c < d; ++c) basis.push_back({a, b, c});
  int nbasis = static_cast<int>(basis.size());
  Eigen::MatrixXd mat(2 * nbasis * n_j, nbasis);
  static const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  int row = 0;
  for (int t = 0; t < n_j; ++t) {
    auto j = random_compatible_j(w, d, 0.3, rng);
    std::vector<cd> jm(static_cast<size_t>(d) * d);
    for (int r = 0; r < d; ++r)
      for (int p = 0; p < d; ++p)
        jm[static_cast<size_t>(r) * d + p] =
            0.5 * cd(r == p ? 1.0 : 0.0, j[static_cast<size_t>(r) * d + p]);
    for (const auto& slot : basis) {
      int p = slot[0], q = slot[1], r = slot[2];
      for (int col = 0; col < nbasis; ++col) {
        const auto& abc = basis[col];
        cd val(0, 0);
        for (const auto& pm : perm)
          val += jm[static_cast<size_t>(abc[pm[0]]) * d + p] *
                 jm[static_cast<size_t>(abc[pm[1]]) * d + q] *
                 jm[static_cast<size_t>(abc[pm[2]]) * d + r];
        val /= 6.0;
        mat(row, col) = val.real();
        mat(row + 1, col) = val.imag();
      }
      row += 2;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  const auto& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * smax) ++rank;
  return rank;
}

}  // namespace sclab
