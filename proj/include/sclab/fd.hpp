#pragma once

#include <functional>
#include <vector>

#include "sclab/jet.hpp"

namespace sclab {

using ScalarFn = std::function<double(const std::vector<double>&)>;

// Central-difference estimate of the jet of f at x, independent of the
// jet arithmetic.  Default step sizes balance truncation against
// cancellation: 1e-4 for the gradient, 1e-3 for second and third
// derivatives.
inline Jet fd_jet(const ScalarFn& f, const std::vector<double>& x, int order,
                  double step1 = 1e-4, double step2 = 1e-3) {
  int d = static_cast<int>(x.size());
  Jet r(d, order);
  r.val() = f(x);

  auto at = [&](const std::vector<int>& idx, const std::vector<double>& steps,
                double h) {
    std::vector<double> p = x;
    for (size_t m = 0; m < idx.size(); ++m) p[idx[m]] += steps[m] * h;
    return f(p);
  };

  if (order >= 1) {
    double h = step1;
    for (int i = 0; i < d; ++i)
      r.g(i) = (at({i}, {1}, h) - at({i}, {-1}, h)) / (2 * h);
  }

  double h2 = step2;
  auto hess = [&](const std::vector<double>& p) {
    std::vector<std::vector<double>> H(d, std::vector<double>(d));
    auto fp = [&](int i, double si, int j, double sj) {
      std::vector<double> q = p;
      q[i] += si * h2;
      q[j] += sj * h2;
      return f(q);
    };
    double f0 = f(p);
    for (int i = 0; i < d; ++i) {
      std::vector<double> q = p;
      q[i] += h2;
      double fp1 = f(q);
      q[i] -= 2 * h2;
      double fm1 = f(q);
      H[i][i] = (fp1 - 2 * f0 + fm1) / (h2 * h2);
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        double v = (fp(i, 1, j, 1) - fp(i, 1, j, -1) - fp(i, -1, j, 1) +
                    fp(i, -1, j, -1)) /
                   (4 * h2 * h2);
        H[i][j] = H[j][i] = v;
      }
    return H;
  };

  if (order >= 2) {
    auto H = hess(x);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r.h(i, j) = H[i][j];
  }

  if (order >= 3) {
    // Third derivatives as central differences of the Hessian.
    for (int k = 0; k < d; ++k) {
      std::vector<double> xp = x, xm = x;
      xp[k] += h2;
      xm[k] -= h2;
      auto Hp = hess(xp);
      auto Hm = hess(xm);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          r.t(i, j, k) = (Hp[i][j] - Hm[i][j]) / (2 * h2);
    }
    // Symmetrize over the three slots to cut the leading error terms.
    Jet s = r;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          r.t(i, j, k) = (s.t(i, j, k) + s.t(i, k, j) + s.t(j, i, k) +
                          s.t(j, k, i) + s.t(k, i, j) + s.t(k, j, i)) /
                         6.0;
  }
  return r;
}

}  // namespace sclab
