#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sclab/jet.hpp"

namespace sclab {

// In-place LU factorization with partial pivoting on jet values, for
// square systems whose entries are jets.  Factors once, then solves for
// any number of right-hand sides.
class JetLu {
 public:
  JetLu(std::vector<Jet> a, int m) : a_(std::move(a)), m_(m), perm_(m) {
    for (int i = 0; i < m_; ++i) perm_[i] = i;
    for (int c = 0; c < m_; ++c) {
      int piv = c;
      double best = std::fabs(at(c, c).val());
      for (int r = c + 1; r < m_; ++r) {
        double v = std::fabs(at(r, c).val());
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best == 0.0) throw std::runtime_error("jet lu: singular matrix");
      if (piv != c) {
        for (int j = 0; j < m_; ++j) std::swap(at(c, j), at(piv, j));
        std::swap(perm_[c], perm_[piv]);
      }
      Jet inv_piv = jet_inv(at(c, c));
      for (int r = c + 1; r < m_; ++r) {
        Jet f = at(r, c) * inv_piv;
        at(r, c) = f;
        for (int j = c + 1; j < m_; ++j) at(r, j) -= f * at(c, j);
      }
    }
  }

  // Solves A x = b.
  std::vector<Jet> solve(const std::vector<Jet>& b) const {
    std::vector<Jet> x(m_);
    for (int i = 0; i < m_; ++i) x[i] = b[perm_[i]];
    for (int r = 1; r < m_; ++r)
      for (int c = 0; c < r; ++c) x[r] -= at(r, c) * x[c];
    for (int r = m_ - 1; r >= 0; --r) {
      for (int c = r + 1; c < m_; ++c) x[r] -= at(r, c) * x[c];
      x[r] = x[r] * jet_inv(at(r, r));
    }
    return x;
  }

 private:
  const Jet& at(int r, int c) const { return a_[static_cast<size_t>(r) * m_ + c]; }
  Jet& at(int r, int c) { return a_[static_cast<size_t>(r) * m_ + c]; }

  std::vector<Jet> a_;
  int m_;
  std::vector<int> perm_;
};

// One-shot solve of A x = b with jet entries.
inline std::vector<Jet> jet_solve(const std::vector<Jet>& a, int m,
                                  const std::vector<Jet>& b) {
  return JetLu(a, m).solve(b);
}

// Dense matrix exponential by the scaled Taylor series; adequate for the
// moderate-norm generators used throughout.
inline std::vector<double> mat_exp(const std::vector<double>& a, int n) {
  int s = 0;
  double norm = 0;
  for (double v : a) norm = std::max(norm, std::abs(v));
  double scaled = norm * n;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++s;
  }
  double factor = std::ldexp(1.0, -s);
  std::vector<double> x(a.size());
  for (size_t i = 0; i < a.size(); ++i) x[i] = a[i] * factor;

  std::vector<double> result(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) result[static_cast<size_t>(i) * n + i] = 1.0;
  std::vector<double> term = result;
  auto matmul = [n](const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double pik = p[static_cast<size_t>(i) * n + k];
        if (pik == 0.0) continue;
        for (int j = 0; j < n; ++j)
          r[static_cast<size_t>(i) * n + j] +=
              pik * q[static_cast<size_t>(k) * n + j];
      }
    return r;
  };
  for (int k = 1; k <= 24; ++k) {
    term = matmul(term, x);
    for (auto& v : term) v /= k;
    for (size_t i = 0; i < result.size(); ++i) result[i] += term[i];
  }
  for (int i = 0; i < s; ++i) result = matmul(result, result);
  return result;
}

}  // namespace sclab
