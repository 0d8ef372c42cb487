#include "sclab/koszul.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sclab {

namespace {

size_t ipow(int d, int e) {
  size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<size_t>(d);
  return r;
}

void decode(size_t flat, int d, int len, int* out) {
  for (int i = len - 1; i >= 0; --i) {
    out[i] = static_cast<int>(flat % d);
    flat /= d;
  }
}

size_t encode(const int* idx, int d, int len) {
  size_t f = 0;
  for (int i = 0; i < len; ++i) f = f * d + idx[i];
  return f;
}

// All permutations of {0..k-1} with parity signs.
struct Perms {
  std::vector<std::vector<int>> perm;
  std::vector<double> sign;
  explicit Perms(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do {
      perm.push_back(p);
      int inv = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          if (p[i] > p[j]) ++inv;
      sign.push_back(inv % 2 ? -1.0 : 1.0);
    } while (std::next_permutation(p.begin(), p.end()));
  }
};

}  // namespace

size_t qp_size(int d, int q, int p) { return ipow(d, q + p); }

std::vector<double> koszul_a(const std::vector<double>& T, int d, int q,
                             int p) {
  if (p < 1) throw std::invalid_argument("koszul_a: needs p >= 1");
  int qo = q + 1, po = p - 1;
  std::vector<double> R(ipow(d, qo + po), 0.0);
  std::vector<int> oi(qo + po), si(q + p);
  for (size_t f = 0; f < R.size(); ++f) {
    decode(f, d, qo + po, oi.data());
    double acc = 0.0;
    for (int m = 1; m <= qo; ++m) {
      // Source alternating slots: output slots with a_m removed.
      int w = 0;
      for (int i = 0; i < qo; ++i)
        if (i != m - 1) si[w++] = oi[i];
      // Source symmetric slots: a_m followed by the output b-slots.
      si[w++] = oi[m - 1];
      for (int i = 0; i < po; ++i) si[w++] = oi[qo + i];
      double sgn = ((qo - m) % 2) ? -1.0 : 1.0;
      acc += sgn * T[encode(si.data(), d, q + p)];
    }
    R[f] = acc;
  }
  return R;
}

std::vector<double> koszul_s(const std::vector<double>& T, int d, int q,
                             int p) {
  if (q < 1) throw std::invalid_argument("koszul_s: needs q >= 1");
  int qo = q - 1, po = p + 1;
  std::vector<double> R(ipow(d, qo + po), 0.0);
  std::vector<int> oi(qo + po), si(q + p);
  for (size_t f = 0; f < R.size(); ++f) {
    decode(f, d, qo + po, oi.data());
    double acc = 0.0;
    for (int m = 1; m <= po; ++m) {
      // Source alternating slots: output a-slots then b_m appended.
      int w = 0;
      for (int i = 0; i < qo; ++i) si[w++] = oi[i];
      si[w++] = oi[qo + m - 1];
      // Source symmetric slots: output b-slots with b_m removed.
      for (int i = 0; i < po; ++i)
        if (i != m - 1) si[w++] = oi[qo + i];
      acc += T[encode(si.data(), d, q + p)];
    }
    R[f] = acc;
  }
  return R;
}

std::vector<double> alternate_q(const std::vector<double>& T, int d, int q,
                                int p) {
  if (q <= 1) return T;
  Perms perms(q);
  std::vector<double> R(T.size(), 0.0);
  std::vector<int> oi(q + p), si(q + p);
  double norm = 1.0 / static_cast<double>(perms.perm.size());
  for (size_t f = 0; f < R.size(); ++f) {
    decode(f, d, q + p, oi.data());
    double acc = 0.0;
    for (size_t pi = 0; pi < perms.perm.size(); ++pi) {
      for (int i = 0; i < q; ++i) si[i] = oi[perms.perm[pi][i]];
      for (int i = q; i < q + p; ++i) si[i] = oi[i];
      acc += perms.sign[pi] * T[encode(si.data(), d, q + p)];
    }
    R[f] = acc * norm;
  }
  return R;
}

std::vector<double> symmetrize_p(const std::vector<double>& T, int d, int q,
                                 int p) {
  if (p <= 1) return T;
  Perms perms(p);
  std::vector<double> R(T.size(), 0.0);
  std::vector<int> oi(q + p), si(q + p);
  double norm = 1.0 / static_cast<double>(perms.perm.size());
  for (size_t f = 0; f < R.size(); ++f) {
    decode(f, d, q + p, oi.data());
    double acc = 0.0;
    for (size_t pi = 0; pi < perms.perm.size(); ++pi) {
      for (int i = 0; i < q; ++i) si[i] = oi[i];
      for (int i = 0; i < p; ++i) si[q + i] = oi[q + perms.perm[pi][i]];
      acc += T[encode(si.data(), d, q + p)];
    }
    R[f] = acc * norm;
  }
  return R;
}

std::vector<double> project_ker_a22(const std::vector<double>& T, int d) {
  auto sa = koszul_s(koszul_a(T, d, 2, 2), d, 3, 1);
  std::vector<double> R(T.size());
  for (size_t i = 0; i < T.size(); ++i) R[i] = T[i] - 0.25 * sa[i];
  return R;
}

}  // namespace sclab
