#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sclab {

// Truncated Taylor expansion of a scalar function at a point: value plus
// dense derivative arrays up to `order` (0..3) in `dim` variables.  The
// Hessian and third-derivative blocks are stored full (all index orders)
// and kept symmetric by construction.
class Jet {
 public:
  Jet() = default;

  Jet(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || dim > 8 || order < 0 || order > 3)
      throw std::invalid_argument("jet: bad dim/order");
    if (order_ >= 1) g_.assign(dim_, 0.0);
    if (order_ >= 2) h_.assign(static_cast<size_t>(dim_) * dim_, 0.0);
    if (order_ >= 3) t_.assign(static_cast<size_t>(dim_) * dim_ * dim_, 0.0);
  }

  static Jet constant(int dim, int order, double c) {
    Jet j(dim, order);
    j.v_ = c;
    return j;
  }

  static Jet coordinate(int dim, int order, int i, double x) {
    Jet j(dim, order);
    j.v_ = x;
    if (order >= 1) j.g_[i] = 1.0;
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }

  double val() const { return v_; }
  double& val() { return v_; }

  double g(int i) const { return g_[i]; }
  double& g(int i) { return g_[i]; }

  double h(int i, int j) const { return h_[static_cast<size_t>(i) * dim_ + j]; }
  double& h(int i, int j) { return h_[static_cast<size_t>(i) * dim_ + j]; }

  double t(int i, int j, int k) const {
    return t_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  }
  double& t(int i, int j, int k) {
    return t_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  }

  // Drops derivative data above `new_order`.
  Jet truncated(int new_order) const {
    if (new_order >= order_) return *this;
    Jet r(dim_, new_order);
    r.v_ = v_;
    if (new_order >= 1) r.g_ = g_;
    if (new_order >= 2) r.h_ = h_;
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    r.v_ = -r.v_;
    for (double& x : r.g_) x = -x;
    for (double& x : r.h_) x = -x;
    for (double& x : r.t_) x = -x;
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) { return lin(a, b, 1.0); }
  friend Jet operator-(const Jet& a, const Jet& b) { return lin(a, b, -1.0); }

  friend Jet operator+(const Jet& a, double c) {
    Jet r = a;
    r.v_ += c;
    return r;
  }
  friend Jet operator+(double c, const Jet& a) { return a + c; }
  friend Jet operator-(const Jet& a, double c) { return a + (-c); }
  friend Jet operator-(double c, const Jet& a) { return (-a) + c; }

  friend Jet operator*(const Jet& a, double c) {
    Jet r = a;
    r.v_ *= c;
    for (double& x : r.g_) x *= c;
    for (double& x : r.h_) x *= c;
    for (double& x : r.t_) x *= c;
    return r;
  }
  friend Jet operator*(double c, const Jet& a) { return a * c; }
  friend Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    int ord = common_order(a, b);
    int d = a.dim_;
    Jet r(d, ord);
    r.v_ = a.v_ * b.v_;
    if (ord >= 1)
      for (int i = 0; i < d; ++i) r.g(i) = a.g_[i] * b.v_ + a.v_ * b.g_[i];
    if (ord >= 2)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          r.h(i, j) = a.h(i, j) * b.v_ + a.g_[i] * b.g_[j] +
                      a.g_[j] * b.g_[i] + a.v_ * b.h(i, j);
    if (ord >= 3)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            r.t(i, j, k) = a.t(i, j, k) * b.v_ + a.v_ * b.t(i, j, k) +
                           a.h(i, j) * b.g_[k] + a.h(i, k) * b.g_[j] +
                           a.h(j, k) * b.g_[i] + b.h(i, j) * a.g_[k] +
                           b.h(i, k) * a.g_[j] + b.h(j, k) * a.g_[i];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b);

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator*=(double c) { return *this = *this * c; }

  static int common_order(const Jet& a, const Jet& b) {
    if (a.dim_ != b.dim_) throw std::logic_error("jet: dim mismatch");
    return a.order_ < b.order_ ? a.order_ : b.order_;
  }

 private:
  static Jet lin(const Jet& a, const Jet& b, double s) {
    int ord = common_order(a, b);
    int d = a.dim_;
    Jet r(d, ord);
    r.v_ = a.v_ + s * b.v_;
    if (ord >= 1)
      for (int i = 0; i < d; ++i) r.g_[i] = a.g_[i] + s * b.g_[i];
    if (ord >= 2)
      for (size_t i = 0; i < r.h_.size(); ++i) r.h_[i] = a.h_[i] + s * b.h_[i];
    if (ord >= 3)
      for (size_t i = 0; i < r.t_.size(); ++i) r.t_[i] = a.t_[i] + s * b.t_[i];
    return r;
  }

  int dim_ = 0;
  int order_ = 0;
  double v_ = 0.0;
  std::vector<double> g_, h_, t_;
};

// Univariate composition phi(f) given the derivatives of phi at f.val().
inline Jet jet_compose(const Jet& f, double p0, double p1, double p2,
                       double p3) {
  int d = f.dim();
  int ord = f.order();
  Jet r(d, ord);
  r.val() = p0;
  if (ord >= 1)
    for (int i = 0; i < d; ++i) r.g(i) = p1 * f.g(i);
  if (ord >= 2)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        r.h(i, j) = p2 * f.g(i) * f.g(j) + p1 * f.h(i, j);
  if (ord >= 3)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          r.t(i, j, k) = p3 * f.g(i) * f.g(j) * f.g(k) +
                         p2 * (f.h(i, j) * f.g(k) + f.h(i, k) * f.g(j) +
                               f.h(j, k) * f.g(i)) +
                         p1 * f.t(i, j, k);
  return r;
}

inline Jet jet_exp(const Jet& f) {
  double e = std::exp(f.val());
  return jet_compose(f, e, e, e, e);
}

inline Jet jet_sinh(const Jet& f) {
  double s = std::sinh(f.val()), c = std::cosh(f.val());
  return jet_compose(f, s, c, s, c);
}

inline Jet jet_cosh(const Jet& f) {
  double s = std::sinh(f.val()), c = std::cosh(f.val());
  return jet_compose(f, c, s, c, s);
}

inline Jet jet_sqrt(const Jet& f) {
  double s = std::sqrt(f.val());
  double i = 1.0 / s;
  return jet_compose(f, s, 0.5 * i, -0.25 * i * i * i,
                     0.375 * i * i * i * i * i);
}

inline Jet jet_inv(const Jet& f) {
  double i = 1.0 / f.val();
  return jet_compose(f, i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i);
}

inline Jet jet_pow_int(const Jet& f, int n) {
  if (n == 0) return Jet::constant(f.dim(), f.order(), 1.0);
  double v = f.val();
  auto ipow = [](double x, int k) {
    double r = 1.0;
    bool neg = k < 0;
    for (int i = 0; i < (neg ? -k : k); ++i) r *= x;
    return neg ? 1.0 / r : r;
  };
  double p0 = ipow(v, n);
  double p1 = n * ipow(v, n - 1);
  double p2 = double(n) * (n - 1) * ipow(v, n - 2);
  double p3 = double(n) * (n - 1) * (n - 2) * ipow(v, n - 3);
  return jet_compose(f, p0, p1, p2, p3);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * jet_inv(b); }

// Jet of the partial derivative d_j f, one order lower than f.
inline Jet jet_partial(const Jet& f, int j) {
  if (f.order() < 1) throw std::logic_error("jet_partial: order 0 jet");
  int d = f.dim();
  Jet r(d, f.order() - 1);
  r.val() = f.g(j);
  if (r.order() >= 1)
    for (int i = 0; i < d; ++i) r.g(i) = f.h(i, j);
  if (r.order() >= 2)
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) r.h(i, k) = f.t(i, k, j);
  return r;
}

// Re-expresses a jet in `dim` variables as a jet in `new_dim` variables,
// variable i of the source becoming variable slot_map[i] of the target.
inline Jet jet_embed(const Jet& f, int new_dim,
                     const std::vector<int>& slot_map) {
  int d = f.dim();
  Jet r(new_dim, f.order());
  r.val() = f.val();
  if (f.order() >= 1)
    for (int i = 0; i < d; ++i) r.g(slot_map[i]) = f.g(i);
  if (f.order() >= 2)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r.h(slot_map[i], slot_map[j]) = f.h(i, j);
  if (f.order() >= 3)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          r.t(slot_map[i], slot_map[j], slot_map[k]) = f.t(i, j, k);
  return r;
}

// Jet of f(c*x) at x = p expressed from the jet of f at c*p: derivatives
// pick up one factor of c per order.
inline Jet jet_rescale_args(const Jet& f, double c) {
  Jet r = f;
  int d = f.dim();
  if (f.order() >= 1)
    for (int i = 0; i < d; ++i) r.g(i) *= c;
  if (f.order() >= 2)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r.h(i, j) *= c * c;
  if (f.order() >= 3)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) r.t(i, j, k) *= c * c * c;
  return r;
}

inline std::vector<Jet> jet_point(const std::vector<double>& x, int order) {
  std::vector<Jet> pt;
  pt.reserve(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    pt.push_back(Jet::coordinate(static_cast<int>(x.size()), order,
                                 static_cast<int>(i), x[i]));
  return pt;
}

}  // namespace sclab
