#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "sclab/expr.hpp"
#include "sclab/jet.hpp"
#include "sclab/linalg.hpp"

namespace sclab {

// Connection coefficients as jets: G(i, k, j) is the i-th component of the
// covariant derivative of the j-th frame field in the k-th coordinate
// direction.  The first lower index is always the differentiation slot.
struct ConnJets {
  int d = 0;
  int order = 0;
  std::vector<Jet> G;

  ConnJets() = default;
  ConnJets(int dim, int ord)
      : d(dim), order(ord), G(static_cast<size_t>(dim) * dim * dim,
                              Jet::constant(dim, ord, 0.0)) {}

  const Jet& at(int i, int k, int j) const {
    return G[(static_cast<size_t>(i) * d + k) * d + j];
  }
  Jet& at(int i, int k, int j) {
    return G[(static_cast<size_t>(i) * d + k) * d + j];
  }
};

// A square matrix of jets (two lower or mixed indices, stated per use).
struct MatJets {
  int d = 0;
  int order = 0;
  std::vector<Jet> m;

  MatJets() = default;
  MatJets(int dim, int ord)
      : d(dim), order(ord),
        m(static_cast<size_t>(dim) * dim, Jet::constant(dim, ord, 0.0)) {}

  const Jet& at(int i, int j) const {
    return m[static_cast<size_t>(i) * d + j];
  }
  Jet& at(int i, int j) { return m[static_cast<size_t>(i) * d + j]; }
};

// A rank-four tensor of jets; index meaning is stated at each use site.
struct Curv4 {
  int d = 0;
  int order = 0;
  std::vector<Jet> R;

  Curv4() = default;
  Curv4(int dim, int ord)
      : d(dim), order(ord),
        R(static_cast<size_t>(dim) * dim * dim * dim,
          Jet::constant(dim, ord, 0.0)) {}

  const Jet& at(int i, int j, int k, int l) const {
    return R[((static_cast<size_t>(i) * d + j) * d + k) * d + l];
  }
  Jet& at(int i, int j, int k, int l) {
    return R[((static_cast<size_t>(i) * d + j) * d + k) * d + l];
  }
};

struct VecJets {
  int d = 0;
  int order = 0;
  std::vector<Jet> v;

  VecJets() = default;
  VecJets(int dim, int ord)
      : d(dim), order(ord), v(dim, Jet::constant(dim, ord, 0.0)) {}

  const Jet& at(int i) const { return v[i]; }
  Jet& at(int i) { return v[i]; }
};

// Point evaluators for connection coefficients and two-forms.
using GammaProvider =
    std::function<ConnJets(const std::vector<double>&, int)>;
using FormProvider = std::function<MatJets(const std::vector<double>&, int)>;

// Connection whose coefficients are expression trees in the coordinates.
struct ExprConnection {
  int d = 0;
  std::vector<Expr> G;  // d^3 entries, same layout as ConnJets

  ExprConnection() = default;
  explicit ExprConnection(int dim)
      : d(dim),
        G(static_cast<size_t>(dim) * dim * dim, Expr::constant(0.0)) {}

  Expr& at(int i, int k, int j) {
    return G[(static_cast<size_t>(i) * d + k) * d + j];
  }
  const Expr& at(int i, int k, int j) const {
    return G[(static_cast<size_t>(i) * d + k) * d + j];
  }

  GammaProvider provider() const {
    ExprConnection self = *this;
    return [self](const std::vector<double>& x, int ord) {
      ConnJets c(self.d, ord);
      auto pt = jet_point(x, ord);
      Expr::JetCache cache;
      for (size_t n = 0; n < self.G.size(); ++n)
        c.G[n] = self.G[n].eval_jet(pt, cache);
      return c;
    };
  }
};

// Two-form with expression-tree entries.
struct ExprForm {
  int d = 0;
  std::vector<Expr> w;  // d^2 entries, row major

  ExprForm() = default;
  explicit ExprForm(int dim)
      : d(dim), w(static_cast<size_t>(dim) * dim, Expr::constant(0.0)) {}

  Expr& at(int i, int j) { return w[static_cast<size_t>(i) * d + j]; }
  const Expr& at(int i, int j) const {
    return w[static_cast<size_t>(i) * d + j];
  }

  FormProvider provider() const {
    ExprForm self = *this;
    return [self](const std::vector<double>& x, int ord) {
      MatJets f(self.d, ord);
      auto pt = jet_point(x, ord);
      Expr::JetCache cache;
      for (size_t n = 0; n < self.w.size(); ++n)
        f.m[n] = self.w[n].eval_jet(pt, cache);
      return f;
    };
  }
};

// Constant standard symplectic form on 2n coordinates ordered
// (e_1..e_n, f_1..f_n): pairing(e_i, f_i) = 1.
inline std::vector<double> standard_form_matrix(int d) {
  if (d % 2 != 0) throw std::invalid_argument("standard form: odd dimension");
  int n = d / 2;
  std::vector<double> w(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < n; ++i) {
    w[static_cast<size_t>(i) * d + (n + i)] = 1.0;
    w[static_cast<size_t>(n + i) * d + i] = -1.0;
  }
  return w;
}

inline FormProvider standard_form(int d) {
  auto w = standard_form_matrix(d);
  return [d, w](const std::vector<double>&, int ord) {
    MatJets f(d, ord);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        f.at(i, j) = Jet::constant(d, ord, w[static_cast<size_t>(i) * d + j]);
    return f;
  };
}

// Matrix inverse of a jet-valued matrix, column by column.
inline MatJets mat_inverse(const MatJets& a) {
  MatJets inv(a.d, a.order);
  JetLu lu(a.m, a.d);
  for (int j = 0; j < a.d; ++j) {
    std::vector<Jet> e(a.d, Jet::constant(a.d, a.order, 0.0));
    e[j].val() = 1.0;
    auto col = lu.solve(e);
    for (int i = 0; i < a.d; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

}  // namespace sclab
