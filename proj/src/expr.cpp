#include "sclab/expr.hpp"

#include <cmath>
#include <stdexcept>

namespace sclab {

namespace {

using Kind = ExprNode::Kind;

ExprPtr make(Kind kind, double c, int var, int ip, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->c = c;
  n->var = var;
  n->ip = ip;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool const_of(const ExprPtr& n, double* out) {
  if (n->kind != Kind::kConst) return false;
  if (out) *out = n->c;
  return true;
}

}  // namespace

Expr Expr::constant(double c) {
  return Expr(make(Kind::kConst, c, 0, 0, nullptr, nullptr));
}

Expr Expr::coord(int i) {
  return Expr(make(Kind::kCoord, 0.0, i, 0, nullptr, nullptr));
}

bool Expr::is_const(double* out) const { return const_of(n_, out); }

Expr operator+(const Expr& a, const Expr& b) {
  double ca, cb;
  bool ka = a.is_const(&ca), kb = b.is_const(&cb);
  if (ka && kb) return Expr::constant(ca + cb);
  if (ka && ca == 0.0) return b;
  if (kb && cb == 0.0) return a;
  return Expr(make(Kind::kAdd, 0, 0, 0, a.n_, b.n_));
}

Expr operator-(const Expr& a, const Expr& b) {
  double ca, cb;
  bool ka = a.is_const(&ca), kb = b.is_const(&cb);
  if (ka && kb) return Expr::constant(ca - cb);
  if (kb && cb == 0.0) return a;
  if (ka && ca == 0.0) return -b;
  return Expr(make(Kind::kSub, 0, 0, 0, a.n_, b.n_));
}

Expr operator*(const Expr& a, const Expr& b) {
  double ca, cb;
  bool ka = a.is_const(&ca), kb = b.is_const(&cb);
  if (ka && kb) return Expr::constant(ca * cb);
  if (ka && ca == 0.0) return Expr::constant(0.0);
  if (kb && cb == 0.0) return Expr::constant(0.0);
  if (ka && ca == 1.0) return b;
  if (kb && cb == 1.0) return a;
  return Expr(make(Kind::kMul, 0, 0, 0, a.n_, b.n_));
}

Expr operator/(const Expr& a, const Expr& b) {
  double ca, cb;
  bool ka = a.is_const(&ca), kb = b.is_const(&cb);
  if (kb && cb == 0.0) throw std::invalid_argument("expr: divide by zero");
  if (ka && kb) return Expr::constant(ca / cb);
  if (ka && ca == 0.0) return Expr::constant(0.0);
  if (kb && cb == 1.0) return a;
  return Expr(make(Kind::kDiv, 0, 0, 0, a.n_, b.n_));
}

Expr Expr::operator-() const {
  double c;
  if (is_const(&c)) return constant(-c);
  if (n_->kind == Kind::kNeg) return Expr(n_->a);
  return Expr(make(Kind::kNeg, 0, 0, 0, n_, nullptr));
}

Expr Expr::exp(const Expr& a) {
  double c;
  if (a.is_const(&c)) return constant(std::exp(c));
  return Expr(make(Kind::kExp, 0, 0, 0, a.n_, nullptr));
}

Expr Expr::sinh(const Expr& a) {
  double c;
  if (a.is_const(&c)) return constant(std::sinh(c));
  return Expr(make(Kind::kSinh, 0, 0, 0, a.n_, nullptr));
}

Expr Expr::cosh(const Expr& a) {
  double c;
  if (a.is_const(&c)) return constant(std::cosh(c));
  return Expr(make(Kind::kCosh, 0, 0, 0, a.n_, nullptr));
}

Expr Expr::sqrt(const Expr& a) {
  double c;
  if (a.is_const(&c)) return constant(std::sqrt(c));
  return Expr(make(Kind::kSqrt, 0, 0, 0, a.n_, nullptr));
}

Expr Expr::pow_int(const Expr& a, int n) {
  if (n == 0) return constant(1.0);
  if (n == 1) return a;
  double c;
  if (a.is_const(&c)) {
    double r = 1.0;
    for (int i = 0; i < (n < 0 ? -n : n); ++i) r *= c;
    return constant(n < 0 ? 1.0 / r : r);
  }
  return Expr(make(Kind::kPowInt, 0, 0, n, a.n_, nullptr));
}

Expr Expr::diff(int var) const {
  struct Worker {
    int var;
    std::unordered_map<const ExprNode*, Expr> memo;
    Expr wrap(const ExprPtr& n) { return Expr(n); }
    Expr run(const ExprPtr& n) {
      auto it = memo.find(n.get());
      if (it != memo.end()) return it->second;
      Expr r;
      switch (n->kind) {
        case Kind::kConst:
          r = Expr::constant(0.0);
          break;
        case Kind::kCoord:
          r = Expr::constant(n->var == var ? 1.0 : 0.0);
          break;
        case Kind::kAdd:
          r = run(n->a) + run(n->b);
          break;
        case Kind::kSub:
          r = run(n->a) - run(n->b);
          break;
        case Kind::kMul:
          r = run(n->a) * wrap(n->b) + wrap(n->a) * run(n->b);
          break;
        case Kind::kDiv:
          r = (run(n->a) * wrap(n->b) - wrap(n->a) * run(n->b)) /
              (wrap(n->b) * wrap(n->b));
          break;
        case Kind::kNeg:
          r = -run(n->a);
          break;
        case Kind::kExp:
          r = Expr::exp(wrap(n->a)) * run(n->a);
          break;
        case Kind::kSinh:
          r = Expr::cosh(wrap(n->a)) * run(n->a);
          break;
        case Kind::kCosh:
          r = Expr::sinh(wrap(n->a)) * run(n->a);
          break;
        case Kind::kSqrt:
          r = run(n->a) / (Expr::constant(2.0) * Expr::sqrt(wrap(n->a)));
          break;
        case Kind::kPowInt:
          r = Expr::constant(n->ip) * Expr::pow_int(wrap(n->a), n->ip - 1) *
              run(n->a);
          break;
      }
      memo.emplace(n.get(), r);
      return r;
    }
  };
  Worker w{var, {}};
  return w.run(n_);
}

Expr Expr::subst(const std::vector<Expr>& repl) const {
  struct Worker {
    const std::vector<Expr>& repl;
    std::unordered_map<const ExprNode*, Expr> memo;
    Expr wrap(const ExprPtr& n) { return Expr(n); }
    Expr run(const ExprPtr& n) {
      auto it = memo.find(n.get());
      if (it != memo.end()) return it->second;
      Expr r;
      switch (n->kind) {
        case Kind::kConst:
          r = Expr::constant(n->c);
          break;
        case Kind::kCoord:
          r = repl.at(n->var);
          break;
        case Kind::kAdd:
          r = run(n->a) + run(n->b);
          break;
        case Kind::kSub:
          r = run(n->a) - run(n->b);
          break;
        case Kind::kMul:
          r = run(n->a) * run(n->b);
          break;
        case Kind::kDiv:
          r = run(n->a) / run(n->b);
          break;
        case Kind::kNeg:
          r = -run(n->a);
          break;
        case Kind::kExp:
          r = Expr::exp(run(n->a));
          break;
        case Kind::kSinh:
          r = Expr::sinh(run(n->a));
          break;
        case Kind::kCosh:
          r = Expr::cosh(run(n->a));
          break;
        case Kind::kSqrt:
          r = Expr::sqrt(run(n->a));
          break;
        case Kind::kPowInt:
          r = Expr::pow_int(run(n->a), n->ip);
          break;
      }
      memo.emplace(n.get(), r);
      return r;
    }
  };
  Worker w{repl, {}};
  return w.run(n_);
}

Jet Expr::eval_jet(const std::vector<Jet>& coords, JetCache& cache) const {
  struct Worker {
    const std::vector<Jet>& coords;
    JetCache& memo;
    int d;
    int ord;
    Jet run(const ExprPtr& n) {
      auto it = memo.find(n.get());
      if (it != memo.end()) return it->second;
      Jet r;
      switch (n->kind) {
        case Kind::kConst:
          r = Jet::constant(d, ord, n->c);
          break;
        case Kind::kCoord:
          r = coords.at(n->var);
          break;
        case Kind::kAdd:
          r = run(n->a) + run(n->b);
          break;
        case Kind::kSub:
          r = run(n->a) - run(n->b);
          break;
        case Kind::kMul:
          r = run(n->a) * run(n->b);
          break;
        case Kind::kDiv:
          r = run(n->a) / run(n->b);
          break;
        case Kind::kNeg:
          r = -run(n->a);
          break;
        case Kind::kExp:
          r = jet_exp(run(n->a));
          break;
        case Kind::kSinh:
          r = jet_sinh(run(n->a));
          break;
        case Kind::kCosh:
          r = jet_cosh(run(n->a));
          break;
        case Kind::kSqrt:
          r = jet_sqrt(run(n->a));
          break;
        case Kind::kPowInt:
          r = jet_pow_int(run(n->a), n->ip);
          break;
      }
      memo.emplace(n.get(), r);
      return r;
    }
  };
  if (coords.empty()) throw std::invalid_argument("eval_jet: no coordinates");
  Worker w{coords, cache, coords[0].dim(), coords[0].order()};
  return w.run(n_);
}

Jet Expr::eval_jet(const std::vector<Jet>& coords) const {
  JetCache cache;
  return eval_jet(coords, cache);
}

double Expr::eval(const std::vector<double>& x, ValCache& cache) const {
  struct Worker {
    const std::vector<double>& x;
    ValCache& memo;
    double run(const ExprPtr& n) {
      auto it = memo.find(n.get());
      if (it != memo.end()) return it->second;
      double r = 0;
      switch (n->kind) {
        case Kind::kConst:
          r = n->c;
          break;
        case Kind::kCoord:
          r = x.at(n->var);
          break;
        case Kind::kAdd:
          r = run(n->a) + run(n->b);
          break;
        case Kind::kSub:
          r = run(n->a) - run(n->b);
          break;
        case Kind::kMul:
          r = run(n->a) * run(n->b);
          break;
        case Kind::kDiv:
          r = run(n->a) / run(n->b);
          break;
        case Kind::kNeg:
          r = -run(n->a);
          break;
        case Kind::kExp:
          r = std::exp(run(n->a));
          break;
        case Kind::kSinh:
          r = std::sinh(run(n->a));
          break;
        case Kind::kCosh:
          r = std::cosh(run(n->a));
          break;
        case Kind::kSqrt:
          r = std::sqrt(run(n->a));
          break;
        case Kind::kPowInt: {
          double b = run(n->a);
          double p = 1.0;
          for (int i = 0; i < (n->ip < 0 ? -n->ip : n->ip); ++i) p *= b;
          r = n->ip < 0 ? 1.0 / p : p;
          break;
        }
      }
      memo.emplace(n.get(), r);
      return r;
    }
  };
  Worker w{x, cache};
  return w.run(n_);
}

double Expr::eval(const std::vector<double>& x) const {
  ValCache cache;
  return eval(x, cache);
}

}  // namespace sclab
