#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "sclab/jet.hpp"

namespace sclab {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind {
    kConst,
    kCoord,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kExp,
    kSinh,
    kCosh,
    kSqrt,
    kPowInt,
  };
  Kind kind;
  double c = 0.0;  // kConst
  int var = 0;     // kCoord
  int ip = 0;      // kPowInt exponent
  ExprPtr a, b;
};

// Immutable scalar expression tree with structural sharing.  Constant
// folding happens in the constructors; differentiation, substitution and
// evaluation all memoize on node identity so shared subtrees are visited
// once.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double c);
  static Expr coord(int i);

  bool is_const(double* out = nullptr) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  friend Expr operator+(const Expr& a, double c) { return a + constant(c); }
  friend Expr operator+(double c, const Expr& a) { return constant(c) + a; }
  friend Expr operator-(const Expr& a, double c) { return a - constant(c); }
  friend Expr operator-(double c, const Expr& a) { return constant(c) - a; }
  friend Expr operator*(const Expr& a, double c) { return a * constant(c); }
  friend Expr operator*(double c, const Expr& a) { return constant(c) * a; }
  friend Expr operator/(const Expr& a, double c) { return a / constant(c); }
  friend Expr operator/(double c, const Expr& a) { return constant(c) / a; }

  static Expr exp(const Expr& a);
  static Expr sinh(const Expr& a);
  static Expr cosh(const Expr& a);
  static Expr sqrt(const Expr& a);
  static Expr pow_int(const Expr& a, int n);

  Expr diff(int var) const;

  // Replaces coordinate i by repl[i] throughout.
  Expr subst(const std::vector<Expr>& repl) const;

  Jet eval_jet(const std::vector<Jet>& coords) const;
  double eval(const std::vector<double>& x) const;

  const ExprNode* node() const { return n_.get(); }

  // Per-call caches keyed on node identity, reusable across the component
  // expressions of a vector- or matrix-valued field evaluated at one point.
  using JetCache = std::unordered_map<const ExprNode*, Jet>;
  using ValCache = std::unordered_map<const ExprNode*, double>;
  Jet eval_jet(const std::vector<Jet>& coords, JetCache& cache) const;
  double eval(const std::vector<double>& x, ValCache& cache) const;

 private:
  explicit Expr(ExprPtr n) : n_(std::move(n)) {}
  ExprPtr n_;
};

}  // namespace sclab
