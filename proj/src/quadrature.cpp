#include "sclab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sclab {

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double pk = 1.0, pkm1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double pkp1 = ((2 * k + 1) * x * pk - k * pkm1) / (k + 1);
        pkm1 = pk;
        pk = pkp1;
      }
      dp = n * (x * pk - pkm1) / (x * x - 1.0);
      double dx = pk / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        pk = 1.0;
        pkm1 = 0.0;
        for (int k = 0; k < n; ++k) {
          double pkp1 = ((2 * k + 1) * x * pk - k * pkm1) / (k + 1);
          pkm1 = pk;
          pk = pkp1;
        }
        dp = n * (x * pk - pkm1) / (x * x - 1.0);
        break;
      }
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

void gauss_legendre_ab(int n, double a, double b, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  gauss_legendre(n, nodes, weights);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    nodes[i] = mid + half * nodes[i];
    weights[i] *= half;
  }
}

}  // namespace sclab
