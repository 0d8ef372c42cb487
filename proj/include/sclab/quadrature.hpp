#pragma once

#include <vector>

namespace sclab {

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// The same rule mapped onto [a, b].
void gauss_legendre_ab(int n, double a, double b, std::vector<double>& nodes,
                       std::vector<double>& weights);

}  // namespace sclab
