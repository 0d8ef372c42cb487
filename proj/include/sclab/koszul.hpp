#pragma once

#include <vector>

namespace sclab {

// Dense tensors with q alternating slots followed by p symmetric slots
// over an ambient dimension d, stored as full d^(q+p) arrays in row-major
// slot order.  The two slot groups carry the boundary-type operator `a`
// (alternation-increasing) and its symmetric partner `s`:
//
//   a : (q, p) -> (q+1, p-1)
//   (aT)_{a_1..a_{q+1} | b_2..b_p}
//       = sum_{m=1}^{q+1} (-1)^{q+1-m} T_{a_1.. (omit a_m) ..a_{q+1} | a_m b_2..b_p}
//
//   s : (q, p) -> (q-1, p+1)
//   (sT)_{a_1..a_{q-1} | b_1..b_{p+1}}
//       = sum_{m=1}^{p+1} T_{a_1..a_{q-1} b_m | b_1.. (omit b_m) ..b_{p+1}}
//
// On tensors of bidegree (q, p): a.a = 0, s.s = 0, a.s + s.a = (p+q) Id.

size_t qp_size(int d, int q, int p);

std::vector<double> koszul_a(const std::vector<double>& T, int d, int q, int p);
std::vector<double> koszul_s(const std::vector<double>& T, int d, int q, int p);

// Projections making arbitrary dense data a valid (q, p) tensor.
std::vector<double> alternate_q(const std::vector<double>& T, int d, int q,
                                int p);
std::vector<double> symmetrize_p(const std::vector<double>& T, int d, int q,
                                 int p);

// Projector onto ker(a) inside bidegree (2, 2): T - (1/4) s(a(T)).
std::vector<double> project_ker_a22(const std::vector<double>& T, int d);

}  // namespace sclab
