#pragma once

#include "corrperc/matrix.hpp"

namespace corrperc {

// x^n by binary exponentiation. Library pow() is not guaranteed to round
// identically across platforms for integer exponents, and these powers sit on
// every fixed-point iteration path, so the arithmetic is pinned down here.
// Follows the pow convention that x^0 == 1 for every x, including 0^0 == 1.
double ipow(double x, int n);

// P[X = m] for X ~ Binomial(n, pi). Exact multiplicative evaluation for
// n <= 50 (all intermediates stay below 2^53), log-space via lgamma above.
// pi == 0 and pi == 1 return exact point masses.
double binom_pmf(int n, int m, double pi);

// (N x N) lower-triangular matrix B with B(a-1, b-1) = P[Binomial(a-1, pi) = b-1]
// acting on degrees 1..N of edge endpoints: an endpoint of degree a keeps
// b - 1 of its a - 1 other edges. Rows are stochastic. Conjugating a joint
// degree distribution by B realizes independent bond removal.
Matrix edge_thinning_matrix(int N, double pi);

// (N+1 x N+1) full binomial matrix T with T(a, b) = P[Binomial(a, pi) = b]
// on degrees 0..N; maps a node degree distribution to its thinned version.
Matrix node_thinning_matrix(int N, double pi);

} // namespace corrperc
