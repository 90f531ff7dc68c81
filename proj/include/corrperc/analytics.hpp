#pragma once

#include <optional>
#include <vector>

#include "corrperc/joint_dist.hpp"
#include "corrperc/matrix.hpp"

namespace corrperc {

// Production-scale solvers working in the reduced N-dimensional space, one
// coordinate per neighbour degree. Certified against the N^2 coloured system
// by tests before being trusted at sizes the dense oracle cannot reach.

struct GiantSolution {
    // y[k] for k in 1..N is the probability that following a random edge into
    // a degree-k node leads to a finite subtree; y[0] = 1 by the empty-product
    // convention so s = 1 - sum_k p_k y_k^k can run from k = 0.
    std::vector<double> y;
    double s = 0.0;
    long iterations = 0;
    double residual = 0.0;
};

struct CriticalityMatrix {
    Matrix C;        // C(j-1, k-1) = (k-1) q[j|k] of the percolated table
    double pi = 1.0; // retention probability it was built at
};

struct ThresholdResult {
    std::optional<double> pi_c; // absent when no sign change exists on (0,1]
    double bracket = 0.0;       // final bisection interval width
    double scan_resolution = 0.0;
};

// Giant-component fraction under bond percolation with retention pi:
// percolates the table, iterates y_k <- sum_j q[j|k] y_j^(j-1) from y = 0,
// and measures s = 1 - sum_{k>=0} p_k y_k^k over all nodes, isolated ones
// included. Throws on pi outside (0,1] and on non-convergence.
GiantSolution giant_component(const JointDistribution &e, double pi, double tol = 1e-12,
                              long max_iter = 1000000);

// Classical single-variable computation u = sum_k m_k u^(k-1) valid when the
// table factorizes as f(j)f(k). Kept as an independent cross-check of the
// N-dimensional path on product-form tables; not used by it.
double uncorrelated_giant(const JointDistribution &e, double pi, double tol = 1e-12,
                          long max_iter = 1000000);

// Mean size of the finite component containing a random node outside the
// giant component, from the same percolated world as the giant solution.
// Returns +infinity when the reduced linear system is singular or its
// condition estimate exceeds 1e12 (criticality), and NaN when s = 1 leaves
// no finite components to average over.
double finite_component_size(const JointDistribution &e, double pi, const GiantSolution &giant);

// C(pi) with entries (k-1) q[j|k] of the percolated table. Depends on pi
// nonlinearly through the thinning; no linear shortcut is taken.
CriticalityMatrix build_C(const JointDistribution &e, double pi);

// (-1)^(N-1) det(C - I). The sign decides sub- versus supercritical; the
// magnitude is informational only and is clamped to the representable range
// so extreme determinants cannot flush the sign to zero.
double sign_indicator(const CriticalityMatrix &cm);

// Smallest pi in (0,1] where the sign indicator turns nonnegative: grid scan
// upward from 0 followed by bisection down to the requested bracket width.
// Degrees with no edge mass are dropped before scanning; they contribute
// fixed -1 factors to det(C - I) that cancel in the indicator.
ThresholdResult find_threshold(const JointDistribution &e, double pi_step = 1e-3,
                               double bracket = 1e-10);

} // namespace corrperc
