#pragma once

#include <utility>
#include <vector>

#include "corrperc/joint_dist.hpp"
#include "corrperc/matrix.hpp"

namespace corrperc {

// Full N^2-dimensional formulation over edge colours. Deliberately
// unoptimized dense algebra, capped at N <= 32: its job is to be an
// independently trustworthy reference for the reduced N-dimensional solvers,
// not to scale. All vectors over colours are indexed by colour - 1.
class ColouredSystem {
public:
    // Node distribution taken from the table itself (no isolated nodes).
    explicit ColouredSystem(const JointDistribution &e);
    // Explicit node distribution (index 0..N), for thinned-world checks where
    // isolated nodes carry mass.
    ColouredSystem(const JointDistribution &e, std::vector<double> node_dist);

    int max_degree() const { return N_; }
    int colours() const { return N_ * N_; }
    const std::vector<double> &node_dist() const { return p_; }
    const ConditionalTable &conditional() const { return q_; }

    // The involution pairing colour (j,k) with (k,j), materialized.
    Matrix permutation_matrix() const;
    // Expected colour counts E[c_i] on the diagonal.
    std::vector<double> first_moment_diagonal() const;

    // Smallest fixed point of x = P F(x), iterated from x = 0.
    std::vector<double> solve_fixed_point(double tol = 1e-12, long max_iter = 1000000) const;

    // Giant-component fraction from the fixed point, over all nodes
    // (a p_0 entry in the node distribution counts wholly outside).
    double giant(const std::vector<double> &x) const;

    // Mean size of the finite component a random node outside the giant
    // component belongs to: x^T D (I - H(x)P)^{-1} x / (1-s) + 1 via a dense
    // solve. Returns +infinity when the linear system's condition estimate
    // exceeds 1e12 (criticality), never a garbage number.
    double finite_component_size(const std::vector<double> &x, double s) const;

    // Criticality pair (M, PM) with PM the analytic product form.
    std::pair<Matrix, Matrix> criticality_matrices() const;

    // F evaluated from the closed form and from direct enumeration of
    // E[c_i x^(c - e_i)] / E[c_i] (the latter exponential in N, for N <= 4).
    // Colours with E[c_i] = 0 come back NaN from the enumeration.
    std::vector<double> F_closed(const std::vector<double> &x) const;
    std::vector<double> F_enumerated(const std::vector<double> &x) const;

    // One H(x) element, closed form and enumeration
    // E[c_i1 (c_i2 - delta) x^(c - e_i1 - e_i2)] / E[c_i1].
    double H_closed(int i1, int i2, const std::vector<double> &x) const;
    double H_enumerated(int i1, int i2, const std::vector<double> &x) const;

private:
    Matrix build_H(const std::vector<double> &x) const;

    int N_;
    std::vector<double> p_;
    ConditionalTable q_;
};

} // namespace corrperc
