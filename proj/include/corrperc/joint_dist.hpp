#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "corrperc/matrix.hpp"

namespace corrperc {

// Conditional table q(j, k) = P[neighbour has degree j | host end has degree k].
// Columns for degrees that carry no edge mass are undefined: flagged and left
// all-zero rather than treated as an error.
struct ConditionalTable {
    Matrix q;                   // q(j-1, k-1), column-stochastic on defined columns
    std::vector<char> defined;  // per degree column, index k-1

    double operator()(int j, int k) const { return q(j - 1, k - 1); }
    bool column_defined(int k) const { return defined[static_cast<std::size_t>(k - 1)] != 0; }
};

// Joint distribution of the two end degrees of a uniformly random edge:
// entry (j,k) is the probability the ends have degrees j and k. Stored dense,
// degrees 1..N. Construction symmetrizes the table exactly and renormalizes
// through compensated summation, then enforces the invariants (entries >= 0,
// total 1 within 1e-12).
class JointDistribution {
public:
    explicit JointDistribution(Matrix table);

    int max_degree() const { return N_; }
    double operator()(int j, int k) const { return e_(j - 1, k - 1); }
    const Matrix &table() const { return e_; }

    // m_k = sum_j e(j,k): probability a random edge end has degree k.
    const std::vector<double> &edge_marginal() const { return marginal_; }
    bool degree_active(int k) const { return marginal_[static_cast<std::size_t>(k - 1)] > 0.0; }

    // Node degree distribution p[0..N] recovered from the edge view:
    // p_k = (m_k / k) / sum_k' (m_k' / k'). p[0] is always 0 here; isolated
    // nodes only appear after thinning (see thinned_node_distribution).
    std::vector<double> node_distribution() const;
    double mean_degree() const;

    ConditionalTable conditional() const;

    // Joint distribution after each edge is independently kept with
    // probability pi, seen on the surviving edges: B^T e B with the
    // lower-triangular per-end binomial matrix B. pi = 1 returns the table
    // unchanged bit for bit.
    JointDistribution percolated(double pi) const;

private:
    int N_;
    Matrix e_;
    std::vector<double> marginal_;
};

enum class Family { bimodal, exponential, powerlaw };

// e(j,k) = (1-t) f(j) f(k) + t delta_{j,k} f(j) over degrees 1..N, where f is
// the family weight normalized on 1..N:
//   bimodal:      f(3) = 1-param, f(9) = param        (needs N >= 9)
//   exponential:  f(k) proportional to exp(-k)        (param ignored)
//   powerlaw:     f(k) proportional to k^-(param+1)   (param = tail exponent)
// The (1,1) entry is then zeroed and the table renormalized, so the smallest
// components (isolated degree-1 pairs) never dominate the sparse families.
JointDistribution build_family(Family family, double param, double t, int N);

// Reads "j,k,weight" triplet rows (header line optional, '#' comments
// skipped), symmetrizes as (w[j][k]+w[k][j])/2 and normalizes to total 1.
JointDistribution load_custom(std::istream &in, int N);
JointDistribution load_custom_file(const std::string &path, int N);

// Node degree distribution after bond retention pi: each degree-k1 node keeps
// Binomial(k1, pi) of its edges. Index 0..N of the result; entry 0 collects
// the nodes isolated by the removal. Input p is indexed 0..N as well.
std::vector<double> thinned_node_distribution(const std::vector<double> &p, double pi);

// Closed-form decay of the end-degree Pearson correlation under thinning:
// r(pi) = r1 / (1 - a(1 - 1/pi)). defined is false when the end-degree
// variance vanishes (e.g. regular graphs).
struct PearsonDecay {
    double r1 = 0.0;
    double a = 0.0;
    bool defined = false;

    double at(double pi) const;
};

PearsonDecay pearson_decay(const JointDistribution &e);

// Pearson correlation of the two end degrees read directly off a joint table;
// the recomputation oracle for PearsonDecay::at. Returns quiet NaN when the
// variance vanishes.
double pearson_coefficient(const JointDistribution &e);

} // namespace corrperc
