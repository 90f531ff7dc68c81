#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "corrperc/joint_dist.hpp"

namespace corrperc::colour {

// An edge whose ends have degrees j (far end) and k (near end) carries colour
// i = (j-1)N + k, a bijection {1..N}^2 <-> {1..N^2}. The second component is
// the degree of the node the edge sits on, so a degree-k node only carries
// colours from support(k, N), one per possible neighbour degree.
int index(int j, int k, int N);
std::pair<int, int> unindex(int i, int N);
std::vector<int> support(int k, int N);

// Probability that a random node has degree |c| = sum of counts and exactly
// the given per-colour edge counts: p_k times the multinomial over counts
// with per-colour probabilities q(j|k). Zero if any count sits outside
// support(|c|) or the degree exceeds the table.
// counts is indexed by colour - 1 and must have size N^2.
double coloured_pmf(const std::vector<int> &counts, const std::vector<double> &p,
                    const ConditionalTable &q);

// E[c_(j,k)] = k p_k q(j|k) in closed form.
double first_moment(int j, int k, const std::vector<double> &p, const ConditionalTable &q);

// E[c_(j1,k1) c_(j2,k2)] = delta_{k1,k2} k1 p_k1 q(j1|k1) ((k1-1) q(j2|k1) + delta_{j1,j2}).
double second_moment(int j1, int k1, int j2, int k2, const std::vector<double> &p,
                     const ConditionalTable &q);

// Visits every count configuration with |c| = k placed on support(k, N);
// the scratch vector passed to the callback is full length N^2.
void for_each_configuration(int k, int N, const std::function<void(const std::vector<int> &)> &fn);

// Brute-force counterparts of the closed forms, summing over all
// configurations of a degree-k node. Exponential in N, intended for N <= 4.
double enumerate_total(int k, int N, const std::vector<double> &p, const ConditionalTable &q);
double enumerate_first_moment(int j, int k, int N, const std::vector<double> &p,
                              const ConditionalTable &q);
double enumerate_second_moment(int j1, int k1, int j2, int k2, int N,
                               const std::vector<double> &p, const ConditionalTable &q);

} // namespace corrperc::colour
