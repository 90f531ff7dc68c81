#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "corrperc/joint_dist.hpp"
#include "corrperc/matrix.hpp"

namespace corrperc::mc {

// One sampled multigraph. Self-loops and parallel edges are kept, as the
// analytic formulas are locally tree-like asymptotics and rewiring would bias
// small-n comparisons more than the O(1/n) multi-edge effects do.
struct GraphSample {
    long n = 0;                     // node count
    std::vector<int> degrees;       // delivered degree per node
    std::vector<std::pair<long, long>> edges;
    std::uint64_t seed = 0;
    Matrix realized_e;              // empirical end-degree table of the edges,
                                    // both orientations, normalized to 1
};

struct ComponentStats {
    double s_hat = 0.0;             // largest component / n
    double w_hat = 0.0;             // size-biased mean component size over the
                                    // non-largest components; NaN if there are none
    std::map<long, long> counts;    // component size -> number of components
};

struct EnsembleRow {
    double pi = 0.0;
    double s_mean = 0.0;
    double s_stderr = 0.0;
    double w_mean = 0.0;
    double w_stderr = 0.0;
    double r_mean = 0.0;            // empirical end-degree Pearson coefficient
};

// Draws a multigraph whose edge-end degree pairs follow e: node counts by
// largest-remainder rounding of n p_k (stub total forced even), then edges
// sampled sequentially with the ordered end-degree pair proportional to e
// restricted to classes that still have free stubs. Stubs that can no longer
// be paired are dropped and the affected degrees reduced, so the handshake
// sum degrees = 2 |edges| always holds. Throws when rounding leaves no
// feasible edge at all.
GraphSample sample_graph(const JointDistribution &e, long n, std::uint64_t seed);

// Keeps each edge independently with probability pi and rebuilds degrees and
// the realized table from the survivors.
GraphSample bond_percolate(const GraphSample &g, double pi, std::uint64_t seed);

// Union-find component census. Isolated nodes count as size-1 components.
ComponentStats component_stats(const GraphSample &g);

// Ensemble means and standard errors over independent replicas per grid
// point. Replica streams are derived from (seed, grid index, replica), and
// the reduction runs in replica order, so results are bit-identical for any
// thread count.
std::vector<EnsembleRow> run_ensemble(const JointDistribution &e, long n,
                                      const std::vector<double> &pi_grid, int replicas,
                                      std::uint64_t seed);

} // namespace corrperc::mc
