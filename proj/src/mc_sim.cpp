#include "corrperc/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "corrperc/kernels.hpp"
#include "corrperc/rng.hpp"

namespace corrperc::mc {

namespace {

// Node counts per degree class by largest-remainder rounding of n p_k,
// ties broken by the larger remainder first, then the smaller degree.
std::vector<long> class_counts(const std::vector<double> &p, long n) {
    const int N = static_cast<int>(p.size()) - 1;
    std::vector<long> count(p.size(), 0);
    std::vector<std::pair<double, int>> remainder;
    long assigned = 0;
    for (int k = 1; k <= N; ++k) {
        const double target = static_cast<double>(n) * p[static_cast<std::size_t>(k)];
        const double base = std::floor(target);
        count[static_cast<std::size_t>(k)] = static_cast<long>(base);
        assigned += static_cast<long>(base);
        remainder.emplace_back(target - base, k);
    }
    std::sort(remainder.begin(), remainder.end(), [](const auto &a, const auto &b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (long i = 0; i < n - assigned && i < static_cast<long>(remainder.size()); ++i)
        ++count[static_cast<std::size_t>(remainder[static_cast<std::size_t>(i)].second)];

    long stub_total = 0;
    for (int k = 1; k <= N; ++k) stub_total += k * count[static_cast<std::size_t>(k)];
    if (stub_total % 2 != 0) {
        // One extra node in the largest populated odd class makes the stub
        // total even; an odd total guarantees such a class exists.
        for (int k = N; k >= 1; --k) {
            if (k % 2 == 1 && count[static_cast<std::size_t>(k)] > 0) {
                ++count[static_cast<std::size_t>(k)];
                break;
            }
        }
    }
    return count;
}

Matrix realized_table(int N, const std::vector<int> &degrees,
                      const std::vector<std::pair<long, long>> &edges) {
    Matrix table(N, N);
    for (const auto &[u, v] : edges) {
        const int j = degrees[static_cast<std::size_t>(u)];
        const int k = degrees[static_cast<std::size_t>(v)];
        table(j - 1, k - 1) += 1.0;
        table(k - 1, j - 1) += 1.0;
    }
    if (!edges.empty()) {
        const double inv = 1.0 / (2.0 * static_cast<double>(edges.size()));
        for (std::size_t i = 0; i < table.size(); ++i) table.data()[i] *= inv;
    }
    return table;
}

double sample_mean(const std::vector<double> &x) {
    return kernels::accurate_sum(x.data(), x.size()) / static_cast<double>(x.size());
}

double standard_error(const std::vector<double> &x, double mean) {
    const std::size_t R = x.size();
    if (R < 2) return std::numeric_limits<double>::quiet_NaN();
    kernels::NeumaierSum acc;
    for (double v : x) acc.add((v - mean) * (v - mean));
    return std::sqrt(acc.get() / static_cast<double>(R - 1)) /
           std::sqrt(static_cast<double>(R));
}

// Pearson coefficient of the two end degrees of a random edge, straight off
// an empirical (already normalized) table.
double table_pearson(const Matrix &table) {
    const int N = table.rows();
    kernels::NeumaierSum ek;
    kernels::NeumaierSum ek2;
    kernels::NeumaierSum ejk;
    for (int j = 1; j <= N; ++j) {
        for (int k = 1; k <= N; ++k) {
            const double w = table(j - 1, k - 1);
            if (w == 0.0) continue;
            ek.add(w * k);
            ek2.add(w * k * k);
            ejk.add(w * j * k);
        }
    }
    const double mean = ek.get();
    const double var = ek2.get() - mean * mean;
    if (!(var > 1e-14)) return std::numeric_limits<double>::quiet_NaN();
    return (ejk.get() - mean * mean) / var;
}

} // namespace

GraphSample sample_graph(const JointDistribution &e, long n, std::uint64_t seed) {
    if (n < 10) throw std::invalid_argument("graph sampling needs n >= 10");
    const int N = e.max_degree();
    const std::vector<long> count = class_counts(e.node_distribution(), n);

    GraphSample g;
    g.seed = seed;
    g.n = std::accumulate(count.begin(), count.end(), 0L);
    g.degrees.reserve(static_cast<std::size_t>(g.n));

    // Nodes are laid out class by class; stubs[k] lists every free stub of
    // the degree-k class and shrinks by swap-and-pop as ends are consumed.
    std::vector<std::vector<long>> stubs(static_cast<std::size_t>(N) + 1);
    long next_node = 0;
    long stub_total = 0;
    for (int k = 1; k <= N; ++k) {
        auto &pool = stubs[static_cast<std::size_t>(k)];
        pool.reserve(static_cast<std::size_t>(k) * count[static_cast<std::size_t>(k)]);
        for (long c = 0; c < count[static_cast<std::size_t>(k)]; ++c) {
            g.degrees.push_back(k);
            for (int s = 0; s < k; ++s) pool.push_back(next_node);
            ++next_node;
        }
        stub_total += static_cast<long>(pool.size());
    }
    g.edges.reserve(static_cast<std::size_t>(stub_total / 2));

    // Cumulative weights over ordered degree pairs (j,k), zeroed where a
    // class has no free stub left (a diagonal pair needs two). Rebuilt only
    // when a class crosses one of those feasibility boundaries.
    auto free_of = [&](int k) { return static_cast<long>(stubs[static_cast<std::size_t>(k)].size()); };
    std::vector<double> cumulative(static_cast<std::size_t>(N) * N, 0.0);
    const auto rebuild = [&]() {
        double running = 0.0;
        for (int j = 1; j <= N; ++j) {
            for (int k = 1; k <= N; ++k) {
                const long need_j = (j == k) ? 2 : 1;
                if (free_of(j) >= need_j && free_of(k) >= 1) running += e(j, k);
                cumulative[static_cast<std::size_t>((j - 1) * N + (k - 1))] = running;
            }
        }
        return running;
    };

    Rng rng(seed);
    bool stale = true;
    double total = 0.0;
    const long edge_target = stub_total / 2;
    while (static_cast<long>(g.edges.size()) < edge_target) {
        if (stale) {
            total = rebuild();
            stale = false;
        }
        if (!(total > 0.0)) break; // remaining stubs cannot be paired
        const double u = rng.uniform01() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        const int pair_index = static_cast<int>(it - cumulative.begin());
        const int j = pair_index / N + 1;
        const int k = pair_index % N + 1;

        auto pop = [&](int deg) {
            auto &pool = stubs[static_cast<std::size_t>(deg)];
            const std::size_t at = static_cast<std::size_t>(rng.below(pool.size()));
            const long node = pool[at];
            pool[at] = pool.back();
            pool.pop_back();
            if (pool.size() <= 1) stale = true;
            return node;
        };
        const long end_j = pop(j);
        const long end_k = pop(k);
        g.edges.emplace_back(end_j, end_k);
    }
    if (g.edges.empty())
        throw std::runtime_error("degree table admits no feasible edge at this size");

    // Unpairable leftover stubs are dropped: the nodes deliver fewer edge
    // ends than targeted and the handshake identity holds exactly.
    for (int k = 1; k <= N; ++k)
        for (long node : stubs[static_cast<std::size_t>(k)])
            --g.degrees[static_cast<std::size_t>(node)];

    g.realized_e = realized_table(N, g.degrees, g.edges);
    return g;
}

GraphSample bond_percolate(const GraphSample &g, double pi, std::uint64_t seed) {
    if (!(pi >= 0.0) || !(pi <= 1.0))
        throw std::invalid_argument("retention probability must lie in [0, 1]");
    GraphSample out;
    out.n = g.n;
    out.seed = seed;
    out.degrees.assign(g.degrees.size(), 0);
    Rng rng(seed);
    for (const auto &edge : g.edges)
        if (rng.bernoulli(pi)) {
            out.edges.push_back(edge);
            ++out.degrees[static_cast<std::size_t>(edge.first)];
            ++out.degrees[static_cast<std::size_t>(edge.second)];
        }
    out.realized_e = realized_table(g.realized_e.rows(), out.degrees, out.edges);
    return out;
}

ComponentStats component_stats(const GraphSample &g) {
    std::vector<long> parent(static_cast<std::size_t>(g.n));
    std::vector<long> size(static_cast<std::size_t>(g.n), 1);
    std::iota(parent.begin(), parent.end(), 0L);
    const auto find = [&](long a) {
        long root = a;
        while (parent[static_cast<std::size_t>(root)] != root)
            root = parent[static_cast<std::size_t>(root)];
        while (parent[static_cast<std::size_t>(a)] != root) {
            const long up = parent[static_cast<std::size_t>(a)];
            parent[static_cast<std::size_t>(a)] = root;
            a = up;
        }
        return root;
    };
    for (const auto &[u, v] : g.edges) {
        long ru = find(u);
        long rv = find(v);
        if (ru == rv) continue;
        if (size[static_cast<std::size_t>(ru)] < size[static_cast<std::size_t>(rv)])
            std::swap(ru, rv);
        parent[static_cast<std::size_t>(rv)] = ru;
        size[static_cast<std::size_t>(ru)] += size[static_cast<std::size_t>(rv)];
    }

    ComponentStats stats;
    long largest = 0;
    for (long v = 0; v < g.n; ++v)
        if (find(v) == v) {
            ++stats.counts[size[static_cast<std::size_t>(v)]];
            largest = std::max(largest, size[static_cast<std::size_t>(v)]);
        }
    stats.s_hat = static_cast<double>(largest) / static_cast<double>(g.n);

    // Size-biased mean over everything except one largest component: the
    // expected component size seen from a random node outside it.
    const long rest_nodes = g.n - largest;
    if (rest_nodes == 0) {
        stats.w_hat = std::numeric_limits<double>::quiet_NaN();
    } else {
        double sum_sq = -static_cast<double>(largest) * static_cast<double>(largest);
        for (const auto &[s, c] : stats.counts)
            sum_sq += static_cast<double>(s) * static_cast<double>(s) * static_cast<double>(c);
        stats.w_hat = sum_sq / static_cast<double>(rest_nodes);
    }
    return stats;
}

std::vector<EnsembleRow> run_ensemble(const JointDistribution &e, long n,
                                      const std::vector<double> &pi_grid, int replicas,
                                      std::uint64_t seed) {
    if (replicas < 1) throw std::invalid_argument("ensemble needs at least one replica");
    std::vector<EnsembleRow> rows;
    rows.reserve(pi_grid.size());
    for (std::size_t i = 0; i < pi_grid.size(); ++i) {
        const double pi = pi_grid[i];
        std::vector<double> s_hat(static_cast<std::size_t>(replicas), 0.0);
        std::vector<double> w_hat(static_cast<std::size_t>(replicas), 0.0);
        std::vector<double> r_hat(static_cast<std::size_t>(replicas), 0.0);
        std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < replicas; ++r) {
            try {
                const std::uint64_t replica_seed =
                    mix_seed(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(r));
                const GraphSample g = sample_graph(e, n, replica_seed);
                const GraphSample gp = bond_percolate(g, pi, mix_seed(replica_seed, 1));
                const ComponentStats stats = component_stats(gp);
                s_hat[static_cast<std::size_t>(r)] = stats.s_hat;
                w_hat[static_cast<std::size_t>(r)] = stats.w_hat;
                r_hat[static_cast<std::size_t>(r)] = table_pearson(gp.realized_e);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);

        EnsembleRow row;
        row.pi = pi;
        row.s_mean = sample_mean(s_hat);
        row.s_stderr = standard_error(s_hat, row.s_mean);
        row.w_mean = sample_mean(w_hat);
        row.w_stderr = standard_error(w_hat, row.w_mean);
        row.r_mean = sample_mean(r_hat);
        rows.push_back(row);
    }
    return rows;
}

} // namespace corrperc::mc
