#include "corrperc/colour_map.hpp"

#include <stdexcept>

#include "corrperc/binomial.hpp"

namespace corrperc::colour {

int index(int j, int k, int N) {
    if (j < 1 || j > N || k < 1 || k > N)
        throw std::invalid_argument("colour index: degrees out of range");
    return (j - 1) * N + k;
}

std::pair<int, int> unindex(int i, int N) {
    if (i < 1 || i > N * N) throw std::invalid_argument("colour unindex: index out of range");
    return {(i - 1) / N + 1, (i - 1) % N + 1};
}

std::vector<int> support(int k, int N) {
    if (k < 1 || k > N) throw std::invalid_argument("colour support: degree out of range");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) out.push_back(j * N + k);
    return out;
}

double coloured_pmf(const std::vector<int> &counts, const std::vector<double> &p,
                    const ConditionalTable &q) {
    const int N = q.q.rows();
    if (counts.size() != static_cast<std::size_t>(N) * static_cast<std::size_t>(N))
        throw std::invalid_argument("coloured_pmf: counts must cover all N^2 colours");
    long long total = 0;
    for (int c : counts) {
        if (c < 0) throw std::invalid_argument("coloured_pmf: negative count");
        total += c;
    }
    if (total < 1) throw std::invalid_argument("coloured_pmf: degree must be at least 1");
    if (total > N) return 0.0;
    const int k = static_cast<int>(total);
    // Any mass on a colour whose host-degree component differs from k is
    // impossible for a degree-k node.
    for (int i = 1; i <= N * N; ++i) {
        const int c = counts[static_cast<std::size_t>(i - 1)];
        if (c > 0 && unindex(i, N).second != k) return 0.0;
    }
    double prob = p[static_cast<std::size_t>(k)];
    double multinomial = 1.0;
    int placed = 0;
    for (int j = 1; j <= N; ++j) {
        const int c = counts[static_cast<std::size_t>(index(j, k, N) - 1)];
        if (c == 0) continue;
        // Running product of binomials builds k! / prod(c_i!) exactly.
        placed += c;
        double choose = 1.0;
        for (int i = 1; i <= c; ++i) choose = choose * (placed - c + i) / i;
        multinomial *= choose;
        prob *= ipow(q(j, k), c);
    }
    return prob * multinomial;
}

double first_moment(int j, int k, const std::vector<double> &p, const ConditionalTable &q) {
    return k * p[static_cast<std::size_t>(k)] * q(j, k);
}

double second_moment(int j1, int k1, int j2, int k2, const std::vector<double> &p,
                     const ConditionalTable &q) {
    if (k1 != k2) return 0.0;
    const double same_edge = (j1 == j2) ? 1.0 : 0.0;
    return k1 * p[static_cast<std::size_t>(k1)] * q(j1, k1) *
           ((k1 - 1) * q(j2, k1) + same_edge);
}

namespace {

void recurse(int slot, int remaining, int k, int N, std::vector<int> &counts,
             const std::function<void(const std::vector<int> &)> &fn) {
    if (slot == N) {
        if (remaining == 0) fn(counts);
        return;
    }
    const int j = slot + 1;
    const std::size_t pos = static_cast<std::size_t>(index(j, k, N) - 1);
    for (int c = 0; c <= remaining; ++c) {
        counts[pos] = c;
        recurse(slot + 1, remaining - c, k, N, counts, fn);
    }
    counts[pos] = 0;
}

} // namespace

void for_each_configuration(int k, int N,
                            const std::function<void(const std::vector<int> &)> &fn) {
    if (k < 1 || k > N) throw std::invalid_argument("for_each_configuration: degree out of range");
    std::vector<int> counts(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 0);
    recurse(0, k, k, N, counts, fn);
}

double enumerate_total(int k, int N, const std::vector<double> &p, const ConditionalTable &q) {
    double acc = 0.0;
    for_each_configuration(k, N,
                           [&](const std::vector<int> &c) { acc += coloured_pmf(c, p, q); });
    return acc;
}

double enumerate_first_moment(int j, int k, int N, const std::vector<double> &p,
                              const ConditionalTable &q) {
    const std::size_t pos = static_cast<std::size_t>(index(j, k, N) - 1);
    double acc = 0.0;
    for_each_configuration(k, N, [&](const std::vector<int> &c) {
        if (c[pos] > 0) acc += c[pos] * coloured_pmf(c, p, q);
    });
    return acc;
}

double enumerate_second_moment(int j1, int k1, int j2, int k2, int N,
                               const std::vector<double> &p, const ConditionalTable &q) {
    if (k1 != k2) return 0.0;
    const std::size_t p1 = static_cast<std::size_t>(index(j1, k1, N) - 1);
    const std::size_t p2 = static_cast<std::size_t>(index(j2, k2, N) - 1);
    double acc = 0.0;
    for_each_configuration(k1, N, [&](const std::vector<int> &c) {
        if (c[p1] > 0 && c[p2] > 0)
            acc += static_cast<double>(c[p1]) * c[p2] * coloured_pmf(c, p, q);
    });
    return acc;
}

} // namespace corrperc::colour
