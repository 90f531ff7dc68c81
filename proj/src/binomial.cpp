#include "corrperc/binomial.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace corrperc {

double ipow(double x, int n) {
    if (n < 0) throw std::invalid_argument("ipow: negative exponent");
    double acc = 1.0;
    double base = x;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

namespace {

// C(n, m) exactly; valid while the result fits a double exactly, which holds
// for all n <= 50 (C(50, 25) < 2^53).
double choose_exact(int n, int m) {
    if (m > n - m) m = n - m;
    double c = 1.0;
    for (int i = 1; i <= m; ++i) c = c * (n - m + i) / i;
    return c;
}

double lgamma_int(int n) { return std::lgamma(static_cast<double>(n)); }

} // namespace

double binom_pmf(int n, int m, double pi) {
    if (n < 0 || m < 0 || m > n) return 0.0;
    if (pi < 0.0 || pi > 1.0) throw std::invalid_argument("binom_pmf: probability out of range");
    if (pi == 0.0) return m == 0 ? 1.0 : 0.0;
    if (pi == 1.0) return m == n ? 1.0 : 0.0;
    if (n <= 50) return choose_exact(n, m) * ipow(pi, m) * ipow(1.0 - pi, n - m);
    const double log_c = lgamma_int(n + 1) - lgamma_int(m + 1) - lgamma_int(n - m + 1);
    return std::exp(log_c + m * std::log(pi) + (n - m) * std::log1p(-pi));
}

Matrix edge_thinning_matrix(int N, double pi) {
    if (N < 1) throw std::invalid_argument("edge_thinning_matrix: N must be positive");
    if (pi < 0.0 || pi > 1.0)
        throw std::invalid_argument("edge_thinning_matrix: probability out of range");
    Matrix B(N, N);
    if (pi == 0.0) {
        for (int a = 0; a < N; ++a) B(a, 0) = 1.0;
        return B;
    }
    if (pi == 1.0) {
        for (int a = 0; a < N; ++a) B(a, a) = 1.0;
        return B;
    }
    const double log_pi = std::log(pi);
    const double log_qi = std::log1p(-pi);
    std::vector<double> lg(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) lg[static_cast<std::size_t>(i)] = lgamma_int(i + 1);
    for (int a = 0; a < N; ++a) {
        const int trials = a;  // degree a+1 endpoint, a other edges
        for (int b = 0; b <= trials; ++b) {
            if (trials <= 50) {
                B(a, b) = choose_exact(trials, b) * ipow(pi, b) * ipow(1.0 - pi, trials - b);
            } else {
                const double log_c = lg[static_cast<std::size_t>(trials)] -
                                     lg[static_cast<std::size_t>(b)] -
                                     lg[static_cast<std::size_t>(trials - b)];
                B(a, b) = std::exp(log_c + b * log_pi + (trials - b) * log_qi);
            }
        }
    }
    return B;
}

Matrix node_thinning_matrix(int N, double pi) {
    if (N < 0) throw std::invalid_argument("node_thinning_matrix: N must be nonnegative");
    if (pi < 0.0 || pi > 1.0)
        throw std::invalid_argument("node_thinning_matrix: probability out of range");
    Matrix T(N + 1, N + 1);
    if (pi == 0.0) {
        for (int a = 0; a <= N; ++a) T(a, 0) = 1.0;
        return T;
    }
    if (pi == 1.0) {
        for (int a = 0; a <= N; ++a) T(a, a) = 1.0;
        return T;
    }
    const double log_pi = std::log(pi);
    const double log_qi = std::log1p(-pi);
    std::vector<double> lg(static_cast<std::size_t>(N) + 2);
    for (int i = 0; i <= N + 1; ++i) lg[static_cast<std::size_t>(i)] = lgamma_int(i + 1);
    for (int a = 0; a <= N; ++a) {
        for (int b = 0; b <= a; ++b) {
            if (a <= 50) {
                T(a, b) = choose_exact(a, b) * ipow(pi, b) * ipow(1.0 - pi, a - b);
            } else {
                const double log_c = lg[static_cast<std::size_t>(a)] -
                                     lg[static_cast<std::size_t>(b)] -
                                     lg[static_cast<std::size_t>(a - b)];
                T(a, b) = std::exp(log_c + b * log_pi + (a - b) * log_qi);
            }
        }
    }
    return T;
}

} // namespace corrperc
