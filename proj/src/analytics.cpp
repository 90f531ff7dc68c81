#include "corrperc/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "corrperc/binomial.hpp"
#include "corrperc/kernels.hpp"

namespace corrperc {

namespace {

constexpr double kConditionLimit = 1e12;

void check_retention(double pi) {
    if (!(pi > 0.0) || !(pi <= 1.0))
        throw std::invalid_argument("retention probability must lie in (0, 1]");
}

// Clamp so exp() can neither overflow nor flush a nonzero sign to zero.
double representable(double log_abs) {
    return std::exp(std::min(700.0, std::max(-700.0, log_abs)));
}

int indicator_sign(const Matrix &C) {
    const int N = C.rows();
    Matrix A = C;
    for (int i = 0; i < N; ++i) A(i, i) -= 1.0;
    const kernels::SignLogDet det = kernels::lu_sign_logdet(std::move(A));
    const int parity = ((N - 1) % 2 == 0) ? 1 : -1;
    return parity * det.sign;
}

} // namespace

GiantSolution giant_component(const JointDistribution &e, double pi, double tol,
                              long max_iter) {
    check_retention(pi);
    const JointDistribution ep = e.percolated(pi);
    const std::vector<double> p = thinned_node_distribution(e.node_distribution(), pi);
    const ConditionalTable q = ep.conditional();
    const int N = e.max_degree();

    // Iteration matrix with rows indexed by the host degree so one matvec
    // advances every coordinate: qt(k-1, j-1) = q(j|k).
    Matrix qt(N, N);
    for (int k = 1; k <= N; ++k)
        for (int j = 1; j <= N; ++j) qt(k - 1, j - 1) = q(j, k);

    std::vector<double> y(static_cast<std::size_t>(N), 0.0);
    std::vector<double> z(static_cast<std::size_t>(N), 0.0);
    std::vector<double> next(static_cast<std::size_t>(N), 0.0);

    GiantSolution out;
    out.residual = std::numeric_limits<double>::infinity();
    for (long iter = 0; iter < max_iter && !(out.residual < tol); ++iter) {
        for (int j = 1; j <= N; ++j)
            z[static_cast<std::size_t>(j - 1)] = ipow(y[static_cast<std::size_t>(j - 1)], j - 1);
        kernels::matvec(qt, z.data(), next.data());
        double residual = 0.0;
        for (int k = 0; k < N; ++k)
            residual = std::max(residual, std::abs(next[static_cast<std::size_t>(k)] -
                                                   y[static_cast<std::size_t>(k)]));
        y.swap(next);
        out.residual = residual;
        out.iterations = iter + 1;
    }
    if (!(out.residual < tol))
        throw std::runtime_error("giant component iteration did not converge");

    out.y.assign(static_cast<std::size_t>(N) + 1, 1.0);
    for (int k = 1; k <= N; ++k) out.y[static_cast<std::size_t>(k)] = y[static_cast<std::size_t>(k - 1)];

    kernels::NeumaierSum finite;
    finite.add(p[0]);
    for (int k = 1; k <= N; ++k)
        finite.add(p[static_cast<std::size_t>(k)] * ipow(out.y[static_cast<std::size_t>(k)], k));
    out.s = 1.0 - finite.get();
    return out;
}

double uncorrelated_giant(const JointDistribution &e, double pi, double tol, long max_iter) {
    check_retention(pi);
    const JointDistribution ep = e.percolated(pi);
    const std::vector<double> p = thinned_node_distribution(e.node_distribution(), pi);
    const std::vector<double> &m = ep.edge_marginal();
    const int N = e.max_degree();

    double u = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    for (long iter = 0; iter < max_iter && !(residual < tol); ++iter) {
        kernels::NeumaierSum acc;
        for (int k = 1; k <= N; ++k)
            acc.add(m[static_cast<std::size_t>(k - 1)] * ipow(u, k - 1));
        const double next = acc.get();
        residual = std::abs(next - u);
        u = next;
    }
    if (!(residual < tol))
        throw std::runtime_error("scalar giant iteration did not converge");

    kernels::NeumaierSum finite;
    finite.add(p[0]);
    for (int k = 1; k <= N; ++k) finite.add(p[static_cast<std::size_t>(k)] * ipow(u, k));
    return 1.0 - finite.get();
}

double finite_component_size(const JointDistribution &e, double pi, const GiantSolution &giant) {
    check_retention(pi);
    const int N = e.max_degree();
    if (giant.y.size() != static_cast<std::size_t>(N) + 1)
        throw std::invalid_argument("giant solution does not match the table");
    if (!(giant.s < 1.0)) return std::numeric_limits<double>::quiet_NaN();

    const JointDistribution ep = e.percolated(pi);
    const std::vector<double> p = thinned_node_distribution(e.node_distribution(), pi);
    const ConditionalTable q = ep.conditional();

    std::vector<double> z(static_cast<std::size_t>(N), 0.0);
    for (int k = 1; k <= N; ++k)
        z[static_cast<std::size_t>(k - 1)] = ipow(giant.y[static_cast<std::size_t>(k)], k - 1);

    // Subtree-size generating system summed over the host degree: the full
    // colour-space resolvent collapses to one unknown per degree,
    // G_k = y_k^(k-1) + sum_m q[m|k] (m-1) y_m^(m-2) G_m.
    Matrix A(N, N);
    for (int k = 1; k <= N; ++k) {
        A(k - 1, k - 1) = 1.0;
        for (int m = 2; m <= N; ++m)
            A(k - 1, m - 1) -= q(m, k) * (m - 1) * ipow(giant.y[static_cast<std::size_t>(m)], m - 2);
    }
    const double a_norm = kernels::norm1(A);
    const kernels::LuFactors f = kernels::lu_factor(std::move(A));
    if (f.singular || a_norm * kernels::inverse_norm1_estimate(f) > kConditionLimit)
        return std::numeric_limits<double>::infinity();
    std::vector<double> G = z;
    kernels::lu_solve(f, G.data());

    kernels::NeumaierSum num;
    for (int k = 1; k <= N; ++k) {
        const double pk = p[static_cast<std::size_t>(k)];
        if (pk == 0.0) continue;
        kernels::NeumaierSum inner;
        for (int j = 1; j <= N; ++j) {
            const double zj = z[static_cast<std::size_t>(j - 1)];
            inner.add(q(j, k) * zj * zj);
        }
        double term = inner.get();
        if (k >= 2)
            term += (k - 1) * ipow(giant.y[static_cast<std::size_t>(k)], k - 1) *
                    G[static_cast<std::size_t>(k - 1)];
        num.add(k * pk * term);
    }
    return num.get() / (1.0 - giant.s) + 1.0;
}

CriticalityMatrix build_C(const JointDistribution &e, double pi) {
    check_retention(pi);
    const JointDistribution ep = e.percolated(pi);
    const ConditionalTable q = ep.conditional();
    const int N = e.max_degree();
    Matrix C(N, N);
    for (int k = 2; k <= N; ++k)
        for (int j = 1; j <= N; ++j) C(j - 1, k - 1) = (k - 1) * q(j, k);
    return {std::move(C), pi};
}

double sign_indicator(const CriticalityMatrix &cm) {
    const int N = cm.C.rows();
    Matrix A = cm.C;
    for (int i = 0; i < N; ++i) A(i, i) -= 1.0;
    const kernels::SignLogDet det = kernels::lu_sign_logdet(std::move(A));
    if (det.sign == 0) return 0.0;
    const int parity = ((N - 1) % 2 == 0) ? 1 : -1;
    return parity * det.sign * representable(det.log_abs);
}

ThresholdResult find_threshold(const JointDistribution &e, double pi_step, double bracket) {
    if (!(pi_step > 0.0) || !(pi_step < 1.0))
        throw std::invalid_argument("scan step must lie in (0, 1)");
    if (!(bracket > 0.0)) throw std::invalid_argument("bracket width must be positive");

    // Degrees past the last one carrying edge mass stay empty under thinning;
    // dropping them shrinks every determinant without moving the indicator.
    int K = e.max_degree();
    while (K > 1 && !e.degree_active(K)) --K;
    std::optional<JointDistribution> truncated;
    if (K < e.max_degree()) {
        Matrix block(K, K);
        for (int j = 1; j <= K; ++j)
            for (int k = 1; k <= K; ++k) block(j - 1, k - 1) = e(j, k);
        truncated.emplace(std::move(block));
    }
    const JointDistribution &et = truncated ? *truncated : e;

    const auto sign_at = [&](double pi) { return indicator_sign(build_C(et, pi).C); };

    ThresholdResult out;
    out.scan_resolution = pi_step;

    // The indicator is negative at pi -> 0; scan for its first nonnegative
    // grid value, then bisect the enclosing interval.
    const long steps = static_cast<long>(std::ceil(1.0 / pi_step));
    double lo = 0.0;
    double hi = -1.0;
    for (long i = 1; i <= steps; ++i) {
        const double pi = (i == steps) ? 1.0 : std::min(1.0, static_cast<double>(i) * pi_step);
        if (sign_at(pi) >= 0) {
            hi = pi;
            break;
        }
        lo = pi;
    }
    if (hi < 0.0) return out;

    while (hi - lo > bracket) {
        const double mid = 0.5 * (lo + hi);
        if (sign_at(mid) >= 0)
            hi = mid;
        else
            lo = mid;
    }
    out.pi_c = 0.5 * (lo + hi);
    out.bracket = hi - lo;
    return out;
}

} // namespace corrperc
