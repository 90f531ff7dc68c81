#include "corrperc/coloured_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "corrperc/binomial.hpp"
#include "corrperc/colour_map.hpp"
#include "corrperc/kernels.hpp"

namespace corrperc {

namespace {
constexpr int kMaxOracleDegree = 32;
constexpr double kConditionLimit = 1e12;
} // namespace

ColouredSystem::ColouredSystem(const JointDistribution &e)
    : ColouredSystem(e, e.node_distribution()) {}

ColouredSystem::ColouredSystem(const JointDistribution &e, std::vector<double> node_dist)
    : N_(e.max_degree()), p_(std::move(node_dist)), q_(e.conditional()) {
    if (N_ > kMaxOracleDegree)
        throw std::invalid_argument("coloured oracle: capped at N <= 32 by design");
    if (p_.size() != static_cast<std::size_t>(N_) + 1)
        throw std::invalid_argument("coloured oracle: node distribution must cover degrees 0..N");
}

Matrix ColouredSystem::permutation_matrix() const {
    const int M = colours();
    Matrix P(M, M);
    for (int i = 1; i <= M; ++i) {
        const auto [j, k] = colour::unindex(i, N_);
        P(i - 1, colour::index(k, j, N_) - 1) = 1.0;
    }
    return P;
}

std::vector<double> ColouredSystem::first_moment_diagonal() const {
    const int M = colours();
    std::vector<double> d(static_cast<std::size_t>(M), 0.0);
    for (int i = 1; i <= M; ++i) {
        const auto [j, k] = colour::unindex(i, N_);
        d[static_cast<std::size_t>(i - 1)] = colour::first_moment(j, k, p_, q_);
    }
    return d;
}

std::vector<double> ColouredSystem::F_closed(const std::vector<double> &x) const {
    const int M = colours();
    std::vector<double> out(static_cast<std::size_t>(M), 0.0);
    for (int i = 1; i <= M; ++i) {
        const int k = colour::unindex(i, N_).second;
        double inner = 0.0;
        for (int j1 = 1; j1 <= N_; ++j1)
            inner += q_(j1, k) * x[static_cast<std::size_t>(colour::index(j1, k, N_) - 1)];
        out[static_cast<std::size_t>(i - 1)] = ipow(inner, k - 1);
    }
    return out;
}

std::vector<double> ColouredSystem::F_enumerated(const std::vector<double> &x) const {
    const int M = colours();
    std::vector<double> out(static_cast<std::size_t>(M),
                            std::numeric_limits<double>::quiet_NaN());
    const std::vector<double> d = first_moment_diagonal();
    for (int i = 1; i <= M; ++i) {
        if (!(d[static_cast<std::size_t>(i - 1)] > 0.0)) continue;
        const int k = colour::unindex(i, N_).second;
        double acc = 0.0;
        colour::for_each_configuration(k, N_, [&](const std::vector<int> &c) {
            const int ci = c[static_cast<std::size_t>(i - 1)];
            if (ci == 0) return;
            double weight = static_cast<double>(ci) * colour::coloured_pmf(c, p_, q_);
            if (weight == 0.0) return;
            for (int l = 1; l <= M; ++l) {
                const int exponent = c[static_cast<std::size_t>(l - 1)] - (l == i ? 1 : 0);
                if (exponent > 0) weight *= ipow(x[static_cast<std::size_t>(l - 1)], exponent);
            }
            acc += weight;
        });
        out[static_cast<std::size_t>(i - 1)] = acc / d[static_cast<std::size_t>(i - 1)];
    }
    return out;
}

std::vector<double> ColouredSystem::solve_fixed_point(double tol, long max_iter) const {
    const int M = colours();
    std::vector<double> x(static_cast<std::size_t>(M), 0.0);
    std::vector<double> fx(static_cast<std::size_t>(M), 0.0);
    for (long iter = 0; iter < max_iter; ++iter) {
        fx = F_closed(x);
        // x <- P F(x): coordinate (j,k) takes F at the paired colour (k,j).
        double residual = 0.0;
        for (int i = 1; i <= M; ++i) {
            const auto [j, k] = colour::unindex(i, N_);
            const double next = fx[static_cast<std::size_t>(colour::index(k, j, N_) - 1)];
            residual = std::max(residual,
                                std::abs(next - x[static_cast<std::size_t>(i - 1)]));
            x[static_cast<std::size_t>(i - 1)] = next;
        }
        if (residual < tol) return x;
    }
    throw std::runtime_error("coloured oracle: fixed point did not converge");
}

double ColouredSystem::giant(const std::vector<double> &x) const {
    kernels::NeumaierSum finite;
    finite.add(p_[0]);
    for (int k = 1; k <= N_; ++k) {
        double inner = 0.0;
        for (int j = 1; j <= N_; ++j)
            inner += q_(j, k) * x[static_cast<std::size_t>(colour::index(j, k, N_) - 1)];
        finite.add(p_[static_cast<std::size_t>(k)] * ipow(inner, k));
    }
    return 1.0 - finite.get();
}

Matrix ColouredSystem::build_H(const std::vector<double> &x) const {
    const int M = colours();
    Matrix H(M, M);
    for (int i1 = 1; i1 <= M; ++i1) {
        const int k1 = colour::unindex(i1, N_).second;
        if (k1 == 1) continue;
        double inner = 0.0;
        for (int l = 1; l <= N_; ++l)
            inner += q_(l, k1) * x[static_cast<std::size_t>(colour::index(l, k1, N_) - 1)];
        const double damped = (k1 - 1) * ipow(inner, k1 - 2);
        if (damped == 0.0) continue;
        for (int j2 = 1; j2 <= N_; ++j2)
            H(i1 - 1, colour::index(j2, k1, N_) - 1) = damped * q_(j2, k1);
    }
    return H;
}

double ColouredSystem::H_closed(int i1, int i2, const std::vector<double> &x) const {
    const auto [j2, k2] = colour::unindex(i2, N_);
    const int k1 = colour::unindex(i1, N_).second;
    if (k1 != k2 || k1 == 1) return 0.0;
    double inner = 0.0;
    for (int l = 1; l <= N_; ++l)
        inner += q_(l, k1) * x[static_cast<std::size_t>(colour::index(l, k1, N_) - 1)];
    return (k1 - 1) * q_(j2, k1) * ipow(inner, k1 - 2);
}

double ColouredSystem::H_enumerated(int i1, int i2, const std::vector<double> &x) const {
    const int M = colours();
    const std::vector<double> d = first_moment_diagonal();
    if (!(d[static_cast<std::size_t>(i1 - 1)] > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    const int k = colour::unindex(i1, N_).second;
    double acc = 0.0;
    colour::for_each_configuration(k, N_, [&](const std::vector<int> &c) {
        const int c1 = c[static_cast<std::size_t>(i1 - 1)];
        if (c1 == 0) return;
        const int c2 = c[static_cast<std::size_t>(i2 - 1)] - (i1 == i2 ? 1 : 0);
        if (c2 <= 0) return;
        double weight = static_cast<double>(c1) * c2 * colour::coloured_pmf(c, p_, q_);
        if (weight == 0.0) return;
        for (int l = 1; l <= M; ++l) {
            const int exponent = c[static_cast<std::size_t>(l - 1)] - (l == i1 ? 1 : 0) -
                                 (l == i2 ? 1 : 0);
            if (exponent > 0) weight *= ipow(x[static_cast<std::size_t>(l - 1)], exponent);
        }
        acc += weight;
    });
    return acc / d[static_cast<std::size_t>(i1 - 1)];
}

double ColouredSystem::finite_component_size(const std::vector<double> &x, double s) const {
    if (!(s < 1.0)) throw std::invalid_argument("finite components: giant spans everything");
    const int M = colours();
    const Matrix H = build_H(x);
    // A = I - H P; (HP) column (j2,k2) is H's column (k2,j2).
    Matrix A(M, M);
    for (int i1 = 1; i1 <= M; ++i1) {
        for (int i2 = 1; i2 <= M; ++i2) {
            const auto [j2, k2] = colour::unindex(i2, N_);
            const double hp = H(i1 - 1, colour::index(k2, j2, N_) - 1);
            A(i1 - 1, i2 - 1) = (i1 == i2 ? 1.0 : 0.0) - hp;
        }
    }
    const double a_norm = kernels::norm1(A);
    const kernels::LuFactors f = kernels::lu_factor(A);
    if (f.singular || a_norm * kernels::inverse_norm1_estimate(f) > kConditionLimit)
        return std::numeric_limits<double>::infinity();
    std::vector<double> z = x;
    kernels::lu_solve(f, z.data());
    const std::vector<double> d = first_moment_diagonal();
    kernels::NeumaierSum acc;
    for (int i = 0; i < M; ++i)
        acc.add(x[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)] *
                z[static_cast<std::size_t>(i)]);
    return acc.get() / (1.0 - s) + 1.0;
}

std::pair<Matrix, Matrix> ColouredSystem::criticality_matrices() const {
    const int M = colours();
    Matrix Mm(M, M);
    Matrix PM(M, M);
    for (int i1 = 1; i1 <= M; ++i1) {
        const auto [j1, k1] = colour::unindex(i1, N_);
        for (int i2 = 1; i2 <= M; ++i2) {
            const int k2 = colour::unindex(i2, N_).second;
            if (k1 == k2) Mm(i1 - 1, i2 - 1) = q_(j1, k1) * (k1 - 1);
            if (j1 == k2) PM(i1 - 1, i2 - 1) = (j1 - 1) * q_(k1, j1);
        }
    }
    return {std::move(Mm), std::move(PM)};
}

} // namespace corrperc
