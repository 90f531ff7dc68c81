#include "corrperc/coloured_oracle.hpp"

#include "corrperc/colour_map.hpp"
#include "corrperc/joint_dist.hpp"
#include "corrperc/kernels.hpp"
#include "corrperc/matrix.hpp"
#include "corrperc/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace corrperc;

namespace {

JointDistribution delta_table(int degree) {
    Matrix m(degree, degree);
    m(degree - 1, degree - 1) = 1.0;
    return JointDistribution(std::move(m));
}

JointDistribution random_table(Rng &rng, int N) {
    Matrix m(N, N);
    for (int j = 0; j < N; ++j)
        for (int k = j; k < N; ++k) {
            const double w = rng.uniform01();
            m(j, k) = w;
            m(k, j) = w;
        }
    double total = kernels::accurate_sum(m.data(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] /= total;
    return JointDistribution(std::move(m));
}

std::vector<double> random_point(Rng &rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double &v : x) v = 0.2 + 0.7 * rng.uniform01();
    return x;
}

} // namespace

TEST_CASE("construction caps the dimension") {
    CHECK_THROWS_AS(ColouredSystem(delta_table(33)), std::invalid_argument);
    CHECK_NOTHROW(ColouredSystem(delta_table(3)));
}

TEST_CASE("explicit node distribution must span degrees 0..N") {
    const JointDistribution e = delta_table(2);
    CHECK_THROWS_AS(ColouredSystem(e, std::vector<double>{0.5, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(ColouredSystem(e, std::vector<double>{0.0, 0.0, 1.0}));
}

TEST_CASE("permutation matrix swaps the two degree components") {
    const int N = 3;
    const ColouredSystem sys(delta_table(N));
    const Matrix P = sys.permutation_matrix();
    for (int j = 1; j <= N; ++j)
        for (int k = 1; k <= N; ++k) {
            const int from = colour::index(j, k, N);
            const int to = colour::index(k, j, N);
            CHECK(P(from - 1, to - 1) == 1.0);
        }
    // Involution: P^2 = I.
    double offsum = 0.0;
    for (int a = 0; a < N * N; ++a)
        for (int b = 0; b < N * N; ++b) {
            double acc = 0.0;
            for (int c = 0; c < N * N; ++c) acc += P(a, c) * P(c, b);
            offsum += std::abs(acc - (a == b ? 1.0 : 0.0));
        }
    CHECK(offsum == 0.0);
}

TEST_CASE("first moment diagonal matches the closed-form moments") {
    Rng rng(11);
    const int N = 3;
    const JointDistribution e = random_table(rng, N);
    const ColouredSystem sys(e);
    const std::vector<double> d = sys.first_moment_diagonal();
    const std::vector<double> p = e.node_distribution();
    const ConditionalTable q = e.conditional();
    for (int j = 1; j <= N; ++j)
        for (int k = 1; k <= N; ++k)
            CHECK(d[static_cast<std::size_t>(colour::index(j, k, N) - 1)] ==
                  doctest::Approx(colour::first_moment(j, k, p, q)).epsilon(1e-14));
}

TEST_CASE("F closed form matches enumeration") {
    Rng rng(22);
    for (int N = 2; N <= 4; ++N) {
        const JointDistribution e = random_table(rng, N);
        const ColouredSystem sys(e);
        const std::vector<double> x = random_point(rng, N * N);
        const std::vector<double> closed = sys.F_closed(x);
        const std::vector<double> brute = sys.F_enumerated(x);
        REQUIRE(closed.size() == brute.size());
        for (std::size_t i = 0; i < closed.size(); ++i) {
            if (std::isnan(brute[i])) continue;  // colour absent from the network
            CHECK(closed[i] == doctest::Approx(brute[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("H closed form matches enumeration") {
    Rng rng(33);
    for (int N = 2; N <= 3; ++N) {
        const JointDistribution e = random_table(rng, N);
        const ColouredSystem sys(e);
        const std::vector<double> x = random_point(rng, N * N);
        const std::vector<double> d = sys.first_moment_diagonal();
        for (int i1 = 1; i1 <= N * N; ++i1) {
            if (d[static_cast<std::size_t>(i1 - 1)] <= 0.0) continue;
            for (int i2 = 1; i2 <= N * N; ++i2)
                CHECK(sys.H_closed(i1, i2, x) ==
                      doctest::Approx(sys.H_enumerated(i1, i2, x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("fixed point of the 3-regular system at full retention") {
    // u = u^2 for the survival-complement per end: smallest root u = 0, so
    // every colour entry on the active degree is 0 and the giant is everyone.
    const ColouredSystem sys(delta_table(3));
    const std::vector<double> x = sys.solve_fixed_point();
    CHECK(x[static_cast<std::size_t>(colour::index(3, 3, 3) - 1)] ==
          doctest::Approx(0.0).epsilon(1e-10));
    CHECK(sys.giant(x) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("thinned 3-regular world: giant and mean finite size") {
    // Percolating the 3-regular table at 0.6 and carrying the matching node
    // distribution must reproduce the closed-form giant 19/27 over all nodes.
    const JointDistribution base = delta_table(3);
    const JointDistribution kept = base.percolated(0.6);
    const std::vector<double> thinned =
        thinned_node_distribution(base.node_distribution(), 0.6);
    const ColouredSystem sys(kept, thinned);
    const std::vector<double> x = sys.solve_fixed_point(1e-14);
    const double s = sys.giant(x);
    CHECK(s == doctest::Approx(19.0 / 27.0).epsilon(1e-10));

    const double w = sys.finite_component_size(x, s);
    CHECK(std::isfinite(w));
    CHECK(w > 1.0);
}

TEST_CASE("dimer world mean finite size is exactly 2") {
    const ColouredSystem sys(delta_table(1));
    const std::vector<double> x = sys.solve_fixed_point();
    const double s = sys.giant(x);
    CHECK(s == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sys.finite_component_size(x, s) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("mean finite size reports infinity at a critical system") {
    // The 3-regular table thinned to its threshold 1/2. The no-giant fixed
    // point there is exactly x = 1 and the linear system is singular at it,
    // so the size must come back +inf, not a garbage finite number.
    const JointDistribution base = delta_table(3);
    const JointDistribution kept = base.percolated(0.5);
    const std::vector<double> thinned =
        thinned_node_distribution(base.node_distribution(), 0.5);
    const ColouredSystem sys(kept, thinned);
    const std::vector<double> x(static_cast<std::size_t>(sys.colours()), 1.0);
    const double s = sys.giant(x);
    CHECK(std::abs(s) < 1e-12);
    CHECK(std::isinf(sys.finite_component_size(x, s)));
}

TEST_CASE("mean finite size rejects a saturated giant") {
    const ColouredSystem sys(delta_table(3));
    const std::vector<double> x = sys.solve_fixed_point();
    CHECK_THROWS_AS(sys.finite_component_size(x, 1.0), std::invalid_argument);
}

TEST_CASE("criticality matrices: structure and product identity") {
    Rng rng(44);
    const int N = 3;
    const JointDistribution e = random_table(rng, N);
    const ColouredSystem sys(e);
    const auto [M, PM] = sys.criticality_matrices();
    const Matrix P = sys.permutation_matrix();

    // PM is literally P times M.
    for (int a = 0; a < N * N; ++a)
        for (int b = 0; b < N * N; ++b) {
            double acc = 0.0;
            for (int c = 0; c < N * N; ++c) acc += P(a, c) * M(c, b);
            CHECK(PM(a, b) == doctest::Approx(acc).epsilon(1e-13));
        }

    // M couples only colours sharing the host degree, scaled by k-1.
    const ConditionalTable q = e.conditional();
    for (int j1 = 1; j1 <= N; ++j1)
        for (int k1 = 1; k1 <= N; ++k1)
            for (int j2 = 1; j2 <= N; ++j2)
                for (int k2 = 1; k2 <= N; ++k2) {
                    const double m = M(colour::index(j1, k1, N) - 1,
                                       colour::index(j2, k2, N) - 1);
                    if (k1 != k2)
                        CHECK(m == 0.0);
                    else
                        CHECK(m == doctest::Approx(q(j1, k1) * (k1 - 1)).epsilon(1e-14));
                }
}

TEST_CASE("rank of the paired criticality matrix stays within N") {
    Rng rng(55);
    for (int N : {2, 4, 6}) {
        const JointDistribution e = random_table(rng, N);
        const auto [M, PM] = ColouredSystem(e).criticality_matrices();
        CHECK(kernels::numerical_rank(PM, 1e-12) <= N);
    }
}
