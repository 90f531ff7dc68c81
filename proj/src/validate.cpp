#include "corrperc/validate.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "corrperc/analytics.hpp"
#include "corrperc/colour_map.hpp"
#include "corrperc/coloured_oracle.hpp"
#include "corrperc/joint_dist.hpp"
#include "corrperc/kernels.hpp"
#include "corrperc/matrix.hpp"
#include "corrperc/mc_sim.hpp"
#include "corrperc/rng.hpp"

namespace corrperc::validate {

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

std::string describe(double measured, double bound) {
    std::ostringstream os;
    os << measured << " (bound " << bound << ")";
    return os.str();
}

void moment_checks(std::vector<Check> &out, const JointDistribution &e, const std::string &tag) {
    const int N = e.max_degree();
    const std::vector<double> p = e.node_distribution();
    const ConditionalTable q = e.conditional();

    double worst_total = 0.0;
    double worst_first = 0.0;
    double worst_second = 0.0;
    for (int k = 1; k <= N; ++k) {
        worst_total = std::max(worst_total,
                               std::abs(colour::enumerate_total(k, N, p, q) -
                                        p[static_cast<std::size_t>(k)]));
        for (int j = 1; j <= N; ++j) {
            worst_first = std::max(worst_first,
                                   std::abs(colour::enumerate_first_moment(j, k, N, p, q) -
                                            colour::first_moment(j, k, p, q)));
            for (int j2 = 1; j2 <= N; ++j2)
                for (int k2 = 1; k2 <= N; ++k2)
                    worst_second = std::max(
                        worst_second,
                        std::abs(colour::enumerate_second_moment(j, k, j2, k2, N, p, q) -
                                 colour::second_moment(j, k, j2, k2, p, q)));
        }
    }
    out.push_back({"pmf total recovers p_k [" + tag + "]", worst_total < 1e-12,
                   describe(worst_total, 1e-12)});
    out.push_back({"first moment vs enumeration [" + tag + "]", worst_first < 1e-12,
                   describe(worst_first, 1e-12)});
    out.push_back({"second moment vs enumeration [" + tag + "]", worst_second < 1e-12,
                   describe(worst_second, 1e-12)});
}

} // namespace

std::vector<Check> moments_suite() {
    std::vector<Check> out;
    moment_checks(out, delta_table(3), "3-regular");
    Rng rng(0xC0FFEEu);
    for (int N = 2; N <= 4; ++N) moment_checks(out, random_table(rng, N), "random N=" + std::to_string(N));
    return out;
}

std::vector<Check> oracle_suite() {
    std::vector<Check> out;
    Rng rng(0xBADA55u);
    double worst_giant = 0.0;
    double worst_w = 0.0;
    double worst_det = 0.0;
    bool rank_ok = true;
    // Both routes solve their fixed point iteratively, so agreement is limited by
    // solver tolerance amplified by the conditioning of the finite-size system.
    // Near-critical draws (large w) push that amplification past any fixed bound;
    // they are resampled so the comparison stays in a regime where the tolerance
    // supports the bound.
    const double tol = 1e-14;
    int accepted = 0;
    int attempts = 0;
    while (accepted < 6 && attempts < 200) {
        ++attempts;
        const int N = 2 + static_cast<int>(rng.below(5));
        const JointDistribution e = random_table(rng, N);

        const ColouredSystem dense(e);
        std::vector<double> x;
        GiantSolution reduced;
        try {
            x = dense.solve_fixed_point(tol);
            reduced = giant_component(e, 1.0, tol);
        } catch (const std::runtime_error &) {
            continue;
        }
        const double s_dense = dense.giant(x);
        const double w_dense = dense.finite_component_size(x, s_dense);
        if (!std::isfinite(w_dense) || w_dense > 100.0) continue;
        ++accepted;

        worst_giant = std::max(worst_giant,
                               std::abs(s_dense - reduced.s) / std::max(1.0, std::abs(s_dense)));
        const double w_reduced = finite_component_size(e, 1.0, reduced);
        if (std::isfinite(w_reduced))
            worst_w = std::max(worst_w, std::abs(w_dense - w_reduced) / std::abs(w_dense));
        else
            worst_w = std::numeric_limits<double>::infinity();

        const auto [Mm, PM] = dense.criticality_matrices();
        Matrix lhs = PM;
        for (int i = 0; i < lhs.rows(); ++i) lhs(i, i) -= 1.0;
        const double det_pm = kernels::lu_sign_logdet(std::move(lhs)).value();
        Matrix rhs = build_C(e, 1.0).C;
        for (int i = 0; i < rhs.rows(); ++i) rhs(i, i) -= 1.0;
        const double det_c = kernels::lu_sign_logdet(std::move(rhs)).value();
        worst_det = std::max(worst_det,
                             std::abs(det_pm - det_c) / std::max(1e-300, std::abs(det_c)));
        rank_ok = rank_ok && kernels::numerical_rank(PM, 1e-12) <= N;
    }
    out.push_back({"random instance sampling", accepted == 6,
                   std::to_string(accepted) + "/6 comparable instances in " +
                       std::to_string(attempts) + " draws"});
    out.push_back({"reduced giant vs dense system", worst_giant < 1e-10, describe(worst_giant, 1e-10)});
    out.push_back({"reduced mean finite size vs dense system", worst_w < 1e-10, describe(worst_w, 1e-10)});
    out.push_back({"determinant identity", worst_det < 1e-8, describe(worst_det, 1e-8)});
    out.push_back({"rank bound on the paired system", rank_ok, rank_ok ? "rank <= N" : "rank exceeded N"});
    return out;
}

std::vector<Check> mc_suite() {
    std::vector<Check> out;

    const JointDistribution dimers = delta_table(1);
    const mc::GraphSample g1 = mc::sample_graph(dimers, 1000, 7);
    const mc::ComponentStats st1 = mc::component_stats(g1);
    out.push_back({"dimer graph statistics",
                   g1.edges.size() == 500 && st1.s_hat == 2.0 / 1000.0 && st1.w_hat == 2.0,
                   "500 dimers expected"});

    const JointDistribution cubic = delta_table(3);
    const std::vector<mc::EnsembleRow> rows =
        mc::run_ensemble(cubic, 20000, {0.3, 0.6}, 4, 42);
    const double sub = rows[0].s_mean;
    const double err = std::abs(rows[1].s_mean - 19.0 / 27.0);
    out.push_back({"3-regular subcritical giant absent", sub < 0.01, describe(sub, 0.01)});
    out.push_back({"3-regular supercritical giant near 19/27", err < 0.03, describe(err, 0.03)});

    const GiantSolution giant = giant_component(cubic, 0.3);
    const double w = finite_component_size(cubic, 0.3, giant);
    const std::vector<mc::EnsembleRow> wrow = mc::run_ensemble(cubic, 50000, {0.3}, 4, 43);
    const double werr = std::abs(wrow[0].w_mean - w) / w;
    out.push_back({"3-regular subcritical component size", werr < 0.05, describe(werr, 0.05)});
    return out;
}

std::vector<Check> run_suite(const std::string &name) {
    if (name == "moments") return moments_suite();
    if (name == "oracle") return oracle_suite();
    if (name == "mc") return mc_suite();
    if (name == "all") {
        std::vector<Check> out = moments_suite();
        std::vector<Check> oracle = oracle_suite();
        std::vector<Check> mc = mc_suite();
        out.insert(out.end(), oracle.begin(), oracle.end());
        out.insert(out.end(), mc.begin(), mc.end());
        return out;
    }
    throw std::invalid_argument("unknown validation suite: " + name);
}

} // namespace corrperc::validate
