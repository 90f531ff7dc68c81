#include "corrperc/joint_dist.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "corrperc/binomial.hpp"
#include "corrperc/kernels.hpp"

namespace corrperc {

JointDistribution::JointDistribution(Matrix table) : N_(table.rows()), e_(std::move(table)) {
    if (N_ < 1 || e_.cols() != N_)
        throw std::invalid_argument("joint distribution: table must be square and nonempty");
    for (int j = 0; j < N_; ++j)
        for (int k = j + 1; k < N_; ++k) {
            const double v = 0.5 * (e_(j, k) + e_(k, j));
            e_(j, k) = v;
            e_(k, j) = v;
        }
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (!(e_.data()[i] >= 0.0))
            throw std::invalid_argument("joint distribution: entries must be nonnegative");
    const double total = kernels::accurate_sum(e_.data(), e_.size());
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("joint distribution: entries must sum to 1");
    if (total != 1.0)
        for (std::size_t i = 0; i < e_.size(); ++i) e_.data()[i] /= total;
    marginal_.assign(static_cast<std::size_t>(N_), 0.0);
    for (int k = 0; k < N_; ++k) {
        kernels::NeumaierSum acc;
        for (int j = 0; j < N_; ++j) acc.add(e_(j, k));
        marginal_[static_cast<std::size_t>(k)] = acc.get();
    }
}

std::vector<double> JointDistribution::node_distribution() const {
    kernels::NeumaierSum norm;
    for (int k = 1; k <= N_; ++k) norm.add(marginal_[static_cast<std::size_t>(k - 1)] / k);
    const double S = norm.get();
    std::vector<double> p(static_cast<std::size_t>(N_) + 1, 0.0);
    for (int k = 1; k <= N_; ++k)
        p[static_cast<std::size_t>(k)] = marginal_[static_cast<std::size_t>(k - 1)] / (k * S);
    return p;
}

double JointDistribution::mean_degree() const {
    kernels::NeumaierSum norm;
    for (int k = 1; k <= N_; ++k) norm.add(marginal_[static_cast<std::size_t>(k - 1)] / k);
    return 1.0 / norm.get();
}

ConditionalTable JointDistribution::conditional() const {
    ConditionalTable out;
    out.q = Matrix(N_, N_);
    out.defined.assign(static_cast<std::size_t>(N_), 0);
    for (int k = 0; k < N_; ++k) {
        const double m = marginal_[static_cast<std::size_t>(k)];
        if (m <= 0.0) continue;
        out.defined[static_cast<std::size_t>(k)] = 1;
        for (int j = 0; j < N_; ++j) out.q(j, k) = e_(j, k) / m;
    }
    return out;
}

JointDistribution JointDistribution::percolated(double pi) const {
    if (!(pi > 0.0 && pi <= 1.0))
        throw std::invalid_argument("percolated: retention probability must be in (0,1]");
    if (pi == 1.0) return *this;
    const Matrix B = edge_thinning_matrix(N_, pi);
    return JointDistribution(kernels::sandwich_lower(e_, B));
}

JointDistribution build_family(Family family, double param, double t, int N) {
    if (N < 1) throw std::invalid_argument("build_family: N must be positive");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("build_family: t must be in [0,1]");
    std::vector<double> f(static_cast<std::size_t>(N), 0.0);
    switch (family) {
        case Family::bimodal:
            if (!(param >= 0.0 && param <= 1.0))
                throw std::invalid_argument("build_family: bimodal weight must be in [0,1]");
            if (N < 9) throw std::invalid_argument("build_family: bimodal support {3,9} needs N >= 9");
            f[2] = 1.0 - param;
            f[8] = param;
            break;
        case Family::exponential:
            for (int k = 1; k <= N; ++k) f[static_cast<std::size_t>(k - 1)] = std::exp(-k);
            break;
        case Family::powerlaw:
            if (!(param > 1.0))
                throw std::invalid_argument("build_family: powerlaw tail exponent must exceed 1");
            for (int k = 1; k <= N; ++k)
                f[static_cast<std::size_t>(k - 1)] = std::exp(-(param + 1.0) * std::log(k));
            break;
    }
    const double fz = kernels::accurate_sum(f.data(), f.size());
    if (!(fz > 0.0)) throw std::invalid_argument("build_family: weight function is identically zero");
    for (double &v : f) v /= fz;

    Matrix e(N, N);
    for (int j = 0; j < N; ++j) {
        const double fj = f[static_cast<std::size_t>(j)];
        if (fj == 0.0) continue;
        for (int k = 0; k < N; ++k) e(j, k) = (1.0 - t) * fj * f[static_cast<std::size_t>(k)];
        e(j, j) += t * fj;
    }
    e(0, 0) = 0.0;
    const double total = kernels::accurate_sum(e.data(), e.size());
    if (!(total > 0.0))
        throw std::invalid_argument("build_family: distribution vanishes after removing degree-1 pairs");
    for (std::size_t i = 0; i < e.size(); ++i) e.data()[i] /= total;
    return JointDistribution(std::move(e));
}

JointDistribution load_custom(std::istream &in, int N) {
    if (N < 1) throw std::invalid_argument("load_custom: N must be positive");
    Matrix w(N, N);
    std::string line;
    int lineno = 0;
    bool any_row = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (std::isalpha(static_cast<unsigned char>(trimmed[0]))) continue;  // header row
        std::istringstream row(line);
        int j = 0, k = 0;
        double weight = 0.0;
        char c1 = 0, c2 = 0;
        if (!(row >> j >> c1 >> k >> c2 >> weight) || c1 != ',' || c2 != ',')
            throw std::invalid_argument("load_custom: malformed row at line " + std::to_string(lineno));
        if (j < 1 || j > N || k < 1 || k > N)
            throw std::invalid_argument("load_custom: degree out of range at line " +
                                        std::to_string(lineno));
        if (!(weight >= 0.0))
            throw std::invalid_argument("load_custom: negative weight at line " +
                                        std::to_string(lineno));
        w(j - 1, k - 1) += weight;
        any_row = true;
    }
    if (!any_row) throw std::invalid_argument("load_custom: no data rows");
    const double total = kernels::accurate_sum(w.data(), w.size());
    if (!(total > 0.0)) throw std::invalid_argument("load_custom: all weights are zero");
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] /= total;
    return JointDistribution(std::move(w));
}

JointDistribution load_custom_file(const std::string &path, int N) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_custom: cannot open " + path);
    return load_custom(in, N);
}

std::vector<double> thinned_node_distribution(const std::vector<double> &p, double pi) {
    if (!(pi > 0.0 && pi <= 1.0))
        throw std::invalid_argument("thinned_node_distribution: retention must be in (0,1]");
    if (p.empty()) throw std::invalid_argument("thinned_node_distribution: empty distribution");
    if (pi == 1.0) return p;
    const int N = static_cast<int>(p.size()) - 1;
    const Matrix T = node_thinning_matrix(N, pi);
    std::vector<double> out(p.size(), 0.0);
    for (int b = 0; b <= N; ++b) {
        kernels::NeumaierSum acc;
        for (int a = b; a <= N; ++a) acc.add(p[static_cast<std::size_t>(a)] * T(a, b));
        out[static_cast<std::size_t>(b)] = acc.get();
    }
    return out;
}

namespace {

struct EdgeMoments {
    double Ek, Ek2, Ejk;
};

EdgeMoments edge_moments(const JointDistribution &e) {
    const int N = e.max_degree();
    kernels::NeumaierSum mk, mk2, mjk;
    for (int k = 1; k <= N; ++k) {
        const double m = e.edge_marginal()[static_cast<std::size_t>(k - 1)];
        mk.add(k * m);
        mk2.add(static_cast<double>(k) * k * m);
        for (int j = 1; j <= N; ++j) mjk.add(static_cast<double>(j) * k * e(j, k));
    }
    return {mk.get(), mk2.get(), mjk.get()};
}

} // namespace

double PearsonDecay::at(double pi) const {
    if (!defined) throw std::invalid_argument("pearson decay: undefined for zero-variance degrees");
    if (!(pi > 0.0 && pi <= 1.0)) throw std::invalid_argument("pearson decay: pi must be in (0,1]");
    return r1 / (1.0 - a * (1.0 - 1.0 / pi));
}

PearsonDecay pearson_decay(const JointDistribution &e) {
    const EdgeMoments m = edge_moments(e);
    const double var = m.Ek2 - m.Ek * m.Ek;
    PearsonDecay d;
    if (var < 1e-14) return d;
    d.defined = true;
    d.r1 = (m.Ejk - m.Ek * m.Ek) / var;
    d.a = (m.Ek - 1.0) / var;
    return d;
}

double pearson_coefficient(const JointDistribution &e) {
    const EdgeMoments m = edge_moments(e);
    const double var = m.Ek2 - m.Ek * m.Ek;
    if (var < 1e-14) return std::numeric_limits<double>::quiet_NaN();
    return (m.Ejk - m.Ek * m.Ek) / var;
}

} // namespace corrperc
