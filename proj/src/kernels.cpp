#include "corrperc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace corrperc::kernels {

double SignLogDet::value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_abs);
}

namespace {

// Shared elimination step: pivot column c, swap, scale, update trailing block.
// Returns false when the pivot is exactly zero (the column below c is then
// all zero as well, since the pivot is the column maximum).
bool eliminate_column(Matrix &lu, std::vector<int> &perm, int &sign, int c) {
    const int n = lu.rows();
    int p = c;
    double best = std::abs(lu(c, c));
    for (int r = c + 1; r < n; ++r) {
        const double v = std::abs(lu(r, c));
        if (v > best) {
            best = v;
            p = r;
        }
    }
    perm[c] = p;
    if (p != c) {
        std::swap_ranges(lu.row(c), lu.row(c) + n, lu.row(p));
        sign = -sign;
    }
    const double piv = lu(c, c);
    if (piv == 0.0) return false;
#pragma omp parallel for
    for (int r = c + 1; r < n; ++r) {
        const double f = lu(r, c) / piv;
        lu(r, c) = f;
        const double *src = lu.row(c);
        double *dst = lu.row(r);
        for (int k = c + 1; k < n; ++k) dst[k] -= f * src[k];
    }
    return true;
}

} // namespace

Matrix sandwich_lower(const Matrix &E, const Matrix &A) {
    const int n = E.rows();
    if (E.cols() != n || A.rows() != n || A.cols() != n)
        throw std::invalid_argument("sandwich_lower: dimension mismatch");

    // G = E * A. Row r of G depends only on row r of E, so rows are
    // independent. Zero entries of E contribute exact zeros and are skipped.
    Matrix G(n, n);
    std::vector<char> g_row_nonzero(static_cast<std::size_t>(n), 0);
#pragma omp parallel for
    for (int r = 0; r < n; ++r) {
        const double *erow = E.row(r);
        double *grow = G.row(r);
        char any = 0;
        for (int c1 = 0; c1 < n; ++c1) {
            const double s = erow[c1];
            if (s == 0.0) continue;
            any = 1;
            const double *arow = A.row(c1);
            for (int k = 0; k <= c1; ++k) grow[k] += s * arow[k];
        }
        g_row_nonzero[static_cast<std::size_t>(r)] = any;
    }

    // out = A^T * G, again row by row; row r only sees G rows c1 >= r because
    // A is lower triangular.
    Matrix out(n, n);
#pragma omp parallel for
    for (int r = 0; r < n; ++r) {
        double *orow = out.row(r);
        for (int c1 = r; c1 < n; ++c1) {
            if (!g_row_nonzero[static_cast<std::size_t>(c1)]) continue;
            const double s = A(c1, r);
            if (s == 0.0) continue;
            const double *grow = G.row(c1);
            for (int k = 0; k < n; ++k) orow[k] += s * grow[k];
        }
    }
    return out;
}

void matvec(const Matrix &A, const double *x, double *y) {
    const int n = A.rows();
    const int m = A.cols();
#pragma omp parallel for
    for (int r = 0; r < n; ++r) {
        const double *arow = A.row(r);
        double acc = 0.0;
        for (int c = 0; c < m; ++c) acc += arow[c] * x[c];
        y[r] = acc;
    }
}

LuFactors lu_factor(Matrix A) {
    const int n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("lu_factor: matrix not square");
    LuFactors f;
    f.lu = std::move(A);
    f.perm.assign(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < n; ++c) {
        if (!eliminate_column(f.lu, f.perm, f.sign, c)) {
            f.singular = true;
            for (int k = c; k < n; ++k) f.perm[static_cast<std::size_t>(k)] = k;
            break;
        }
    }
    return f;
}

SignLogDet lu_sign_logdet(Matrix A) {
    const LuFactors f = lu_factor(std::move(A));
    if (f.singular) return {0, -std::numeric_limits<double>::infinity()};
    SignLogDet out;
    out.sign = f.sign;
    out.log_abs = 0.0;
    const int n = f.lu.rows();
    for (int c = 0; c < n; ++c) {
        const double d = f.lu(c, c);
        if (d < 0.0) out.sign = -out.sign;
        out.log_abs += std::log(std::abs(d));
    }
    return out;
}

void lu_solve(const LuFactors &f, double *b) {
    if (f.singular) throw std::runtime_error("lu_solve: singular factorization");
    const int n = f.lu.rows();
    for (int c = 0; c < n; ++c) {
        const int p = f.perm[static_cast<std::size_t>(c)];
        if (p != c) std::swap(b[c], b[p]);
    }
    for (int r = 1; r < n; ++r) {
        const double *row = f.lu.row(r);
        double acc = b[r];
        for (int c = 0; c < r; ++c) acc -= row[c] * b[c];
        b[r] = acc;
    }
    for (int r = n - 1; r >= 0; --r) {
        const double *row = f.lu.row(r);
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= row[c] * b[c];
        b[r] = acc / row[r];
    }
}

void lu_solve_t(const LuFactors &f, double *b) {
    if (f.singular) throw std::runtime_error("lu_solve_t: singular factorization");
    const int n = f.lu.rows();
    // With P A = L U the transpose system is U^T L^T (P x) = b.
    for (int r = 0; r < n; ++r) {
        double acc = b[r];
        for (int c = 0; c < r; ++c) acc -= f.lu(c, r) * b[c];
        b[r] = acc / f.lu(r, r);
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= f.lu(c, r) * b[c];
        b[r] = acc;
    }
    for (int c = n - 1; c >= 0; --c) {
        const int p = f.perm[static_cast<std::size_t>(c)];
        if (p != c) std::swap(b[c], b[p]);
    }
}

double norm1(const Matrix &A) {
    double best = 0.0;
    for (int c = 0; c < A.cols(); ++c) {
        double s = 0.0;
        for (int r = 0; r < A.rows(); ++r) s += std::abs(A(r, c));
        best = std::max(best, s);
    }
    return best;
}

double inverse_norm1_estimate(const LuFactors &f) {
    if (f.singular) return std::numeric_limits<double>::infinity();
    const int n = f.lu.rows();
    if (n == 0) return 0.0;
    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> z(static_cast<std::size_t>(n));
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        std::vector<double> y = x;
        lu_solve(f, y.data());
        double e = 0.0;
        for (double v : y) e += std::abs(v);
        if (iter > 0 && e <= est) break;
        est = e;
        for (int i = 0; i < n; ++i)
            z[static_cast<std::size_t>(i)] = (y[static_cast<std::size_t>(i)] >= 0.0) ? 1.0 : -1.0;
        lu_solve_t(f, z.data());
        int j = 0;
        double zmax = std::abs(z[0]);
        double ztx = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = std::abs(z[static_cast<std::size_t>(i)]);
            ztx += z[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            if (a > zmax) {
                zmax = a;
                j = i;
            }
        }
        if (zmax <= ztx) break;
        std::fill(x.begin(), x.end(), 0.0);
        x[static_cast<std::size_t>(j)] = 1.0;
    }
    return est;
}

int numerical_rank(Matrix A, double tol) {
    const int rows = A.rows();
    const int cols = A.cols();
    double scale = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) scale = std::max(scale, std::abs(A.data()[i]));
    if (scale == 0.0) return 0;
    const double cutoff = tol * scale;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int p = rank;
        double best = std::abs(A(rank, c));
        for (int r = rank + 1; r < rows; ++r) {
            const double v = std::abs(A(r, c));
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (best <= cutoff) continue;
        if (p != rank) std::swap_ranges(A.row(rank), A.row(rank) + cols, A.row(p));
        const double piv = A(rank, c);
#pragma omp parallel for
        for (int r = rank + 1; r < rows; ++r) {
            const double f = A(r, c) / piv;
            if (f == 0.0) continue;
            double *dst = A.row(r);
            const double *src = A.row(rank);
            for (int k = c; k < cols; ++k) dst[k] -= f * src[k];
        }
        ++rank;
    }
    return rank;
}

double accurate_sum(const double *x, std::size_t n) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = sum + x[i];
        if (std::abs(sum) >= std::abs(x[i]))
            comp += (sum - t) + x[i];
        else
            comp += (x[i] - t) + sum;
        sum = t;
    }
    return sum + comp;
}

namespace serial {

Matrix sandwich_lower(const Matrix &E, const Matrix &A) {
    const int n = E.rows();
    if (E.cols() != n || A.rows() != n || A.cols() != n)
        throw std::invalid_argument("sandwich_lower: dimension mismatch");
    Matrix G(n, n);
    for (int r = 0; r < n; ++r)
        for (int c1 = 0; c1 < n; ++c1)
            for (int k = 0; k < n; ++k) G(r, k) += E(r, c1) * A(c1, k);
    Matrix out(n, n);
    for (int r = 0; r < n; ++r)
        for (int c1 = 0; c1 < n; ++c1)
            for (int k = 0; k < n; ++k) out(r, k) += A(c1, r) * G(c1, k);
    return out;
}

void matvec(const Matrix &A, const double *x, double *y) {
    for (int r = 0; r < A.rows(); ++r) {
        double acc = 0.0;
        for (int c = 0; c < A.cols(); ++c) acc += A(r, c) * x[c];
        y[r] = acc;
    }
}

SignLogDet lu_sign_logdet(Matrix A) {
    const int n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("lu_sign_logdet: matrix not square");
    int sign = 1;
    double log_abs = 0.0;
    for (int c = 0; c < n; ++c) {
        int p = c;
        double best = std::abs(A(c, c));
        for (int r = c + 1; r < n; ++r) {
            const double v = std::abs(A(r, c));
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (p != c) {
            std::swap_ranges(A.row(c), A.row(c) + n, A.row(p));
            sign = -sign;
        }
        const double piv = A(c, c);
        if (piv == 0.0) return {0, -std::numeric_limits<double>::infinity()};
        if (piv < 0.0) sign = -sign;
        log_abs += std::log(std::abs(piv));
        for (int r = c + 1; r < n; ++r) {
            const double f = A(r, c) / piv;
            A(r, c) = f;
            for (int k = c + 1; k < n; ++k) A(r, k) -= f * A(c, k);
        }
    }
    return {sign, log_abs};
}

} // namespace serial

} // namespace corrperc::kernels
