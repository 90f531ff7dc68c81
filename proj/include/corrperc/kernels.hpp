#pragma once

#include <cstddef>
#include <vector>

#include "corrperc/matrix.hpp"

namespace corrperc::kernels {

// Sign and log-magnitude of a determinant. Magnitudes at N ~ 2^10 overflow a
// raw double, so the two parts are kept separate; value() reconstructs the
// raw determinant and may return +-0 or +-inf at the extremes.
struct SignLogDet {
    int sign = 0;          // -1, 0, +1
    double log_abs = 0.0;  // -inf when sign == 0
    double value() const;
};

// Partially pivoted LU factors, LAPACK-style: perm[c] is the row swapped into
// position c at step c; sign is the permutation sign.
struct LuFactors {
    Matrix lu;
    std::vector<int> perm;
    int sign = 1;
    bool singular = false;
};

// out = A^T * E * A for lower-triangular A (A(r,c) == 0 for c > r). This is
// the hot kernel behind degree-preserving binomial thinning of a joint
// distribution. Exact zero entries of E and zero rows are skipped, which
// cannot change any rounded result and makes steeply decaying families cheap.
Matrix sandwich_lower(const Matrix &E, const Matrix &A);

// y = A x, row by row.
void matvec(const Matrix &A, const double *x, double *y);

SignLogDet lu_sign_logdet(Matrix A);
LuFactors lu_factor(Matrix A);

// Solve A x = b and A^T x = b in place using the factors.
void lu_solve(const LuFactors &f, double *b);
void lu_solve_t(const LuFactors &f, double *b);

double norm1(const Matrix &A);

// Hager's estimator for ||A^{-1}||_1 from the factors; +inf when singular.
// The product with norm1(A) is the condition estimate used to flag
// near-critical linear systems.
double inverse_norm1_estimate(const LuFactors &f);

// Row-echelon rank with partial pivoting; pivots below tol * max|A| count as
// zero.
int numerical_rank(Matrix A, double tol);

// Neumaier compensated summation; used wherever a normalization check must
// measure the true deviation rather than its own rounding error.
double accurate_sum(const double *x, std::size_t n);

// Streaming form of the same compensation, for sums too large to materialize.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if ((sum >= 0.0 ? sum : -sum) >= (x >= 0.0 ? x : -x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double get() const { return sum + comp; }
};

// Plain textbook loops with the same floating-point evaluation order as the
// parallel kernels above. Kept as the reference implementation for
// equivalence tests and the benchmark; results must match bit for bit.
namespace serial {
Matrix sandwich_lower(const Matrix &E, const Matrix &A);
void matvec(const Matrix &A, const double *x, double *y);
SignLogDet lu_sign_logdet(Matrix A);
} // namespace serial

} // namespace corrperc::kernels
