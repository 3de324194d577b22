#include "mskflow/linsolve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

extern "C" void openblas_set_num_threads(int);

namespace msk {

namespace {

// BLAS-internal threading loses badly on the small dense systems this
// project solves; concurrency happens one level up (the two problem sides
// run in parallel).
std::once_flag g_blas_pin;
void pin_blas_threads() {
    std::call_once(g_blas_pin, []() { openblas_set_num_threads(1); });
}

thread_local double t_last_cond = 0.0;

double norm1(const DenseMatrix& A) {
    double best = 0.0;
    for (int j = 0; j < A.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < A.rows; ++i) s += std::fabs(A(i, j));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

double last_condition_estimate() { return t_last_cond; }

std::vector<double> solve(const DenseMatrix& A, const std::vector<double>& b,
                          const SolveOptions& opts) {
    if (A.rows != A.cols) {
        throw Error("solve: matrix must be square, got " + std::to_string(A.rows) + "x" +
                    std::to_string(A.cols));
    }
    int n = A.rows;
    if (static_cast<int>(b.size()) != n) {
        throw Error("solve: rhs dimension " + std::to_string(b.size()) +
                    " does not match matrix order " + std::to_string(n));
    }

    pin_blas_threads();
    double anorm = norm1(A);
    DenseMatrix lu = A;
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    lapack_int info = LAPACKE_dgetrf(LAPACK_ROW_MAJOR, n, n, lu.a.data(), n, ipiv.data());
    if (info > 0) {
        int pivot = static_cast<int>(info) - 1;
        throw SingularMatrixError(pivot, "singular matrix: zero pivot at index " +
                                             std::to_string(pivot));
    }
    if (info < 0) {
        throw Error("solve: invalid argument " + std::to_string(-info) + " to dgetrf");
    }

    // Reject pivots that are zero for practical purposes even when dgetrf
    // did not flag them (it only reports exact zeros; exact linear
    // dependence usually leaves a rounding-level pivot instead).
    double maxdiag = 0.0;
    for (int i = 0; i < n; ++i) maxdiag = std::max(maxdiag, std::fabs(lu(i, i)));
    double eps = std::numeric_limits<double>::epsilon();
    for (int i = 0; i < n; ++i) {
        if (std::fabs(lu(i, i)) <= 4.0 * eps * maxdiag) {
            throw SingularMatrixError(i, "singular matrix: sub-threshold pivot at index " +
                                             std::to_string(i));
        }
    }

    double rcond = 0.0;
    LAPACKE_dgecon(LAPACK_ROW_MAJOR, '1', n, lu.a.data(), n, anorm, &rcond);
    double cond = (rcond > 0.0) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    t_last_cond = cond;
    if (cond > opts.cond_warn_threshold) {
        std::ostringstream os;
        os << "ill-conditioned system: cond estimate " << cond << " exceeds "
           << opts.cond_warn_threshold;
        emit_diagnostic(os.str());
    }

    std::vector<double> x = b;
    info = LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', n, 1, lu.a.data(), n, ipiv.data(), x.data(), 1);
    if (info != 0) {
        throw Error("solve: dgetrs failed with info " + std::to_string(info));
    }

    if (opts.iterative_refinement) {
        std::vector<double> r(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double s = b[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) s -= A(i, j) * x[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i)] = s;
        }
        LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', n, 1, lu.a.data(), n, ipiv.data(), r.data(), 1);
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += r[static_cast<std::size_t>(i)];
    }
    return x;
}

}  // namespace msk
