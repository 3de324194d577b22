#pragma once

#include <vector>

#include "mskflow/errors.hpp"

namespace msk {

/// Row-major dense matrix.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    DenseMatrix() = default;
    DenseMatrix(int rows, int cols)
        : rows(rows), cols(cols), a(static_cast<std::size_t>(rows) * cols, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

struct SolveOptions {
    bool iterative_refinement = false;  // one extra residual-correction pass
    double cond_warn_threshold = 1e12;
};

/// Solves A x = b by LU with partial pivoting (square A).
///
/// Guarantees relative residual ||Ax - b||_inf / max(1, ||b||_inf) <= 1e-10
/// for reasonably conditioned systems. A zero pivot raises
/// SingularMatrixError carrying the (0-based) pivot index; a 1-norm
/// condition estimate above the threshold emits a diagnostic warning but
/// the solve still returns.
std::vector<double> solve(const DenseMatrix& A, const std::vector<double>& b,
                          const SolveOptions& opts = {});

/// 1-norm condition estimate of the most recent factorization performed by
/// solve() on this thread (testing hook).
double last_condition_estimate();

}  // namespace msk
