#pragma once

#include "score_dag/matrix.hpp"
#include "score_dag/simd/kernels.hpp"

namespace score_dag::kernel {

/// Median of the Euclidean distances over all n(n-1)/2 pairs of distinct
/// rows (self-distances excluded; an even count averages the middle two).
/// Throws DataError for n < 2 or when every pairwise distance is zero.
double median_bandwidth(const DataMatrix& x, const simd::KernelOps& ops = simd::active_ops());

/// Everything the Stein estimators need from one RBF kernel evaluation,
/// kappa_s(a, b) = exp(-|a - b|^2 / (2 s^2)).
struct KernelContext {
    double bandwidth = 0.0;
    Matrix gram;           // n x n, K(i, k) = kappa_s(x_i, x_k)
    Matrix grad_sum;       // n x d, sum_k d kappa(x_i, x_k) / d x_kj
    Matrix diag_hess_sum;  // n x d, sum_k d^2 kappa(x_i, x_k) / d x_kj^2
};

/// One fused pass over all row pairs. Throws ConfigError for s <= 0.
KernelContext build_context(const DataMatrix& x, double s,
                            const simd::KernelOps& ops = simd::active_ops());

Matrix gram(const DataMatrix& x, double s);
Matrix grad_k_sum(const DataMatrix& x, double s);
Matrix diag_hess_k_sum(const DataMatrix& x, double s);

}  // namespace score_dag::kernel
