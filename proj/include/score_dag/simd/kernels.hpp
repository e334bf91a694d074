#pragma once

// Low-level RBF inner loops. Every routine exists as a portable scalar
// reference and, on x86-64, as an AVX2/FMA variant chosen at runtime.
// All pointers address column-major storage: x has n rows and d columns,
// element (k, j) at x[j * n + k].

#include <string_view>

namespace score_dag::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelOps {
    Isa isa;

    /// Squared Euclidean distances of all pairs (i, k) with i < k, written
    /// row by row: (0,1), (0,2), ..., (0,n-1), (1,2), ... Needs n(n-1)/2 slots.
    void (*pairwise_sq_dists)(const double* x, int n, int d, double* out);

    /// For rows i in [row_begin, row_end), with w_ik = exp(-|x_i - x_k|^2 * inv_two_s2):
    ///   gram[i * n + k]   = w_ik                        (column i of K)
    ///   lin[j * n + i]    = sum_k w_ik (x_ij - x_kj)
    ///   quad[j * n + i]   = sum_k w_ik (x_ij - x_kj)^2
    ///   rowsum[i]         = sum_k w_ik
    /// Rows are independent; disjoint row ranges may run concurrently.
    void (*rbf_rows)(const double* x, int n, int d, double inv_two_s2, int row_begin, int row_end,
                     double* gram, double* lin, double* quad, double* rowsum);

    /// out[k] = exp(in[k]) for in[k] <= 0. Exposed for equivalence tests.
    void (*exp_nonpositive)(const double* in, int count, double* out);
};

const KernelOps& scalar_ops() noexcept;

/// nullptr when the binary was built without AVX2 support or the CPU lacks AVX2/FMA.
const KernelOps* avx2_ops() noexcept;

/// The best available variant, unless SCORE_DAG_SIMD=scalar forces the reference path.
const KernelOps& active_ops() noexcept;

}  // namespace score_dag::simd
