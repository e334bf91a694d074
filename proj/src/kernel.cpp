#include "score_dag/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "score_dag/error.hpp"
#include "score_dag/parallel.hpp"

namespace score_dag::kernel {

double median_bandwidth(const DataMatrix& x, const simd::KernelOps& ops) {
    const auto n = static_cast<std::size_t>(x.rows());
    if (n < 2) {
        throw DataError("median heuristic needs at least 2 samples, got " + std::to_string(n));
    }
    std::vector<double> sq(n * (n - 1) / 2);
    ops.pairwise_sq_dists(x.data(), static_cast<int>(x.rows()), static_cast<int>(x.cols()), sq.data());

    // The median of distances is the sqrt of the median of squared distances,
    // except that an even count averages the two middle distances.
    const std::size_t count = sq.size();
    const std::size_t upper = count / 2;
    std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(upper), sq.end());
    double median = std::sqrt(sq[upper]);
    if (count % 2 == 0) {
        const double lower = *std::max_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(upper));
        median = 0.5 * (median + std::sqrt(lower));
    }
    if (!(median > 0.0)) {
        if (*std::max_element(sq.begin(), sq.end()) == 0.0) {
            throw DataError("degenerate data: all pairwise distances are zero");
        }
        throw DataError("degenerate data: median pairwise distance is zero (too many duplicate rows)");
    }
    return median;
}

KernelContext build_context(const DataMatrix& x, double s, const simd::KernelOps& ops) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw ConfigError("kernel bandwidth must be positive and finite, got " + std::to_string(s));
    }
    const auto n = x.rows();
    const auto d = x.cols();
    KernelContext ctx;
    ctx.bandwidth = s;
    ctx.gram.resize(n, n);
    Matrix lin(n, d), quad(n, d);
    Vector rowsum(n);
    const double s2 = s * s;
    const double inv_two_s2 = 1.0 / (2.0 * s2);

    parallel_blocks(static_cast<int>(n), [&](int begin, int end) {
        ops.rbf_rows(x.data(), static_cast<int>(n), static_cast<int>(d), inv_two_s2, begin, end,
                     ctx.gram.data(), lin.data(), quad.data(), rowsum.data());
    });

    // d kappa(x_i, x_k) / d x_kj = kappa * (x_ij - x_kj) / s^2
    // d^2 kappa(x_i, x_k) / d x_kj^2 = kappa * ((x_ij - x_kj)^2 / s^4 - 1 / s^2)
    ctx.grad_sum = lin / s2;
    ctx.diag_hess_sum = quad / (s2 * s2);
    ctx.diag_hess_sum.colwise() -= rowsum / s2;
    return ctx;
}

Matrix gram(const DataMatrix& x, double s) { return build_context(x, s).gram; }

Matrix grad_k_sum(const DataMatrix& x, double s) { return build_context(x, s).grad_sum; }

Matrix diag_hess_k_sum(const DataMatrix& x, double s) { return build_context(x, s).diag_hess_sum; }

}  // namespace score_dag::kernel
