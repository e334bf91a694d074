#include <algorithm>
#include <cmath>
#include <vector>

#include "kernel_impl.hpp"

namespace score_dag::simd::detail {
namespace {

void pairwise_sq_dists(const double* x, int n, int d, double* out) {
    std::size_t slot = 0;
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) {
                const std::size_t col = static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
                const double diff = x[col + static_cast<std::size_t>(i)] - x[col + static_cast<std::size_t>(k)];
                acc += diff * diff;
            }
            out[slot++] = acc;
        }
    }
}

void rbf_rows(const double* x, int n, int d, double inv_two_s2, int row_begin, int row_end,
              double* gram, double* lin, double* quad, double* rowsum) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> xi(static_cast<std::size_t>(d));
    std::vector<double> lin_acc(static_cast<std::size_t>(d));
    std::vector<double> quad_acc(static_cast<std::size_t>(d));
    for (int i = row_begin; i < row_end; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (int j = 0; j < d; ++j) xi[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j) * un + ui];
        std::fill(lin_acc.begin(), lin_acc.end(), 0.0);
        std::fill(quad_acc.begin(), quad_acc.end(), 0.0);
        double wsum = 0.0;
        for (int k = 0; k < n; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            double d2 = 0.0;
            for (int j = 0; j < d; ++j) {
                const double diff = xi[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j) * un + uk];
                d2 += diff * diff;
            }
            const double w = std::exp(-d2 * inv_two_s2);
            gram[ui * un + uk] = w;
            wsum += w;
            for (int j = 0; j < d; ++j) {
                const double diff = xi[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j) * un + uk];
                const double wd = w * diff;
                lin_acc[static_cast<std::size_t>(j)] += wd;
                quad_acc[static_cast<std::size_t>(j)] += wd * diff;
            }
        }
        rowsum[ui] = wsum;
        for (int j = 0; j < d; ++j) {
            lin[static_cast<std::size_t>(j) * un + ui] = lin_acc[static_cast<std::size_t>(j)];
            quad[static_cast<std::size_t>(j) * un + ui] = quad_acc[static_cast<std::size_t>(j)];
        }
    }
}

void exp_nonpositive(const double* in, int count, double* out) {
    for (int k = 0; k < count; ++k) out[k] = std::exp(in[k]);
}

constexpr KernelOps kOps{Isa::Scalar, &pairwise_sq_dists, &rbf_rows, &exp_nonpositive};

}  // namespace

const KernelOps& scalar_table() noexcept { return kOps; }

}  // namespace score_dag::simd::detail
