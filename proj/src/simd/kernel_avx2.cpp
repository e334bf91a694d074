#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "kernel_impl.hpp"

namespace score_dag::simd::detail {
namespace {

constexpr int kLanes = 4;

struct alignas(32) Lane {
    __m256d v;
};

// exp(x) for x <= 0: range reduction x = m*ln2 + r with |r| <= ln2/2, a
// degree-13 Taylor polynomial for exp(r) (truncation error below 1e-17), and
// 2^m built directly in the exponent field. Inputs below -708 flush to 0.
inline __m256d exp_nonpositive_pd(__m256d x) {
    const __m256d lower = _mm256_set1_pd(-708.0);
    const __m256d underflow = _mm256_cmp_pd(x, lower, _CMP_LT_OQ);
    x = _mm256_max_pd(x, lower);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d m = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(m, ln2_hi, x);
    r = _mm256_fnmadd_pd(m, ln2_lo, r);

    static constexpr double kInvFact[] = {
        1.0,
        1.0,
        1.0 / 2.0,
        1.0 / 6.0,
        1.0 / 24.0,
        1.0 / 120.0,
        1.0 / 720.0,
        1.0 / 5040.0,
        1.0 / 40320.0,
        1.0 / 362880.0,
        1.0 / 3628800.0,
        1.0 / 39916800.0,
        1.0 / 479001600.0,
        1.0 / 6227020800.0,
    };
    __m256d p = _mm256_set1_pd(kInvFact[13]);
    for (int k = 12; k >= 0; --k) {
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[k]));
    }

    // m + 1.5*2^52 places the integer m in the low mantissa bits.
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);
    const __m256i mi = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(m, magic)),
                                        _mm256_castpd_si256(magic));
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(mi, _mm256_set1_epi64x(1023)), 52);
    const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
    return _mm256_andnot_pd(underflow, result);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void pairwise_sq_dists(const double* x, int n, int d, double* out) {
    const auto un = static_cast<std::size_t>(n);
    std::size_t slot = 0;
    for (int i = 0; i < n; ++i) {
        int k = i + 1;
        for (; k + kLanes <= n; k += kLanes) {
            __m256d acc = _mm256_setzero_pd();
            for (int j = 0; j < d; ++j) {
                const double* col = x + static_cast<std::size_t>(j) * un;
                const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(col[i]), _mm256_loadu_pd(col + k));
                acc = _mm256_fmadd_pd(diff, diff, acc);
            }
            _mm256_storeu_pd(out + slot, acc);
            slot += kLanes;
        }
        for (; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) {
                const double* col = x + static_cast<std::size_t>(j) * un;
                const double diff = col[i] - col[k];
                acc = std::fma(diff, diff, acc);
            }
            out[slot++] = acc;
        }
    }
}

void rbf_rows(const double* x, int n, int d, double inv_two_s2, int row_begin, int row_end,
              double* gram, double* lin, double* quad, double* rowsum) {
    const auto un = static_cast<std::size_t>(n);
    const auto ud = static_cast<std::size_t>(d);
    std::vector<Lane> lin_acc(ud);
    std::vector<Lane> quad_acc(ud);
    std::vector<Lane> xi(ud);
    // Tail rows are copied into a zero-padded block so the tail goes through
    // the same vector arithmetic as the body (keeps K exactly symmetric).
    std::vector<double> tail(ud * kLanes);
    const __m256d neg_scale = _mm256_set1_pd(-inv_two_s2);
    const int body_end = n - n % kLanes;

    for (int i = row_begin; i < row_end; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (std::size_t j = 0; j < ud; ++j) {
            xi[j].v = _mm256_set1_pd(x[j * un + ui]);
            lin_acc[j].v = _mm256_setzero_pd();
            quad_acc[j].v = _mm256_setzero_pd();
        }
        __m256d wsum = _mm256_setzero_pd();

        auto block = [&](const double* base, std::size_t stride, __m256d lane_mask, double* gram_out) {
            __m256d d2 = _mm256_setzero_pd();
            for (std::size_t j = 0; j < ud; ++j) {
                const __m256d diff = _mm256_sub_pd(xi[j].v, _mm256_loadu_pd(base + j * stride));
                d2 = _mm256_fmadd_pd(diff, diff, d2);
            }
            const __m256d w = _mm256_and_pd(lane_mask, exp_nonpositive_pd(_mm256_mul_pd(d2, neg_scale)));
            _mm256_storeu_pd(gram_out, w);
            wsum = _mm256_add_pd(wsum, w);
            for (std::size_t j = 0; j < ud; ++j) {
                const __m256d diff = _mm256_sub_pd(xi[j].v, _mm256_loadu_pd(base + j * stride));
                const __m256d wd = _mm256_mul_pd(w, diff);
                lin_acc[j].v = _mm256_add_pd(lin_acc[j].v, wd);
                quad_acc[j].v = _mm256_fmadd_pd(wd, diff, quad_acc[j].v);
            }
        };

        const __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (int k = 0; k < body_end; k += kLanes) {
            block(x + k, un, all, gram + ui * un + static_cast<std::size_t>(k));
        }
        if (body_end < n) {
            const int rem = n - body_end;
            for (std::size_t j = 0; j < ud; ++j) {
                for (int l = 0; l < kLanes; ++l) {
                    tail[j * kLanes + static_cast<std::size_t>(l)] =
                        l < rem ? x[j * un + static_cast<std::size_t>(body_end + l)] : x[j * un + ui];
                }
            }
            const __m256d mask = _mm256_castsi256_pd(_mm256_set_epi64x(rem > 3 ? -1 : 0, rem > 2 ? -1 : 0,
                                                                        rem > 1 ? -1 : 0, rem > 0 ? -1 : 0));
            double gram_tail[kLanes];
            block(tail.data(), kLanes, mask, gram_tail);
            for (int l = 0; l < rem; ++l) gram[ui * un + static_cast<std::size_t>(body_end + l)] = gram_tail[l];
        }

        rowsum[ui] = hsum(wsum);
        for (std::size_t j = 0; j < ud; ++j) {
            lin[j * un + ui] = hsum(lin_acc[j].v);
            quad[j * un + ui] = hsum(quad_acc[j].v);
        }
    }
}

void exp_nonpositive(const double* in, int count, double* out) {
    int k = 0;
    for (; k + kLanes <= count; k += kLanes) {
        _mm256_storeu_pd(out + k, exp_nonpositive_pd(_mm256_loadu_pd(in + k)));
    }
    if (k < count) {
        double buf[kLanes] = {0.0, 0.0, 0.0, 0.0};
        for (int l = 0; k + l < count; ++l) buf[l] = in[k + l];
        _mm256_storeu_pd(buf, exp_nonpositive_pd(_mm256_loadu_pd(buf)));
        for (int l = 0; k + l < count; ++l) out[k + l] = buf[l];
    }
}

constexpr KernelOps kOps{Isa::Avx2, &pairwise_sq_dists, &rbf_rows, &exp_nonpositive};

}  // namespace

const KernelOps& avx2_table() noexcept { return kOps; }

}  // namespace score_dag::simd::detail
