#pragma once

#include "score_dag/simd/kernels.hpp"

namespace score_dag::simd::detail {

const KernelOps& scalar_table() noexcept;
#if defined(SCORE_DAG_HAVE_AVX2)
const KernelOps& avx2_table() noexcept;
#endif

}  // namespace score_dag::simd::detail
