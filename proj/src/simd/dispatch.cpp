#include <cstdlib>
#include <string_view>

#include "kernel_impl.hpp"

namespace score_dag::simd {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

const KernelOps& scalar_ops() noexcept { return detail::scalar_table(); }

const KernelOps* avx2_ops() noexcept {
#if defined(SCORE_DAG_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelOps& active_ops() noexcept {
    static const KernelOps& chosen = [] () -> const KernelOps& {
        const char* forced = std::getenv("SCORE_DAG_SIMD");
        if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_ops();
        if (const KernelOps* fast = avx2_ops()) return *fast;
        return scalar_ops();
    }();
    return chosen;
}

}  // namespace score_dag::simd
