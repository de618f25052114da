#include <cstdlib>
#include <string_view>

#include "eotf/simd/kernels.hpp"

namespace eotf::simd {

#if defined(EOTF_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(EOTF_HAVE_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
    static const KernelTable* table = [] {
        const char* forced = std::getenv("EOTF_SIMD");
        if (forced != nullptr && std::string_view(forced) == "scalar") return &scalar_kernels();
        if (const KernelTable* v = avx2_kernels()) return v;
        return &scalar_kernels();
    }();
    return *table;
}

}  // namespace eotf::simd
