#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace qgate::kernels {
namespace {

const KernelTable* detect_simd() noexcept {
#if defined(QGATE_HAVE_AVX2_KERNELS)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &detail::avx2_kernels();
    return nullptr;
#elif defined(__aarch64__) || defined(__ARM_NEON)
    return &detail::neon_kernels();
#else
    return nullptr;
#endif
}

const KernelTable* initial_table() noexcept {
    const char* env = std::getenv("QGATE_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &detail::scalar_kernels();
    if (const KernelTable* simd = detect_simd()) return simd;
    return &detail::scalar_kernels();
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return detail::scalar_kernels(); }

const KernelTable* simd_table() noexcept {
    static const KernelTable* table = detect_simd();
    return table;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) noexcept {
    if (name == scalar_table().name) {
        current().store(&scalar_table(), std::memory_order_release);
        return true;
    }
    if (const KernelTable* simd = simd_table(); simd != nullptr && name == simd->name) {
        current().store(simd, std::memory_order_release);
        return true;
    }
    return false;
}

std::vector<std::string_view> available() {
    std::vector<std::string_view> names{scalar_table().name};
    if (const KernelTable* simd = simd_table()) names.emplace_back(simd->name);
    return names;
}

}  // namespace qgate::kernels
