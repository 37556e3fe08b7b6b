#pragma once

#include "qgate/kernels.hpp"

namespace qgate::kernels::detail {

const KernelTable& scalar_kernels() noexcept;
#if defined(QGATE_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

}  // namespace qgate::kernels::detail
