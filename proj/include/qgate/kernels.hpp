#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; SIMD variants (AVX2+FMA on x86-64, NEON on aarch64) are
// selected once at startup and must agree with the reference (bit-exact for
// elementwise kernels, within rounding for reductions and products).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qgate::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;

    /// c[m x n] = a[m x k] * b[k x n], all row-major and non-aliasing.
    void (*cgemm)(std::size_t m, std::size_t k, std::size_t n,
                  const cplx* a, const cplx* b, cplx* c);
    /// y += alpha * x
    void (*caxpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
    /// y += alpha * x over real arrays
    void (*daxpy)(std::size_t n, double alpha, const double* x, double* y);
    /// out = a - b
    void (*csub)(std::size_t n, const cplx* a, const cplx* b, cplx* out);
    /// sum of |x_i|^2
    double (*sum_abs2)(std::size_t n, const cplx* x);
    /// out_i = x_i / |x_i|, and 1 where x_i == 0
    void (*unit_phase)(std::size_t n, const cplx* x, cplx* out);
    /// out_i = clip(re x_i, -1, 1), imaginary part dropped; when step > 0
    /// the clipped value is rounded to the nearest multiple of step with
    /// ties toward zero.
    void (*clip_quantize)(std::size_t n, const cplx* x, cplx* out, double step);
};

const KernelTable& scalar_table() noexcept;
/// SIMD table for this CPU, or nullptr when none is compiled in or supported.
const KernelTable* simd_table() noexcept;
/// Table used by the library. Chosen on first use: the SIMD table when
/// available unless QGATE_SIMD=scalar is set in the environment.
const KernelTable& active() noexcept;
/// Force a table by name ("scalar" or the SIMD table's name). Returns false
/// if the name is not available on this machine.
bool select(std::string_view name) noexcept;
/// Names of all tables usable on this machine, reference first.
std::vector<std::string_view> available();

}  // namespace qgate::kernels
