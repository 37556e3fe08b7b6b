// NEON kernels for aarch64. One float64x2_t holds one complex value.

#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace qgate::kernels::detail {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// (ar + i ai) * b
inline float64x2_t cmul_bcast(double ar, double ai, float64x2_t b) {
    static const double kSigns[2] = {-1.0, 1.0};
    const float64x2_t swapped = vextq_f64(b, b, 1);
    const float64x2_t cross = vmulq_f64(vmulq_n_f64(swapped, ai), vld1q_f64(kSigns));
    return vfmaq_n_f64(cross, b, ar);
}

void cgemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = as_doubles(c + i * n);
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            float64x2_t acc0 = vdupq_n_f64(0.0);
            float64x2_t acc1 = vdupq_n_f64(0.0);
            float64x2_t acc2 = vdupq_n_f64(0.0);
            float64x2_t acc3 = vdupq_n_f64(0.0);
            for (std::size_t p = 0; p < k; ++p) {
                const double ar = a[i * k + p].real();
                const double ai = a[i * k + p].imag();
                const double* bp = as_doubles(b + p * n + j);
                acc0 = vaddq_f64(acc0, cmul_bcast(ar, ai, vld1q_f64(bp)));
                acc1 = vaddq_f64(acc1, cmul_bcast(ar, ai, vld1q_f64(bp + 2)));
                acc2 = vaddq_f64(acc2, cmul_bcast(ar, ai, vld1q_f64(bp + 4)));
                acc3 = vaddq_f64(acc3, cmul_bcast(ar, ai, vld1q_f64(bp + 6)));
            }
            vst1q_f64(ci + 2 * j, acc0);
            vst1q_f64(ci + 2 * j + 2, acc1);
            vst1q_f64(ci + 2 * j + 4, acc2);
            vst1q_f64(ci + 2 * j + 6, acc3);
        }
        for (; j < n; ++j) {
            float64x2_t acc = vdupq_n_f64(0.0);
            for (std::size_t p = 0; p < k; ++p)
                acc = vaddq_f64(acc, cmul_bcast(a[i * k + p].real(), a[i * k + p].imag(),
                                                vld1q_f64(as_doubles(b + p * n + j))));
            vst1q_f64(ci + 2 * j, acc);
        }
    }
}

void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t prod = cmul_bcast(alpha.real(), alpha.imag(), vld1q_f64(xd + 2 * i));
        vst1q_f64(yd + 2 * i, vaddq_f64(vld1q_f64(yd + 2 * i), prod));
    }
}

void daxpy(std::size_t n, double alpha, const double* x, double* y) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), alpha));
    for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void csub(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
    const double* ad = as_doubles(a);
    const double* bd = as_doubles(b);
    double* od = as_doubles(out);
    for (std::size_t i = 0; i < n; ++i)
        vst1q_f64(od + 2 * i, vsubq_f64(vld1q_f64(ad + 2 * i), vld1q_f64(bd + 2 * i)));
}

double sum_abs2(std::size_t n, const cplx* x) {
    const double* xd = as_doubles(x);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v0 = vld1q_f64(xd + 2 * i);
        const float64x2_t v1 = vld1q_f64(xd + 2 * i + 2);
        acc0 = vfmaq_f64(acc0, v0, v0);
        acc1 = vfmaq_f64(acc1, v1, v1);
    }
    if (i < n) {
        const float64x2_t v = vld1q_f64(xd + 2 * i);
        acc0 = vfmaq_f64(acc0, v, v);
    }
    return vaddvq_f64(vaddq_f64(acc0, acc1));
}

void unit_phase(std::size_t n, const cplx* x, cplx* out) {
    const double* xd = as_doubles(x);
    double* od = as_doubles(out);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t v = vld1q_f64(xd + 2 * i);
        const float64x2_t sq = vmulq_f64(v, v);
        const double mag2 = vgetq_lane_f64(sq, 0) + vgetq_lane_f64(sq, 1);
        if (mag2 == 0.0) {
            out[i] = 1.0;
        } else {
            vst1q_f64(od + 2 * i, vdivq_f64(v, vdupq_n_f64(std::sqrt(mag2))));
        }
    }
}

void clip_quantize(std::size_t n, const cplx* x, cplx* out, double step) {
    // Only the real lane carries data; the scalar form is already optimal.
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i].real();
        v = v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
        if (step > 0.0) v = std::copysign(std::ceil(std::fabs(v) / step - 0.5) * step, v);
        out[i] = {v, 0.0};
    }
}

constexpr KernelTable kTable{
    "neon", cgemm, caxpy, daxpy, csub, sum_abs2, unit_phase, clip_quantize,
};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kTable; }

}  // namespace qgate::kernels::detail
