// AVX2 + FMA kernels. Complex data is interleaved (re, im), so one __m256d
// holds two complex values.

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace qgate::kernels::detail {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// (ar + i ai) * b for two packed complex values of b.
inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d b) {
    const __m256d swapped = _mm256_permute_pd(b, 0b0101);
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, swapped));
}

void cgemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    const std::size_t n8 = n - n % 8;
    const std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < m; ++i) {
        const cplx* ai_row = a + i * k;
        double* ci = as_doubles(c + i * n);
        std::size_t j = 0;
        for (; j < n8; j += 8) {
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            __m256d acc2 = _mm256_setzero_pd();
            __m256d acc3 = _mm256_setzero_pd();
            for (std::size_t p = 0; p < k; ++p) {
                const __m256d ar = _mm256_set1_pd(ai_row[p].real());
                const __m256d aim = _mm256_set1_pd(ai_row[p].imag());
                const double* bp = as_doubles(b + p * n + j);
                acc0 = _mm256_add_pd(acc0, cmul_bcast(ar, aim, _mm256_loadu_pd(bp)));
                acc1 = _mm256_add_pd(acc1, cmul_bcast(ar, aim, _mm256_loadu_pd(bp + 4)));
                acc2 = _mm256_add_pd(acc2, cmul_bcast(ar, aim, _mm256_loadu_pd(bp + 8)));
                acc3 = _mm256_add_pd(acc3, cmul_bcast(ar, aim, _mm256_loadu_pd(bp + 12)));
            }
            _mm256_storeu_pd(ci + 2 * j, acc0);
            _mm256_storeu_pd(ci + 2 * j + 4, acc1);
            _mm256_storeu_pd(ci + 2 * j + 8, acc2);
            _mm256_storeu_pd(ci + 2 * j + 12, acc3);
        }
        for (; j < n2; j += 2) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t p = 0; p < k; ++p) {
                const __m256d ar = _mm256_set1_pd(ai_row[p].real());
                const __m256d aim = _mm256_set1_pd(ai_row[p].imag());
                acc = _mm256_add_pd(acc, cmul_bcast(ar, aim, _mm256_loadu_pd(as_doubles(b + p * n + j))));
            }
            _mm256_storeu_pd(ci + 2 * j, acc);
        }
        for (; j < n; ++j) {
            double re = 0.0;
            double im = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                const cplx x = ai_row[p];
                const cplx y = b[p * n + j];
                re += x.real() * y.real() - x.imag() * y.imag();
                im += x.real() * y.imag() + x.imag() * y.real();
            }
            ci[2 * j] = re;
            ci[2 * j + 1] = im;
        }
    }
}

void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    const double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d prod = cmul_bcast(ar, ai, _mm256_loadu_pd(xd + 2 * i));
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        y[i] = {y[i].real() + (alpha.real() * xr - alpha.imag() * xi),
                y[i].imag() + (alpha.real() * xi + alpha.imag() * xr)};
    }
}

void daxpy(std::size_t n, double alpha, const double* x, double* y) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(y + i + 4,
                         _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void csub(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
    const double* ad = as_doubles(a);
    const double* bd = as_doubles(b);
    double* od = as_doubles(out);
    const std::size_t total = 2 * n;
    std::size_t i = 0;
    for (; i + 4 <= total; i += 4)
        _mm256_storeu_pd(od + i, _mm256_sub_pd(_mm256_loadu_pd(ad + i), _mm256_loadu_pd(bd + i)));
    for (; i < total; ++i) od[i] = ad[i] - bd[i];
}

double sum_abs2(std::size_t n, const cplx* x) {
    const double* xd = as_doubles(x);
    const std::size_t total = 2 * n;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= total; i += 8) {
        const __m256d v0 = _mm256_loadu_pd(xd + i);
        const __m256d v1 = _mm256_loadu_pd(xd + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 4 <= total; i += 4) {
        const __m256d v = _mm256_loadu_pd(xd + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; i < total; ++i) s += xd[i] * xd[i];
    return s;
}

void unit_phase(std::size_t n, const cplx* x, cplx* out) {
    const double* xd = as_doubles(x);
    double* od = as_doubles(out);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one_re = _mm256_setr_pd(1.0, 0.0, 1.0, 0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(xd + 2 * i);
        const __m256d sq = _mm256_mul_pd(v, v);
        const __m256d mag2 = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0b0101));
        const __m256d is_zero = _mm256_cmp_pd(mag2, zero, _CMP_EQ_OQ);
        const __m256d scaled = _mm256_div_pd(v, _mm256_sqrt_pd(mag2));
        _mm256_storeu_pd(od + 2 * i, _mm256_blendv_pd(scaled, one_re, is_zero));
    }
    for (; i < n; ++i) {
        const double re = x[i].real();
        const double im = x[i].imag();
        const double mag2 = re * re + im * im;
        if (mag2 == 0.0) {
            out[i] = 1.0;
        } else {
            const double mag = std::sqrt(mag2);
            out[i] = {re / mag, im / mag};
        }
    }
}

void clip_quantize(std::size_t n, const cplx* x, cplx* out, double step) {
    const double* xd = as_doubles(x);
    double* od = as_doubles(out);
    const __m256d lo = _mm256_set1_pd(-1.0);
    const __m256d hi = _mm256_set1_pd(1.0);
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d stepv = _mm256_set1_pd(step);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(xd + 2 * i);
        v = _mm256_min_pd(_mm256_max_pd(v, lo), hi);
        if (step > 0.0) {
            const __m256d mag = _mm256_andnot_pd(sign_bit, v);
            const __m256d levels = _mm256_round_pd(_mm256_sub_pd(_mm256_div_pd(mag, stepv), half),
                                                   _MM_FROUND_TO_POS_INF | _MM_FROUND_NO_EXC);
            const __m256d q = _mm256_andnot_pd(sign_bit, _mm256_mul_pd(levels, stepv));
            v = _mm256_or_pd(q, _mm256_and_pd(v, sign_bit));
        }
        _mm256_storeu_pd(od + 2 * i, _mm256_blend_pd(v, zero, 0b1010));
    }
    for (; i < n; ++i) {
        double v = x[i].real();
        v = v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
        if (step > 0.0) v = std::copysign(std::ceil(std::fabs(v) / step - 0.5) * step, v);
        out[i] = {v, 0.0};
    }
}

constexpr KernelTable kTable{
    "avx2", cgemm, caxpy, daxpy, csub, sum_abs2, unit_phase, clip_quantize,
};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kTable; }

}  // namespace qgate::kernels::detail
