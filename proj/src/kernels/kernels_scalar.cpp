// Reference kernels. Plain loops in a fixed evaluation order; SIMD variants
// are tested against these.

#include <cmath>

#include "kernels_internal.hpp"

namespace qgate::kernels::detail {
namespace {

void cgemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c) {
    for (std::size_t i = 0; i < m; ++i) {
        cplx* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            const double ar = a[i * k + p].real();
            const double ai = a[i * k + p].imag();
            const cplx* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double br = bp[j].real();
                const double bi = bp[j].imag();
                ci[j] = {ci[j].real() + (ar * br - ai * bi), ci[j].imag() + (ar * bi + ai * br)};
            }
        }
    }
}

void caxpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
    }
}

void daxpy(std::size_t n, double alpha, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void csub(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = {a[i].real() - b[i].real(), a[i].imag() - b[i].imag()};
}

double sum_abs2(std::size_t n, const cplx* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void unit_phase(std::size_t n, const cplx* x, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i].real();
        v = v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v);
        if (step > 0.0) {
            const double q = std::ceil(std::fabs(v) / step - 0.5) * step;
            v = std::copysign(q, v);
        }
        out[i] = {v, 0.0};
    }
}

constexpr KernelTable kTable{
    "scalar", cgemm, caxpy, daxpy, csub, sum_abs2, unit_phase, clip_quantize,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kTable; }

}  // namespace qgate::kernels::detail
