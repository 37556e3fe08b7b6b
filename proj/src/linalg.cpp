#include "qgate/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qgate/error.hpp"
#include "qgate/kernels.hpp"

namespace qgate {

ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                             std::to_string(b.rows()) + ")");
    ComplexMatrix c(a.rows(), b.cols());
    kernels::active().cgemm(a.rows(), a.cols(), b.cols(), a.data().data(), b.data().data(),
                            c.data().data());
    return c;
}

ComplexVector matmul(const ComplexMatrix& a, const ComplexVector& x) {
    if (a.cols() != x.dim())
        throw DimensionError("matmul: matrix has " + std::to_string(a.cols()) +
                             " columns, vector has " + std::to_string(x.dim()) + " entries");
    ComplexVector y(a.rows());
    kernels::active().cgemm(a.rows(), a.cols(), 1, a.data().data(), x.data().data(), y.data().data());
    return y;
}

double frobenius_norm(const ComplexMatrix& a) {
    return std::sqrt(kernels::active().sum_abs2(a.size(), a.data().data()));
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("frobenius_distance: shape mismatch");
    std::vector<cplx> diff(a.size());
    const auto& k = kernels::active();
    k.csub(a.size(), a.data().data(), b.data().data(), diff.data());
    return std::sqrt(k.sum_abs2(diff.size(), diff.data()));
}

double unitarity_defect(const ComplexMatrix& a) {
    if (!a.square()) throw DimensionError("unitarity_defect: matrix is not square");
    return frobenius_distance(matmul(dagger(a), a), ComplexMatrix::identity(a.rows()));
}

ComplexMatrix haar_unitary(std::size_t m, RandomSource rng) {
    if (m == 0) throw DimensionError("haar_unitary: dimension must be positive");
    RandomStream draws(rng);
    ComplexMatrix a(m, m);
    for (cplx& z : a.data()) z = draws.complex_normal();

    // Householder QR, reflectors kept for forming Q.
    std::vector<std::vector<cplx>> reflectors(m);
    std::vector<cplx> r_diag(m);
    for (std::size_t k = 0; k < m; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) norm2 += std::norm(a(i, k));
        const double norm = std::sqrt(norm2);
        const cplx x0 = a(k, k);
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
        const cplx alpha = -phase * norm;

        std::vector<cplx> v(m - k);
        for (std::size_t i = k; i < m; ++i) v[i - k] = a(i, k);
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (const cplx& z : v) vnorm2 += std::norm(z);
        if (vnorm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(vnorm2);
            for (cplx& z : v) z *= inv;
            for (std::size_t j = k; j < m; ++j) {
                cplx dot = 0.0;
                for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * a(i, j);
                for (std::size_t i = k; i < m; ++i) a(i, j) -= 2.0 * v[i - k] * dot;
            }
            r_diag[k] = alpha;
        } else {
            v.clear();
            r_diag[k] = x0;
        }
        reflectors[k] = std::move(v);
    }

    ComplexMatrix q = ComplexMatrix::identity(m);
    for (std::size_t kk = m; kk-- > 0;) {
        const std::vector<cplx>& v = reflectors[kk];
        if (v.empty()) continue;
        for (std::size_t j = 0; j < m; ++j) {
            cplx dot = 0.0;
            for (std::size_t i = kk; i < m; ++i) dot += std::conj(v[i - kk]) * q(i, j);
            for (std::size_t i = kk; i < m; ++i) q(i, j) -= 2.0 * v[i - kk] * dot;
        }
    }

    // Rephase columns so that R has a positive real diagonal.
    for (std::size_t j = 0; j < m; ++j) {
        const double mag = std::abs(r_diag[j]);
        const cplx phase = mag > 0.0 ? r_diag[j] / mag : cplx(1.0);
        for (std::size_t i = 0; i < m; ++i) q(i, j) *= phase;
    }
    return q;
}

ComplexMatrix block(const ComplexMatrix& a, std::size_t row0, std::size_t col0, std::size_t rows,
                    std::size_t cols) {
    if (row0 + rows > a.rows() || col0 + cols > a.cols())
        throw DimensionError("block: range exceeds matrix");
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(row0 + i, col0 + j);
    return out;
}

}  // namespace qgate
