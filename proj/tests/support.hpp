#pragma once
// Independent reference computations for the tests. Nothing here calls the
// kernel layer, so a kernel bug cannot hide behind its own oracle.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "qgate/complex_matrix.hpp"

namespace qgate::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix a(rows, cols);
    for (cplx& z : a.data()) z = {normal(gen), normal(gen)};
    return a;
}

inline ComplexVector random_vector(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = {normal(gen), normal(gen)};
    return v;
}

inline ComplexMatrix naive_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const cplx x = a(i, k), y = b(k, j);
                re += x.real() * y.real() - x.imag() * y.imag();
                im += x.real() * y.imag() + x.imag() * y.real();
            }
            c(i, j) = {re, im};
        }
    return c;
}

inline ComplexVector naive_matvec(const ComplexMatrix& a, const ComplexVector& x) {
    ComplexVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) y[i] += a(i, k) * x[k];
    return y;
}

inline ComplexMatrix naive_dagger(const ComplexMatrix& a) {
    ComplexMatrix d(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d(j, i) = std::conj(a(i, j));
    return d;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

inline double naive_defect(const ComplexMatrix& a) {
    const ComplexMatrix g = naive_matmul(naive_dagger(a), a);
    double s = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) s += std::norm(g(i, j) - (i == j ? 1.0 : 0.0));
    return std::sqrt(s);
}

}  // namespace qgate::testing
