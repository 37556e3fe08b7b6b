#pragma once

#include <cstddef>

#include "qgate/complex_matrix.hpp"
#include "qgate/random.hpp"

namespace qgate {

/// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& a);

/// Matrix product; throws DimensionError when a.cols() != b.rows().
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matmul(const ComplexMatrix& a, const ComplexVector& x);

double frobenius_norm(const ComplexMatrix& a);
/// ||a - b||_F; throws DimensionError on shape mismatch.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||A^dagger A - 1||_F; throws DimensionError for non-square input.
double unitarity_defect(const ComplexMatrix& a);

/// Haar-distributed m x m unitary: Householder QR of an i.i.d. complex
/// Gaussian matrix, with each column of Q rephased so that R has a
/// real-positive diagonal.
ComplexMatrix haar_unitary(std::size_t m, RandomSource rng);

/// Sub-block copy [row0, row0+rows) x [col0, col0+cols).
ComplexMatrix block(const ComplexMatrix& a, std::size_t row0, std::size_t col0,
                    std::size_t rows, std::size_t cols);

}  // namespace qgate
