#include "qgate/complex_matrix.hpp"

#include <cmath>
#include <string>

#include "qgate/error.hpp"
#include "qgate/kernels.hpp"

namespace qgate {
namespace {

bool finite(const cplx& z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<cplx> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return from_data(r, c, std::move(data));
}

ComplexMatrix ComplexMatrix::from_data(std::size_t rows, std::size_t cols, std::vector<cplx> data) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data.size() != rows * cols)
        throw DimensionError("matrix data has " + std::to_string(data.size()) + " entries, expected " +
                             std::to_string(rows * cols));
    ComplexMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(data);
    if (!m.all_finite()) throw DimensionError("matrix entries must be finite");
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

bool ComplexMatrix::all_finite() const noexcept {
    for (const cplx& z : data_)
        if (!finite(z)) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    kernels::active().caxpy(size(), 1.0, other.data_.data(), data_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    kernels::active().csub(size(), data_.data(), other.data_.data(), data_.data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
    for (cplx& z : data_) z *= scale;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx scale, ComplexMatrix a) { return a *= scale; }

ComplexVector::ComplexVector(std::size_t dim) : data_(dim) {
    if (dim == 0) throw DimensionError("vector dimension must be positive");
}

ComplexVector::ComplexVector(std::initializer_list<cplx> entries) : ComplexVector(std::vector<cplx>(entries)) {}

ComplexVector::ComplexVector(std::vector<cplx> entries) : data_(std::move(entries)) {
    if (data_.empty()) throw DimensionError("vector dimension must be positive");
    if (!all_finite()) throw DimensionError("vector entries must be finite");
}

bool ComplexVector::all_finite() const noexcept {
    for (const cplx& z : data_)
        if (!finite(z)) return false;
    return true;
}

double ComplexVector::norm() const noexcept {
    return std::sqrt(kernels::active().sum_abs2(data_.size(), data_.data()));
}

}  // namespace qgate
