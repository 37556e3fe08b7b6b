#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qgate {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Entries are finite once constructed
/// through the checked factories (`from_rows`, `from_data`).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    /// Zero matrix; both dimensions must be positive.
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    static ComplexMatrix from_data(std::size_t rows, std::size_t cols, std::vector<cplx> data);
    static ComplexMatrix diagonal(std::span<const cplx> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    bool all_finite() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scale);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx scale, ComplexMatrix a);

/// Dense complex column vector.
class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t dim);
    ComplexVector(std::initializer_list<cplx> entries);
    explicit ComplexVector(std::vector<cplx> entries);

    std::size_t dim() const noexcept { return data_.size(); }
    cplx& operator[](std::size_t i) noexcept { return data_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return data_[i]; }
    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    bool all_finite() const noexcept;
    double norm() const noexcept;

    friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

private:
    std::vector<cplx> data_;
};

}  // namespace qgate
