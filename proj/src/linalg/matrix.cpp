#include "mvenet/linalg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "mvenet/errors.hpp"

namespace mvenet::linalg {

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw DimensionError(fmt::format("matrix dimensions must be positive, got {}x{}", rows, cols));
    }
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(fmt::format("{}: shapes {}x{} and {}x{} differ", op, a.rows(),
                                         a.cols(), b.rows(), b.cols()));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_dims(rows, cols);
    if (data_.size() != rows * cols) {
        throw DimensionError(fmt::format("{}x{} matrix needs {} entries, got {}", rows, cols,
                                         rows * cols, data_.size()));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        if (!std::isfinite(data_[k])) {
            throw std::domain_error(fmt::format("non-finite matrix entry at ({}, {})", k / cols,
                                                k % cols));
        }
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    check_dims(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged initializer list");
        for (double v : r) {
            if (!std::isfinite(v)) throw std::domain_error("non-finite matrix entry");
            data_.push_back(v);
        }
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::column(std::span<const double> values) {
    return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

std::vector<double> Matrix::col(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::select_rows(std::span<const std::size_t> index) const {
    Matrix out(index.size(), cols_);
    for (std::size_t r = 0; r < index.size(); ++r) {
        if (index[r] >= rows_) throw DimensionError("row index out of range");
        std::copy_n(row(index[r]).begin(), cols_, out.row(r).begin());
    }
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> index) const {
    Matrix out(rows_, index.size());
    for (std::size_t c = 0; c < index.size(); ++c) {
        if (index[c] >= cols_) throw DimensionError("column index out of range");
        for (std::size_t i = 0; i < rows_; ++i) out(i, c) = (*this)(i, index[c]);
    }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "add");
    Matrix out = a;
    auto o = out.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] += bv[k];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "subtract");
    Matrix out = a;
    auto o = out.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bv[k];
    return out;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix out = a;
    for (double& v : out.values()) v *= s;
    return out;
}

double max_abs(const Matrix& a) noexcept {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

double frobenius_norm(const Matrix& a) noexcept {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s);
}

double trace(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("trace of a non-square matrix");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

bool is_symmetric(const Matrix& a, double tol) noexcept {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

std::vector<double> col_means(const Matrix& a) {
    std::vector<double> m(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[j] += a(i, j);
    for (double& v : m) v /= static_cast<double>(a.rows());
    return m;
}

}  // namespace mvenet::linalg
