#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mvenet::linalg {

/// Dense row-major matrix of doubles. Dimensions are at least 1x1 and every
/// entry is finite when the matrix is constructed.
class Matrix {
public:
    /// Zero-filled rows x cols.
    Matrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of row-major `data`; throws DimensionError on a size
    /// mismatch and std::domain_error on a non-finite entry.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix column(std::span<const double> values);
    static Matrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::vector<double> col(std::size_t j) const;

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    Matrix transpose() const;
    /// Rows listed in `index`, in that order.
    Matrix select_rows(std::span<const std::size_t> index) const;
    Matrix select_cols(std::span<const std::size_t> index) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

double max_abs(const Matrix& a) noexcept;
double frobenius_norm(const Matrix& a) noexcept;
double trace(const Matrix& a);
bool is_symmetric(const Matrix& a, double tol = 1e-10) noexcept;

/// Column means.
std::vector<double> col_means(const Matrix& a);

}  // namespace mvenet::linalg
