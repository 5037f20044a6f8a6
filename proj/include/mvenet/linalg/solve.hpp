#pragma once

#include <vector>

#include "mvenet/linalg/matrix.hpp"

namespace mvenet::linalg {

/// Solves a * x = b for symmetric positive-definite `a` via Cholesky.
/// Throws DimensionError on shape problems (including asymmetry beyond
/// 1e-10) and NotPositiveDefinite when a pivot is not strictly positive.
Matrix cholesky_solve(const Matrix& a, const Matrix& b);

/// Householder QR of a tall matrix (rows >= cols), used for least squares.
class HouseholderQr {
public:
    /// Throws RankDeficient naming the first column whose component
    /// orthogonal to the preceding columns vanishes to machine precision.
    explicit HouseholderQr(const Matrix& x);

    std::size_t rows() const noexcept { return qr_.rows(); }
    std::size_t cols() const noexcept { return qr_.cols(); }

    /// argmin_B ||y - x B||_F.
    Matrix solve(const Matrix& y) const;
    /// Upper-triangular factor R (cols x cols).
    Matrix r() const;
    /// (x^T x)^{-1} = R^{-1} R^{-T}.
    Matrix xtx_inverse() const;

private:
    void apply_qt(Matrix& y) const;

    Matrix qr_;                  // R above the diagonal, Householder vectors below
    std::vector<double> rdiag_;  // diagonal of R
    std::vector<double> beta_;   // reflector scale factors
};

/// B minimizing ||y - x B||_F^2 (QR based). Requires x.rows() >= x.cols()
/// and full column rank.
Matrix least_squares(const Matrix& x, const Matrix& y);

}  // namespace mvenet::linalg
