#include "mvenet/linalg/solve.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mvenet/errors.hpp"

namespace mvenet::linalg {

Matrix cholesky_solve(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionError("cholesky_solve: matrix is not square");
    if (b.rows() != n) {
        throw DimensionError(fmt::format("cholesky_solve: {} right-hand-side rows for {}x{} matrix",
                                         b.rows(), n, n));
    }
    if (!is_symmetric(a, 1e-10)) throw DimensionError("cholesky_solve: matrix is not symmetric");

    // Lower factor L with a = L L^T.
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw NotPositiveDefinite(j, d);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }

    Matrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x(k, c);
            x(ii, c) = s / l(ii, ii);
        }
    }
    return x;
}

HouseholderQr::HouseholderQr(const Matrix& x)
    : qr_(x), rdiag_(x.cols(), 0.0), beta_(x.cols(), 0.0) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (n < p) {
        throw DimensionError(fmt::format("least squares needs rows >= cols, got {}x{}", n, p));
    }
    std::vector<double> col_norm(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) col_norm[j] += x(i, j) * x(i, j);
        col_norm[j] = std::sqrt(col_norm[j]);
    }

    for (std::size_t k = 0; k < p; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += qr_(i, k) * qr_(i, k);
        norm = std::sqrt(norm);
        if (norm <= 1e-10 * col_norm[k] || col_norm[k] == 0.0) {
            throw RankDeficient(
                fmt::format("design column {} is collinear with the preceding columns", k), {k});
        }
        const double alpha = qr_(k, k) > 0.0 ? -norm : norm;
        // v = x_k - alpha e_k, stored in place; H = I - beta v v^T.
        qr_(k, k) -= alpha;
        double vtv = 0.0;
        for (std::size_t i = k; i < n; ++i) vtv += qr_(i, k) * qr_(i, k);
        beta_[k] = 2.0 / vtv;
        rdiag_[k] = alpha;
        for (std::size_t j = k + 1; j < p; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += qr_(i, k) * qr_(i, j);
            s *= beta_[k];
            for (std::size_t i = k; i < n; ++i) qr_(i, j) -= s * qr_(i, k);
        }
    }
}

void HouseholderQr::apply_qt(Matrix& y) const {
    const std::size_t n = rows();
    for (std::size_t k = 0; k < cols(); ++k) {
        for (std::size_t c = 0; c < y.cols(); ++c) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += qr_(i, k) * y(i, c);
            s *= beta_[k];
            for (std::size_t i = k; i < n; ++i) y(i, c) -= s * qr_(i, k);
        }
    }
}

Matrix HouseholderQr::solve(const Matrix& y) const {
    if (y.rows() != rows()) {
        throw DimensionError(fmt::format("least squares: x has {} rows, y has {}", rows(), y.rows()));
    }
    Matrix qty = y;
    apply_qt(qty);
    const std::size_t p = cols();
    Matrix b(p, y.cols());
    for (std::size_t c = 0; c < y.cols(); ++c) {
        for (std::size_t ii = p; ii-- > 0;) {
            double s = qty(ii, c);
            for (std::size_t k = ii + 1; k < p; ++k) s -= qr_(ii, k) * b(k, c);
            b(ii, c) = s / rdiag_[ii];
        }
    }
    return b;
}

Matrix HouseholderQr::r() const {
    const std::size_t p = cols();
    Matrix out(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        out(i, i) = rdiag_[i];
        for (std::size_t j = i + 1; j < p; ++j) out(i, j) = qr_(i, j);
    }
    return out;
}

Matrix HouseholderQr::xtx_inverse() const {
    const std::size_t p = cols();
    // Upper-triangular inverse of R, column by column.
    Matrix rinv(p, p);
    for (std::size_t c = 0; c < p; ++c) {
        rinv(c, c) = 1.0 / rdiag_[c];
        for (std::size_t ii = c; ii-- > 0;) {
            double s = 0.0;
            for (std::size_t k = ii + 1; k <= c; ++k) s += qr_(ii, k) * rinv(k, c);
            rinv(ii, c) = -s / rdiag_[ii];
        }
    }
    Matrix out(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t k = j; k < p; ++k) s += rinv(i, k) * rinv(j, k);
            out(i, j) = s;
            out(j, i) = s;
        }
    return out;
}

Matrix least_squares(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows()) {
        throw DimensionError(
            fmt::format("least squares: x has {} rows, y has {}", x.rows(), y.rows()));
    }
    return HouseholderQr(x).solve(y);
}

}  // namespace mvenet::linalg
