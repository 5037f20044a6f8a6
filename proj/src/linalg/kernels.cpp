#include "mvenet/linalg/kernels.hpp"

#include <fmt/format.h>

#include "mvenet/errors.hpp"

namespace mvenet::linalg {

namespace {

void check_inner(std::size_t lhs, std::size_t rhs, const char* op) {
    if (lhs != rhs) {
        throw DimensionError(fmt::format("{}: inner dimensions {} and {} differ", op, lhs, rhs));
    }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols(), b.rows(), "matmul");
    Matrix c(a.rows(), b.cols());
    const auto n = static_cast<long>(a.rows());
    const std::size_t inner = a.cols();
    const std::size_t m = b.cols();
#pragma omp parallel for schedule(static) if (n * static_cast<long>(inner * m) > 32768)
    for (long i = 0; i < n; ++i) {
        auto ci = c.row(static_cast<std::size_t>(i));
        auto ai = a.row(static_cast<std::size_t>(i));
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = ai[k];
            auto bk = b.row(k);
            for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Matrix matmul_serial(const Matrix& a, const Matrix& b) {
    check_inner(a.cols(), b.rows(), "matmul");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

Matrix crossprod(const Matrix& a, const Matrix& b) {
    check_inner(a.rows(), b.rows(), "crossprod");
    const std::size_t p = a.cols();
    const std::size_t m = b.cols();
    const std::size_t n = a.rows();
    Matrix c(p, m);
    // Output row j of c is owned by one thread; the sum over observations
    // runs in ascending order like the serial loop.
#pragma omp parallel for schedule(static) if (static_cast<long>(n * p * m) > 32768)
    for (long jl = 0; jl < static_cast<long>(p); ++jl) {
        const auto j = static_cast<std::size_t>(jl);
        auto cj = c.row(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double aij = a(i, j);
            auto bi = b.row(i);
            for (std::size_t l = 0; l < m; ++l) cj[l] += aij * bi[l];
        }
    }
    return c;
}

Matrix crossprod_serial(const Matrix& a, const Matrix& b) {
    check_inner(a.rows(), b.rows(), "crossprod");
    Matrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t l = 0; l < b.cols(); ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * b(i, l);
            c(j, l) = s;
        }
    return c;
}

}  // namespace mvenet::linalg
