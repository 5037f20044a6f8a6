#pragma once

#include "mvenet/linalg/matrix.hpp"

namespace mvenet::linalg {

// Dense products. The default entry points split the output rows across
// OpenMP threads; the *_serial variants are plain triple loops kept as the
// reference. Every output entry is accumulated in the same index order by
// both, so results are bit-identical regardless of thread count.

/// a * b. Throws DimensionError unless a.cols() == b.rows().
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_serial(const Matrix& a, const Matrix& b);

/// transpose(a) * b without forming the transpose.
Matrix crossprod(const Matrix& a, const Matrix& b);
Matrix crossprod_serial(const Matrix& a, const Matrix& b);

}  // namespace mvenet::linalg
