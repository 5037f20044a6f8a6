#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvenet {

/// Operand shapes do not conform.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data rejected during ingestion or validation (parse failures,
/// missing cells, constant columns, unknown names).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky pivot was not strictly positive.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(std::size_t pivot, double value);
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// A design matrix column is (numerically) a combination of the others.
class RankDeficient : public std::runtime_error {
public:
    RankDeficient(std::string what, std::vector<std::size_t> columns = {});
    /// Zero-based indices of the offending columns, when known.
    const std::vector<std::size_t>& columns() const noexcept { return columns_; }

private:
    std::vector<std::size_t> columns_;
};

/// Coordinate descent hit its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::size_t lambda_index, std::size_t sweeps);
    std::size_t lambda_index() const noexcept { return lambda_index_; }

private:
    std::size_t lambda_index_;
};

/// A cross-validation fold could not be fitted.
class CvError : public std::runtime_error {
public:
    CvError(std::size_t fold, const std::string& reason);
    std::size_t fold() const noexcept { return fold_; }

private:
    std::size_t fold_;
};

/// Statistic cannot be formed (perfect fit, singular H+E, degenerate input).
class InferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mvenet
