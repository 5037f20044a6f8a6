#pragma once

#include <cstdint>
#include <vector>

#include "mvenet/enet.hpp"

namespace mvenet::cv {

using linalg::Matrix;

/// Fold label in [0, k) for each observation; fold sizes differ by at most one.
struct FoldAssignment {
    std::vector<std::size_t> fold;
    std::size_t k = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> members(std::size_t f) const;
};

/// Fisher-Yates shuffle of 0..n-1 driven by Xorshift64Star(seed), then dealt
/// round-robin: the observation at shuffled position t lands in fold t mod k.
/// Throws std::invalid_argument unless 2 <= k <= n.
FoldAssignment make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvResult {
    std::vector<double> lambdas;
    std::vector<double> mean_error;
    std::vector<double> se_error;
    /// fold_error[f][l]: mean held-out squared error (summed over responses).
    std::vector<std::vector<double>> fold_error;
    std::size_t index_min = 0;
    std::size_t index_1se = 0;
    double lambda_min = 0.0;
    double lambda_1se = 0.0;
};

struct CvOptions {
    /// Fit folds concurrently. Either way the reduction runs in fold order.
    bool parallel = true;
};

/// k-fold cross-validation on the lambda grid of the full data. Each fold's
/// model is refit on the remaining rows with that same grid. Throws CvError
/// naming the fold when its training slice cannot be fitted.
CvResult cross_validate(const Matrix& x, const Matrix& y, const enet::EnetConfig& config,
                        const FoldAssignment& folds, const CvOptions& options = {});

/// lambda.min / lambda.1se selection from per-lambda curves; ties go to the
/// larger lambda. Fills the index/lambda fields of `result`.
void select_lambdas(CvResult& result);

}  // namespace mvenet::cv
