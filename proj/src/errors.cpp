#include "mvenet/errors.hpp"

#include <fmt/format.h>

namespace mvenet {

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot, double value)
    : std::runtime_error(fmt::format(
          "matrix is not positive definite: pivot {} has value {:.6g}", pivot, value)),
      pivot_(pivot) {}

RankDeficient::RankDeficient(std::string what, std::vector<std::size_t> columns)
    : std::runtime_error(std::move(what)), columns_(std::move(columns)) {}

ConvergenceError::ConvergenceError(std::size_t lambda_index, std::size_t sweeps)
    : std::runtime_error(fmt::format(
          "coordinate descent did not converge at lambda index {} after {} sweeps",
          lambda_index, sweeps)),
      lambda_index_(lambda_index) {}

CvError::CvError(std::size_t fold, const std::string& reason)
    : std::runtime_error(fmt::format("cross-validation fold {}: {}", fold, reason)), fold_(fold) {}

}  // namespace mvenet
