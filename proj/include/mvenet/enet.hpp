#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mvenet/linalg/matrix.hpp"

namespace mvenet::enet {

using linalg::Matrix;

/// Solver settings. Defaults: alpha 0.5, 100 lambdas down to 1e-4 * lambda_max
/// (1e-2 when N <= p), tolerance 1e-7, 100000 sweeps per lambda, intercept on.
struct EnetConfig {
    double alpha = 0.5;
    std::size_t nlambda = 100;
    /// Smallest lambda as a fraction of lambda_max; unset picks the default.
    std::optional<double> lambda_min_ratio;
    /// Convergence threshold on max_j c_j * ||delta b_j||_2 over one sweep.
    double tol = 1e-7;
    std::size_t max_iter = 100000;
    bool fit_intercept = true;
    /// Explicit strictly decreasing grid. When non-empty it replaces the
    /// generated one (required for alpha = 0).
    std::vector<double> lambdas;
    /// Iterate on the nonzero rows between full sweeps.
    bool active_set = true;

    double min_ratio_for(std::size_t n, std::size_t p) const;
};

/// Solutions along a decreasing lambda grid. coefs[l] is p x K; predictor j
/// counts as nonzero when any entry of its row is nonzero.
struct EnetPath {
    std::vector<double> lambdas;
    std::vector<Matrix> coefs;
    std::vector<std::vector<double>> intercepts;
    std::vector<double> dev_ratio;
    std::vector<std::size_t> nonzero;
    /// Sweeps spent at each lambda.
    std::vector<std::size_t> sweeps;

    std::size_t size() const noexcept { return lambdas.size(); }
    /// Fitted values 1 b0^T + x B at path index l.
    Matrix predict(std::size_t l, const Matrix& x) const;
};

/// Called after every coordinate sweep with the current iterate.
using SweepObserver =
    std::function<void(std::size_t lambda_index, const Matrix& coef, std::span<const double> intercept)>;

/// sign(z) * max(|z| - gamma, 0).
double soft_threshold(double z, double gamma) noexcept;

/// (1 - gamma / ||u||_2)_+ * u.
std::vector<double> group_soft_threshold(std::span<const double> u, double gamma);

/// (1/(2N)) ||y - 1 b0^T - x b||_F^2
///   + lambda * sum_j [ (1 - alpha)/2 ||b_j||^2 + alpha ||b_j|| ]
/// where b_j is row j of b.
double objective(const Matrix& x, const Matrix& y, const Matrix& b, std::span<const double> b0,
                 double lambda, double alpha);

/// max_j ||(1/N) x_j^T y||_2 / alpha for standardized x and centered y.
/// Throws std::invalid_argument for alpha <= 0.
double compute_lambda_max(const Matrix& x, const Matrix& y, double alpha);

/// `nlambda` values geometrically spaced from lambda_max down to
/// lambda_max * lambda_min_ratio.
std::vector<double> make_lambda_path(double lambda_max, std::size_t nlambda, double lambda_min_ratio);

/// The lambda grid fit_*_path would use for (x, y, config).
std::vector<double> lambda_grid(const Matrix& x, const Matrix& y, const EnetConfig& config);

/// Single-response elastic net path. x is used as given (no rescaling).
EnetPath fit_gaussian_path(const Matrix& x, std::span<const double> y, const EnetConfig& config,
                           const SweepObserver& observer = {});

/// Multi-response path with the grouped row-norm penalty. For K = 1 this
/// is the same computation as fit_gaussian_path.
EnetPath fit_mgaussian_path(const Matrix& x, const Matrix& y, const EnetConfig& config,
                            const SweepObserver& observer = {});

struct KktReport {
    double max_violation = 0.0;
    std::vector<std::size_t> violating;
};

/// Stationarity check of a candidate (b, b0). Never throws on bad values;
/// shape mismatches still raise DimensionError.
KktReport kkt_check(const Matrix& x, const Matrix& y, const Matrix& b, std::span<const double> b0,
                    double lambda, double alpha, double tol);

/// 1 - RSS(lambda) / TSS per path point, TSS = ||y - column means||_F^2.
/// Throws InputError when TSS is zero.
std::vector<double> deviance_explained(const EnetPath& path, const Matrix& x, const Matrix& y);

}  // namespace mvenet::enet
