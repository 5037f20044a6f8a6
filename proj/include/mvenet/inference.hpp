#pragma once

#include <span>
#include <string>
#include <vector>

#include "mvenet/dist.hpp"
#include "mvenet/linalg/matrix.hpp"

namespace mvenet::inference {

using linalg::Matrix;

/// Multivariate OLS fit of y (N x K) on [1, x].
struct MlmFit {
    Matrix coef;       ///< (p+1) x K, row 0 holds the intercepts
    Matrix fitted;     ///< N x K
    Matrix residuals;  ///< N x K
    Matrix e_matrix;   ///< residuals^T residuals
    Matrix xtx_inv;    ///< (p+1) x (p+1), intercept first
    Matrix y;
    std::size_t df_error = 0;  ///< N - p - 1
    std::vector<std::string> predictor_names;
    std::vector<std::string> response_names;

    std::size_t n_obs() const noexcept { return fitted.rows(); }
    std::size_t n_predictors() const noexcept { return coef.rows() - 1; }
    std::size_t n_responses() const noexcept { return coef.cols(); }
};

/// Throws InferenceError unless N > p + 1 and RankDeficient (message naming
/// the column) when the design is collinear. Empty name lists get x1.., y1...
MlmFit fit_mlm(const Matrix& x, const Matrix& y, std::vector<std::string> predictor_names = {},
               std::vector<std::string> response_names = {});
/// Intercept-only model.
MlmFit fit_intercept_only(const Matrix& y, std::vector<std::string> response_names = {});

struct ManovaRow {
    std::string term;
    std::size_t df = 1;
    double pillai = 0.0;
    double approx_f = 0.0;
    std::size_t num_df = 0;
    std::size_t den_df = 0;
    dist::TailProbability p_value;
};

/// One Pillai-trace test per predictor, each given all others. With a
/// single-df hypothesis the F transform is exact:
///   F = V/(1-V) * (df_error - K + 1)/K  on (K, df_error - K + 1) df.
std::vector<ManovaRow> manova_table(const MlmFit& fit);

struct CoefficientRow {
    std::string term;
    double estimate = 0.0;
    double std_error = 0.0;
    double t = 0.0;
    dist::TailProbability p_value;
};

struct UnivariateSummary {
    std::string response;
    std::vector<CoefficientRow> coefficients;  ///< intercept first
    double f_stat = 0.0;
    std::size_t df1 = 0;
    std::size_t df2 = 0;
    dist::TailProbability f_p_value;
    double r2 = 0.0;
    double r2_adj = 0.0;
    double sigma = 0.0;  ///< residual standard error
};

/// Per-response OLS follow-up. Throws InferenceError on a perfect fit.
UnivariateSummary univariate_summary(const MlmFit& fit, std::size_t response);

// Identities tying the overall F test to R^2 for p predictors and
// df2 = N - p - 1 residual degrees of freedom.
double f_from_r2(double r2, std::size_t p, std::size_t df2);
double r2_from_f(double f, std::size_t p, std::size_t df2);
double adjusted_r2(double r2, std::size_t n, std::size_t p);

struct VifEntry {
    std::string name;
    double r2_aux = 0.0;
    double vif = 1.0;
};

struct VifReport {
    std::vector<VifEntry> entries;
};

/// 1 / (1 - R^2_j) from regressing column j on the other columns plus an
/// intercept. Throws InferenceError on perfect collinearity.
VifReport vif(const Matrix& x, std::vector<std::string> names = {});

/// Sample correlation; throws InferenceError on a constant input or N < 3.
double correlation(std::span<const double> a, std::span<const double> b);

struct PearsonResult {
    double r = 0.0;
    double t = 0.0;
    dist::TailProbability p_value;
};

/// Correlation with its t test on N - 2 df. |r| = 1 has no finite t and is
/// reported as InferenceError.
PearsonResult pearson(std::span<const double> a, std::span<const double> b);

struct ResidualRecord {
    std::string response;
    std::size_t observation = 0;
    double fitted = 0.0;
    double residual = 0.0;
};

/// N * K records in observation-major order.
std::vector<ResidualRecord> residual_diagnostics(const MlmFit& fit);

}  // namespace mvenet::inference
