#include "mvenet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "mvenet/errors.hpp"
#include "mvenet/linalg/kernels.hpp"
#include "mvenet/linalg/solve.hpp"

namespace mvenet::inference {

namespace {

std::vector<std::string> default_names(std::vector<std::string> names, std::size_t count,
                                       const char* prefix) {
    if (names.empty()) {
        for (std::size_t j = 0; j < count; ++j) names.push_back(fmt::format("{}{}", prefix, j + 1));
    }
    if (names.size() != count) {
        throw DimensionError(fmt::format("expected {} names, got {}", count, names.size()));
    }
    return names;
}

MlmFit fit_design(const Matrix& design, const Matrix& y, std::vector<std::string> predictor_names,
                  std::vector<std::string> response_names) {
    const std::size_t n = design.rows();
    const std::size_t p = design.cols() - 1;
    if (y.rows() != n) {
        throw DimensionError(fmt::format("x has {} rows but y has {}", n, y.rows()));
    }
    if (n <= p + 1) {
        throw InferenceError(fmt::format("need more than {} observations for {} predictors, got {}",
                                         p + 1, p, n));
    }
    predictor_names = default_names(std::move(predictor_names), p, "x");
    response_names = default_names(std::move(response_names), y.cols(), "y");

    std::optional<linalg::HouseholderQr> qr;
    try {
        qr.emplace(design);
    } catch (const RankDeficient& e) {
        std::vector<std::size_t> cols;
        std::string label = "intercept";
        if (!e.columns().empty() && e.columns().front() > 0) {
            cols.push_back(e.columns().front() - 1);
            label = predictor_names[cols.front()];
        }
        throw RankDeficient(fmt::format("design is rank deficient: '{}' is collinear with earlier columns", label),
                            cols);
    }

    MlmFit fit{qr->solve(y), Matrix(n, y.cols()), Matrix(n, y.cols()), Matrix(y.cols(), y.cols()),
               qr->xtx_inverse(), y, n - p - 1, std::move(predictor_names), std::move(response_names)};
    fit.fitted = linalg::matmul(design, fit.coef);
    fit.residuals = y - fit.fitted;
    fit.e_matrix = linalg::crossprod(fit.residuals, fit.residuals);
    return fit;
}

Matrix with_intercept(const Matrix& x) {
    Matrix design(x.rows(), x.cols() + 1);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        design(i, 0) = 1.0;
        for (std::size_t j = 0; j < x.cols(); ++j) design(i, j + 1) = x(i, j);
    }
    return design;
}

double centered_ss(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss;
}

}  // namespace

MlmFit fit_mlm(const Matrix& x, const Matrix& y, std::vector<std::string> predictor_names,
               std::vector<std::string> response_names) {
    return fit_design(with_intercept(x), y, std::move(predictor_names), std::move(response_names));
}

MlmFit fit_intercept_only(const Matrix& y, std::vector<std::string> response_names) {
    Matrix ones(y.rows(), 1);
    for (double& v : ones.values()) v = 1.0;
    return fit_design(ones, y, {}, std::move(response_names));
}

std::vector<ManovaRow> manova_table(const MlmFit& fit) {
    const std::size_t p = fit.n_predictors();
    const std::size_t k = fit.n_responses();
    if (p == 0) throw InferenceError("MANOVA needs at least one predictor");
    if (fit.df_error < k) {
        throw InferenceError(fmt::format("MANOVA needs df_error >= K ({} < {})", fit.df_error, k));
    }
    const std::size_t den_df = fit.df_error - k + 1;

    std::vector<ManovaRow> rows;
    rows.reserve(p);
    for (std::size_t j = 1; j <= p; ++j) {
        const auto b = fit.coef.row(j);
        const double c = fit.xtx_inv(j, j);
        Matrix h(k, k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t d = 0; d < k; ++d) h(a, d) = b[a] * b[d] / c;

        double pillai = 0.0;
        try {
            pillai = linalg::trace(linalg::cholesky_solve(h + fit.e_matrix, h));
        } catch (const NotPositiveDefinite&) {
            throw InferenceError(fmt::format("H + E is singular for term '{}'", fit.predictor_names[j - 1]));
        }
        pillai = std::clamp(pillai, 0.0, 1.0);

        ManovaRow row;
        row.term = fit.predictor_names[j - 1];
        row.pillai = pillai;
        row.num_df = k;
        row.den_df = den_df;
        row.approx_f = pillai < 1.0 ? pillai / (1.0 - pillai) * static_cast<double>(den_df) / static_cast<double>(k)
                                    : std::numeric_limits<double>::infinity();
        row.p_value = dist::f_sf(row.approx_f, static_cast<double>(k), static_cast<double>(den_df));
        rows.push_back(std::move(row));
    }
    return rows;
}

double f_from_r2(double r2, std::size_t p, std::size_t df2) {
    return (r2 / static_cast<double>(p)) / ((1.0 - r2) / static_cast<double>(df2));
}

double r2_from_f(double f, std::size_t p, std::size_t df2) {
    const double num = f * static_cast<double>(p);
    return num / (num + static_cast<double>(df2));
}

double adjusted_r2(double r2, std::size_t n, std::size_t p) {
    return 1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(n - p - 1);
}

UnivariateSummary univariate_summary(const MlmFit& fit, std::size_t response) {
    const std::size_t k = fit.n_responses();
    if (response >= k) {
        throw std::out_of_range(fmt::format("response index {} out of range for {} responses", response, k));
    }
    const std::size_t p = fit.n_predictors();
    if (p == 0) throw InferenceError("univariate summary needs at least one predictor");
    const std::size_t n = fit.n_obs();

    const std::vector<double> resid = fit.residuals.col(response);
    double rss = 0.0;
    for (double r : resid) rss += r * r;
    const double tss = centered_ss(fit.y.col(response));
    if (!(tss > 0.0)) throw InferenceError(fmt::format("response '{}' is constant", fit.response_names[response]));
    if (rss <= 1e-20 * tss) {
        throw InferenceError(fmt::format("response '{}' is fitted exactly (RSS = 0); F and t are unbounded",
                                         fit.response_names[response]));
    }

    UnivariateSummary s;
    s.response = fit.response_names[response];
    s.df1 = p;
    s.df2 = fit.df_error;
    const double sigma2 = rss / static_cast<double>(s.df2);
    s.sigma = std::sqrt(sigma2);
    s.r2 = 1.0 - rss / tss;
    s.r2_adj = adjusted_r2(s.r2, n, p);
    s.f_stat = f_from_r2(s.r2, p, s.df2);
    s.f_p_value = dist::f_sf(s.f_stat, static_cast<double>(p), static_cast<double>(s.df2));

    for (std::size_t j = 0; j <= p; ++j) {
        CoefficientRow row;
        row.term = j == 0 ? "(Intercept)" : fit.predictor_names[j - 1];
        row.estimate = fit.coef(j, response);
        row.std_error = std::sqrt(sigma2 * fit.xtx_inv(j, j));
        row.t = row.estimate / row.std_error;
        row.p_value = dist::t_sf(row.t, static_cast<double>(s.df2));
        s.coefficients.push_back(std::move(row));
    }
    return s;
}

VifReport vif(const Matrix& x, std::vector<std::string> names) {
    const std::size_t p = x.cols();
    if (p < 2) throw InferenceError("VIF needs at least two predictors");
    names = default_names(std::move(names), p, "x");

    VifReport report;
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<std::size_t> others;
        for (std::size_t c = 0; c < p; ++c)
            if (c != j) others.push_back(c);
        const Matrix target = x.select_cols(std::vector<std::size_t>{j});
        const Matrix design = with_intercept(x.select_cols(others));
        const double tss = centered_ss(target.values());
        if (!(tss > 0.0)) throw InferenceError(fmt::format("predictor '{}' is constant", names[j]));

        double rss = 0.0;
        try {
            const Matrix b = linalg::least_squares(design, target);
            const Matrix r = target - linalg::matmul(design, b);
            for (double v : r.values()) rss += v * v;
        } catch (const RankDeficient&) {
            throw InferenceError(fmt::format("perfect collinearity among the predictors other than '{}'", names[j]));
        }
        const double r2 = 1.0 - rss / tss;
        if (1.0 - r2 <= 1e-12) {
            throw InferenceError(fmt::format("predictor '{}' is perfectly collinear with the others", names[j]));
        }
        report.entries.push_back({names[j], r2, 1.0 / (1.0 - r2)});
    }
    return report;
}

double correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("correlation: vectors differ in length");
    const std::size_t n = a.size();
    if (n < 3) throw InferenceError("correlation needs at least 3 observations");
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0;
    double sbb = 0.0;
    double sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) throw InferenceError("correlation of a constant vector is undefined");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

PearsonResult pearson(std::span<const double> a, std::span<const double> b) {
    PearsonResult out;
    out.r = correlation(a, b);
    const double n = static_cast<double>(a.size());
    const double one_minus_r2 = 1.0 - out.r * out.r;
    if (one_minus_r2 <= 1e-14) {
        throw InferenceError(fmt::format("perfect correlation (r = {}) has no finite t statistic", out.r));
    }
    out.t = out.r * std::sqrt((n - 2.0) / one_minus_r2);
    out.p_value = dist::t_sf(out.t, n - 2.0);
    return out;
}

std::vector<ResidualRecord> residual_diagnostics(const MlmFit& fit) {
    std::vector<ResidualRecord> out;
    out.reserve(fit.n_obs() * fit.n_responses());
    for (std::size_t i = 0; i < fit.n_obs(); ++i)
        for (std::size_t k = 0; k < fit.n_responses(); ++k)
            out.push_back({fit.response_names[k], i, fit.fitted(i, k), fit.residuals(i, k)});
    return out;
}

}  // namespace mvenet::inference
