#include "mvenet/enet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "mvenet/errors.hpp"
#include "mvenet/linalg/kernels.hpp"

namespace mvenet::enet {

namespace {

void check_rows(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows()) {
        throw DimensionError(fmt::format("x has {} rows but y has {}", x.rows(), y.rows()));
    }
}

void check_finite(const Matrix& m, const char* what) {
    for (double v : m.values())
        if (!std::isfinite(v)) throw InputError(fmt::format("{} contains a non-finite value", what));
}

double row_norm(std::span<const double> r) noexcept {
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s);
}

// Coordinate descent state for one (x, y) pair. Columns of x are stored
// contiguously and centered when an intercept is fitted.
class CoordinateDescent {
public:
    CoordinateDescent(const Matrix& x, const Matrix& y, const EnetConfig& config)
        : n_(x.rows()), p_(x.cols()), k_(y.cols()), config_(config),
          xcol_(n_ * p_), xmean_(p_, 0.0), ymean_(k_, 0.0), scale_(p_, 0.0),
          coef_(p_, k_), resid_(y) {
        if (config.fit_intercept) {
            xmean_ = linalg::col_means(x);
            ymean_ = linalg::col_means(y);
        }
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t j = 0; j < p_; ++j) {
            double* col = xcol_.data() + j * n_;
            double ss = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                col[i] = x(i, j) - xmean_[j];
                ss += col[i] * col[i];
            }
            scale_[j] = ss * inv_n;
            if (!(scale_[j] > 0.0)) {
                throw InputError(fmt::format("predictor column {} is constant", j));
            }
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < k_; ++k) resid_(i, k) -= ymean_[k];
        grad_.resize(k_);
        next_.resize(k_);
    }

    // (1/N) xc_j^T r for every j, used for lambda_max.
    double max_gradient_norm() {
        double best = 0.0;
        for (std::size_t j = 0; j < p_; ++j) {
            gradient(j);
            best = std::max(best, row_norm(grad_));
        }
        return best;
    }

    // Solves at `lambda` starting from the current coefficients.
    std::size_t solve(double lambda, std::size_t lambda_index, const SweepObserver& observer) {
        const double l1 = lambda * config_.alpha;
        const double l2 = lambda * (1.0 - config_.alpha);
        std::size_t sweeps = 0;
        const auto notify = [&] {
            if (observer) {
                const auto b0 = intercept();
                observer(lambda_index, coef_, b0);
            }
        };
        const auto bump = [&] {
            if (++sweeps > config_.max_iter) throw ConvergenceError(lambda_index, config_.max_iter);
        };
        // A sweep change d <= tol is trusted only if the geometric tail
        // d / (1 - r), with r the ratio to the previous sweep, is too. Slowly
        // contracting (ill-conditioned) problems otherwise stop far from the
        // fixed point.
        const double tol = config_.tol;
        const auto converged = [tol](double d, double prev) {
            if (d > tol) return false;
            const double r = d / prev;
            if (r >= 1.0) return d <= 1e-3 * tol;
            return d / (1.0 - r) <= tol;
        };
        const double unknown = std::numeric_limits<double>::infinity();
        double prev_full = unknown;
        for (;;) {
            bump();
            double dmax = 0.0;
            for (std::size_t j = 0; j < p_; ++j) dmax = std::max(dmax, update(j, l1, l2));
            notify();
            if (!config_.active_set) {
                if (converged(dmax, prev_full)) break;
                prev_full = dmax;
                continue;
            }
            // The active-set loop below already ran to convergence; this sweep
            // only has to confirm that nothing outside it moves.
            if (dmax <= tol) break;

            active_.clear();
            for (std::size_t j = 0; j < p_; ++j)
                if (row_norm(coef_.row(j)) != 0.0) active_.push_back(j);
            double prev = dmax;
            for (;;) {
                bump();
                double amax = 0.0;
                for (std::size_t j : active_) amax = std::max(amax, update(j, l1, l2));
                notify();
                if (converged(amax, prev)) break;
                prev = amax;
            }
        }
        return sweeps;
    }

    std::vector<double> intercept() const {
        std::vector<double> b0(k_, 0.0);
        if (!config_.fit_intercept) return b0;
        for (std::size_t k = 0; k < k_; ++k) {
            double s = ymean_[k];
            for (std::size_t j = 0; j < p_; ++j) s -= xmean_[j] * coef_(j, k);
            b0[k] = s;
        }
        return b0;
    }

    const Matrix& coef() const noexcept { return coef_; }

private:
    void gradient(std::size_t j) {
        const double* col = xcol_.data() + j * n_;
        std::fill(grad_.begin(), grad_.end(), 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double xij = col[i];
            auto ri = resid_.row(i);
            for (std::size_t k = 0; k < k_; ++k) grad_[k] += xij * ri[k];
        }
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (double& g : grad_) g *= inv_n;
    }

    // One coordinate (row) update; returns c_j * ||delta b_j||_2.
    double update(std::size_t j, double l1, double l2) {
        gradient(j);
        auto bj = coef_.row(j);
        const double c = scale_[j];
        for (std::size_t k = 0; k < k_; ++k) grad_[k] += c * bj[k];
        const double denom = c + l2;
        if (k_ == 1) {
            next_[0] = soft_threshold(grad_[0], l1) / denom;
        } else {
            const double norm = row_norm(grad_);
            const double shrink = norm > l1 ? (1.0 - l1 / norm) / denom : 0.0;
            for (std::size_t k = 0; k < k_; ++k) next_[k] = shrink * grad_[k];
        }
        double dnorm2 = 0.0;
        bool changed = false;
        for (std::size_t k = 0; k < k_; ++k) {
            const double d = next_[k] - bj[k];
            grad_[k] = d;
            dnorm2 += d * d;
            changed = changed || d != 0.0;
        }
        if (!changed) return 0.0;
        const double* col = xcol_.data() + j * n_;
        for (std::size_t i = 0; i < n_; ++i) {
            auto ri = resid_.row(i);
            for (std::size_t k = 0; k < k_; ++k) ri[k] -= col[i] * grad_[k];
        }
        std::copy(next_.begin(), next_.end(), bj.begin());
        return c * std::sqrt(dnorm2);
    }

    std::size_t n_, p_, k_;
    const EnetConfig& config_;
    std::vector<double> xcol_;
    std::vector<double> xmean_;
    std::vector<double> ymean_;
    std::vector<double> scale_;
    Matrix coef_;
    Matrix resid_;
    std::vector<double> grad_;
    std::vector<double> next_;
    std::vector<std::size_t> active_;
};

std::size_t count_nonzero_rows(const Matrix& b) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < b.rows(); ++j) {
        const auto r = b.row(j);
        if (std::any_of(r.begin(), r.end(), [](double v) { return v != 0.0; })) ++count;
    }
    return count;
}

double total_sum_of_squares(const Matrix& y) {
    const auto means = linalg::col_means(y);
    double tss = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t k = 0; k < y.cols(); ++k) {
            const double d = y(i, k) - means[k];
            tss += d * d;
        }
    return tss;
}

void validate_config(const EnetConfig& config) {
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
        throw std::invalid_argument(fmt::format("alpha must lie in [0, 1], got {}", config.alpha));
    }
    if (!(config.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (config.max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    for (std::size_t l = 0; l < config.lambdas.size(); ++l) {
        if (!(config.lambdas[l] >= 0.0) || !std::isfinite(config.lambdas[l])) {
            throw std::invalid_argument("lambda values must be finite and nonnegative");
        }
        if (l > 0 && !(config.lambdas[l] < config.lambdas[l - 1])) {
            throw std::invalid_argument("lambda grid must be strictly decreasing");
        }
    }
}

}  // namespace

double EnetConfig::min_ratio_for(std::size_t n, std::size_t p) const {
    if (lambda_min_ratio) return *lambda_min_ratio;
    return n > p ? 1e-4 : 1e-2;
}

Matrix EnetPath::predict(std::size_t l, const Matrix& x) const {
    Matrix fitted = linalg::matmul(x, coefs.at(l));
    const auto& b0 = intercepts.at(l);
    for (std::size_t i = 0; i < fitted.rows(); ++i)
        for (std::size_t k = 0; k < fitted.cols(); ++k) fitted(i, k) += b0[k];
    return fitted;
}

double soft_threshold(double z, double gamma) noexcept {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

std::vector<double> group_soft_threshold(std::span<const double> u, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("group_soft_threshold: negative threshold");
    std::vector<double> out(u.size(), 0.0);
    const double norm = row_norm(u);
    if (norm <= gamma) return out;
    const double factor = 1.0 - gamma / norm;
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = factor * u[k];
    return out;
}

double objective(const Matrix& x, const Matrix& y, const Matrix& b, std::span<const double> b0,
                 double lambda, double alpha) {
    check_rows(x, y);
    if (b.rows() != x.cols() || b.cols() != y.cols() || b0.size() != y.cols()) {
        throw DimensionError("objective: coefficient shapes do not match x and y");
    }
    const Matrix fitted = linalg::matmul(x, b);
    double rss = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t k = 0; k < y.cols(); ++k) {
            const double r = y(i, k) - b0[k] - fitted(i, k);
            rss += r * r;
        }
    double penalty = 0.0;
    for (std::size_t j = 0; j < b.rows(); ++j) {
        const double norm = row_norm(b.row(j));
        penalty += 0.5 * (1.0 - alpha) * norm * norm + alpha * norm;
    }
    return rss / (2.0 * static_cast<double>(x.rows())) + lambda * penalty;
}

double compute_lambda_max(const Matrix& x, const Matrix& y, double alpha) {
    check_rows(x, y);
    if (!(alpha > 0.0)) {
        throw std::invalid_argument(
            "lambda_max is infinite for alpha = 0; supply an explicit lambda grid for ridge");
    }
    const Matrix g = linalg::crossprod(x, y);
    double best = 0.0;
    for (std::size_t j = 0; j < g.rows(); ++j) best = std::max(best, row_norm(g.row(j)));
    return best / static_cast<double>(x.rows()) / alpha;
}

std::vector<double> make_lambda_path(double lambda_max, std::size_t nlambda, double lambda_min_ratio) {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
        throw std::invalid_argument(fmt::format("lambda_max must be positive, got {}", lambda_max));
    }
    if (nlambda < 2) throw std::invalid_argument("nlambda must be at least 2");
    if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0)) {
        throw std::invalid_argument("lambda_min_ratio must lie in (0, 1)");
    }
    std::vector<double> path(nlambda);
    const double step = std::log(lambda_min_ratio) / static_cast<double>(nlambda - 1);
    path.front() = lambda_max;
    for (std::size_t l = 1; l + 1 < nlambda; ++l) path[l] = lambda_max * std::exp(step * static_cast<double>(l));
    path.back() = lambda_max * lambda_min_ratio;
    return path;
}

std::vector<double> lambda_grid(const Matrix& x, const Matrix& y, const EnetConfig& config) {
    validate_config(config);
    check_rows(x, y);
    if (!config.lambdas.empty()) return config.lambdas;
    if (!(config.alpha > 0.0)) {
        throw std::invalid_argument("alpha = 0 needs an explicit lambda grid");
    }
    CoordinateDescent cd(x, y, config);
    const double lmax = cd.max_gradient_norm() / config.alpha;
    if (!(lmax > 0.0)) {
        throw InputError("lambda_max is zero: responses are constant or orthogonal to every predictor");
    }
    return make_lambda_path(lmax, config.nlambda, config.min_ratio_for(x.rows(), x.cols()));
}

EnetPath fit_mgaussian_path(const Matrix& x, const Matrix& y, const EnetConfig& config,
                            const SweepObserver& observer) {
    validate_config(config);
    check_rows(x, y);
    check_finite(x, "x");
    check_finite(y, "y");

    CoordinateDescent cd(x, y, config);
    std::vector<double> grid = config.lambdas;
    // Above this value the zero solution is optimal; skip the sweeps there.
    double zero_above = std::numeric_limits<double>::infinity();
    if (config.alpha > 0.0) zero_above = cd.max_gradient_norm() / config.alpha;
    if (grid.empty()) {
        if (!(config.alpha > 0.0)) throw std::invalid_argument("alpha = 0 needs an explicit lambda grid");
        if (!(zero_above > 0.0)) {
            throw InputError("lambda_max is zero: responses are constant or orthogonal to every predictor");
        }
        grid = make_lambda_path(zero_above, config.nlambda, config.min_ratio_for(x.rows(), x.cols()));
    }

    EnetPath path;
    path.lambdas = grid;
    for (std::size_t l = 0; l < grid.size(); ++l) {
        std::size_t sweeps = 0;
        if (grid[l] < zero_above) sweeps = cd.solve(grid[l], l, observer);
        path.coefs.push_back(cd.coef());
        path.intercepts.push_back(cd.intercept());
        path.nonzero.push_back(count_nonzero_rows(cd.coef()));
        path.sweeps.push_back(sweeps);
    }
    const double tss = total_sum_of_squares(y);
    if (tss > 0.0) {
        path.dev_ratio = deviance_explained(path, x, y);
    } else {
        path.dev_ratio.assign(grid.size(), 0.0);
    }
    return path;
}

EnetPath fit_gaussian_path(const Matrix& x, std::span<const double> y, const EnetConfig& config,
                           const SweepObserver& observer) {
    return fit_mgaussian_path(x, Matrix::column(y), config, observer);
}

KktReport kkt_check(const Matrix& x, const Matrix& y, const Matrix& b, std::span<const double> b0,
                    double lambda, double alpha, double tol) {
    check_rows(x, y);
    if (b.rows() != x.cols() || b.cols() != y.cols() || b0.size() != y.cols()) {
        throw DimensionError("kkt_check: coefficient shapes do not match x and y");
    }
    Matrix resid = y - linalg::matmul(x, b);
    for (std::size_t i = 0; i < resid.rows(); ++i)
        for (std::size_t k = 0; k < resid.cols(); ++k) resid(i, k) -= b0[k];
    const Matrix grad = (1.0 / static_cast<double>(x.rows())) * linalg::crossprod(x, resid);

    KktReport report;
    std::vector<double> dev(y.cols());
    for (std::size_t j = 0; j < b.rows(); ++j) {
        const auto bj = b.row(j);
        const auto gj = grad.row(j);
        const double bnorm = row_norm(bj);
        double violation = 0.0;
        if (bnorm == 0.0) {
            violation = std::max(0.0, row_norm(gj) - lambda * alpha);
        } else {
            for (std::size_t k = 0; k < dev.size(); ++k) {
                dev[k] = gj[k] - lambda * (1.0 - alpha) * bj[k] - lambda * alpha * bj[k] / bnorm;
            }
            violation = row_norm(dev);
        }
        if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
        report.max_violation = std::max(report.max_violation, violation);
        if (violation > tol) report.violating.push_back(j);
    }
    return report;
}

std::vector<double> deviance_explained(const EnetPath& path, const Matrix& x, const Matrix& y) {
    check_rows(x, y);
    const double tss = total_sum_of_squares(y);
    if (!(tss > 0.0)) throw InputError("deviance ratio undefined: responses are constant");
    std::vector<double> out(path.size());
    for (std::size_t l = 0; l < path.size(); ++l) {
        const Matrix fitted = path.predict(l, x);
        double rss = 0.0;
        for (std::size_t i = 0; i < y.rows(); ++i)
            for (std::size_t k = 0; k < y.cols(); ++k) {
                const double r = y(i, k) - fitted(i, k);
                rss += r * r;
            }
        out[l] = 1.0 - rss / tss;
    }
    return out;
}

}  // namespace mvenet::enet
