#include "mvenet/cv.hpp"

#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "mvenet/errors.hpp"
#include "mvenet/rng.hpp"

namespace mvenet::cv {

std::vector<std::size_t> FoldAssignment::members(std::size_t f) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold.size(); ++i)
        if (fold[i] == f) out.push_back(i);
    return out;
}

FoldAssignment make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n) {
        throw std::invalid_argument(fmt::format("fold count must satisfy 2 <= k <= n, got k={} n={}", k, n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Xorshift64Star rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.bounded(i + 1));
        std::swap(order[i], order[j]);
    }
    FoldAssignment folds{std::vector<std::size_t>(n), k, seed};
    for (std::size_t t = 0; t < n; ++t) folds.fold[order[t]] = t % k;
    return folds;
}

namespace {

std::vector<double> fold_curve(const Matrix& x, const Matrix& y, const enet::EnetConfig& config,
                               const FoldAssignment& folds, std::size_t f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < folds.fold.size(); ++i) (folds.fold[i] == f ? test : train).push_back(i);
    if (train.size() < 2 || test.empty()) throw CvError(f, "fold leaves too few observations");

    const Matrix x_train = x.select_rows(train);
    const Matrix y_train = y.select_rows(train);
    const Matrix x_test = x.select_rows(test);
    const Matrix y_test = y.select_rows(test);

    enet::EnetPath path;
    try {
        path = enet::fit_mgaussian_path(x_train, y_train, config);
    } catch (const InputError& e) {
        throw CvError(f, e.what());
    } catch (const ConvergenceError& e) {
        throw CvError(f, e.what());
    }

    std::vector<double> curve(path.size());
    for (std::size_t l = 0; l < path.size(); ++l) {
        const Matrix pred = path.predict(l, x_test);
        double sse = 0.0;
        for (std::size_t i = 0; i < test.size(); ++i)
            for (std::size_t k = 0; k < y.cols(); ++k) {
                const double r = y_test(i, k) - pred(i, k);
                sse += r * r;
            }
        curve[l] = sse / static_cast<double>(test.size());
    }
    return curve;
}

}  // namespace

void select_lambdas(CvResult& result) {
    const auto& err = result.mean_error;
    if (err.empty() || err.size() != result.lambdas.size() || result.se_error.size() != err.size()) {
        throw std::invalid_argument("select_lambdas: curve sizes do not match the grid");
    }
    std::size_t best = 0;
    for (std::size_t l = 1; l < err.size(); ++l)
        if (err[l] < err[best]) best = l;
    const double cutoff = err[best] + result.se_error[best];
    std::size_t one_se = best;
    for (std::size_t l = 0; l <= best; ++l) {
        if (err[l] <= cutoff) {
            one_se = l;
            break;
        }
    }
    result.index_min = best;
    result.index_1se = one_se;
    result.lambda_min = result.lambdas[best];
    result.lambda_1se = result.lambdas[one_se];
}

CvResult cross_validate(const Matrix& x, const Matrix& y, const enet::EnetConfig& config,
                        const FoldAssignment& folds, const CvOptions& options) {
    if (folds.fold.size() != x.rows() || x.rows() != y.rows()) {
        throw DimensionError("cross_validate: fold assignment does not match the data");
    }
    enet::EnetConfig fold_config = config;
    fold_config.lambdas = enet::lambda_grid(x, y, config);
    const std::size_t k = folds.k;

    std::vector<std::vector<double>> curves(k);
    std::vector<std::exception_ptr> failures(k);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (long fl = 0; fl < static_cast<long>(k); ++fl) {
        const auto f = static_cast<std::size_t>(fl);
        try {
            curves[f] = fold_curve(x, y, fold_config, folds, f);
        } catch (...) {
            failures[f] = std::current_exception();
        }
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    CvResult result;
    result.lambdas = fold_config.lambdas;
    const std::size_t nl = result.lambdas.size();
    result.mean_error.assign(nl, 0.0);
    result.se_error.assign(nl, 0.0);
    const auto kd = static_cast<double>(k);
    for (std::size_t l = 0; l < nl; ++l) {
        double sum = 0.0;
        for (std::size_t f = 0; f < k; ++f) sum += curves[f][l];
        const double mean = sum / kd;
        double ss = 0.0;
        for (std::size_t f = 0; f < k; ++f) ss += (curves[f][l] - mean) * (curves[f][l] - mean);
        result.mean_error[l] = mean;
        result.se_error[l] = std::sqrt(ss / (kd - 1.0) / kd);
    }
    result.fold_error = std::move(curves);
    select_lambdas(result);
    return result;
}

}  // namespace mvenet::cv
