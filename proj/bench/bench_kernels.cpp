// Serial reference kernels against their OpenMP versions, plus CV with and
// without concurrent folds. Set OMP_NUM_THREADS to vary the thread count.

#include <random>

#include <benchmark/benchmark.h>

#include "mvenet/cv.hpp"
#include "mvenet/linalg/kernels.hpp"

using mvenet::linalg::Matrix;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (double& v : m.values()) v = g(rng);
    return m;
}

void BM_matmul_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, n, 1);
    const Matrix b = random_matrix(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mvenet::linalg::matmul_serial(a, b));
}

void BM_matmul_parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, n, 1);
    const Matrix b = random_matrix(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mvenet::linalg::matmul(a, b));
}

void BM_crossprod_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(4 * n, n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(mvenet::linalg::crossprod_serial(a, a));
}

void BM_crossprod_parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(4 * n, n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(mvenet::linalg::crossprod(a, a));
}

void run_cv(benchmark::State& state, bool parallel) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix x = random_matrix(n, 20, 4);
    Matrix y = random_matrix(n, 2, 5);
    for (std::size_t i = 0; i < n; ++i) y(i, 0) += x(i, 0) - 0.5 * x(i, 3);
    mvenet::enet::EnetConfig cfg;
    cfg.nlambda = 50;
    const auto folds = mvenet::cv::make_folds(n, 10, 1);
    for (auto _ : state) benchmark::DoNotOptimize(mvenet::cv::cross_validate(x, y, cfg, folds, {parallel}));
}

void BM_cv_serial(benchmark::State& state) { run_cv(state, false); }
void BM_cv_parallel(benchmark::State& state) { run_cv(state, true); }

}  // namespace

BENCHMARK(BM_matmul_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_matmul_parallel)->Arg(64)->Arg(256);
BENCHMARK(BM_crossprod_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_crossprod_parallel)->Arg(64)->Arg(256);
BENCHMARK(BM_cv_serial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cv_parallel)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
