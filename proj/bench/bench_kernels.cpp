#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fmmde/kernels.hpp"
#include "fmmde/mddm.hpp"
#include "fmmde/mdstest.hpp"

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = nd(rng);
  }
  return m;
}

template <bool Fast>
void BM_DistanceMatrix(benchmark::State& state) {
  const auto T = static_cast<int>(state.range(0));
  const Eigen::MatrixXd z = random_matrix(T, 20, 1);
  for (auto _ : state) {
    Eigen::MatrixXd d = Fast ? fmmde::kernels::fast::distance_matrix(z) : fmmde::kernels::reference::distance_matrix(z);
    benchmark::DoNotOptimize(d.data());
  }
}

template <bool Fast>
void BM_DistanceForm(benchmark::State& state) {
  const auto T = static_cast<int>(state.range(0));
  const Eigen::MatrixXd z = random_matrix(T, 20, 2);
  const Eigen::MatrixXd u = random_matrix(T, 20, 3);
  const Eigen::MatrixXd d = fmmde::kernels::fast::distance_matrix(z);
  for (auto _ : state) {
    Eigen::MatrixXd m = Fast ? fmmde::kernels::fast::distance_form(u, d) : fmmde::kernels::reference::distance_form(u, d);
    benchmark::DoNotOptimize(m.data());
  }
}

template <bool Fast>
void BM_UnivariateForm(benchmark::State& state) {
  const auto T = static_cast<int>(state.range(0));
  const Eigen::VectorXd u = random_matrix(T, 1, 4);
  const Eigen::VectorXd z = random_matrix(T, 1, 5);
  const std::span<const double> us(u.data(), static_cast<std::size_t>(T));
  const std::span<const double> zs(z.data(), static_cast<std::size_t>(T));
  for (auto _ : state) {
    double v = Fast ? fmmde::kernels::fast::univariate_distance_form(us, zs)
                    : fmmde::kernels::reference::univariate_distance_form(us, zs);
    benchmark::DoNotOptimize(v);
  }
}

void BM_MddmByLag(benchmark::State& state) {
  const Eigen::MatrixXd x = random_matrix(static_cast<int>(state.range(0)), 100, 6);
  for (auto _ : state) {
    auto v = fmmde::mddm_by_lag(x, 6);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_WildBootstrap(benchmark::State& state) {
  const Eigen::VectorXd f = random_matrix(static_cast<int>(state.range(0)), 1, 7);
  const std::span<const double> fs(f.data(), static_cast<std::size_t>(f.size()));
  for (auto _ : state) {
    auto r = fmmde::wild_bootstrap_pvalue(fs, 6, 199, 11);
    benchmark::DoNotOptimize(r.p_value);
  }
}

}  // namespace

BENCHMARK(BM_DistanceMatrix<false>)->Name("distance_matrix/reference")->Arg(200)->Arg(500);
BENCHMARK(BM_DistanceMatrix<true>)->Name("distance_matrix/fast")->Arg(200)->Arg(500);
BENCHMARK(BM_DistanceForm<false>)->Name("distance_form/reference")->Arg(200)->Arg(500);
BENCHMARK(BM_DistanceForm<true>)->Name("distance_form/fast")->Arg(200)->Arg(500);
BENCHMARK(BM_UnivariateForm<false>)->Name("univariate_form/reference")->Arg(300)->Arg(1000);
BENCHMARK(BM_UnivariateForm<true>)->Name("univariate_form/fast")->Arg(300)->Arg(1000);
BENCHMARK(BM_MddmByLag)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WildBootstrap)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
