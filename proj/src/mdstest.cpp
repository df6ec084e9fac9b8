#include "fmmde/mdstest.hpp"

#include <cmath>
#include <numeric>

#include "fmmde/error.hpp"
#include "fmmde/kernels.hpp"
#include "fmmde/random.hpp"

namespace fmmde {

namespace {

void check_length(std::size_t T, int lags) {
  if (lags < 1) throw InputError("truncation lag M must be >= 1");
  if (static_cast<long>(T) - lags < 3) throw InputError("series too short for the martingale difference test");
}

// |MDDM_T(f_t | f_{t-j})| for a scalar series.
double univariate_mddm(std::span<const double> f, int j, std::vector<double>& scratch) {
  const std::size_t m = f.size() - static_cast<std::size_t>(j);
  auto response = f.subspan(static_cast<std::size_t>(j), m);
  const double mean = std::accumulate(response.begin(), response.end(), 0.0) / static_cast<double>(m);
  scratch.resize(m);
  for (std::size_t i = 0; i < m; ++i) scratch[i] = response[i] - mean;
  const double md = static_cast<double>(m);
  return -kernels::fast::univariate_distance_form(scratch, f.first(m)) / (md * md);
}

double stat_impl(std::span<const double> f, int lags, int N, std::vector<double>& scratch) {
  double total = 0.0;
  for (int j = 1; j <= lags; ++j) total += wang_shao_weight(j, N) * std::abs(univariate_mddm(f, j, scratch));
  return static_cast<double>(f.size()) * total;
}

}  // namespace

double wang_shao_weight(int j, int N) {
  return static_cast<double>(N - j + 1) / (static_cast<double>(N) * static_cast<double>(j) * j);
}

double wang_shao_stat(std::span<const double> f, int lags, std::optional<int> weight_n) {
  check_length(f.size(), lags);
  std::vector<double> scratch;
  return stat_impl(f, lags, weight_n.value_or(static_cast<int>(f.size())), scratch);
}

double MammenLaw::low() { return (1.0 - std::sqrt(5.0)) / 2.0; }
double MammenLaw::high() { return (1.0 + std::sqrt(5.0)) / 2.0; }
double MammenLaw::p_low() { return (std::sqrt(5.0) + 1.0) / (2.0 * std::sqrt(5.0)); }

std::vector<double> mammen_weights(std::size_t len, std::uint64_t seed) {
  Rng rng(seed);
  const double lo = MammenLaw::low();
  const double hi = MammenLaw::high();
  const double p = MammenLaw::p_low();
  std::vector<double> w(len);
  for (auto& v : w) v = uniform01(rng) < p ? lo : hi;
  return w;
}

MdsTestResult wild_bootstrap_pvalue(std::span<const double> f, int lags, int n_boot, std::uint64_t seed,
                                    std::optional<int> weight_n) {
  check_length(f.size(), lags);
  if (n_boot < 1) throw InputError("n_boot must be >= 1");
  const int N = weight_n.value_or(static_cast<int>(f.size()));
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
  std::vector<double> g(f.size());
  for (std::size_t t = 0; t < f.size(); ++t) g[t] = f[t] - mean;

  std::vector<double> scratch;
  const double observed = stat_impl(g, lags, N, scratch);

  int exceed = 0;
#pragma omp parallel reduction(+ : exceed)
  {
    std::vector<double> boot(g.size());
    std::vector<double> local_scratch;
#pragma omp for schedule(static)
    for (int b = 0; b < n_boot; ++b) {
      const auto w = mammen_weights(g.size(), stream_seed(seed, static_cast<std::uint64_t>(b)));
      for (std::size_t t = 0; t < g.size(); ++t) boot[t] = g[t] * w[t];
      if (stat_impl(boot, lags, N, local_scratch) >= observed) ++exceed;
    }
  }
  return MdsTestResult{observed, (1.0 + exceed) / (1.0 + n_boot), lags, n_boot, seed};
}

int apply_stopping_rule(std::span<const double> p_values, double alpha) {
  int r = 0;
  for (double p : p_values) {
    if (!(p <= alpha)) break;
    ++r;
  }
  return r;
}

SequentialSelection select_r_sequential(const Eigen::Ref<const Eigen::MatrixXd>& factors,
                                        const MdsTestOptions& options) {
  SequentialSelection out;
  out.alpha = options.alpha;
  std::vector<double> column(static_cast<std::size_t>(factors.rows()));
  for (Eigen::Index i = 0; i < factors.cols(); ++i) {
    Eigen::Map<Eigen::VectorXd>(column.data(), factors.rows()) = factors.col(i);
    const std::uint64_t seed = stream_seed(options.seed, static_cast<std::uint64_t>(i));
    out.per_factor.push_back(wild_bootstrap_pvalue(column, options.lags, options.n_boot, seed, options.weight_n));
    if (!(out.per_factor.back().p_value <= options.alpha)) break;
    ++out.r;
  }
  return out;
}

}  // namespace fmmde
