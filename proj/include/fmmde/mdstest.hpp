#pragma once

// Martingale difference test on a single factor series: the weighted
// divergence statistic T * sum_j w_j |MDDM_T(F_t | F_{t-j})| with wild
// bootstrap (Mammen two-point weights) critical values, and the sequential
// rule that counts leading factors rejecting the null.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fmmde {

struct MdsTestOptions {
  int lags = 6;        // truncation lag M
  int n_boot = 499;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::optional<int> weight_n;  // N in the lag weights; T when unset
};

struct MdsTestResult {
  double statistic = 0.0;
  double p_value = 1.0;  // (1 + #{boot >= observed}) / (1 + n_boot)
  int lags = 0;
  int n_boot = 0;
  std::uint64_t seed = 0;
};

struct SequentialSelection {
  int r = 0;
  std::vector<MdsTestResult> per_factor;
  double alpha = 0.05;
};

/// w_j = (N - j + 1) / (N j^2).
double wang_shao_weight(int j, int N);

double wang_shao_stat(std::span<const double> f, int lags, std::optional<int> weight_n = std::nullopt);

/// The two Mammen support points and their probabilities.
struct MammenLaw {
  static double low();        // (1 - sqrt 5) / 2
  static double high();       // (1 + sqrt 5) / 2
  static double p_low();      // (sqrt 5 + 1) / (2 sqrt 5)
};

std::vector<double> mammen_weights(std::size_t len, std::uint64_t seed);

/// Demeans f, then compares the observed statistic with statistics of the
/// bootstrap series (f_t - fbar) w*_t. Replication b draws its weights from
/// stream (seed, b).
MdsTestResult wild_bootstrap_pvalue(std::span<const double> f, int lags, int n_boot, std::uint64_t seed,
                                    std::optional<int> weight_n = std::nullopt);

/// Number of leading rejections (p <= alpha) before the first non-rejection.
int apply_stopping_rule(std::span<const double> p_values, double alpha);

/// Tests columns of `factors` in order; column i uses seed stream (seed, i).
SequentialSelection select_r_sequential(const Eigen::Ref<const Eigen::MatrixXd>& factors,
                                        const MdsTestOptions& options);

}  // namespace fmmde
