#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmmde {

enum class SimExample { linear, nonlinear };

std::string_view example_name(SimExample example);
SimExample parse_example(std::string_view name);

struct SimConfig {
  int n = 100;
  int T = 200;
  SimExample example = SimExample::linear;
  double hurst = 0.9;
  int reps = 200;
  std::uint64_t seed = 1;
  std::optional<double> error_scale;  // 1 (linear) or 0.25 (nonlinear) when unset
  int k0 = 6;
  int r = 3;
  int burn_in = 100;
  bool standardize = false;
  bool use_true_factors = false;  // both models regress on the true factors
  bool zero_factor_shocks = false;
  bool zero_noise = false;

  [[nodiscard]] double noise_scale() const;
  /// Throws InputError ("n must be even", ...).
  void validate() const;
};

struct SimPanel {
  Eigen::MatrixXd x;             // T x n
  Eigen::MatrixXd true_factors;  // T x 3: (w_t, w_{t-1}, w_{t-2})
  Eigen::MatrixXd loadings;      // n x 3
};

/// Fractional-Gaussian-noise correlation: unit diagonal and
/// 0.5[(d+1)^{2H} - 2 d^{2H} + (d-1)^{2H}] at distance d >= 1.
Eigen::MatrixXd fgn_covariance(int n, double hurst);

/// First n/2 rows iid U(-2, 2), the rest zero; fixed by (n, seed).
Eigen::MatrixXd sim_loadings(int n, std::uint64_t seed);

/// One step of the threshold recursion (without the shock when z = 0).
double nonlinear_step(double w_prev, double z);

/// Replication `rep` of the configured example.
SimPanel gen_example(const SimConfig& cfg, int rep = 0);
SimPanel gen_linear_example(SimConfig cfg, int rep = 0);
SimPanel gen_nonlinear_example(SimConfig cfg, int rep = 0);

struct AfeResult {
  double afe = 0.0;  // sum FE(FMMDE) / sum FE(SW)
  double mc_se = 0.0;
  int reps = 0;
  std::vector<double> fe_fmmde;  // per replication
  std::vector<double> fe_sw;
};

/// One-step forecast comparison over cfg.reps replications.
AfeResult run_afe_experiment(const SimConfig& cfg);

/// The same replications evaluated for every k0 in `grid`; SW errors are shared.
std::vector<AfeResult> run_afe_k0_sweep(const SimConfig& cfg, const std::vector<int>& grid);

struct AfeCell {
  SimExample example = SimExample::linear;
  int n = 0;
  int T = 0;
  int k0 = 0;
  AfeResult result;
};

/// Wide layout: one row per (example, n), AFE and its standard error per T.
void write_afe_table(std::ostream& out, const std::vector<AfeCell>& cells);

}  // namespace fmmde
