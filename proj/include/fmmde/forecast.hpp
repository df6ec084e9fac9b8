#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmmde/date.hpp"
#include "fmmde/mdstest.hpp"
#include "fmmde/panel.hpp"

namespace fmmde {

enum class ModelKind { ar, sw, fmmde };

std::string_view model_name(ModelKind model);
/// Case-insensitive "ar", "sw", "fmmde" (or "mddm").
ModelKind parse_model(std::string_view name);

/// How the number of factors is chosen at each origin.
struct RSelection {
  enum class Method { icp2, eigen_ratio, sequential_mds, fixed };
  Method method = Method::icp2;
  int fixed_r = 0;

  [[nodiscard]] std::string label() const;
  /// "icp2", "eigen_ratio", "sequential", "fixed:<r>".
  static RSelection parse(std::string_view text);
};

struct ForecastSpec {
  std::vector<int> targets;  // 0-based columns of the panel
  std::vector<int> horizons{1, 3, 6, 12, 24};
  std::vector<ModelKind> models{ModelKind::ar, ModelKind::sw, ModelKind::fmmde};
  int p_max = 6;
  RSelection sw_r{RSelection::Method::icp2, 0};
  RSelection fmmde_r{RSelection::Method::sequential_mds, 0};
  int rmax = 15;         // IC_p2 search bound
  int ratio_bound = 15;  // eigenvalue-ratio search bound R
  int k0 = 6;
  std::vector<int> k0_grid;     // non-empty: choose k0 by cross validation
  int cv_decision_offset = 72;  // months from the first origin to the first CV decision
  int initial_window = 132;     // raw months up to and including the first origin
  std::optional<int> first_origin;  // raw row index; overrides initial_window
  std::optional<int> last_origin;
  bool standardize = true;
  TargetOptions target_options;
  MdsTestOptions mds;  // seed field ignored; streams derive from `seed`
  std::uint64_t seed = 20210301;

  [[nodiscard]] bool cross_validated() const { return !k0_grid.empty(); }
  /// Canonical text used to fingerprint checkpoints.
  [[nodiscard]] std::string describe() const;
};

struct ForecastRecord {
  std::string target;
  int target_index = 0;
  YearMonth origin;
  int origin_index = 0;  // raw row of the forecast origin
  int horizon = 1;
  ModelKind model = ModelKind::ar;
  double y_hat = 0.0;
  double y_true = 0.0;
  int r_used = 0;
  int p_used = 0;
  std::optional<int> k0_used;
};

struct ForecastFailure {
  std::string target;  // empty when the failure is not target-specific
  YearMonth origin;
  int horizon = 0;  // 0 when not horizon-specific
  ModelKind model = ModelKind::ar;
  std::string message;
};

/// Regression inputs at one origin t; every vector is indexed by raw row
/// s = 0..t and NaN where undefined.
struct DirectData {
  Eigen::VectorXd lags;        // y_s, the one-step target series
  Eigen::VectorXd regressand;  // y_{s+h} stored at s
  Eigen::MatrixXd factors;     // (t+1) x r factor block, r may be 0

  [[nodiscard]] int origin() const { return static_cast<int>(lags.size()) - 1; }
};

struct DirectForecast {
  double y_hat = 0.0;
  Eigen::VectorXd coefficients;  // intercept, factors, lags
  int n_obs = 0;
  int p = 0;
};

/// Least squares on a design that already carries its intercept column.
/// Throws NumericError("collinear regressors") on rank deficiency.
Eigen::VectorXd ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Prepends a column of ones.
Eigen::MatrixXd with_intercept(const Eigen::Ref<const Eigen::MatrixXd>& X);

/// BIC(p) = m ln(RSS/m) + k ln m over p = 1..p_max on the common sample
/// admitted by p_max; the factor block (if any) is held fixed.
int bic_lag_select(const DirectData& data, int h, int p_max);

/// y_hat_{t+h} = a + b'F_t + sum_{j=1}^{p} g_j y_{t-j+1}, fitted on pairs
/// (y_{s+h}, regressors at s) with s + h <= t.
DirectForecast di_forecast(const DirectData& data, int h, int p);

/// Autoregressive benchmark: no factor block, BIC-selected p.
DirectForecast ar_forecast(const DirectData& data, int h, int p_max);

/// Per-k0 squared forecast errors accumulated over the validation set.
class ValidationLedger {
 public:
  explicit ValidationLedger(std::vector<int> grid);
  static ValidationLedger from_totals(std::vector<int> grid, std::vector<double> sse, std::vector<long> counts);

  /// One squared error per grid member, in grid order.
  void append(std::span<const double> squared_errors);

  [[nodiscard]] const std::vector<int>& grid() const { return grid_; }
  [[nodiscard]] const std::vector<double>& sse() const { return sse_; }
  [[nodiscard]] const std::vector<long>& counts() const { return counts_; }
  [[nodiscard]] double mse(std::size_t i) const { return sse_[i] / static_cast<double>(counts_[i]); }

 private:
  std::vector<int> grid_;
  std::vector<double> sse_;
  std::vector<long> counts_;
};

/// argmin of the validation MSE; smallest k0 on ties.
int cv_select_k0(const ValidationLedger& ledger);

/// FMMDE forecast for one grid value at one origin (cross-validation history).
struct CvEntry {
  int target_index = 0;
  int horizon = 0;
  int k0 = 0;
  double y_hat = 0.0;
  double y_true = 0.0;
  int r_used = 0;
  int p_used = 0;
};

struct OriginResult {
  int origin_index = 0;
  std::vector<ForecastRecord> records;
  std::vector<ForecastFailure> failures;
  std::vector<CvEntry> cv;
};

struct CvTraceRow {
  std::string target;
  int horizon = 0;
  YearMonth decision_origin;
  long n_validation = 0;
  int k0 = 0;
  double cv_mse = 0.0;
};

struct RunControl {
  std::string checkpoint_path;  // empty: no checkpointing
  int checkpoint_every = 0;     // origins per checkpoint
  bool resume = false;
  std::optional<int> stop_after;  // stop once this many origins are done
  std::function<void(int done, int total)> progress;
};

struct RunResult {
  std::vector<ForecastRecord> records;  // ordered by (target, origin, horizon, model)
  std::vector<ForecastFailure> failures;
  std::vector<CvTraceRow> cv_trace;
  bool complete = true;
  int origins_done = 0;
  int origins_total = 0;
};

/// Raw-row indices of the first and last origins.
std::pair<int, int> origin_range(const RawPanel& raw, const ForecastSpec& spec);

/// All forecasts issued at one origin, using raw rows 0..origin only (plus
/// later rows for the realized values).
OriginResult run_origin(const RawPanel& raw, const ForecastSpec& spec, int origin);

/// Expanding-window pseudo-real-time run. With a k0 grid, FMMDE forecasts
/// use the k0 chosen on the expanding validation set.
RunResult recursive_run(const RawPanel& raw, const ForecastSpec& spec, const RunControl& control = {});

/// Cross-validated run; equivalent to recursive_run with a non-empty grid.
RunResult cv_recursive_run(const RawPanel& raw, const ForecastSpec& spec, const RunControl& control = {});

void write_records_csv(std::ostream& out, std::span<const ForecastRecord> records);
std::vector<ForecastRecord> read_records_csv(std::istream& in);
void write_failures_csv(std::ostream& out, std::span<const ForecastFailure> failures);
void write_cv_trace_csv(std::ostream& out, std::span<const CvTraceRow> rows);

}  // namespace fmmde
