#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fmmde/date.hpp"

namespace fmmde {

struct SeriesMeta {
  int id = 0;  // 1-based column position
  std::string mnemonic;
  std::string description;
  int group = 0;  // 1..8, 0 when ungrouped
  int tcode = 1;  // 1..7
};

/// Untransformed levels, one column per series, one row per month.
struct RawPanel {
  std::vector<YearMonth> dates;
  Eigen::MatrixXd values;  // T x n
  std::vector<SeriesMeta> meta;

  [[nodiscard]] int rows() const { return static_cast<int>(values.rows()); }
  [[nodiscard]] int cols() const { return static_cast<int>(values.cols()); }
  /// Column index of a mnemonic, or -1.
  [[nodiscard]] int find(std::string_view mnemonic) const;
  /// First `count` rows.
  [[nodiscard]] RawPanel head(int count) const;
};

/// Transformed panel, all columns aligned on a common date range.
struct StationaryPanel {
  std::vector<YearMonth> dates;
  Eigen::MatrixXd values;  // T' x n
  std::vector<SeriesMeta> meta;
  int lost_rows = 0;  // leading raw rows consumed by differencing

  [[nodiscard]] int rows() const { return static_cast<int>(values.rows()); }
  [[nodiscard]] int cols() const { return static_cast<int>(values.cols()); }
};

struct WindowStats {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
};

struct Standardized {
  Eigen::MatrixXd values;
  WindowStats stats;
};

/// Half-open row range [begin, end).
struct RowRange {
  int begin = 0;
  int end = 0;
  [[nodiscard]] int size() const { return end - begin; }
};

struct TargetOptions {
  /// Divide the lagged monthly-growth term of the nominal (tcode 6) target by h.
  bool nominal_second_term_scaled = true;
};

/// Parses a FRED-MD style CSV: header (date label, mnemonics), a tcode row,
/// then dated rows. Entirely empty rows are dropped; any other missing value
/// is an error.
RawPanel parse_fred_md_csv(std::istream& in);
RawPanel read_fred_md_csv(const std::string& path);

/// Sidecar `mnemonic,group` table.
std::map<std::string, int> parse_group_sidecar(std::istream& in);
std::map<std::string, int> read_group_sidecar(const std::string& path);
void apply_groups(RawPanel& panel, const std::map<std::string, int>& groups);

/// Leading observations consumed by a transformation code.
int rows_consumed(int tcode);

Eigen::VectorXd apply_tcode(const Eigen::Ref<const Eigen::VectorXd>& x, int tcode);

StationaryPanel build_stationary_panel(const RawPanel& raw);

Standardized standardize(const Eigen::Ref<const Eigen::MatrixXd>& x);
Standardized standardize(const StationaryPanel& panel, RowRange window);

/// Forecast target y_{t+h} built from levels (0-based origin t).
///   tcode 4, 5: ln(X_{t+h}/X_t)/h
///   tcode 6:    ln(X_{t+h}/X_t)/h - ln(X_t/X_{t-1})/h   (second divisor 1 if unscaled)
///   otherwise:  the transformed series evaluated at t+h
double build_target(const Eigen::Ref<const Eigen::VectorXd>& levels, int tcode, int h, int t,
                    const TargetOptions& options = {});

/// Series whose value at s is the h = 1 target from origin s-1; NaN where
/// undefined. Used as the autoregressive regressor block.
Eigen::VectorXd one_step_series(const Eigen::Ref<const Eigen::VectorXd>& levels, int tcode);

void write_stationary_csv(std::ostream& out, const StationaryPanel& panel);

}  // namespace fmmde
