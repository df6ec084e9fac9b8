#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmmde/date.hpp"
#include "fmmde/forecast.hpp"

namespace fmmde {

/// Closed interval of forecast origins; open ends are unbounded.
struct EvalWindow {
  std::optional<YearMonth> begin;
  std::optional<YearMonth> end;

  [[nodiscard]] bool contains(YearMonth d) const {
    return (!begin || *begin <= d) && (!end || d <= *end);
  }
};

/// Mean squared error over records whose origin lies in the window.
double msfe(std::span<const ForecastRecord> records, const EvalWindow& window = {});

/// MSFE(m1) / MSFE(m2) over records of one target and horizon. Both models
/// must cover the same origins in the window. With ratio_of_roots the square
/// root of the ratio is returned.
double rmsfe_ratio(ModelKind m1, ModelKind m2, std::span<const ForecastRecord> records,
                   const EvalWindow& window = {}, bool ratio_of_roots = false);

inline const std::vector<double>& default_percentiles() {
  static const std::vector<double> p{10, 25, 50, 75, 90};
  return p;
}

/// Linear interpolation between order statistics at position (p/100)(N-1).
std::vector<double> percentile_table(std::span<const double> values,
                                     std::span<const double> percentiles = default_percentiles());

struct GroupedValue {
  int group = 0;  // 1..8
  double value = 0.0;
};

struct GroupRow {
  int group = 0;
  std::string name;
  int count = 0;
  std::vector<double> percentiles;
};

/// percentile_table per group, ascending group id, present groups only.
std::vector<GroupRow> group_table(std::span<const GroupedValue> values,
                                  std::span<const double> percentiles = default_percentiles());

struct DmResult {
  double statistic = 0.0;
  double p_value = 0.5;  // one-sided, H1: model 1 has the smaller loss
};

/// Diebold-Mariano on squared-error losses; Bartlett long-run variance with
/// h - 1 lags.
DmResult dm_test(std::span<const double> e1, std::span<const double> e2, int h);

/// "***" below 0.01, "**" below 0.05, "*" below 0.1.
std::string significance_stars(double p_value);

struct ModelPair {
  ModelKind m1;
  ModelKind m2;
  [[nodiscard]] std::string label() const;
};

/// FMMDE/AR, SW/AR, FMMDE/SW.
const std::vector<ModelPair>& default_pairs();

struct EvalOptions {
  EvalWindow window{YearMonth{1976, 1}, std::nullopt};
  bool ratio_of_roots = false;
  std::vector<double> percentiles = default_percentiles();
  std::vector<ModelPair> pairs = default_pairs();
};

struct MsfeCell {
  std::string target;
  int horizon = 0;
  ModelKind model = ModelKind::ar;
  int count = 0;
  double msfe = 0.0;
};

struct PairCell {
  std::string target;
  int group = 0;
  int horizon = 0;
  ModelPair pair{ModelKind::fmmde, ModelKind::ar};
  std::optional<double> ratio;  // empty when origin sets differ or MSFE(m2) = 0
  std::optional<DmResult> dm;   // empty below 10 common origins
  std::string note;
};

struct PercentileRow {
  ModelPair pair{ModelKind::fmmde, ModelKind::ar};
  int horizon = 0;
  int count = 0;
  std::vector<double> values;
};

struct GroupPercentileRow {
  ModelPair pair{ModelKind::fmmde, ModelKind::ar};
  int horizon = 0;
  GroupRow row;
};

struct EvalReport {
  EvalWindow window;
  bool ratio_of_roots = false;
  std::vector<double> percentiles;
  std::vector<std::string> targets;  // first-appearance order
  std::vector<int> horizons;
  std::vector<MsfeCell> msfe;
  std::vector<PairCell> pairs;
  std::vector<PercentileRow> percentile_rows;
  std::vector<GroupPercentileRow> group_rows;
  int ungrouped = 0;  // targets without a group in 1..8
};

/// Groups come from `groups`; targets absent from it are left out of the
/// group tables.
EvalReport evaluate(std::span<const ForecastRecord> records, const std::map<std::string, int>& groups,
                    const EvalOptions& options = {});

void write_per_series_csv(std::ostream& out, const EvalReport& report);
void write_per_series_text(std::ostream& out, const EvalReport& report);
void write_percentiles_csv(std::ostream& out, const EvalReport& report);
void write_percentiles_text(std::ostream& out, const EvalReport& report);
void write_groups_csv(std::ostream& out, const EvalReport& report);
void write_groups_text(std::ostream& out, const EvalReport& report);
void write_report_json(std::ostream& out, const EvalReport& report);

}  // namespace fmmde
