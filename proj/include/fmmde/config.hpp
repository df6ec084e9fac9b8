#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmmde/date.hpp"

namespace fmmde {

/// Contents of a JSON run configuration. Every field may be overridden on
/// the command line.
struct RunConfig {
  std::string panel;   // FRED-MD style CSV of levels
  std::string groups;  // optional mnemonic,group sidecar
  std::string output_dir = ".";
  std::vector<std::string> targets;  // empty: every series
  std::vector<int> horizons{1, 3, 6, 12, 24};
  std::vector<std::string> models{"AR", "SW", "FMMDE"};
  int initial_window = 132;
  std::optional<YearMonth> first_origin;
  std::optional<YearMonth> last_origin;
  std::optional<YearMonth> eval_start = YearMonth{1976, 1};
  std::optional<YearMonth> eval_end;
  int k0 = 6;
  std::vector<int> k0_grid;
  int cv_decision_offset = 72;
  int p_max = 6;
  std::string sw_r = "icp2";
  std::string fmmde_r = "sequential";
  int rmax = 15;
  int ratio_bound = 15;
  int mds_lags = 6;
  int n_boot = 499;
  double alpha = 0.05;
  std::uint64_t seed = 20210301;
  int threads = 0;  // 0: runtime default
  bool standardize = true;
  bool nominal_second_term_scaled = true;
  bool ratio_of_roots = false;
  int checkpoint_every = 24;

  // simulate
  std::string sim_example = "linear";
  std::vector<int> sim_n{100};
  std::vector<int> sim_T{200};
  int sim_reps = 200;
  double sim_hurst = 0.9;
  int sim_k0 = 6;
  bool sim_standardize = false;

  /// Non-fatal remarks gathered while loading (e.g. unusual horizons).
  std::vector<std::string> warnings;
};

/// Throws InputError on unreadable files, unknown keys and bad values.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Range checks shared by the file loader and command-line overrides.
void validate(RunConfig& cfg);

}  // namespace fmmde
