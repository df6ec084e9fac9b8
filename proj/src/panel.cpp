#include "fmmde/panel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

#include "fmmde/csv.hpp"
#include "fmmde/error.hpp"
#include "fmmde/fred_md.hpp"

namespace fmmde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_tcode(int tcode) {
  if (tcode < 1 || tcode > 7) throw InputError("invalid tcode " + std::to_string(tcode));
}

bool all_empty(const std::vector<std::string>& row, std::size_t from) {
  for (std::size_t i = from; i < row.size(); ++i) {
    if (!row[i].empty()) return false;
  }
  return true;
}

double checked_log(double v) {
  if (!(v > 0.0)) throw InputError("non-positive value under log transform");
  return std::log(v);
}

// Value of the tcode-transformed series at index i (i >= rows_consumed).
double transformed_at(const Eigen::Ref<const Eigen::VectorXd>& x, int tcode, int i) {
  switch (tcode) {
    case 1: return x[i];
    case 2: return x[i] - x[i - 1];
    case 3: return x[i] - 2.0 * x[i - 1] + x[i - 2];
    case 4: return checked_log(x[i]);
    case 5: return checked_log(x[i]) - checked_log(x[i - 1]);
    case 6: return checked_log(x[i]) - 2.0 * checked_log(x[i - 1]) + checked_log(x[i - 2]);
    case 7: {
      if (x[i - 1] == 0.0 || x[i - 2] == 0.0) throw InputError("zero level under ratio transform");
      return (x[i] / x[i - 1] - 1.0) - (x[i - 1] / x[i - 2] - 1.0);
    }
    default: check_tcode(tcode);
  }
  return kNaN;
}

}  // namespace

int RawPanel::find(std::string_view mnemonic) const {
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (meta[i].mnemonic == mnemonic) return static_cast<int>(i);
  }
  return -1;
}

RawPanel RawPanel::head(int count) const {
  RawPanel out;
  out.dates.assign(dates.begin(), dates.begin() + count);
  out.values = values.topRows(count);
  out.meta = meta;
  return out;
}

RawPanel parse_fred_md_csv(std::istream& in) {
  auto rows = csv::read_all(in);
  std::size_t line = 0;
  auto next_nonblank = [&]() -> const std::vector<std::string>* {
    while (line < rows.size() && rows[line].empty()) ++line;
    return line < rows.size() ? &rows[line++] : nullptr;
  };

  const auto* header = next_nonblank();
  if (header == nullptr || header->size() < 2) throw InputError("missing header row");
  const std::size_t width = header->size();

  RawPanel panel;
  std::set<std::string> seen;
  for (std::size_t c = 1; c < width; ++c) {
    const std::string& name = (*header)[c];
    if (name.empty()) throw InputError("empty mnemonic in header column " + std::to_string(c + 1));
    if (!seen.insert(name).second) throw InputError("duplicate mnemonic '" + name + "'");
    SeriesMeta m;
    m.id = static_cast<int>(c);
    m.mnemonic = name;
    if (auto info = fred_md::find_series(name)) {
      m.description = std::string(info->description);
      m.group = info->group;
    }
    panel.meta.push_back(std::move(m));
  }

  const auto* tcodes = next_nonblank();
  if (tcodes == nullptr) throw InputError("missing tcode row");
  if (tcodes->size() != width) {
    throw InputError("ragged row at line " + std::to_string(line) + " (tcode row)");
  }
  for (std::size_t c = 1; c < width; ++c) {
    auto& m = panel.meta[c - 1];
    double code = 0.0;
    try {
      code = csv::parse_double((*tcodes)[c], false);
    } catch (const InputError&) {
      throw InputError("invalid tcode '" + (*tcodes)[c] + "' for column '" + m.mnemonic + "'");
    }
    if (code != std::floor(code) || code < 1 || code > 7) {
      throw InputError("invalid tcode '" + (*tcodes)[c] + "' for column '" + m.mnemonic + "'");
    }
    m.tcode = static_cast<int>(code);
  }

  std::vector<std::vector<double>> data;
  for (; line < rows.size(); ++line) {
    const auto& row = rows[line];
    if (row.empty() || all_empty(row, 0)) continue;
    if (row.size() != width) {
      throw InputError("ragged row at line " + std::to_string(line + 1) + ": expected " +
                       std::to_string(width) + " fields, got " + std::to_string(row.size()));
    }
    if (all_empty(row, 1)) continue;
    YearMonth date = parse_date(row[0]);
    std::vector<double> values(width - 1);
    for (std::size_t c = 1; c < width; ++c) {
      try {
        values[c - 1] = csv::parse_double(row[c], true);
      } catch (const InputError& e) {
        throw InputError(std::string(e.what()) + " at line " + std::to_string(line + 1) +
                         ", column '" + panel.meta[c - 1].mnemonic + "'");
      }
      if (std::isnan(values[c - 1])) {
        throw InputError("missing value at " + date.iso() + " in column '" +
                         panel.meta[c - 1].mnemonic + "' (imputation is not supported)");
      }
    }
    if (!panel.dates.empty() && date.ordinal() != panel.dates.back().ordinal() + 1) {
      throw InputError("dates not consecutive months: " + panel.dates.back().iso() + " then " +
                       date.iso());
    }
    panel.dates.push_back(date);
    data.push_back(std::move(values));
  }
  if (data.empty()) throw InputError("panel has no data rows");

  panel.values.resize(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(width - 1));
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c + 1 < width; ++c) {
      panel.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r][c];
    }
  }
  return panel;
}

RawPanel read_fred_md_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open panel file '" + path + "'");
  return parse_fred_md_csv(in);
}

std::map<std::string, int> parse_group_sidecar(std::istream& in) {
  auto rows = csv::read_all(in);
  std::map<std::string, int> groups;
  bool header = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.empty()) continue;
    if (header) {
      header = false;
      if (row.size() >= 2 && row[0] == "mnemonic") continue;
    }
    if (row.size() < 2) throw InputError("ragged row at line " + std::to_string(i + 1) + " of metadata");
    double g = csv::parse_double(row[1], false);
    if (g != std::floor(g) || g < 1 || g > 8) {
      throw InputError("invalid group '" + row[1] + "' for '" + row[0] + "'");
    }
    groups[row[0]] = static_cast<int>(g);
  }
  return groups;
}

std::map<std::string, int> read_group_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open metadata file '" + path + "'");
  return parse_group_sidecar(in);
}

void apply_groups(RawPanel& panel, const std::map<std::string, int>& groups) {
  for (auto& m : panel.meta) {
    if (auto it = groups.find(m.mnemonic); it != groups.end()) m.group = it->second;
  }
}

int rows_consumed(int tcode) {
  check_tcode(tcode);
  switch (tcode) {
    case 1:
    case 4: return 0;
    case 2:
    case 5: return 1;
    default: return 2;
  }
}

Eigen::VectorXd apply_tcode(const Eigen::Ref<const Eigen::VectorXd>& x, int tcode) {
  const int c = rows_consumed(tcode);
  const int n = static_cast<int>(x.size());
  if (n <= c) throw InputError("series too short for tcode " + std::to_string(tcode));
  Eigen::VectorXd out(n - c);
  for (int i = c; i < n; ++i) out[i - c] = transformed_at(x, tcode, i);
  return out;
}

StationaryPanel build_stationary_panel(const RawPanel& raw) {
  int lost = 0;
  for (const auto& m : raw.meta) lost = std::max(lost, rows_consumed(m.tcode));
  if (raw.rows() <= lost) throw InputError("panel too short for its transformations");

  StationaryPanel out;
  out.meta = raw.meta;
  out.lost_rows = lost;
  out.dates.assign(raw.dates.begin() + lost, raw.dates.end());
  out.values.resize(raw.rows() - lost, raw.cols());
  for (int j = 0; j < raw.cols(); ++j) {
    Eigen::VectorXd col;
    try {
      col = apply_tcode(raw.values.col(j), raw.meta[j].tcode);
    } catch (const InputError& e) {
      throw InputError(std::string(e.what()) + " in column '" + raw.meta[j].mnemonic + "'");
    }
    out.values.col(j) = col.tail(raw.rows() - lost);
  }
  if (!out.values.allFinite()) throw InputError("non-finite value after transformation");
  return out;
}

Standardized standardize(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const auto rows = x.rows();
  if (rows < 2) throw InputError("standardization window needs at least 2 rows");
  Standardized out;
  out.stats.means = x.colwise().mean().transpose();
  out.values = x.rowwise() - out.stats.means.transpose();
  out.stats.stds = (out.values.colwise().squaredNorm() / static_cast<double>(rows - 1)).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double scale = std::max(1.0, std::abs(out.stats.means[j]));
    if (!(out.stats.stds[j] > 1e-13 * scale)) {
      throw InputError("constant column " + std::to_string(j + 1) + " in standardization window");
    }
    out.values.col(j) /= out.stats.stds[j];
  }
  return out;
}

Standardized standardize(const StationaryPanel& panel, RowRange window) {
  if (window.begin < 0 || window.end > panel.rows() || window.size() < 2) {
    throw InputError("invalid standardization window");
  }
  try {
    return standardize(panel.values.middleRows(window.begin, window.size()));
  } catch (const InputError&) {
    // Name the offending series.
    for (int j = 0; j < panel.cols(); ++j) {
      auto col = panel.values.col(j).segment(window.begin, window.size());
      if (col.maxCoeff() == col.minCoeff()) {
        throw InputError("constant column '" + panel.meta[j].mnemonic + "' in standardization window");
      }
    }
    throw;
  }
}

double build_target(const Eigen::Ref<const Eigen::VectorXd>& levels, int tcode, int h, int t,
                    const TargetOptions& options) {
  check_tcode(tcode);
  const int n = static_cast<int>(levels.size());
  if (h < 1 || t < 0 || t + h >= n) throw InputError("target index out of range");
  const double hd = static_cast<double>(h);
  switch (tcode) {
    case 4:
    case 5: return (checked_log(levels[t + h]) - checked_log(levels[t])) / hd;
    case 6: {
      if (t < 1) throw InputError("target index out of range");
      const double growth = (checked_log(levels[t + h]) - checked_log(levels[t])) / hd;
      const double last = checked_log(levels[t]) - checked_log(levels[t - 1]);
      return growth - (options.nominal_second_term_scaled ? last / hd : last);
    }
    default:
      if (t + h < rows_consumed(tcode)) throw InputError("target index out of range");
      return transformed_at(levels, tcode, t + h);
  }
}

Eigen::VectorXd one_step_series(const Eigen::Ref<const Eigen::VectorXd>& levels, int tcode) {
  const int n = static_cast<int>(levels.size());
  Eigen::VectorXd out = Eigen::VectorXd::Constant(n, kNaN);
  const int first = (tcode == 4) ? 1 : rows_consumed(tcode);
  for (int s = std::max(first, 1); s < n; ++s) out[s] = build_target(levels, tcode, 1, s - 1);
  if (first == 0 && n > 0) out[0] = transformed_at(levels, tcode, 0);
  return out;
}

void write_stationary_csv(std::ostream& out, const StationaryPanel& panel) {
  out << "date";
  for (const auto& m : panel.meta) out << ',' << csv::escape(m.mnemonic);
  out << '\n';
  for (int r = 0; r < panel.rows(); ++r) {
    out << panel.dates[r].iso();
    for (int c = 0; c < panel.cols(); ++c) out << ',' << csv::format_double(panel.values(r, c));
    out << '\n';
  }
}

}  // namespace fmmde
