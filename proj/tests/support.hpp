#pragma once

// Synthetic FRED-MD style panels and scratch directories for tests.

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fmmde/csv.hpp"
#include "fmmde/fred_md.hpp"
#include "fmmde/panel.hpp"

namespace testing_support {

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("fmmde_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

// Levels whose tcode transform is a stationary factor-driven series.
inline Eigen::VectorXd integrate(const Eigen::VectorXd& s, int tcode) {
  const auto T = s.size();
  Eigen::VectorXd lv(T);
  switch (tcode) {
    case 1: return s;
    case 2: {
      double acc = 100.0;
      for (Eigen::Index t = 0; t < T; ++t) lv[t] = acc += s[t];
      return lv;
    }
    case 3: {
      double g = 0.0, acc = 100.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        g += 0.1 * s[t];
        lv[t] = acc += g;
      }
      return lv;
    }
    case 4: return (0.1 * s.array()).exp() * 50.0;
    case 5: {
      double acc = std::log(100.0);
      for (Eigen::Index t = 0; t < T; ++t) lv[t] = std::exp(acc += 0.01 * s[t]);
      return lv;
    }
    case 6: {
      double g = 0.0, acc = std::log(100.0);
      for (Eigen::Index t = 0; t < T; ++t) {
        g += 0.001 * s[t];
        lv[t] = std::exp(acc += g);
      }
      return lv;
    }
    default: {
      double g = 0.0, acc = 100.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        g += 0.001 * s[t];
        lv[t] = acc *= (1.0 + g);
      }
      return lv;
    }
  }
}

// n series driven by `k` AR(1) factors with mixed transformation codes.
inline fmmde::RawPanel synthetic_panel(int n, int T, unsigned seed, int k = 3,
                                       std::vector<std::string> names = {}, std::vector<int> tcodes = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Eigen::MatrixXd f(T, k);
  for (int j = 0; j < k; ++j) {
    double prev = 0.0;
    for (int t = 0; t < T; ++t) f(t, j) = prev = (0.7 - 0.15 * j) * prev + nd(rng);
  }
  fmmde::RawPanel raw;
  raw.values.resize(T, n);
  for (int t = 0; t < T; ++t) raw.dates.push_back(fmmde::YearMonth{1959, 1}.plus_months(t));
  static const int cycle[] = {5, 2, 6, 1, 4, 5, 2, 5, 3, 7};
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd s(T);
    Eigen::VectorXd lam(k);
    for (int j = 0; j < k; ++j) lam[j] = ud(rng);
    for (int t = 0; t < T; ++t) s[t] = f.row(t).dot(lam) + 0.5 * nd(rng);
    fmmde::SeriesMeta m;
    m.id = i + 1;
    m.mnemonic = i < static_cast<int>(names.size()) ? names[i] : "S" + std::to_string(i + 1);
    m.tcode = i < static_cast<int>(tcodes.size()) ? tcodes[i] : cycle[i % 10];
    m.group = 1 + i % 8;
    raw.values.col(i) = integrate(s, m.tcode);
    raw.meta.push_back(m);
  }
  return raw;
}

// The 123 built-in series with their own transformation codes.
inline fmmde::RawPanel synthetic_fred_md(int T, unsigned seed) {
  std::vector<std::string> names;
  std::vector<int> tcodes;
  for (const auto& s : fmmde::fred_md::builtin_series()) {
    names.emplace_back(s.mnemonic);
    tcodes.push_back(s.tcode);
  }
  auto raw = synthetic_panel(static_cast<int>(names.size()), T, seed, 3, names, tcodes);
  for (std::size_t i = 0; i < names.size(); ++i) raw.meta[i].group = fmmde::fred_md::builtin_series()[i].group;
  return raw;
}

inline std::string to_fred_md_csv(const fmmde::RawPanel& raw) {
  std::ostringstream os;
  os << "sasdate";
  for (const auto& m : raw.meta) os << ',' << m.mnemonic;
  os << "\nTransform:";
  for (const auto& m : raw.meta) os << ',' << m.tcode;
  os << '\n';
  for (int t = 0; t < raw.rows(); ++t) {
    os << raw.dates[t].month << "/1/" << raw.dates[t].year;
    for (int c = 0; c < raw.cols(); ++c) os << ',' << fmmde::csv::format_double(raw.values(t, c));
    os << '\n';
  }
  return os.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace testing_support
