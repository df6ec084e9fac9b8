#include "fmmde/forecast.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "fmmde/checkpoint.hpp"
#include "fmmde/csv.hpp"
#include "fmmde/error.hpp"
#include "fmmde/factors.hpp"
#include "fmmde/mddm.hpp"
#include "fmmde/random.hpp"

namespace fmmde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool row_usable(const DirectData& d, int s, int p, bool need_regressand) {
  if (s - p + 1 < 0) return false;
  if (need_regressand && !std::isfinite(d.regressand[s])) return false;
  for (int j = 0; j < p; ++j) {
    if (!std::isfinite(d.lags[s - j])) return false;
  }
  for (Eigen::Index c = 0; c < d.factors.cols(); ++c) {
    if (!std::isfinite(d.factors(s, c))) return false;
  }
  return true;
}

void check_data(const DirectData& d, int h) {
  if (h < 1) throw InputError("horizon must be >= 1");
  if (d.regressand.size() != d.lags.size() || (d.factors.cols() > 0 && d.factors.rows() != d.lags.size())) {
    throw InputError("direct regression inputs have mismatched lengths");
  }
}

std::vector<int> usable_rows(const DirectData& d, int h, int p) {
  std::vector<int> rows;
  for (int s = 0; s + h <= d.origin(); ++s) {
    if (row_usable(d, s, p, true)) rows.push_back(s);
  }
  return rows;
}

Eigen::RowVectorXd regressors_at(const DirectData& d, int s, int p) {
  const auto r = d.factors.cols();
  Eigen::RowVectorXd x(1 + r + p);
  x[0] = 1.0;
  for (Eigen::Index c = 0; c < r; ++c) x[1 + c] = d.factors(s, c);
  for (int j = 0; j < p; ++j) x[1 + r + j] = d.lags[s - j];
  return x;
}

struct Design {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

Design design(const DirectData& d, const std::vector<int>& rows, int p) {
  Design out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), 1 + d.factors.cols() + p);
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = regressors_at(d, rows[i], p);
    out.y[static_cast<Eigen::Index>(i)] = d.regressand[rows[i]];
  }
  return out;
}

// A regression whose regressand and lags never move has an exact constant fit.
std::optional<double> constant_level(const DirectData& d, const std::vector<int>& rows, int p) {
  if (rows.empty() || d.factors.cols() > 0) return std::nullopt;
  const double c = d.regressand[rows.front()];
  for (int s : rows) {
    if (d.regressand[s] != c) return std::nullopt;
    for (int j = 0; j < p; ++j) {
      if (d.lags[s - j] != c) return std::nullopt;
    }
  }
  return c;
}

}  // namespace

std::string_view model_name(ModelKind model) {
  switch (model) {
    case ModelKind::ar: return "AR";
    case ModelKind::sw: return "SW";
    case ModelKind::fmmde: return "FMMDE";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  const std::string s = lower(name);
  if (s == "ar") return ModelKind::ar;
  if (s == "sw" || s == "pca") return ModelKind::sw;
  if (s == "fmmde" || s == "mddm") return ModelKind::fmmde;
  throw InputError("unknown model '" + std::string(name) + "'");
}

std::string RSelection::label() const {
  switch (method) {
    case Method::icp2: return "icp2";
    case Method::eigen_ratio: return "eigen_ratio";
    case Method::sequential_mds: return "sequential";
    case Method::fixed: return "fixed:" + std::to_string(fixed_r);
  }
  return "?";
}

RSelection RSelection::parse(std::string_view text) {
  const std::string s = lower(text);
  if (s == "icp2" || s == "ic_p2") return {Method::icp2, 0};
  if (s == "eigen_ratio" || s == "ratio") return {Method::eigen_ratio, 0};
  if (s == "sequential" || s == "mds") return {Method::sequential_mds, 0};
  if (s.rfind("fixed:", 0) == 0) {
    const std::string num = s.substr(6);
    std::size_t used = 0;
    int r = -1;
    try {
      r = std::stoi(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || num.empty() || r < 0) throw InputError("invalid fixed factor count '" + num + "'");
    return {Method::fixed, r};
  }
  throw InputError("unknown factor-count rule '" + std::string(text) + "'");
}

std::string ForecastSpec::describe() const {
  std::ostringstream os;
  auto list = [&](const char* name, const auto& v) {
    os << name << '=';
    for (const auto& x : v) os << x << ',';
    os << ';';
  };
  list("targets", targets);
  list("horizons", horizons);
  os << "models=";
  for (auto m : models) os << model_name(m) << ',';
  os << ";p_max=" << p_max << ";sw_r=" << sw_r.label() << ";fmmde_r=" << fmmde_r.label() << ";rmax=" << rmax
     << ";ratio_bound=" << ratio_bound << ";k0=" << k0 << ';';
  list("k0_grid", k0_grid);
  os << "cv_offset=" << cv_decision_offset << ";initial_window=" << initial_window
     << ";first=" << first_origin.value_or(-1) << ";last=" << last_origin.value_or(-1)
     << ";standardize=" << standardize << ";nominal_scaled=" << target_options.nominal_second_term_scaled
     << ";mds=" << mds.lags << ',' << mds.n_boot << ',' << mds.alpha << ',' << mds.weight_n.value_or(-1)
     << ";seed=" << seed;
  return os.str();
}

Eigen::MatrixXd with_intercept(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  Eigen::MatrixXd out(X.rows(), X.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(X.cols()) = X;
  return out;
}

Eigen::VectorXd ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.rows() != y.size()) throw InputError("design and response lengths differ");
  if (X.rows() <= X.cols()) throw NumericError("insufficient observations for regression");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X.rows(), X.cols());
  qr.setThreshold(1e-10);
  qr.compute(X);
  if (qr.rank() < X.cols()) throw NumericError("collinear regressors");
  return qr.solve(y);
}

int bic_lag_select(const DirectData& data, int h, int p_max) {
  check_data(data, h);
  if (p_max < 1) throw InputError("p_max must be >= 1");
  const auto rows = usable_rows(data, h, p_max);
  const int k_base = 1 + static_cast<int>(data.factors.cols());
  const auto m = static_cast<double>(rows.size());
  if (static_cast<int>(rows.size()) <= k_base + p_max) throw NumericError("insufficient observations for lag selection");
  if (constant_level(data, rows, p_max)) return 1;

  int best_p = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    const Design dz = design(data, rows, p);
    Eigen::VectorXd beta;
    try {
      beta = ols(dz.y, dz.X);
    } catch (const NumericError&) {
      if (p == 1) throw;
      continue;
    }
    const double rss = (dz.y - dz.X * beta).squaredNorm();
    const double bic = m * std::log(rss / m) + static_cast<double>(k_base + p) * std::log(m);
    if (bic < best || (p == 1 && std::isinf(bic))) {
      best = bic;
      best_p = p;
    }
  }
  return best_p;
}

DirectForecast di_forecast(const DirectData& data, int h, int p) {
  check_data(data, h);
  if (p < 1) throw InputError("p must be >= 1");
  const int t = data.origin();
  if (!row_usable(data, t, p, false)) throw NumericError("regressors unavailable at the forecast origin");
  const auto rows = usable_rows(data, h, p);
  DirectForecast out;
  out.p = p;
  out.n_obs = static_cast<int>(rows.size());
  if (auto c = constant_level(data, rows, p)) {
    out.coefficients = Eigen::VectorXd::Zero(1 + p);
    out.coefficients[0] = *c;
    out.y_hat = *c;
    return out;
  }
  const Design dz = design(data, rows, p);
  out.coefficients = ols(dz.y, dz.X);
  out.y_hat = regressors_at(data, t, p).dot(out.coefficients);
  return out;
}

DirectForecast ar_forecast(const DirectData& data, int h, int p_max) {
  DirectData ar{data.lags, data.regressand, Eigen::MatrixXd(data.lags.size(), 0)};
  return di_forecast(ar, h, bic_lag_select(ar, h, p_max));
}

ValidationLedger::ValidationLedger(std::vector<int> grid)
    : grid_(std::move(grid)), sse_(grid_.size(), 0.0), counts_(grid_.size(), 0) {
  if (grid_.empty()) throw InputError("empty k0 grid");
}

ValidationLedger ValidationLedger::from_totals(std::vector<int> grid, std::vector<double> sse, std::vector<long> counts) {
  if (sse.size() != grid.size() || counts.size() != grid.size()) throw InputError("ragged ledger");
  ValidationLedger out(std::move(grid));
  out.sse_ = std::move(sse);
  out.counts_ = std::move(counts);
  return out;
}

void ValidationLedger::append(std::span<const double> squared_errors) {
  if (squared_errors.size() != grid_.size()) throw InputError("ragged ledger");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    sse_[i] += squared_errors[i];
    ++counts_[i];
  }
}

int cv_select_k0(const ValidationLedger& ledger) {
  const auto& grid = ledger.grid();
  if (grid.empty()) throw InputError("empty ledger");
  const auto& counts = ledger.counts();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (counts[i] != counts[0]) throw InputError("ragged ledger");
  }
  if (counts[0] == 0) throw InputError("empty ledger");
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = ledger.mse(i);
    const double b = ledger.mse(best);
    if (a < b || (a == b && grid[i] < grid[best])) best = i;
  }
  return grid[best];
}

std::pair<int, int> origin_range(const RawPanel& raw, const ForecastSpec& spec) {
  if (spec.horizons.empty()) throw InputError("no forecast horizons");
  const int h_min = *std::min_element(spec.horizons.begin(), spec.horizons.end());
  if (h_min < 1) throw InputError("horizons must be >= 1");
  const int first = spec.first_origin.value_or(spec.initial_window - 1);
  const int last = spec.last_origin.value_or(raw.rows() - 1 - h_min);
  if (first < 0 || first >= raw.rows()) throw InputError("first origin outside the panel");
  if (last < first) throw InputError("no forecast origins: panel too short for the initial window");
  if (last > raw.rows() - 1 - h_min) throw InputError("last origin leaves no realized values");
  return {first, last};
}

namespace {

struct FactorBlock {
  Eigen::MatrixXd values;  // (origin+1) x r, NaN where unavailable
  int r = 0;
  std::optional<int> k0;
};

Eigen::MatrixXd align_rows(const Eigen::MatrixXd& f, int total_rows) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(total_rows, f.cols(), kNaN);
  out.bottomRows(f.rows()) = f;
  return out;
}

int sw_count(const ForecastSpec& spec, const PcaDecomposition& pca, int T, int n) {
  switch (spec.sw_r.method) {
    case RSelection::Method::fixed: return spec.sw_r.fixed_r;
    case RSelection::Method::eigen_ratio:
      return eigenvalue_ratio_r(pca.eigenvalues, std::min(spec.ratio_bound, n - 1));
    case RSelection::Method::icp2: return bai_ng_icp2(pca, T, std::min({spec.rmax, n - 1, T - 1}));
    case RSelection::Method::sequential_mds: break;
  }
  throw InputError("sequential testing is not available for SW factors");
}

struct Task {
  int target;
  int horizon;
};

}  // namespace

OriginResult run_origin(const RawPanel& raw, const ForecastSpec& spec, int origin) {
  OriginResult res;
  res.origin_index = origin;
  const YearMonth odate = raw.dates[origin];
  const int total = origin + 1;
  const int n = raw.cols();

  const bool want_sw = std::find(spec.models.begin(), spec.models.end(), ModelKind::sw) != spec.models.end();
  const bool want_fm = std::find(spec.models.begin(), spec.models.end(), ModelKind::fmmde) != spec.models.end();

  std::optional<FactorBlock> sw_block;
  std::vector<FactorBlock> fm_blocks;  // one per k0 (grid or the single k0)
  std::string sw_error;
  std::string fm_error;

  auto fail_all = [&](ModelKind model, const std::string& msg) {
    res.failures.push_back({"", odate, 0, model, msg});
  };

  if (want_sw || want_fm) {
    try {
      const RawPanel window = raw.head(total);
      const StationaryPanel sp = build_stationary_panel(window);
      Eigen::MatrixXd x = spec.standardize ? standardize(sp, RowRange{0, sp.rows()}).values : sp.values;
      const int T = static_cast<int>(x.rows());
      if (want_sw) {
        try {
          const PcaDecomposition pca = sw_pca(x);
          const int r = sw_count(spec, pca, T, n);
          FactorBlock b;
          b.r = r;
          b.values = align_rows(extract_sw(x, pca, r).values, total);
          sw_block = std::move(b);
        } catch (const std::exception& e) {
          sw_error = e.what();
        }
      }
      if (want_fm) {
        try {
          std::vector<int> grid = spec.cross_validated() ? spec.k0_grid : std::vector<int>{spec.k0};
          const int kmax = *std::max_element(grid.begin(), grid.end());
          const auto cums = cumulative_sums(mddm_by_lag(x, kmax));
          const std::uint64_t origin_seed = stream_seed(spec.seed, static_cast<std::uint64_t>(origin));
          for (int k0 : grid) {
            if (k0 < 1) throw InputError("k0 must be >= 1");
            const EigenSystem es = eigen_sym(cums[k0 - 1]);
            const Eigen::VectorXd eig = clamp_psd(es.eigenvalues);
            const Eigen::MatrixXd proj = x * es.eigenvectors;
            int r = 0;
            switch (spec.fmmde_r.method) {
              case RSelection::Method::fixed: r = spec.fmmde_r.fixed_r; break;
              case RSelection::Method::eigen_ratio:
                r = eigenvalue_ratio_r(eig, std::min(spec.ratio_bound, n - 1));
                break;
              case RSelection::Method::sequential_mds: {
                MdsTestOptions opt = spec.mds;
                opt.seed = stream_seed(origin_seed, static_cast<std::uint64_t>(k0));
                r = select_r_sequential(proj, opt).r;
                break;
              }
              case RSelection::Method::icp2: r = bai_ng_icp2(sw_pca(x), T, std::min({spec.rmax, n - 1, T - 1})); break;
            }
            if (r > n) throw InputError("factor count exceeds the panel width");
            FactorBlock b;
            b.r = r;
            b.k0 = k0;
            b.values = align_rows(proj.leftCols(r), total);
            fm_blocks.push_back(std::move(b));
          }
        } catch (const std::exception& e) {
          fm_error = e.what();
          fm_blocks.clear();
        }
      }
    } catch (const std::exception& e) {
      sw_error = fm_error = e.what();
    }
    if (want_sw && !sw_block) fail_all(ModelKind::sw, "factor extraction failed: " + sw_error);
    if (want_fm && fm_blocks.empty()) fail_all(ModelKind::fmmde, "factor extraction failed: " + fm_error);
  }

  for (int ti : spec.targets) {
    if (ti < 0 || ti >= n) throw InputError("target index out of range");
    const auto& meta = raw.meta[ti];
    const Eigen::VectorXd full = raw.values.col(ti);
    const Eigen::VectorXd levels = full.head(total);
    Eigen::VectorXd lags;
    try {
      lags = one_step_series(levels, meta.tcode);
    } catch (const std::exception& e) {
      for (int h : spec.horizons) {
        for (auto m : spec.models) res.failures.push_back({meta.mnemonic, odate, h, m, e.what()});
      }
      continue;
    }
    for (int h : spec.horizons) {
      if (origin + h > raw.rows() - 1) continue;
      double y_true = kNaN;
      try {
        y_true = build_target(full, meta.tcode, h, origin, spec.target_options);
      } catch (const std::exception& e) {
        for (auto m : spec.models) res.failures.push_back({meta.mnemonic, odate, h, m, e.what()});
        continue;
      }
      DirectData d;
      d.lags = lags;
      d.regressand = Eigen::VectorXd::Constant(total, kNaN);
      for (int s = 0; s + h <= origin; ++s) {
        try {
          d.regressand[s] = build_target(levels, meta.tcode, h, s, spec.target_options);
        } catch (const InputError&) {
        }
      }
      d.factors.resize(total, 0);

      auto make_record = [&](ModelKind m, const DirectForecast& f, int r, std::optional<int> k0) {
        ForecastRecord rec;
        rec.target = meta.mnemonic;
        rec.target_index = ti;
        rec.origin = odate;
        rec.origin_index = origin;
        rec.horizon = h;
        rec.model = m;
        rec.y_hat = f.y_hat;
        rec.y_true = y_true;
        rec.r_used = r;
        rec.p_used = f.p;
        rec.k0_used = k0;
        return rec;
      };
      auto with_block = [&](const FactorBlock& b) {
        d.factors = b.values;
        const int p = bic_lag_select(d, h, spec.p_max);
        return di_forecast(d, h, p);
      };

      for (auto m : spec.models) {
        try {
          if (m == ModelKind::ar) {
            d.factors.resize(total, 0);
            res.records.push_back(make_record(m, ar_forecast(d, h, spec.p_max), 0, std::nullopt));
          } else if (m == ModelKind::sw) {
            if (!sw_block) continue;
            res.records.push_back(make_record(m, with_block(*sw_block), sw_block->r, std::nullopt));
          } else {
            for (const auto& b : fm_blocks) {
              try {
                const DirectForecast f = with_block(b);
                if (spec.cross_validated()) {
                  res.cv.push_back({ti, h, *b.k0, f.y_hat, y_true, b.r, f.p});
                } else {
                  res.records.push_back(make_record(m, f, b.r, b.k0));
                }
              } catch (const std::exception& e) {
                std::string msg = e.what();
                if (spec.cross_validated()) msg += " (k0=" + std::to_string(*b.k0) + ")";
                res.failures.push_back({meta.mnemonic, odate, h, m, msg});
              }
            }
          }
        } catch (const std::exception& e) {
          res.failures.push_back({meta.mnemonic, odate, h, m, e.what()});
        }
      }
    }
  }
  return res;
}

namespace {

void sort_records(std::vector<ForecastRecord>& records) {
  std::sort(records.begin(), records.end(), [](const ForecastRecord& a, const ForecastRecord& b) {
    return std::tie(a.target_index, a.origin_index, a.horizon, a.model) <
           std::tie(b.target_index, b.origin_index, b.horizon, b.model);
  });
}

void cv_sweep(const RawPanel& raw, const ForecastSpec& spec, int first, int last,
              const std::vector<OriginResult>& results, RunResult& out) {
  const auto& grid = spec.k0_grid;
  // (target, horizon, origin) -> per-grid entries
  std::map<std::tuple<int, int, int>, std::vector<const CvEntry*>> hist;
  for (const auto& o : results) {
    for (const auto& e : o.cv) {
      auto& slot = hist[{e.target_index, e.horizon, o.origin_index}];
      if (slot.empty()) slot.assign(grid.size(), nullptr);
      const auto it = std::find(grid.begin(), grid.end(), e.k0);
      if (it != grid.end()) slot[static_cast<std::size_t>(it - grid.begin())] = &e;
    }
  }
  auto lookup = [&](int ti, int h, int o) -> const std::vector<const CvEntry*>* {
    const auto it = hist.find({ti, h, o});
    return it == hist.end() ? nullptr : &it->second;
  };

  for (int ti : spec.targets) {
    for (int h : spec.horizons) {
      ValidationLedger ledger(grid);
      int next = first;
      for (int t = first + spec.cv_decision_offset; t <= last; ++t) {
        if (t + h > raw.rows() - 1) break;
        for (; next + h <= t; ++next) {
          const auto* slot = lookup(ti, h, next);
          if (slot == nullptr) continue;
          if (std::any_of(slot->begin(), slot->end(), [](const CvEntry* e) { return e == nullptr; })) continue;
          std::vector<double> sq(grid.size());
          for (std::size_t i = 0; i < grid.size(); ++i) {
            const double err = (*slot)[i]->y_hat - (*slot)[i]->y_true;
            sq[i] = err * err;
          }
          ledger.append(sq);
        }
        const auto& meta = raw.meta[ti];
        if (ledger.counts()[0] == 0) {
          out.failures.push_back({meta.mnemonic, raw.dates[t], h, ModelKind::fmmde, "empty validation set"});
          continue;
        }
        const int k0 = cv_select_k0(ledger);
        const std::size_t idx = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), k0) - grid.begin());
        for (std::size_t i = 0; i < grid.size(); ++i) {
          out.cv_trace.push_back({meta.mnemonic, h, raw.dates[t], ledger.counts()[i], grid[i], ledger.mse(i)});
        }
        const auto* slot = lookup(ti, h, t);
        if (slot == nullptr || (*slot)[idx] == nullptr) {
          out.failures.push_back({meta.mnemonic, raw.dates[t], h, ModelKind::fmmde,
                                  "no forecast for selected k0=" + std::to_string(k0)});
          continue;
        }
        const CvEntry& e = *(*slot)[idx];
        ForecastRecord rec;
        rec.target = meta.mnemonic;
        rec.target_index = ti;
        rec.origin = raw.dates[t];
        rec.origin_index = t;
        rec.horizon = h;
        rec.model = ModelKind::fmmde;
        rec.y_hat = e.y_hat;
        rec.y_true = e.y_true;
        rec.r_used = e.r_used;
        rec.p_used = e.p_used;
        rec.k0_used = k0;
        out.records.push_back(rec);
      }
    }
  }
}

}  // namespace

RunResult recursive_run(const RawPanel& raw, const ForecastSpec& spec, const RunControl& control) {
  if (spec.targets.empty()) throw InputError("no forecast targets");
  for (int ti : spec.targets) {
    if (ti < 0 || ti >= raw.cols()) throw InputError("target index out of range");
  }
  if (spec.models.empty()) throw InputError("no models requested");
  if (spec.p_max < 1) throw InputError("p_max must be >= 1");
  for (int k : spec.k0_grid) {
    if (k < 1) throw InputError("k0 grid values must be >= 1");
  }
  if (spec.k0 < 1) throw InputError("k0 must be >= 1");
  const auto [first, last] = origin_range(raw, spec);
  const int total = last - first + 1;

  std::vector<OriginResult> results(static_cast<std::size_t>(total));
  std::vector<char> done(static_cast<std::size_t>(total), 0);
  const std::string fp = control.checkpoint_path.empty() ? std::string() : run_fingerprint(raw, spec);
  if (control.resume && !control.checkpoint_path.empty()) {
    if (auto cp = load_checkpoint(control.checkpoint_path)) {
      if (cp->fingerprint != fp) throw InputError("checkpoint does not match this panel and configuration");
      for (auto& o : cp->origins) {
        const int k = o.origin_index - first;
        if (k < 0 || k >= total) throw InputError("checkpoint origin outside the run");
        results[static_cast<std::size_t>(k)] = std::move(o);
        done[static_cast<std::size_t>(k)] = 1;
      }
    }
  }

  auto save = [&]() {
    if (control.checkpoint_path.empty()) return;
    Checkpoint cp;
    cp.fingerprint = fp;
    for (int k = 0; k < total; ++k) {
      if (done[static_cast<std::size_t>(k)]) cp.origins.push_back(results[static_cast<std::size_t>(k)]);
    }
    save_checkpoint(control.checkpoint_path, cp);
  };

  std::vector<int> pending;
  for (int k = 0; k < total; ++k) {
    if (!done[static_cast<std::size_t>(k)]) pending.push_back(k);
  }
  int n_done = total - static_cast<int>(pending.size());
  const int chunk = control.checkpoint_every > 0 ? control.checkpoint_every : std::max(1, static_cast<int>(pending.size()));

  RunResult out;
  out.origins_total = total;
  std::size_t pos = 0;
  while (pos < pending.size()) {
    std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(chunk), pending.size() - pos);
    if (control.stop_after) {
      const int room = *control.stop_after - n_done;
      if (room <= 0) break;
      len = std::min<std::size_t>(len, static_cast<std::size_t>(room));
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(len); ++i) {
      const int k = pending[pos + static_cast<std::size_t>(i)];
      const int origin = first + k;
      OriginResult r;
      try {
        r = run_origin(raw, spec, origin);
      } catch (const std::exception& e) {
        r.origin_index = origin;
        r.failures.push_back({"", raw.dates[origin], 0, ModelKind::ar, e.what()});
      }
      results[static_cast<std::size_t>(k)] = std::move(r);
      done[static_cast<std::size_t>(k)] = 1;
    }
    pos += len;
    n_done += static_cast<int>(len);
    save();
    if (control.progress) control.progress(n_done, total);
  }

  out.origins_done = n_done;
  out.complete = n_done == total;
  if (!out.complete) return out;

  for (const auto& o : results) {
    out.records.insert(out.records.end(), o.records.begin(), o.records.end());
    out.failures.insert(out.failures.end(), o.failures.begin(), o.failures.end());
  }
  if (spec.cross_validated()) cv_sweep(raw, spec, first, last, results, out);
  sort_records(out.records);
  return out;
}

RunResult cv_recursive_run(const RawPanel& raw, const ForecastSpec& spec, const RunControl& control) {
  if (!spec.cross_validated()) throw InputError("empty k0 grid");
  return recursive_run(raw, spec, control);
}

void write_records_csv(std::ostream& out, std::span<const ForecastRecord> records) {
  out << "target,origin,horizon,model,y_hat,y_true,r_used,p_used,k0_used\n";
  for (const auto& r : records) {
    out << csv::escape(r.target) << ',' << r.origin.iso() << ',' << r.horizon << ',' << model_name(r.model) << ','
        << csv::format_double(r.y_hat) << ',' << csv::format_double(r.y_true) << ',' << r.r_used << ',' << r.p_used
        << ',';
    if (r.k0_used) out << *r.k0_used;
    out << '\n';
  }
}

std::vector<ForecastRecord> read_records_csv(std::istream& in) {
  const auto rows = csv::read_all(in);
  std::vector<ForecastRecord> out;
  bool header = true;
  int line = 0;
  for (const auto& row : rows) {
    ++line;
    if (row.empty()) continue;
    if (header) {
      header = false;
      if (row.size() < 9 || row[0] != "target") throw InputError("forecast file lacks the expected header");
      continue;
    }
    if (row.size() != 9) throw InputError("ragged row at line " + std::to_string(line));
    ForecastRecord r;
    r.target = row[0];
    r.origin = parse_date(row[1]);
    r.horizon = std::stoi(row[2]);
    r.model = parse_model(row[3]);
    r.y_hat = csv::parse_double(row[4], false);
    r.y_true = csv::parse_double(row[5], false);
    r.r_used = std::stoi(row[6]);
    r.p_used = std::stoi(row[7]);
    if (!row[8].empty()) r.k0_used = std::stoi(row[8]);
    r.origin_index = r.origin.ordinal();
    out.push_back(std::move(r));
  }
  return out;
}

void write_failures_csv(std::ostream& out, std::span<const ForecastFailure> failures) {
  out << "target,origin,horizon,model,message\n";
  for (const auto& f : failures) {
    out << csv::escape(f.target) << ',' << f.origin.iso() << ',' << f.horizon << ',' << model_name(f.model) << ','
        << csv::escape(f.message) << '\n';
  }
}

void write_cv_trace_csv(std::ostream& out, std::span<const CvTraceRow> rows) {
  out << "target,horizon,decision_origin,n_validation,k0,cv_mse\n";
  for (const auto& r : rows) {
    out << csv::escape(r.target) << ',' << r.horizon << ',' << r.decision_origin.iso() << ',' << r.n_validation << ','
        << r.k0 << ',' << csv::format_double(r.cv_mse) << '\n';
  }
}

}  // namespace fmmde
