#include "fmmde/cli.hpp"

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fmmde/config.hpp"
#include "fmmde/csv.hpp"
#include "fmmde/error.hpp"
#include "fmmde/eval.hpp"
#include "fmmde/factors.hpp"
#include "fmmde/forecast.hpp"
#include "fmmde/fred_md.hpp"
#include "fmmde/mdstest.hpp"
#include "fmmde/panel.hpp"
#include "fmmde/random.hpp"
#include "fmmde/sim.hpp"

namespace fmmde {

namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  RunConfig load() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(cfg);
    }
    validate(cfg);
    return cfg;
  }
};

template <class T>
CLI::Option* bind_opt(CLI::App* app, Overrides& ov, const std::string& name, T RunConfig::*field,
                  const std::string& desc) {
  auto store = std::make_shared<T>();
  CLI::Option* opt = app->add_option(name, *store, desc);
  if constexpr (requires { store->push_back(store->front()); }) opt->delimiter(',');
  ov.setters.emplace_back(opt, [store, field](RunConfig& c) { c.*field = *store; });
  return opt;
}

CLI::Option* bind_flag(CLI::App* app, Overrides& ov, const std::string& name, bool RunConfig::*field, bool value,
                       const std::string& desc) {
  CLI::Option* opt = app->add_flag(name, desc);
  ov.setters.emplace_back(opt, [field, value](RunConfig& c) { c.*field = value; });
  return opt;
}

CLI::Option* bind_date(CLI::App* app, Overrides& ov, const std::string& name,
                       std::optional<YearMonth> RunConfig::*field, const std::string& desc) {
  auto store = std::make_shared<std::string>();
  CLI::Option* opt = app->add_option(name, *store, desc);
  ov.setters.emplace_back(opt, [store, field](RunConfig& c) {
    if (*store == "none" || store->empty()) {
      (c.*field).reset();
    } else {
      c.*field = parse_date(*store);
    }
  });
  return opt;
}

void add_common(CLI::App* app, Overrides& ov) {
  app->add_option("--config", ov.config_path, "JSON configuration file");
  bind_opt(app, ov, "--threads", &RunConfig::threads, "Worker threads (0: runtime default)");
  bind_opt(app, ov, "--seed", &RunConfig::seed, "Master seed");
  bind_opt(app, ov, "--output-dir", &RunConfig::output_dir, "Directory for output files");
}

void add_panel_options(CLI::App* app, Overrides& ov) {
  bind_opt(app, ov, "--panel", &RunConfig::panel, "FRED-MD style CSV of levels");
  bind_opt(app, ov, "--groups", &RunConfig::groups, "Sidecar CSV mnemonic,group");
  bind_flag(app, ov, "--no-standardize", &RunConfig::standardize, false, "Use transformed series without scaling");
}

void add_forecast_options(CLI::App* app, Overrides& ov) {
  add_panel_options(app, ov);
  bind_opt(app, ov, "--targets", &RunConfig::targets, "Target mnemonics (default: all)");
  bind_opt(app, ov, "--horizons", &RunConfig::horizons, "Forecast horizons");
  bind_opt(app, ov, "--models", &RunConfig::models, "Subset of AR,SW,FMMDE");
  bind_opt(app, ov, "--initial-window", &RunConfig::initial_window, "Months up to and including the first origin");
  bind_date(app, ov, "--first-origin", &RunConfig::first_origin, "First forecast origin (YYYY-MM)");
  bind_date(app, ov, "--last-origin", &RunConfig::last_origin, "Last forecast origin (YYYY-MM)");
  bind_opt(app, ov, "--k0", &RunConfig::k0, "Lag budget of the divergence matrix");
  bind_opt(app, ov, "--k0-grid", &RunConfig::k0_grid, "Candidate k0 values for cross validation");
  bind_opt(app, ov, "--cv-offset", &RunConfig::cv_decision_offset, "Origins before the first k0 decision");
  bind_opt(app, ov, "--p-max", &RunConfig::p_max, "Largest autoregressive order");
  bind_opt(app, ov, "--sw-r", &RunConfig::sw_r, "SW factor count: icp2, eigen_ratio or fixed:<r>");
  bind_opt(app, ov, "--fmmde-r", &RunConfig::fmmde_r, "FMMDE factor count: sequential, eigen_ratio or fixed:<r>");
  bind_opt(app, ov, "--rmax", &RunConfig::rmax, "IC_p2 search bound");
  bind_opt(app, ov, "--ratio-bound", &RunConfig::ratio_bound, "Eigenvalue-ratio search bound");
  bind_opt(app, ov, "--mds-lags", &RunConfig::mds_lags, "Lags in the martingale difference test");
  bind_opt(app, ov, "--n-boot", &RunConfig::n_boot, "Bootstrap replications");
  bind_opt(app, ov, "--alpha", &RunConfig::alpha, "Test level");
  bind_opt(app, ov, "--checkpoint-every", &RunConfig::checkpoint_every, "Origins between checkpoints (0: only at end)");
  bind_flag(app, ov, "--unscaled-nominal", &RunConfig::nominal_second_term_scaled, false,
            "Do not divide the lagged growth term of tcode 6 targets by h");
}

void apply_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
}

void report_warnings(const RunConfig& cfg, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
  fs::path dir(cfg.output_dir);
  if (!dir.empty()) fs::create_directories(dir);
  return dir / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write '" + p.string() + "'");
  return f;
}

RawPanel load_panel(const RunConfig& cfg) {
  if (cfg.panel.empty()) throw InputError("no panel given (--panel or config 'panel')");
  RawPanel raw = read_fred_md_csv(cfg.panel);
  if (!cfg.groups.empty()) apply_groups(raw, read_group_sidecar(cfg.groups));
  return raw;
}

Eigen::MatrixXd factor_input(const RunConfig& cfg, const StationaryPanel& sp) {
  return cfg.standardize ? standardize(sp, RowRange{0, sp.rows()}).values : sp.values;
}

int date_index(const RawPanel& raw, YearMonth d) {
  for (int i = 0; i < raw.rows(); ++i) {
    if (raw.dates[i] == d) return i;
  }
  throw InputError("date " + d.iso() + " is not in the panel");
}

ForecastSpec make_spec(const RunConfig& cfg, const RawPanel& raw) {
  ForecastSpec spec;
  if (cfg.targets.empty()) {
    spec.targets.resize(static_cast<std::size_t>(raw.cols()));
    std::iota(spec.targets.begin(), spec.targets.end(), 0);
  } else {
    for (const auto& t : cfg.targets) {
      const int idx = raw.find(t);
      if (idx < 0) throw InputError("unknown target '" + t + "'");
      spec.targets.push_back(idx);
    }
  }
  spec.horizons = cfg.horizons;
  spec.models.clear();
  for (const auto& m : cfg.models) {
    const ModelKind k = parse_model(m);
    if (std::find(spec.models.begin(), spec.models.end(), k) == spec.models.end()) spec.models.push_back(k);
  }
  std::sort(spec.models.begin(), spec.models.end());
  spec.p_max = cfg.p_max;
  spec.sw_r = RSelection::parse(cfg.sw_r);
  if (spec.sw_r.method == RSelection::Method::sequential_mds) throw InputError("sequential testing applies to FMMDE only");
  spec.fmmde_r = RSelection::parse(cfg.fmmde_r);
  spec.rmax = cfg.rmax;
  spec.ratio_bound = cfg.ratio_bound;
  spec.k0 = cfg.k0;
  spec.k0_grid = cfg.k0_grid;
  spec.cv_decision_offset = cfg.cv_decision_offset;
  spec.initial_window = cfg.initial_window;
  if (cfg.first_origin) spec.first_origin = date_index(raw, *cfg.first_origin);
  if (cfg.last_origin) spec.last_origin = date_index(raw, *cfg.last_origin);
  spec.standardize = cfg.standardize;
  spec.target_options.nominal_second_term_scaled = cfg.nominal_second_term_scaled;
  spec.mds.lags = cfg.mds_lags;
  spec.mds.n_boot = cfg.n_boot;
  spec.mds.alpha = cfg.alpha;
  spec.seed = cfg.seed;
  return spec;
}

// ---- transform

int cmd_transform(const RunConfig& cfg, const std::string& output, bool list_tcodes, bool dry_run, std::ostream& out,
                  std::ostream& err) {
  if (list_tcodes) {
    out << fred_md::tcode_legend();
    return 0;
  }
  const RawPanel raw = load_panel(cfg);
  const StationaryPanel sp = build_stationary_panel(raw);
  err << "transformed " << sp.cols() << " series, " << sp.rows() << " rows from " << sp.dates.front().iso() << " to "
      << sp.dates.back().iso() << " (" << sp.lost_rows << " leading rows consumed)\n";
  if (dry_run) return 0;
  const fs::path p = output.empty() ? out_path(cfg, "stationary.csv") : fs::path(output);
  auto f = open_out(p);
  write_stationary_csv(f, sp);
  return 0;
}

// ---- simulate

struct SimFlags {
  std::string output;
  std::vector<int> k0s;
  bool true_factors = false;
  std::optional<double> error_scale;
  double error_scale_value = 1.0;
  CLI::Option* error_scale_opt = nullptr;
};

int cmd_simulate(const RunConfig& cfg, const SimFlags& flags, std::ostream& out, std::ostream& err) {
  const SimExample ex = parse_example(cfg.sim_example);
  std::vector<int> k0s = flags.k0s.empty() ? std::vector<int>{cfg.sim_k0} : flags.k0s;
  for (int n : cfg.sim_n) {
    SimConfig probe;
    probe.n = n;
    probe.validate();
  }
  std::vector<AfeCell> cells;
  for (int n : cfg.sim_n) {
    for (int T : cfg.sim_T) {
      SimConfig sc;
      sc.n = n;
      sc.T = T;
      sc.example = ex;
      sc.hurst = cfg.sim_hurst;
      sc.reps = cfg.sim_reps;
      sc.seed = cfg.seed;
      sc.k0 = k0s.front();
      sc.standardize = cfg.sim_standardize;
      sc.use_true_factors = flags.true_factors;
      if (flags.error_scale_opt != nullptr && flags.error_scale_opt->count() > 0) sc.error_scale = flags.error_scale_value;
      sc.validate();
      err << "simulating " << example_name(ex) << " n=" << n << " T=" << T << " reps=" << sc.reps << '\n';
      const auto results = run_afe_k0_sweep(sc, k0s);
      for (std::size_t i = 0; i < k0s.size(); ++i) cells.push_back({ex, n, T, k0s[i], results[i]});
    }
  }
  if (flags.output.empty()) {
    write_afe_table(out, cells);
  } else {
    auto f = open_out(flags.output);
    write_afe_table(f, cells);
  }
  return 0;
}

// ---- factors

struct FactorFlags {
  std::string method = "fmmde";
  std::string rule;
  std::string output;
};

int cmd_factors(const RunConfig& cfg, const FactorFlags& flags, std::ostream& out, std::ostream& err) {
  const RawPanel raw = load_panel(cfg);
  const StationaryPanel sp = build_stationary_panel(raw);
  const Eigen::MatrixXd x = factor_input(cfg, sp);
  const int n = static_cast<int>(x.cols());
  const int T = static_cast<int>(x.rows());
  const std::string method = flags.method;
  FactorSeries series;
  Eigen::VectorXd eig;
  int r = 0;
  std::string rule_label;
  std::vector<MdsTestResult> tests;

  if (method == "fmmde" || method == "FMMDE") {
    const RSelection rule = RSelection::parse(flags.rule.empty() ? cfg.fmmde_r : flags.rule);
    const FactorBasis basis = fmmde_basis(x, cfg.k0);
    const Eigen::MatrixXd proj = x * basis.basis;
    eig = basis.eigenvalues;
    switch (rule.method) {
      case RSelection::Method::fixed: r = rule.fixed_r; break;
      case RSelection::Method::eigen_ratio: r = eigenvalue_ratio_r(eig, std::min(cfg.ratio_bound, n - 1)); break;
      case RSelection::Method::sequential_mds: {
        MdsTestOptions opt{cfg.mds_lags, cfg.n_boot, cfg.alpha, cfg.seed, std::nullopt};
        const auto sel = select_r_sequential(proj, opt);
        r = sel.r;
        tests = sel.per_factor;
        break;
      }
      case RSelection::Method::icp2: throw InputError("IC_p2 applies to SW factors only");
    }
    if (r > n) throw InputError("factor count exceeds the panel width");
    rule_label = rule.label();
    series.values = proj.leftCols(r);
    series.source = {FactorMethod::fmmde, cfg.k0};
  } else if (method == "sw" || method == "SW") {
    const RSelection rule = RSelection::parse(flags.rule.empty() ? cfg.sw_r : flags.rule);
    const PcaDecomposition pca = sw_pca(x);
    eig = pca.eigenvalues;
    switch (rule.method) {
      case RSelection::Method::fixed: r = rule.fixed_r; break;
      case RSelection::Method::eigen_ratio: r = eigenvalue_ratio_r(eig, std::min(cfg.ratio_bound, n - 1)); break;
      case RSelection::Method::icp2: r = bai_ng_icp2(pca, T, std::min({cfg.rmax, n - 1, T - 1})); break;
      case RSelection::Method::sequential_mds: throw InputError("sequential testing applies to FMMDE only");
    }
    rule_label = rule.label();
    series = extract_sw(x, pca, r);
  } else {
    throw InputError("unknown factor method '" + method + "'");
  }
  series.dates = sp.dates;

  out << "method," << series.source.label() << '\n';
  out << "rows," << T << "\ncolumns," << n << '\n';
  out << "rule," << rule_label << "\nr," << r << '\n';
  out << "eigenvalue_ratio_r," << eigenvalue_ratio_r(eig, std::min(cfg.ratio_bound, n - 1)) << '\n';
  const int shown = std::min<int>(static_cast<int>(eig.size()), 15);
  for (int i = 0; i < shown; ++i) out << "eigenvalue_" << (i + 1) << ',' << csv::format_double(eig[i]) << '\n';
  for (std::size_t i = 0; i < tests.size(); ++i) {
    out << "mds_F" << (i + 1) << ',' << csv::format_double(tests[i].statistic) << ','
        << csv::format_double(tests[i].p_value) << '\n';
  }
  const fs::path p = flags.output.empty() ? out_path(cfg, "factors.csv") : fs::path(flags.output);
  auto f = open_out(p);
  write_factor_csv(f, series);
  err << "wrote " << r << " factors to " << p.string() << '\n';
  return 0;
}

// ---- mds-test

struct MdsFlags {
  std::string factors;
  std::string output;
  int max_factors = 10;
};

Eigen::MatrixXd read_factor_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  const auto rows = csv::read_all(in);
  std::vector<std::vector<double>> cols;
  bool header = true;
  std::size_t skip = 0;
  std::size_t width = 0;
  int line = 0;
  for (const auto& row : rows) {
    ++line;
    if (row.empty()) continue;
    if (header) {
      header = false;
      skip = (row[0] == "date" || row[0] == "t") ? 1 : 0;
      width = row.size();
      if (width <= skip) throw InputError("factor file has no factor columns");
      cols.resize(width - skip);
      continue;
    }
    if (row.size() != width) throw InputError("ragged row at line " + std::to_string(line));
    for (std::size_t c = skip; c < width; ++c) cols[c - skip].push_back(csv::parse_double(row[c], false));
  }
  if (cols.empty() || cols[0].empty()) throw InputError("factor file has no rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(cols[0].size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < cols[c].size(); ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
  }
  return m;
}

int cmd_mds_test(const RunConfig& cfg, const MdsFlags& flags, std::ostream& out, std::ostream& err) {
  Eigen::MatrixXd f;
  if (!flags.factors.empty()) {
    f = read_factor_csv(flags.factors);
  } else {
    const RawPanel raw = load_panel(cfg);
    const StationaryPanel sp = build_stationary_panel(raw);
    const Eigen::MatrixXd x = factor_input(cfg, sp);
    const FactorBasis basis = fmmde_basis(x, cfg.k0);
    f = x * basis.basis.leftCols(std::min<Eigen::Index>(flags.max_factors, basis.basis.cols()));
  }
  std::vector<double> pv;
  std::ostringstream table;
  table << "factor,statistic,p_value,lags,n_boot,reject\n";
  for (Eigen::Index c = 0; c < f.cols(); ++c) {
    const Eigen::VectorXd col = f.col(c);
    const auto res = wild_bootstrap_pvalue(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
                                           cfg.mds_lags, cfg.n_boot, stream_seed(cfg.seed, static_cast<std::uint64_t>(c)));
    pv.push_back(res.p_value);
    table << 'F' << (c + 1) << ',' << csv::format_double(res.statistic) << ',' << csv::format_double(res.p_value) << ','
          << res.lags << ',' << res.n_boot << ',' << (res.p_value <= cfg.alpha ? 1 : 0) << '\n';
  }
  if (flags.output.empty()) {
    out << table.str();
  } else {
    auto file = open_out(flags.output);
    file << table.str();
  }
  err << "sequential selection at alpha=" << cfg.alpha << ": r=" << apply_stopping_rule(pv, cfg.alpha) << '\n';
  return 0;
}

// ---- forecast / cv-k0

struct RunFlags {
  std::string checkpoint;
  bool no_checkpoint = false;
  bool resume = false;
  int stop_after = -1;
};

int run_forecast(RunConfig cfg, const RunFlags& flags, bool cv_only, std::ostream& err) {
  if (cv_only) {
    if (cfg.k0_grid.empty()) {
      cfg.k0_grid.resize(25);
      std::iota(cfg.k0_grid.begin(), cfg.k0_grid.end(), 1);
    }
  }
  const RawPanel raw = load_panel(cfg);
  ForecastSpec spec = make_spec(cfg, raw);
  if (cv_only) spec.models = {ModelKind::fmmde};
  const auto [first, last] = origin_range(raw, spec);
  err << "origins " << raw.dates[first].iso() << " to " << raw.dates[last].iso() << " (" << (last - first + 1)
      << "), " << spec.targets.size() << " targets\n";

  RunControl ctl;
  if (!flags.no_checkpoint) {
    ctl.checkpoint_path = flags.checkpoint.empty() ? out_path(cfg, cv_only ? "cv_checkpoint.json" : "checkpoint.json").string()
                                                   : flags.checkpoint;
    ctl.checkpoint_every = cfg.checkpoint_every;
  }
  ctl.resume = flags.resume;
  if (flags.stop_after >= 0) ctl.stop_after = flags.stop_after;
  ctl.progress = [&err](int done, int total) { err << "progress " << done << '/' << total << '\n'; };

  const RunResult res = recursive_run(raw, spec, ctl);
  if (!res.complete) {
    err << "stopped after " << res.origins_done << " of " << res.origins_total << " origins; rerun with --resume\n";
    return 0;
  }
  {
    auto f = open_out(out_path(cfg, cv_only ? "cv_forecasts.csv" : "forecasts.csv"));
    write_records_csv(f, res.records);
  }
  {
    auto f = open_out(out_path(cfg, cv_only ? "cv_failures.csv" : "failures.csv"));
    write_failures_csv(f, res.failures);
  }
  if (spec.cross_validated()) {
    auto f = open_out(out_path(cfg, "cv_trace.csv"));
    write_cv_trace_csv(f, res.cv_trace);
  }
  err << "wrote " << res.records.size() << " forecasts";
  if (!res.failures.empty()) err << ", " << res.failures.size() << " failures logged";
  err << '\n';
  return 0;
}

// ---- evaluate

struct EvalFlags {
  std::string records;
  bool json = false;
};

int cmd_evaluate(const RunConfig& cfg, const EvalFlags& flags, std::ostream& err) {
  const std::string path = flags.records.empty() ? out_path(cfg, "forecasts.csv").string() : flags.records;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  const auto records = read_records_csv(in);

  std::map<std::string, int> groups;
  for (const auto& s : fred_md::builtin_series()) groups[std::string(s.mnemonic)] = s.group;
  if (!cfg.panel.empty()) {
    for (const auto& m : load_panel(cfg).meta) {
      if (m.group != 0) groups[m.mnemonic] = m.group;
    }
  } else if (!cfg.groups.empty()) {
    for (const auto& [k, v] : read_group_sidecar(cfg.groups)) groups[k] = v;
  }

  EvalOptions opt;
  opt.window = {cfg.eval_start, cfg.eval_end};
  opt.ratio_of_roots = cfg.ratio_of_roots;
  const EvalReport rep = evaluate(records, groups, opt);

  auto emit = [&](const std::string& name, auto writer) {
    auto f = open_out(out_path(cfg, name));
    writer(f, rep);
  };
  emit("per_series.csv", write_per_series_csv);
  emit("per_series.txt", write_per_series_text);
  emit("percentiles.csv", write_percentiles_csv);
  emit("percentiles.txt", write_percentiles_text);
  emit("groups.csv", write_groups_csv);
  emit("groups.txt", write_groups_text);
  if (flags.json) emit("report.json", write_report_json);
  err << "evaluated " << rep.targets.size() << " series over " << rep.horizons.size() << " horizons\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Factor models from martingale difference divergence: simulation, extraction and forecasting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fmmde 1.0.0");

  Overrides ov_tr, ov_sim, ov_fac, ov_mds, ov_fc, ov_ev, ov_cv;

  auto* tr = app.add_subcommand("transform", "Apply transformation codes and write the stationary panel");
  add_common(tr, ov_tr);
  add_panel_options(tr, ov_tr);
  std::string tr_output;
  bool list_tcodes = false;
  bool dry_run = false;
  tr->add_option("--output", tr_output, "Output CSV (default <output-dir>/stationary.csv)");
  tr->add_flag("--list-tcodes", list_tcodes, "Print the transformation code legend");
  tr->add_flag("--dry-run", dry_run, "Validate without writing");

  auto* sim = app.add_subcommand("simulate", "One-step forecast comparison on simulated factor panels");
  add_common(sim, ov_sim);
  SimFlags sim_flags;
  bind_opt(sim, ov_sim, "--example", &RunConfig::sim_example, "linear or nonlinear");
  bind_opt(sim, ov_sim, "--n", &RunConfig::sim_n, "Cross-section sizes (even)");
  bind_opt(sim, ov_sim, "--t,-T", &RunConfig::sim_T, "Sample lengths");
  bind_opt(sim, ov_sim, "--reps", &RunConfig::sim_reps, "Replications");
  bind_opt(sim, ov_sim, "--hurst", &RunConfig::sim_hurst, "Hurst exponent of the noise");
  bind_flag(sim, ov_sim, "--standardize", &RunConfig::sim_standardize, true, "Standardize before extraction");
  sim->add_option("--k0", sim_flags.k0s, "k0 values (several give a sensitivity sweep)")->delimiter(',');
  sim->add_option("--output", sim_flags.output, "Output CSV (default: standard output)");
  sim->add_flag("--true-factors", sim_flags.true_factors, "Regress on the true factors in both models");
  sim_flags.error_scale_opt = sim->add_option("--error-scale", sim_flags.error_scale_value, "Noise variance multiplier");

  auto* fac = app.add_subcommand("factors", "Extract factors from the full panel with selection diagnostics");
  add_common(fac, ov_fac);
  add_panel_options(fac, ov_fac);
  FactorFlags fac_flags;
  fac->add_option("--method", fac_flags.method, "fmmde or sw");
  fac->add_option("--rule", fac_flags.rule, "Factor-count rule (default from config)");
  fac->add_option("--output", fac_flags.output, "Factor CSV (default <output-dir>/factors.csv)");
  bind_opt(fac, ov_fac, "--k0", &RunConfig::k0, "Lag budget");
  bind_opt(fac, ov_fac, "--mds-lags", &RunConfig::mds_lags, "Lags in the martingale difference test");
  bind_opt(fac, ov_fac, "--n-boot", &RunConfig::n_boot, "Bootstrap replications");
  bind_opt(fac, ov_fac, "--alpha", &RunConfig::alpha, "Test level");
  bind_opt(fac, ov_fac, "--ratio-bound", &RunConfig::ratio_bound, "Eigenvalue-ratio search bound");
  bind_opt(fac, ov_fac, "--rmax", &RunConfig::rmax, "IC_p2 search bound");

  auto* mds = app.add_subcommand("mds-test", "Martingale difference test for each factor");
  add_common(mds, ov_mds);
  add_panel_options(mds, ov_mds);
  MdsFlags mds_flags;
  mds->add_option("--factors", mds_flags.factors, "Factor CSV (otherwise FMMDE factors of --panel)");
  mds->add_option("--output", mds_flags.output, "Output CSV (default: standard output)");
  mds->add_option("--max-factors", mds_flags.max_factors, "Factors tested when extracting from a panel");
  bind_opt(mds, ov_mds, "--k0", &RunConfig::k0, "Lag budget");
  bind_opt(mds, ov_mds, "--mds-lags", &RunConfig::mds_lags, "Lags M");
  bind_opt(mds, ov_mds, "--n-boot", &RunConfig::n_boot, "Bootstrap replications");
  bind_opt(mds, ov_mds, "--alpha", &RunConfig::alpha, "Test level");

  RunFlags fc_flags;
  auto add_run_flags = [](CLI::App* a, RunFlags& f) {
    a->add_option("--checkpoint", f.checkpoint, "Checkpoint file (default in the output directory)");
    a->add_flag("--no-checkpoint", f.no_checkpoint, "Disable checkpointing");
    a->add_flag("--resume", f.resume, "Continue from the checkpoint");
    a->add_option("--stop-after", f.stop_after, "Stop after this many origins (checkpoint kept)");
  };
  auto* fc = app.add_subcommand("forecast", "Recursive pseudo out-of-sample forecasts");
  add_common(fc, ov_fc);
  add_forecast_options(fc, ov_fc);
  add_run_flags(fc, fc_flags);

  RunFlags cv_flags;
  auto* cv = app.add_subcommand("cv-k0", "FMMDE forecasts with k0 chosen on an expanding validation set");
  add_common(cv, ov_cv);
  add_forecast_options(cv, ov_cv);
  add_run_flags(cv, cv_flags);

  auto* ev = app.add_subcommand("evaluate", "Forecast accuracy tables from a forecast file");
  add_common(ev, ov_ev);
  EvalFlags ev_flags;
  ev->add_option("--records", ev_flags.records, "Forecast CSV (default <output-dir>/forecasts.csv)");
  ev->add_flag("--json", ev_flags.json, "Also write report.json");
  bind_opt(ev, ov_ev, "--panel", &RunConfig::panel, "Panel whose group metadata labels the series");
  bind_opt(ev, ov_ev, "--groups", &RunConfig::groups, "Sidecar CSV mnemonic,group");
  bind_date(ev, ov_ev, "--eval-start", &RunConfig::eval_start, "First evaluated origin (YYYY-MM or none)");
  bind_date(ev, ov_ev, "--eval-end", &RunConfig::eval_end, "Last evaluated origin (YYYY-MM or none)");
  bind_flag(ev, ov_ev, "--ratio-of-roots", &RunConfig::ratio_of_roots, true, "Report root-MSFE ratios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    auto prepare = [&](const Overrides& ov) {
      RunConfig cfg = ov.load();
      report_warnings(cfg, err);
      apply_threads(cfg);
      return cfg;
    };
    if (tr->parsed()) return cmd_transform(prepare(ov_tr), tr_output, list_tcodes, dry_run, out, err);
    if (sim->parsed()) return cmd_simulate(prepare(ov_sim), sim_flags, out, err);
    if (fac->parsed()) return cmd_factors(prepare(ov_fac), fac_flags, out, err);
    if (mds->parsed()) return cmd_mds_test(prepare(ov_mds), mds_flags, out, err);
    if (fc->parsed()) return run_forecast(prepare(ov_fc), fc_flags, false, err);
    if (cv->parsed()) return run_forecast(prepare(ov_cv), cv_flags, true, err);
    if (ev->parsed()) return cmd_evaluate(prepare(ov_ev), ev_flags, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace fmmde
