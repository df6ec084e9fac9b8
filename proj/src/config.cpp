#include "fmmde/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fmmde/error.hpp"
#include "json.hpp"

namespace fmmde {

namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config key '") + key + "' has the wrong type");
  }
}

void read_date(const json& j, const char* key, std::optional<YearMonth>& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_null()) {
    out.reset();
    return;
  }
  if (!v.is_string()) throw InputError(std::string("config key '") + key + "' must be a date string");
  out = parse_date(v.get<std::string>());
}

const std::set<std::string> kKeys = {
    "panel", "groups", "output_dir", "targets", "horizons", "models", "initial_window", "first_origin",
    "last_origin", "eval_start", "eval_end", "k0", "k0_grid", "cv_decision_offset", "p_max", "sw_r", "fmmde_r",
    "rmax", "ratio_bound", "mds", "seed", "threads", "standardize", "nominal_second_term_scaled",
    "ratio_of_roots", "checkpoint_every", "sim"};
const std::set<std::string> kMdsKeys = {"lags", "n_boot", "alpha"};
const std::set<std::string> kSimKeys = {"example", "n", "T", "reps", "hurst", "k0", "standardize"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw InputError("unknown config key '" + where + k + "'");
  }
}

template <class T>
void read_list(const json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  try {
    if (v.is_array()) {
      out = v.get<std::vector<T>>();
    } else {
      out = {v.get<T>()};
    }
  } catch (const json::exception&) {
    throw InputError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  check_keys(j, kKeys, "");
  RunConfig c;
  read(j, "panel", c.panel);
  read(j, "groups", c.groups);
  read(j, "output_dir", c.output_dir);
  if (j.contains("targets")) {
    const auto& t = j.at("targets");
    if (t.is_string() && t.get<std::string>() == "all") {
      c.targets.clear();
    } else {
      read_list(j, "targets", c.targets);
    }
  }
  read_list(j, "horizons", c.horizons);
  read_list(j, "models", c.models);
  read(j, "initial_window", c.initial_window);
  read_date(j, "first_origin", c.first_origin);
  read_date(j, "last_origin", c.last_origin);
  read_date(j, "eval_start", c.eval_start);
  read_date(j, "eval_end", c.eval_end);
  read(j, "k0", c.k0);
  read_list(j, "k0_grid", c.k0_grid);
  read(j, "cv_decision_offset", c.cv_decision_offset);
  read(j, "p_max", c.p_max);
  read(j, "sw_r", c.sw_r);
  read(j, "fmmde_r", c.fmmde_r);
  read(j, "rmax", c.rmax);
  read(j, "ratio_bound", c.ratio_bound);
  if (j.contains("mds")) {
    const auto& m = j.at("mds");
    if (!m.is_object()) throw InputError("config key 'mds' must be an object");
    check_keys(m, kMdsKeys, "mds.");
    read(m, "lags", c.mds_lags);
    read(m, "n_boot", c.n_boot);
    read(m, "alpha", c.alpha);
  }
  read(j, "seed", c.seed);
  read(j, "threads", c.threads);
  read(j, "standardize", c.standardize);
  read(j, "nominal_second_term_scaled", c.nominal_second_term_scaled);
  read(j, "ratio_of_roots", c.ratio_of_roots);
  read(j, "checkpoint_every", c.checkpoint_every);
  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    if (!s.is_object()) throw InputError("config key 'sim' must be an object");
    check_keys(s, kSimKeys, "sim.");
    read(s, "example", c.sim_example);
    read_list(s, "n", c.sim_n);
    read_list(s, "T", c.sim_T);
    read(s, "reps", c.sim_reps);
    read(s, "hurst", c.sim_hurst);
    read(s, "k0", c.sim_k0);
    read(s, "standardize", c.sim_standardize);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(RunConfig& c) {
  static const std::set<int> kUsual{1, 3, 6, 12, 24};
  if (c.horizons.empty()) throw InputError("no horizons configured");
  c.warnings.clear();
  for (int h : c.horizons) {
    if (h < 1) throw InputError("horizons must be positive");
    if (!kUsual.count(h)) c.warnings.push_back("horizon " + std::to_string(h) + " is outside {1,3,6,12,24}");
  }
  if (c.models.empty()) throw InputError("no models configured");
  if (c.initial_window < 4) throw InputError("initial_window must be at least 4");
  if (c.k0 < 1) throw InputError("k0 must be >= 1");
  for (int k : c.k0_grid) {
    if (k < 1) throw InputError("k0 grid values must be >= 1");
  }
  if (c.cv_decision_offset < 1) throw InputError("cv_decision_offset must be >= 1");
  if (c.p_max < 1) throw InputError("p_max must be >= 1");
  if (c.rmax < 1 || c.ratio_bound < 1) throw InputError("factor search bounds must be >= 1");
  if (c.mds_lags < 1) throw InputError("mds lags must be >= 1");
  if (c.n_boot < 1) throw InputError("n_boot must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (c.threads < 0) throw InputError("threads must be >= 0");
  if (c.checkpoint_every < 0) throw InputError("checkpoint_every must be >= 0");
  if (c.sim_reps < 1) throw InputError("reps must be >= 1");
  if (c.sim_n.empty() || c.sim_T.empty()) throw InputError("simulation sizes missing");
}

}  // namespace fmmde
