#include "fmmde/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <set>

#include "fmmde/csv.hpp"
#include "fmmde/error.hpp"
#include "fmmde/fred_md.hpp"
#include "json.hpp"

namespace fmmde {

namespace {

std::vector<const ForecastRecord*> in_window(std::span<const ForecastRecord> records, ModelKind model,
                                             const EvalWindow& window) {
  std::vector<const ForecastRecord*> out;
  for (const auto& r : records) {
    if (r.model == model && window.contains(r.origin)) out.push_back(&r);
  }
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->origin < b->origin; });
  return out;
}

double sq_err(const ForecastRecord& r) {
  const double e = r.y_hat - r.y_true;
  return e * e;
}

double mean_sq(const std::vector<const ForecastRecord*>& rs) {
  double s = 0.0;
  for (const auto* r : rs) s += sq_err(*r);
  return s / static_cast<double>(rs.size());
}

bool same_origins(const std::vector<const ForecastRecord*>& a, const std::vector<const ForecastRecord*>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->origin != b[i]->origin) return false;
  }
  return true;
}

std::string fmt(double v, int prec = 4) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

double msfe(std::span<const ForecastRecord> records, const EvalWindow& window) {
  double s = 0.0;
  long n = 0;
  for (const auto& r : records) {
    if (!window.contains(r.origin)) continue;
    s += sq_err(r);
    ++n;
  }
  if (n == 0) throw InputError("empty evaluation window");
  return s / static_cast<double>(n);
}

double rmsfe_ratio(ModelKind m1, ModelKind m2, std::span<const ForecastRecord> records, const EvalWindow& window,
                   bool ratio_of_roots) {
  const auto a = in_window(records, m1, window);
  const auto b = in_window(records, m2, window);
  if (a.empty() || b.empty()) throw InputError("empty evaluation window");
  if (!same_origins(a, b)) throw InputError("mismatched origin sets");
  const double den = mean_sq(b);
  if (!(den > 0.0)) throw NumericError("zero denominator MSFE");
  const double ratio = m1 == m2 ? 1.0 : mean_sq(a) / den;
  return ratio_of_roots ? std::sqrt(ratio) : ratio;
}

std::vector<double> percentile_table(std::span<const double> values, std::span<const double> percentiles) {
  if (values.empty()) throw InputError("no values for percentiles");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto last = static_cast<double>(sorted.size() - 1);
  std::vector<double> out;
  out.reserve(percentiles.size());
  for (double p : percentiles) {
    if (!(p >= 0.0 && p <= 100.0)) throw InputError("percentile outside [0, 100]");
    const double pos = p / 100.0 * last;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out.push_back(frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[hi] - sorted[lo]));
  }
  return out;
}

std::vector<GroupRow> group_table(std::span<const GroupedValue> values, std::span<const double> percentiles) {
  std::map<int, std::vector<double>> by_group;
  for (const auto& v : values) {
    if (v.group < 1 || v.group > 8) throw InputError("unknown group id " + std::to_string(v.group));
    by_group[v.group].push_back(v.value);
  }
  std::vector<GroupRow> out;
  for (const auto& [g, vals] : by_group) {
    out.push_back({g, std::string(fred_md::group_name(g)), static_cast<int>(vals.size()), percentile_table(vals, percentiles)});
  }
  return out;
}

DmResult dm_test(std::span<const double> e1, std::span<const double> e2, int h) {
  if (e1.size() != e2.size()) throw InputError("error series lengths differ");
  if (e1.size() < 10) throw InputError("DM test needs at least 10 forecast errors");
  if (h < 1) throw InputError("horizon must be >= 1");
  const std::size_t n = e1.size();
  std::vector<double> d(n);
  double dbar = 0.0;
  double scale = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    d[t] = e1[t] * e1[t] - e2[t] * e2[t];
    dbar += d[t];
    scale = std::max(scale, std::abs(d[t]));
  }
  dbar /= static_cast<double>(n);
  auto gamma = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t t = k; t < n; ++t) s += (d[t] - dbar) * (d[t - k] - dbar);
    return s / static_cast<double>(n);
  };
  double lrv = gamma(0);
  for (int k = 1; k < h && static_cast<std::size_t>(k) < n; ++k) {
    lrv += 2.0 * (1.0 - static_cast<double>(k) / h) * gamma(static_cast<std::size_t>(k));
  }
  if (!(lrv > 1e-14 * scale * scale)) return {0.0, 0.5};
  const double stat = dbar / std::sqrt(lrv / static_cast<double>(n));
  return {stat, 0.5 * std::erfc(-stat / std::sqrt(2.0))};
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

std::string ModelPair::label() const { return std::string(model_name(m1)) + "/" + std::string(model_name(m2)); }

const std::vector<ModelPair>& default_pairs() {
  static const std::vector<ModelPair> p{{ModelKind::fmmde, ModelKind::ar},
                                        {ModelKind::sw, ModelKind::ar},
                                        {ModelKind::fmmde, ModelKind::sw}};
  return p;
}

EvalReport evaluate(std::span<const ForecastRecord> records, const std::map<std::string, int>& groups,
                    const EvalOptions& options) {
  EvalReport rep;
  rep.window = options.window;
  rep.ratio_of_roots = options.ratio_of_roots;
  rep.percentiles = options.percentiles;

  std::map<std::pair<std::string, int>, std::vector<ForecastRecord>> cells;
  std::set<int> hs;
  bool any = false;
  for (const auto& r : records) {
    if (!options.window.contains(r.origin)) continue;
    any = true;
    if (std::find(rep.targets.begin(), rep.targets.end(), r.target) == rep.targets.end()) rep.targets.push_back(r.target);
    hs.insert(r.horizon);
    cells[{r.target, r.horizon}].push_back(r);
  }
  if (!any) throw InputError("empty evaluation window");
  rep.horizons.assign(hs.begin(), hs.end());

  auto group_of = [&](const std::string& t) {
    const auto it = groups.find(t);
    return it == groups.end() ? 0 : it->second;
  };
  for (const auto& t : rep.targets) {
    const int g = group_of(t);
    if (g < 1 || g > 8) ++rep.ungrouped;
  }

  for (const auto& t : rep.targets) {
    for (int h : rep.horizons) {
      const auto it = cells.find({t, h});
      if (it == cells.end()) continue;
      const auto& rs = it->second;
      for (auto m : {ModelKind::ar, ModelKind::sw, ModelKind::fmmde}) {
        const auto sel = in_window(rs, m, options.window);
        if (sel.empty()) continue;
        rep.msfe.push_back({t, h, m, static_cast<int>(sel.size()), mean_sq(sel)});
      }
      for (const auto& pair : options.pairs) {
        const auto a = in_window(rs, pair.m1, options.window);
        const auto b = in_window(rs, pair.m2, options.window);
        if (a.empty() || b.empty()) continue;
        PairCell cell;
        cell.target = t;
        cell.group = group_of(t);
        cell.horizon = h;
        cell.pair = pair;
        if (!same_origins(a, b)) {
          cell.note = "mismatched origin sets";
        } else {
          try {
            cell.ratio = rmsfe_ratio(pair.m1, pair.m2, rs, options.window, options.ratio_of_roots);
          } catch (const NumericError& e) {
            cell.note = e.what();
          }
          if (a.size() >= 10) {
            std::vector<double> e1(a.size()), e2(b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
              e1[i] = a[i]->y_hat - a[i]->y_true;
              e2[i] = b[i]->y_hat - b[i]->y_true;
            }
            cell.dm = dm_test(e1, e2, h);
          }
        }
        rep.pairs.push_back(std::move(cell));
      }
    }
  }

  for (const auto& pair : options.pairs) {
    for (int h : rep.horizons) {
      std::vector<double> vals;
      std::vector<GroupedValue> gv;
      for (const auto& c : rep.pairs) {
        if (c.horizon != h || c.pair.m1 != pair.m1 || c.pair.m2 != pair.m2 || !c.ratio) continue;
        vals.push_back(*c.ratio);
        if (c.group >= 1 && c.group <= 8) gv.push_back({c.group, *c.ratio});
      }
      if (vals.empty()) continue;
      rep.percentile_rows.push_back({pair, h, static_cast<int>(vals.size()), percentile_table(vals, options.percentiles)});
      for (auto& row : group_table(gv, options.percentiles)) rep.group_rows.push_back({pair, h, std::move(row)});
    }
  }
  return rep;
}

namespace {

std::string pct_header(const EvalReport& rep) {
  std::string s;
  for (double p : rep.percentiles) s += ",p" + csv::format_double(p);
  return s;
}

std::string cell_text(const PairCell& c) {
  if (!c.ratio) return "NA";
  return fmt(*c.ratio) + (c.dm ? significance_stars(c.dm->p_value) : "");
}

void pad(std::ostream& out, const std::string& s, int width, bool left = false) {
  if (left) {
    out << std::left << std::setw(width) << s << std::right;
  } else {
    out << std::setw(width) << s;
  }
}

std::string window_text(const EvalReport& rep) {
  return (rep.window.begin ? rep.window.begin->iso() : std::string("start")) + " to " +
         (rep.window.end ? rep.window.end->iso() : std::string("end"));
}

}  // namespace

void write_per_series_csv(std::ostream& out, const EvalReport& rep) {
  out << "target,group,horizon,pair,ratio,dm_stat,dm_p,stars,note\n";
  for (const auto& c : rep.pairs) {
    out << csv::escape(c.target) << ',' << c.group << ',' << c.horizon << ',' << c.pair.label() << ','
        << (c.ratio ? csv::format_double(*c.ratio) : "NA") << ','
        << (c.dm ? csv::format_double(c.dm->statistic) : "NA") << ','
        << (c.dm ? csv::format_double(c.dm->p_value) : "NA") << ',' << (c.dm ? significance_stars(c.dm->p_value) : "")
        << ',' << csv::escape(c.note) << '\n';
  }
}

void write_per_series_text(std::ostream& out, const EvalReport& rep) {
  out << (rep.ratio_of_roots ? "RMSFE" : "MSFE") << " ratios by series, origins " << window_text(rep) << '\n';
  out << "DM one-sided significance: * 0.1, ** 0.05, *** 0.01\n";
  std::vector<ModelPair> pairs;
  for (const auto& c : rep.pairs) {
    if (std::none_of(pairs.begin(), pairs.end(), [&](const ModelPair& p) { return p.label() == c.pair.label(); })) {
      pairs.push_back(c.pair);
    }
  }
  for (const auto& pair : pairs) {
    out << '\n' << pair.label() << '\n';
    pad(out, "series", 12, true);
    for (int h : rep.horizons) pad(out, "h=" + std::to_string(h), 12);
    out << '\n';
    for (const auto& t : rep.targets) {
      pad(out, t, 12, true);
      for (int h : rep.horizons) {
        std::string s = "-";
        for (const auto& c : rep.pairs) {
          if (c.target == t && c.horizon == h && c.pair.label() == pair.label()) s = cell_text(c);
        }
        pad(out, s, 12);
      }
      out << '\n';
    }
  }
}

void write_percentiles_csv(std::ostream& out, const EvalReport& rep) {
  out << "pair,horizon,count" << pct_header(rep) << '\n';
  for (const auto& r : rep.percentile_rows) {
    out << r.pair.label() << ',' << r.horizon << ',' << r.count;
    for (double v : r.values) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

void write_percentiles_text(std::ostream& out, const EvalReport& rep) {
  out << "Percentiles of ratios across series, origins " << window_text(rep) << '\n';
  pad(out, "pair", 12, true);
  pad(out, "h", 4);
  pad(out, "n", 5);
  for (double p : rep.percentiles) pad(out, csv::format_double(p) + "%", 9);
  out << '\n';
  for (const auto& r : rep.percentile_rows) {
    pad(out, r.pair.label(), 12, true);
    pad(out, std::to_string(r.horizon), 4);
    pad(out, std::to_string(r.count), 5);
    for (double v : r.values) pad(out, fmt(v), 9);
    out << '\n';
  }
}

void write_groups_csv(std::ostream& out, const EvalReport& rep) {
  out << "pair,horizon,group,group_name,count" << pct_header(rep) << '\n';
  for (const auto& g : rep.group_rows) {
    out << g.pair.label() << ',' << g.horizon << ',' << g.row.group << ',' << csv::escape(g.row.name) << ','
        << g.row.count;
    for (double v : g.row.percentiles) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

void write_groups_text(std::ostream& out, const EvalReport& rep) {
  out << "Percentiles of ratios within groups, origins " << window_text(rep) << '\n';
  if (rep.ungrouped > 0) out << rep.ungrouped << " series without a group are excluded\n";
  pad(out, "pair", 12, true);
  pad(out, "h", 4);
  out << "  ";
  pad(out, "group", 34, true);
  pad(out, "n", 4);
  for (double p : rep.percentiles) pad(out, csv::format_double(p) + "%", 9);
  out << '\n';
  for (const auto& g : rep.group_rows) {
    pad(out, g.pair.label(), 12, true);
    pad(out, std::to_string(g.horizon), 4);
    out << "  ";
    pad(out, std::to_string(g.row.group) + " " + g.row.name, 34, true);
    pad(out, std::to_string(g.row.count), 4);
    for (double v : g.row.percentiles) pad(out, fmt(v), 9);
    out << '\n';
  }
}

void write_report_json(std::ostream& out, const EvalReport& rep) {
  using nlohmann::json;
  json j;
  j["window"] = {{"begin", rep.window.begin ? json(rep.window.begin->iso()) : json(nullptr)},
                 {"end", rep.window.end ? json(rep.window.end->iso()) : json(nullptr)}};
  j["ratio_of_roots"] = rep.ratio_of_roots;
  j["percentiles"] = rep.percentiles;
  j["horizons"] = rep.horizons;
  j["msfe"] = json::array();
  for (const auto& m : rep.msfe) {
    j["msfe"].push_back({{"target", m.target}, {"horizon", m.horizon}, {"model", model_name(m.model)},
                         {"count", m.count}, {"msfe", m.msfe}});
  }
  j["pairs"] = json::array();
  for (const auto& c : rep.pairs) {
    json jc = {{"target", c.target}, {"group", c.group}, {"horizon", c.horizon}, {"pair", c.pair.label()}};
    jc["ratio"] = c.ratio ? json(*c.ratio) : json(nullptr);
    if (c.dm) {
      jc["dm_stat"] = c.dm->statistic;
      jc["dm_p"] = c.dm->p_value;
    }
    if (!c.note.empty()) jc["note"] = c.note;
    j["pairs"].push_back(std::move(jc));
  }
  j["percentile_rows"] = json::array();
  for (const auto& r : rep.percentile_rows) {
    j["percentile_rows"].push_back({{"pair", r.pair.label()}, {"horizon", r.horizon}, {"count", r.count}, {"values", r.values}});
  }
  j["group_rows"] = json::array();
  for (const auto& g : rep.group_rows) {
    j["group_rows"].push_back({{"pair", g.pair.label()}, {"horizon", g.horizon}, {"group", g.row.group},
                               {"name", g.row.name}, {"count", g.row.count}, {"values", g.row.percentiles}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace fmmde
