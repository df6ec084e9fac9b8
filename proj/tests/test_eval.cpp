#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fmmde/error.hpp"
#include "fmmde/eval.hpp"
#include "oracles/oracles.hpp"

using namespace fmmde;

namespace {

ForecastRecord rec(std::string target, int month, int h, ModelKind m, double err) {
  ForecastRecord r;
  r.target = std::move(target);
  r.origin = YearMonth{1980, 1}.plus_months(month);
  r.origin_index = month;
  r.horizon = h;
  r.model = m;
  r.y_true = 1.0;
  r.y_hat = 1.0 + err;
  return r;
}

// Brute-force Diebold-Mariano with the Bartlett window.
DmResult dm_oracle(const std::vector<double>& e1, const std::vector<double>& e2, int h) {
  const auto n = static_cast<double>(e1.size());
  std::vector<double> d;
  for (std::size_t i = 0; i < e1.size(); ++i) d.push_back(e1[i] * e1[i] - e2[i] * e2[i]);
  double mean = 0.0;
  for (double x : d) mean += x / n;
  double lrv = 0.0;
  for (int k = -(h - 1); k <= h - 1; ++k) {
    double g = 0.0;
    for (std::size_t t = static_cast<std::size_t>(std::abs(k)); t < d.size(); ++t)
      g += (d[t] - mean) * (d[t - static_cast<std::size_t>(std::abs(k))] - mean);
    lrv += (1.0 - std::abs(k) / static_cast<double>(h)) * g / n;
  }
  const double stat = mean / std::sqrt(lrv / n);
  return {stat, oracle::normal_cdf(stat)};
}

}  // namespace

TEST_CASE("msfe") {
  std::vector<ForecastRecord> r{rec("A", 0, 1, ModelKind::ar, 1), rec("A", 1, 1, ModelKind::ar, -1),
                                rec("A", 2, 1, ModelKind::ar, 2)};
  CHECK(msfe(r) == doctest::Approx(2.0).epsilon(1e-15));
  std::reverse(r.begin(), r.end());
  CHECK(msfe(r) == doctest::Approx(2.0).epsilon(1e-15));
  for (auto& x : r) x.y_hat = x.y_true;
  CHECK(msfe(r) == 0.0);
  EvalWindow w{YearMonth{1980, 2}, YearMonth{1980, 2}};
  r = {rec("A", 0, 1, ModelKind::ar, 1), rec("A", 1, 1, ModelKind::ar, 3)};
  CHECK(msfe(r, w) == 9.0);
  CHECK_THROWS_AS(msfe(r, EvalWindow{YearMonth{1990, 1}, std::nullopt}), InputError);
}

TEST_CASE("msfe ratios") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<ForecastRecord> r;
  for (int t = 0; t < 30; ++t) {
    const double e = nd(rng);
    r.push_back(rec("A", t, 1, ModelKind::ar, e));
    r.push_back(rec("A", t, 1, ModelKind::fmmde, 0.5 * e));
    r.push_back(rec("A", t, 1, ModelKind::sw, nd(rng)));
  }
  CHECK(rmsfe_ratio(ModelKind::fmmde, ModelKind::ar, r) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rmsfe_ratio(ModelKind::fmmde, ModelKind::ar, r, {}, true) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rmsfe_ratio(ModelKind::ar, ModelKind::ar, r) == 1.0);
  const double a = rmsfe_ratio(ModelKind::sw, ModelKind::ar, r);
  const double b = rmsfe_ratio(ModelKind::ar, ModelKind::sw, r);
  CHECK(std::abs(a * b - 1.0) < 1e-12);

  r.push_back(rec("A", 40, 1, ModelKind::ar, 1.0));
  CHECK_THROWS_WITH_AS(rmsfe_ratio(ModelKind::fmmde, ModelKind::ar, r), "mismatched origin sets", InputError);
}

TEST_CASE("percentiles") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i + 1;
  std::shuffle(v.begin(), v.end(), std::mt19937_64(2));
  const auto p = percentile_table(v);
  REQUIRE(p.size() == 5);
  CHECK(p[2] == doctest::Approx(50.5));
  const std::vector<double> one{3.25};
  for (double x : percentile_table(one)) CHECK(x == 3.25);

  std::mt19937_64 rng(5);
  std::lognormal_distribution<double> ln;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> w(1 + rep * 3);
    for (auto& x : w) x = ln(rng);
    const auto q = percentile_table(w);
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(q[i] == doctest::Approx(oracle::percentile(w, default_percentiles()[i])).epsilon(1e-14));
      if (i > 0) CHECK(q[i - 1] <= q[i]);
    }
  }
  CHECK_THROWS_AS(percentile_table(std::vector<double>{}), InputError);
}

TEST_CASE("group tables") {
  const std::vector<GroupedValue> v{{2, 1.0}, {5, 0.9}, {2, 3.0}, {5, 1.1}, {5, 1.0}};
  const auto rows = group_table(v);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].group == 2);
  CHECK(rows[0].count == 2);
  CHECK(rows[0].percentiles[2] == doctest::Approx(2.0));
  CHECK(rows[1].count == 3);
  CHECK_FALSE(rows[0].name.empty());
  const auto single = group_table(std::vector<GroupedValue>{{7, 0.8}});
  for (double x : single[0].percentiles) CHECK(x == 0.8);
  CHECK_THROWS_AS(group_table(std::vector<GroupedValue>{{9, 1.0}}), InputError);
}

TEST_CASE("diebold-mariano") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<double> e(200), f(200);
  for (auto& x : e) x = nd(rng);
  for (auto& x : f) x = nd(rng);
  const auto same = dm_test(e, e, 1);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 0.5);

  for (int h : {1, 3, 12}) {
    const auto got = dm_test(e, f, h);
    const auto want = dm_oracle(e, f, h);
    CHECK(got.statistic == doctest::Approx(want.statistic).epsilon(1e-10));
    CHECK(got.p_value == doctest::Approx(want.p_value).epsilon(1e-10));
    const auto swapped = dm_test(f, e, h);
    CHECK(swapped.statistic == doctest::Approx(-got.statistic).epsilon(1e-12));
  }

  std::vector<double> big(1000), small(1000);
  for (std::size_t i = 0; i < 1000; ++i) {
    big[i] = nd(rng);
    small[i] = 0.7 * nd(rng);
  }
  CHECK(dm_test(small, big, 1).p_value < 0.01);
  CHECK(dm_test(big, small, 1).p_value > 0.99);
  CHECK_THROWS_AS(dm_test(std::vector<double>(5, 1.0), std::vector<double>(5, 2.0), 1), InputError);
}

TEST_CASE("stars") {
  CHECK(significance_stars(0.005) == "***");
  CHECK(significance_stars(0.03) == "**");
  CHECK(significance_stars(0.07) == "*");
  CHECK(significance_stars(0.2).empty());
  CHECK(significance_stars(0.01) == "**");
}

TEST_CASE("evaluate") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::vector<ForecastRecord> r;
  const std::vector<std::string> names{"A", "B", "C", "D"};
  for (const auto& name : names) {
    for (int h : {1, 12}) {
      for (int t = 0; t < 40; ++t) {
        const double e = nd(rng);
        r.push_back(rec(name, t, h, ModelKind::ar, e));
        r.push_back(rec(name, t, h, ModelKind::sw, 0.9 * e));
        if (name != "D" || t < 39) r.push_back(rec(name, t, h, ModelKind::fmmde, 0.8 * e + 0.1 * nd(rng)));
      }
    }
  }
  std::shuffle(r.begin(), r.end(), rng);
  const std::map<std::string, int> groups{{"A", 1}, {"B", 1}, {"C", 6}};
  EvalOptions opt;
  opt.window = EvalWindow{};
  const auto rep = evaluate(r, groups, opt);
  CHECK(rep.targets.size() == 4);
  CHECK(rep.horizons == std::vector<int>{1, 12});
  CHECK(rep.msfe.size() == 4 * 2 * 3);
  CHECK(rep.pairs.size() == 4 * 2 * 3);
  CHECK(rep.ungrouped == 1);
  int na = 0;
  for (const auto& c : rep.pairs) {
    if (c.pair.label() == "SW/AR") CHECK(*c.ratio == doctest::Approx(0.81).epsilon(1e-12));
    if (!c.ratio) {
      ++na;
      CHECK(c.target == "D");
      CHECK(c.pair.m1 == ModelKind::fmmde);
    } else {
      REQUIRE(c.dm.has_value());
    }
  }
  CHECK(na == 4);
  REQUIRE(rep.percentile_rows.size() == 2 * 3);
  for (const auto& row : rep.percentile_rows) {
    CHECK(row.count == (row.pair.m1 == ModelKind::fmmde ? 3 : 4));
    for (std::size_t i = 1; i < row.values.size(); ++i) CHECK(row.values[i - 1] <= row.values[i]);
  }
  CHECK(rep.group_rows.size() == 2 * 3 * 2);

  std::ostringstream a, b, c, d;
  write_per_series_csv(a, rep);
  write_percentiles_text(b, rep);
  write_groups_csv(c, rep);
  write_report_json(d, rep);
  CHECK(a.str().find("NA") != std::string::npos);
  CHECK(b.str().find("FMMDE/AR") != std::string::npos);
  CHECK(c.str().find(",6,") != std::string::npos);
  CHECK(d.str().front() == '{');

  opt.window = EvalWindow{YearMonth{2020, 1}, std::nullopt};
  CHECK_THROWS_AS(evaluate(r, groups, opt), InputError);
}
