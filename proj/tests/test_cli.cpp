#include <sstream>

#include "doctest.h"
#include "fmmde/cli.hpp"
#include "support.hpp"

using namespace fmmde;
namespace fs = std::filesystem;
using testing_support::read_file;
using testing_support::write_file;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "fmmde");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path panel_file(const fs::path& dir, int n = 12, int T = 90) {
  const auto p = dir / "panel.csv";
  write_file(p, testing_support::to_fred_md_csv(testing_support::synthetic_panel(n, T, 5)));
  return p;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"forecast", "--bogus"}).code == 2);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("transform") {
  const auto dir = testing_support::scratch_dir("cli_transform");
  const auto panel = panel_file(dir);
  const auto ok = run({"transform", "--panel", panel.string(), "--output-dir", dir.string()});
  CHECK(ok.code == 0);
  CHECK(fs::exists(dir / "stationary.csv"));
  CHECK(lines(read_file(dir / "stationary.csv")) == 1 + 88);

  fs::remove(dir / "stationary.csv");
  const auto dry = run({"transform", "--panel", panel.string(), "--output-dir", dir.string(), "--dry-run"});
  CHECK(dry.code == 0);
  CHECK_FALSE(fs::exists(dir / "stationary.csv"));

  write_file(dir / "bad.csv", "sasdate,A,B\nTransform:,1,9\n1/1/2000,1,2\n");
  const auto bad = run({"transform", "--panel", (dir / "bad.csv").string(), "--output-dir", dir.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("invalid tcode") != std::string::npos);
  CHECK(bad.err.find("B") != std::string::npos);

  CHECK(run({"transform", "--panel", (dir / "missing.csv").string()}).code == 2);
  const auto legend = run({"transform", "--list-tcodes"});
  CHECK(legend.code == 0);
  CHECK(lines(legend.out) >= 7);
}

TEST_CASE("simulate") {
  const auto odd = run({"simulate", "--n", "7", "--t", "50", "--reps", "2"});
  CHECK(odd.code == 2);
  CHECK(odd.err.find("n must be even") != std::string::npos);

  const std::vector<std::string> args{"simulate", "--n", "10", "--t", "60", "--reps", "3", "--seed", "9"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("example,n,k0,reps,T60,T60_se\n", 0) == 0);

  auto other = args;
  other.back() = "10";
  CHECK(run(other).out != a.out);

  const auto sweep = run({"simulate", "--n", "10", "--t", "60", "--reps", "2", "--k0", "1,3"});
  CHECK(sweep.code == 0);
  CHECK(lines(sweep.out) == 3);

  const auto truth = run({"simulate", "--n", "10", "--t", "60", "--reps", "2", "--true-factors"});
  CHECK(truth.out.find(",1,0\n") != std::string::npos);
}

TEST_CASE("factors and mds-test") {
  const auto dir = testing_support::scratch_dir("cli_factors");
  const auto panel = panel_file(dir, 12, 120);
  const auto f = run({"factors", "--panel", panel.string(), "--output-dir", dir.string(), "--rule", "fixed:2"});
  CHECK(f.code == 0);
  CHECK(lines(read_file(dir / "factors.csv")) == 1 + 118);
  const auto s = run({"factors", "--panel", panel.string(), "--output-dir", dir.string(), "--method", "sw",
                    "--output", (dir / "sw.csv").string()});
  CHECK(s.code == 0);

  const auto m = run({"mds-test", "--factors", (dir / "factors.csv").string(), "--n-boot", "49"});
  CHECK(m.code == 0);
  CHECK(lines(m.out) == 3);
  const auto again = run({"mds-test", "--factors", (dir / "factors.csv").string(), "--n-boot", "49"});
  CHECK(again.out == m.out);
}

TEST_CASE("forecast and evaluate") {
  const auto dir = testing_support::scratch_dir("cli_forecast");
  const auto panel = panel_file(dir);
  const std::vector<std::string> base{"forecast",        "--panel",       panel.string(), "--output-dir",
                                      dir.string(),      "--horizons",    "1",            "3",
                                      "--initial-window", "60",           "--p-max",      "3",
                                      "--fmmde-r",       "eigen_ratio",   "--sw-r",       "eigen_ratio",
                                      "--ratio-bound",   "5"};

  auto ar_only = base;
  for (const char* a : {"--models", "AR", "--targets", "S1", "S3"}) ar_only.emplace_back(a);
  const auto r = run(ar_only);
  REQUIRE(r.code == 0);
  const auto text = read_file(dir / "forecasts.csv");
  CHECK(lines(text) == 1 + 2 * ((90 - 1 - 59) + (90 - 3 - 59)));
  CHECK(text.find(",SW,") == std::string::npos);
  CHECK(text.find("S2,") == std::string::npos);

  const auto full = run(base);
  REQUIRE(full.code == 0);
  const auto complete = read_file(dir / "forecasts.csv");

  auto interrupted = base;
  interrupted.insert(interrupted.end(), {"--stop-after", "7", "--checkpoint-every", "3"});
  fs::remove(dir / "forecasts.csv");
  const auto stopped = run(interrupted);
  CHECK(stopped.code == 0);
  CHECK(fs::exists(dir / "checkpoint.json"));
  auto resumed = base;
  resumed.push_back("--resume");
  CHECK(run(resumed).code == 0);
  CHECK(read_file(dir / "forecasts.csv") == complete);

  const auto ev = run({"evaluate", "--records", (dir / "forecasts.csv").string(), "--output-dir", dir.string(),
                       "--panel", panel.string(), "--eval-start", "none", "--json"});
  CHECK(ev.code == 0);
  for (const char* f : {"per_series.csv", "per_series.txt", "percentiles.csv", "percentiles.txt", "groups.csv",
                        "groups.txt", "report.json"})
    CHECK(fs::exists(dir / f));
  CHECK(read_file(dir / "percentiles.txt").find("FMMDE/AR") != std::string::npos);

  const auto empty = run({"evaluate", "--records", (dir / "forecasts.csv").string(), "--output-dir", dir.string(),
                          "--eval-start", "2100-01"});
  CHECK(empty.code == 2);
  CHECK(empty.err.find("empty evaluation window") != std::string::npos);
}

TEST_CASE("config files") {
  const auto dir = testing_support::scratch_dir("cli_config");
  const auto panel = panel_file(dir);
  write_file(dir / "cfg.json", "{\"panel\": \"" + panel.string() + "\", \"output_dir\": \"" + dir.string() +
                                   "\", \"horizons\": [1], \"models\": [\"AR\"], \"targets\": [\"S2\"],"
                                   " \"initial_window\": 80, \"p_max\": 2}");
  CHECK(run({"forecast", "--config", (dir / "cfg.json").string()}).code == 0);
  CHECK(lines(read_file(dir / "forecasts.csv")) == 1 + 10);
  CHECK(run({"forecast", "--config", (dir / "cfg.json").string(), "--initial-window", "85"}).code == 0);
  CHECK(lines(read_file(dir / "forecasts.csv")) == 1 + 5);

  write_file(dir / "typo.json", "{\"panal\": \"x\"}");
  CHECK(run({"forecast", "--config", (dir / "typo.json").string()}).code == 2);
  write_file(dir / "broken.json", "{");
  CHECK(run({"forecast", "--config", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("group sidecar shipped with the repository") {
  std::istringstream in(read_file(fs::path(FMMDE_TEST_DATA) / "fred_md_groups.csv"));
  const auto text = in.str();
  CHECK(lines(text) == 1 + 123);
}
