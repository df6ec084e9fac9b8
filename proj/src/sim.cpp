#include "fmmde/sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "fmmde/csv.hpp"
#include "fmmde/error.hpp"
#include "fmmde/factors.hpp"
#include "fmmde/mddm.hpp"
#include "fmmde/panel.hpp"
#include "fmmde/random.hpp"

namespace fmmde {

namespace {

constexpr std::uint64_t kLoadingStream = 0x4c4f4144ULL;
constexpr std::uint64_t kPanelStream = 0x50414e45ULL;

Eigen::MatrixXd cholesky_factor(int n, double hurst) {
  const Eigen::MatrixXd sigma = fgn_covariance(n, hurst);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericError("Cholesky factorization of the noise covariance failed");
  return llt.matrixL();
}

SimPanel generate(const SimConfig& cfg, int rep, const Eigen::MatrixXd& chol) {
  Rng rng = make_stream(stream_seed(cfg.seed, kPanelStream), static_cast<std::uint64_t>(rep));
  std::normal_distribution<double> normal;
  const int total = cfg.burn_in + cfg.T;

  // w[k + 2] holds w_k; two leading zeros give w_{-1} = w_{-2} = 0.
  std::vector<double> w(static_cast<std::size_t>(total) + 2, 0.0);
  double z_prev = 0.0;
  for (int k = 0; k < total; ++k) {
    const double z = cfg.zero_factor_shocks ? 0.0 : normal(rng);
    const double prev = w[static_cast<std::size_t>(k) + 1];
    double next = 0.0;
    if (cfg.example == SimExample::linear) {
      next = 0.2 * z_prev + z;
    } else {
      next = nonlinear_step(prev, z);
      if (!std::isfinite(next)) throw NumericError("non-finite state in the nonlinear recursion");
    }
    w[static_cast<std::size_t>(k) + 2] = next;
    z_prev = z;
  }

  SimPanel p;
  p.loadings = sim_loadings(cfg.n, cfg.seed);
  p.true_factors.resize(cfg.T, 3);
  for (int t = 0; t < cfg.T; ++t) {
    const auto k = static_cast<std::size_t>(cfg.burn_in + t) + 2;
    p.true_factors(t, 0) = w[k];
    p.true_factors(t, 1) = w[k - 1];
    p.true_factors(t, 2) = w[k - 2];
  }
  p.x = p.true_factors * p.loadings.transpose();
  if (!cfg.zero_noise) {
    Eigen::MatrixXd eps(cfg.T, cfg.n);
    for (int t = 0; t < cfg.T; ++t) {
      for (int j = 0; j < cfg.n; ++j) eps(t, j) = normal(rng);
    }
    p.x.noalias() += std::sqrt(cfg.noise_scale()) * (eps * chol.transpose());
  }
  return p;
}

// Mean over series of the squared one-step error when x_{j,t} is regressed on
// F_{t-1} without intercept.
double forecast_error(const Eigen::MatrixXd& x, const Eigen::MatrixXd& f) {
  const auto T = x.rows();
  const Eigen::MatrixXd z = f.topRows(T - 2);
  const Eigen::MatrixXd y = x.middleRows(1, T - 2);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
  if (qr.rank() < z.cols()) throw NumericError("collinear regressors");
  const Eigen::MatrixXd beta = qr.solve(y);
  const Eigen::RowVectorXd pred = f.row(T - 2) * beta;
  return (pred - x.row(T - 1)).squaredNorm() / static_cast<double>(x.cols());
}

AfeResult summarize(std::vector<double> fm, std::vector<double> sw) {
  AfeResult out;
  out.reps = static_cast<int>(fm.size());
  double a = 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i < fm.size(); ++i) {
    a += fm[i];
    b += sw[i];
  }
  if (!(b > 0.0)) throw NumericError("zero SW forecast error");
  out.afe = a / b;
  if (fm.size() > 1) {
    const double m = static_cast<double>(fm.size());
    const double bbar = b / m;
    double ss = 0.0;
    for (std::size_t i = 0; i < fm.size(); ++i) {
      const double e = fm[i] - out.afe * sw[i];
      ss += e * e;
    }
    out.mc_se = std::sqrt(ss / (m * (m - 1.0))) / bbar;
  }
  out.fe_fmmde = std::move(fm);
  out.fe_sw = std::move(sw);
  return out;
}

}  // namespace

std::string_view example_name(SimExample example) {
  return example == SimExample::linear ? "linear" : "nonlinear";
}

SimExample parse_example(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "linear" || s == "5") return SimExample::linear;
  if (s == "nonlinear" || s == "6") return SimExample::nonlinear;
  throw InputError("unknown example '" + std::string(name) + "'");
}

double SimConfig::noise_scale() const {
  if (error_scale) return *error_scale;
  return example == SimExample::linear ? 1.0 : 0.25;
}

void SimConfig::validate() const {
  if (n < 2 || n % 2 != 0) throw InputError("n must be even");
  if (T < 4) throw InputError("T must be at least 4");
  if (!(hurst > 0.0 && hurst < 1.0)) throw InputError("Hurst exponent must lie in (0, 1)");
  if (reps < 1) throw InputError("reps must be >= 1");
  if (k0 < 1) throw InputError("k0 must be >= 1");
  if (r < 1 || r > n) throw InputError("r must lie in 1..n");
  if (burn_in < 0) throw InputError("burn-in must be >= 0");
  if (noise_scale() < 0.0) throw InputError("error scale must be >= 0");
}

Eigen::MatrixXd fgn_covariance(int n, double hurst) {
  if (n < 1) throw InputError("n must be >= 1");
  if (!(hurst > 0.0 && hurst < 1.0)) throw InputError("Hurst exponent must lie in (0, 1)");
  const double e = 2.0 * hurst;
  Eigen::VectorXd rho(n);
  rho[0] = 1.0;
  for (int d = 1; d < n; ++d) {
    const double dd = d;
    rho[d] = 0.5 * (std::pow(dd + 1.0, e) - 2.0 * std::pow(dd, e) + std::pow(dd - 1.0, e));
  }
  Eigen::MatrixXd sigma(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sigma(i, j) = rho[std::abs(i - j)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw NumericError("noise covariance is not positive semidefinite");
  return sigma;
}

Eigen::MatrixXd sim_loadings(int n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InputError("n must be even");
  Rng rng = make_stream(seed, kLoadingStream);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, 3);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < n / 2; ++i) l(i, c) = -2.0 + 4.0 * uniform01(rng);
  }
  return l;
}

double nonlinear_step(double w_prev, double z) {
  if (w_prev < 5.0) return 0.5 + (0.05 * std::exp(-0.01 * w_prev * w_prev) + 0.9) * w_prev + z;
  return 0.9 * std::exp(-10.0 * w_prev * w_prev) * w_prev + z;
}

SimPanel gen_example(const SimConfig& cfg, int rep) {
  cfg.validate();
  const Eigen::MatrixXd chol = cfg.zero_noise ? Eigen::MatrixXd() : cholesky_factor(cfg.n, cfg.hurst);
  return generate(cfg, rep, chol);
}

SimPanel gen_linear_example(SimConfig cfg, int rep) {
  cfg.example = SimExample::linear;
  return gen_example(cfg, rep);
}

SimPanel gen_nonlinear_example(SimConfig cfg, int rep) {
  cfg.example = SimExample::nonlinear;
  return gen_example(cfg, rep);
}

std::vector<AfeResult> run_afe_k0_sweep(const SimConfig& cfg, const std::vector<int>& grid) {
  cfg.validate();
  if (grid.empty()) throw InputError("empty k0 grid");
  for (int k : grid) {
    if (k < 1) throw InputError("k0 must be >= 1");
  }
  const int kmax = *std::max_element(grid.begin(), grid.end());
  const Eigen::MatrixXd chol = cfg.zero_noise ? Eigen::MatrixXd() : cholesky_factor(cfg.n, cfg.hurst);
  const auto reps = static_cast<std::size_t>(cfg.reps);
  std::vector<std::vector<double>> fm(grid.size(), std::vector<double>(reps));
  std::vector<double> sw(reps);
  std::vector<std::string> errors(reps);

#pragma omp parallel for schedule(dynamic, 1)
  for (int rep = 0; rep < cfg.reps; ++rep) {
    try {
      const SimPanel p = generate(cfg, rep, chol);
      const Eigen::MatrixXd est_raw = p.x.topRows(cfg.T - 1);
      const Eigen::MatrixXd est = cfg.standardize ? standardize(est_raw).values : est_raw;
      const auto idx = static_cast<std::size_t>(rep);
      if (cfg.use_true_factors) {
        const Eigen::MatrixXd f = p.true_factors.topRows(cfg.T - 1);
        const double e = forecast_error(p.x, f);
        sw[idx] = e;
        for (auto& v : fm) v[idx] = e;
        continue;
      }
      sw[idx] = forecast_error(p.x, extract_sw(est, cfg.r).values);
      const auto cums = cumulative_sums(mddm_by_lag(est, kmax));
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const EigenSystem es = eigen_sym(cums[static_cast<std::size_t>(grid[g] - 1)]);
        const Eigen::MatrixXd f = est * es.eigenvectors.leftCols(cfg.r);
        fm[g][idx] = forecast_error(p.x, f);
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(rep)] = e.what();
    }
  }
  for (std::size_t i = 0; i < reps; ++i) {
    if (!errors[i].empty()) throw NumericError("replication " + std::to_string(i) + ": " + errors[i]);
  }
  std::vector<AfeResult> out;
  for (auto& v : fm) out.push_back(summarize(std::move(v), sw));
  return out;
}

AfeResult run_afe_experiment(const SimConfig& cfg) { return run_afe_k0_sweep(cfg, {cfg.k0}).front(); }

void write_afe_table(std::ostream& out, const std::vector<AfeCell>& cells) {
  std::set<int> ts;
  for (const auto& c : cells) ts.insert(c.T);
  out << "example,n,k0,reps";
  for (int t : ts) out << ",T" << t << ",T" << t << "_se";
  out << '\n';
  std::map<std::tuple<int, int, int, int>, std::map<int, const AfeCell*>> rows;
  for (const auto& c : cells) rows[{static_cast<int>(c.example), c.n, c.k0, c.result.reps}][c.T] = &c;
  for (const auto& [key, by_t] : rows) {
    const auto& [ex, n, k0, reps] = key;
    out << example_name(static_cast<SimExample>(ex)) << ',' << n << ',' << k0 << ',' << reps;
    for (int t : ts) {
      const auto it = by_t.find(t);
      if (it == by_t.end()) {
        out << ",,";
      } else {
        out << ',' << csv::format_double(it->second->result.afe) << ',' << csv::format_double(it->second->result.mc_se);
      }
    }
    out << '\n';
  }
}

}  // namespace fmmde
