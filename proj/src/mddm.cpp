#include "fmmde/mddm.hpp"

#include <cmath>
#include <ostream>

#include "fmmde/csv.hpp"
#include "fmmde/error.hpp"
#include "fmmde/kernels.hpp"

namespace fmmde {

namespace {

void check_sample(Eigen::Index rows, int lag) {
  if (lag < 1) throw InputError("lag must be >= 1");
  if (rows - lag < 3) {
    throw InputError("series too short: T - lag = " + std::to_string(rows - lag) + " < 3");
  }
}

Eigen::MatrixXd centered(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  return x.rowwise() - x.colwise().mean();
}

// -(1/m^2) sum_{h,l} dist(h,l) (x_h - xbar)(x_l - xbar)'
Eigen::MatrixXd divergence_from_distances(const Eigen::Ref<const Eigen::MatrixXd>& response,
                                          const Eigen::Ref<const Eigen::MatrixXd>& dist) {
  const double m = static_cast<double>(response.rows());
  return -kernels::fast::distance_form(centered(response), dist) / (m * m);
}

}  // namespace

std::string LagSpec::label() const {
  return (kind == Kind::single ? "lag=" : "k0=") + std::to_string(value);
}

Eigen::MatrixXd pairwise_distances(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  if (z.rows() < 2) throw InputError("pairwise_distances needs at least 2 rows");
  return kernels::fast::distance_matrix(z);
}

double mdd_sq(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::MatrixXd>& z_source,
              int lag) {
  if (z_source.rows() != x.size()) throw InputError("mdd_sq: x and z_source lengths differ");
  check_sample(x.size(), lag);
  const Eigen::Index m = x.size() - lag;
  const Eigen::VectorXd u = x.tail(m).array() - x.tail(m).mean();
  double value = 0.0;
  if (z_source.cols() == 1) {
    const Eigen::VectorXd z = z_source.col(0).head(m);
    const auto len = static_cast<std::size_t>(m);
    value = -kernels::fast::univariate_distance_form({u.data(), len}, {z.data(), len}) / static_cast<double>(m * m);
  } else {
    const Eigen::MatrixXd dist = kernels::fast::distance_matrix(z_source.topRows(m));
    value = -(u.transpose() * dist * u).value() / static_cast<double>(m * m);
  }
  if (value < 0.0 && value > -1e-12 * std::max(1.0, u.squaredNorm() / static_cast<double>(m))) value = 0.0;
  return value;
}

MddMatrix mddm(const Eigen::Ref<const Eigen::MatrixXd>& x, int lag) {
  return mddm_conditional(x, x, lag);
}

MddMatrix mddm_conditional(const Eigen::Ref<const Eigen::MatrixXd>& response,
                           const Eigen::Ref<const Eigen::MatrixXd>& conditioning, int lag) {
  if (response.rows() != conditioning.rows()) throw InputError("mddm: panels have different lengths");
  check_sample(response.rows(), lag);
  const Eigen::Index m = response.rows() - lag;
  const Eigen::MatrixXd dist = kernels::fast::distance_matrix(conditioning.topRows(m));
  return MddMatrix{divergence_from_distances(response.bottomRows(m), dist),
                   LagSpec{LagSpec::Kind::single, lag}, static_cast<int>(response.rows())};
}

std::vector<MddMatrix> mddm_by_lag(const Eigen::Ref<const Eigen::MatrixXd>& x, int max_lag) {
  check_sample(x.rows(), max_lag);
  // Lag j conditions retained row t on row t - j, so its distance matrix is
  // the leading (T - j) block of the distances between rows 0..T-2.
  const Eigen::MatrixXd dist = kernels::fast::distance_matrix(x.topRows(x.rows() - 1));
  std::vector<MddMatrix> out;
  out.reserve(static_cast<std::size_t>(max_lag));
  for (int j = 1; j <= max_lag; ++j) {
    const Eigen::Index m = x.rows() - j;
    out.push_back(MddMatrix{divergence_from_distances(x.bottomRows(m), dist.topLeftCorner(m, m)),
                            LagSpec{LagSpec::Kind::single, j}, static_cast<int>(x.rows())});
  }
  return out;
}

std::vector<MddMatrix> cumulative_sums(const std::vector<MddMatrix>& per_lag) {
  std::vector<MddMatrix> out;
  out.reserve(per_lag.size());
  for (std::size_t k = 0; k < per_lag.size(); ++k) {
    MddMatrix g = per_lag[k];
    if (k > 0) g.values += out.back().values;
    g.lag_spec = LagSpec{LagSpec::Kind::cumulative, static_cast<int>(k + 1)};
    out.push_back(std::move(g));
  }
  return out;
}

MddMatrix cumulative_mddm(const Eigen::Ref<const Eigen::MatrixXd>& x, int k0) {
  if (k0 < 1) throw InputError("k0 must be >= 1");
  return cumulative_sums(mddm_by_lag(x, k0)).back();
}

EigenSystem eigen_sym(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw InputError("eigen_sym: matrix is not square");
  const double scale = m.norm();
  if ((m - m.transpose()).norm() > 1e-10 * std::max(scale, 1e-300)) {
    throw InputError("eigen_sym: matrix is not symmetric");
  }
  EigenSystem out;
  if (scale == 0.0) {
    out.eigenvalues = Eigen::VectorXd::Zero(n);
    out.eigenvectors = Eigen::MatrixXd::Identity(n, n);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericError("eigen_sym: eigensolver did not converge");
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < n; ++c) {
    auto v = out.eigenvectors.col(c);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v[i]) > best) {
        best = std::abs(v[i]);
        arg = i;
      }
    }
    if (v[arg] < 0.0) v = -v;
  }
  return out;
}

Eigen::VectorXd clamp_psd(const Eigen::VectorXd& eigenvalues) {
  Eigen::VectorXd out = eigenvalues;
  if (out.size() == 0) return out;
  const double tol = 1e-8 * std::max(out.maxCoeff(), 1.0);
  for (auto& v : out) {
    if (v >= 0.0) continue;
    if (v >= -tol) {
      v = 0.0;
    } else {
      throw NumericError("matrix is not positive semidefinite (eigenvalue " + csv::format_double(v) + ")");
    }
  }
  return out;
}

void write_mddm_csv(std::ostream& out, const MddMatrix& m) {
  out << "# lag_spec=" << m.lag_spec.label() << ",T=" << m.sample_len << '\n';
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      if (c > 0) out << ',';
      out << csv::format_double(m.values(r, c));
    }
    out << '\n';
  }
}

}  // namespace fmmde
