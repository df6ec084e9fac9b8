#include "fmmde/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fmmde/error.hpp"

namespace fmmde::kernels {

namespace reference {

Eigen::MatrixXd distance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  const Eigen::Index m = z.rows();
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index h = 0; h < m; ++h) {
    for (Eigen::Index l = 0; l < m; ++l) {
      double sq = 0.0;
      for (Eigen::Index k = 0; k < z.cols(); ++k) {
        const double diff = z(h, k) - z(l, k);
        sq += diff * diff;
      }
      d(h, l) = std::sqrt(sq);
    }
  }
  return d;
}

Eigen::MatrixXd distance_form(const Eigen::Ref<const Eigen::MatrixXd>& u,
                              const Eigen::Ref<const Eigen::MatrixXd>& dist) {
  const Eigen::Index m = u.rows();
  const Eigen::Index n = u.cols();
  if (dist.rows() != m || dist.cols() != m) throw NumericError("distance_form: shape mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Eigen::Index h = 0; h < m; ++h) {
    std::fill(w.begin(), w.end(), 0.0);
    for (Eigen::Index l = 0; l < m; ++l) {
      for (Eigen::Index k = 0; k < n; ++k) w[k] += dist(h, l) * u(l, k);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) out(i, k) += u(h, i) * w[k];
    }
  }
  return out;
}

double univariate_distance_form(std::span<const double> u, std::span<const double> z) {
  if (u.size() != z.size()) throw NumericError("univariate_distance_form: length mismatch");
  double total = 0.0;
  for (std::size_t h = 0; h < u.size(); ++h) {
    for (std::size_t l = 0; l < u.size(); ++l) total += u[h] * u[l] * std::abs(z[h] - z[l]);
  }
  return total;
}

}  // namespace reference

namespace fast {

Eigen::MatrixXd distance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  const Eigen::Index m = z.rows();
  // Row-contiguous copy so each observation is a column.
  const Eigen::MatrixXd zt = z.transpose();
  Eigen::MatrixXd d(m, m);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index l = 0; l < m; ++l) {
    d(l, l) = 0.0;
    for (Eigen::Index h = l + 1; h < m; ++h) d(h, l) = (zt.col(h) - zt.col(l)).norm();
  }
  d.triangularView<Eigen::StrictlyUpper>() = d.transpose().eval();
  return d;
}

Eigen::MatrixXd distance_form(const Eigen::Ref<const Eigen::MatrixXd>& u,
                              const Eigen::Ref<const Eigen::MatrixXd>& dist) {
  if (dist.rows() != u.rows() || dist.cols() != u.rows()) {
    throw NumericError("distance_form: shape mismatch");
  }
  const Eigen::MatrixXd du = dist * u;
  Eigen::MatrixXd out = u.transpose() * du;
  return 0.5 * (out + out.transpose());
}

double univariate_distance_form(std::span<const double> u, std::span<const double> z) {
  const std::size_t m = u.size();
  if (z.size() != m) throw NumericError("univariate_distance_form: length mismatch");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  if (m == 0) return 0.0;
  // For z sorted ascending: sum_{h<l} u_h u_l (z_l - z_h), doubled.
  // Shifting z by its minimum keeps the prefix sums small.
  const double z0 = z[order.front()];
  double prefix_u = 0.0;
  double prefix_uz = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = order[k];
    const double zi = z[i] - z0;
    total += u[i] * (zi * prefix_u - prefix_uz);
    prefix_u += u[i];
    prefix_uz += u[i] * zi;
  }
  return 2.0 * total;
}

}  // namespace fast

}  // namespace fmmde::kernels
