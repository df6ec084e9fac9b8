#pragma once

// Deliberately naive recomputations used as independent references.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// Distances |u_k - u_l| double centered explicitly, then paired with raw
// responses: -(1/m^2) sum_{k,l} B_kl v_k v_l'.
inline Eigen::MatrixXd mddm(const Eigen::MatrixXd& response, const Eigen::MatrixXd& conditioning, int lag) {
  const int T = static_cast<int>(response.rows());
  const int m = T - lag;
  const int n = static_cast<int>(response.cols());
  std::vector<std::vector<double>> a(m, std::vector<double>(m));
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      double s = 0.0;
      for (int c = 0; c < conditioning.cols(); ++c) {
        const double d = conditioning(k, c) - conditioning(l, c);
        s += d * d;
      }
      a[k][l] = std::sqrt(s);
    }
  }
  std::vector<double> row(m, 0.0), col(m, 0.0);
  double all = 0.0;
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      row[k] += a[k][l] / m;
      col[l] += a[k][l] / m;
      all += a[k][l] / (double(m) * m);
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
          const double b = a[k][l] - row[k] - col[l] + all;
          s += b * response(k + lag, p) * response(l + lag, q);
        }
      }
      out(p, q) = -s / (double(m) * m);
    }
  }
  return out;
}

inline Eigen::MatrixXd mddm(const Eigen::MatrixXd& x, int lag) { return mddm(x, x, lag); }

inline std::vector<std::vector<double>> double_center(std::vector<std::vector<double>> a) {
  const int m = static_cast<int>(a.size());
  std::vector<double> row(m, 0.0), col(m, 0.0);
  double all = 0.0;
  for (int r = 0; r < m; ++r) {
    for (int l = 0; l < m; ++l) {
      row[r] += a[r][l] / m;
      col[l] += a[r][l] / m;
      all += a[r][l] / (double(m) * m);
    }
  }
  for (int r = 0; r < m; ++r) {
    for (int l = 0; l < m; ++l) a[r][l] = a[r][l] - row[r] - col[l] + all;
  }
  return a;
}

// Scalar form: A from |z_r - z_l|, B from |x_r - x_l|^2 / 2, both double
// centered; (1/m^2) sum A_rl B_rl.
inline double mdd_sq_pairs(const Eigen::VectorXd& x, const Eigen::MatrixXd& z, int lag) {
  const int m = static_cast<int>(x.size()) - lag;
  std::vector<std::vector<double>> a(m, std::vector<double>(m)), b(m, std::vector<double>(m));
  for (int r = 0; r < m; ++r) {
    for (int l = 0; l < m; ++l) {
      a[r][l] = (z.row(r) - z.row(l)).norm();
      const double d = x[r + lag] - x[l + lag];
      b[r][l] = 0.5 * d * d;
    }
  }
  a = double_center(a);
  b = double_center(b);
  double s = 0.0;
  for (int r = 0; r < m; ++r) {
    for (int l = 0; l < m; ++l) s += a[r][l] * b[r][l];
  }
  return s / (double(m) * m);
}

inline double mdd_sq(const Eigen::VectorXd& x, const Eigen::MatrixXd& z, int lag) {
  return mddm(Eigen::MatrixXd(x), z, lag)(0, 0);
}

inline double wang_shao(const Eigen::VectorXd& f, int lags) {
  const int T = static_cast<int>(f.size());
  double s = 0.0;
  for (int j = 1; j <= lags; ++j) {
    const double w = double(T - j + 1) / (double(T) * j * j);
    s += w * std::abs(mdd_sq(f, Eigen::MatrixXd(f), j));
  }
  return T * s;
}

// Normal equations.
inline Eigen::VectorXd ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  return (X.transpose() * X).ldlt().solve(X.transpose() * y);
}

// Order statistics by counting ranks, then linear interpolation at (p/100)(N-1).
inline double percentile(std::vector<double> v, double p) {
  const int n = static_cast<int>(v.size());
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) {
    int rank = 0;
    for (int j = 0; j < n; ++j) {
      if (v[j] < v[i] || (v[j] == v[i] && j < i)) ++rank;
    }
    sorted[rank] = v[i];
  }
  const double pos = p / 100.0 * (n - 1);
  const int lo = static_cast<int>(pos);
  const int hi = std::min(lo + 1, n - 1);
  return sorted[lo] * (1.0 - (pos - lo)) + sorted[hi] * (pos - lo);
}

inline double normal_cdf(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

}  // namespace oracle
