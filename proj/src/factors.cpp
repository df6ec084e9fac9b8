#include "fmmde/factors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "fmmde/csv.hpp"
#include "fmmde/error.hpp"
#include "fmmde/mddm.hpp"

namespace fmmde {

std::string FactorSource::label() const {
  return method == FactorMethod::sw ? std::string("SW") : "FMMDE(k0=" + std::to_string(k0) + ")";
}

FactorBasis fmmde_basis(const Eigen::Ref<const Eigen::MatrixXd>& x, int k0) {
  const MddMatrix gamma = cumulative_mddm(x, k0);
  EigenSystem es = eigen_sym(gamma);
  return FactorBasis{std::move(es.eigenvectors), static_cast<int>(x.cols()),
                     FactorSource{FactorMethod::fmmde, k0}, clamp_psd(es.eigenvalues)};
}

std::pair<FactorBasis, FactorSeries> extract_fmmde(const Eigen::Ref<const Eigen::MatrixXd>& x, int k0, int r) {
  if (r < 1 || r > x.cols()) throw InputError("r must be in 1..n");
  FactorBasis basis = fmmde_basis(x, k0);
  basis.r = r;
  FactorSeries series{x * basis.loadings(), basis.source, {}};
  return {std::move(basis), std::move(series)};
}

PcaDecomposition sw_pca(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  if (x.rows() < 2) throw InputError("principal components need T >= 2");
  const Eigen::MatrixXd s = (x.transpose() * x) / static_cast<double>(x.rows());
  EigenSystem es = eigen_sym(0.5 * (s + s.transpose()));
  return PcaDecomposition{es.eigenvalues.cwiseMax(0.0), std::move(es.eigenvectors)};
}

FactorSeries extract_sw(const Eigen::Ref<const Eigen::MatrixXd>& x, const PcaDecomposition& pca, int r) {
  if (r < 1 || r > x.cols()) throw InputError("r must be in 1..n");
  for (int i = 0; i < r; ++i) {
    if (pca.eigenvalues[i] <= 1e-12) throw NumericError("rank deficient panel: fewer than r nonzero eigenvalues");
  }
  const Eigen::VectorXd inv_d = pca.eigenvalues.head(r).cwiseSqrt().cwiseInverse();
  return FactorSeries{(x * pca.eigenvectors.leftCols(r)) * inv_d.asDiagonal(), FactorSource{FactorMethod::sw, 0}, {}};
}

FactorSeries extract_sw(const Eigen::Ref<const Eigen::MatrixXd>& x, int r) {
  return extract_sw(x, sw_pca(x), r);
}

int eigenvalue_ratio_r(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, int R) {
  const auto n = eigenvalues.size();
  if (R < 1 || R > n - 1) throw InputError("eigenvalue ratio bound R must be in 1..n-1");
  if (!(eigenvalues[0] > 0.0)) throw NumericError("all eigenvalues are zero");
  int best = 0;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < R; ++i) {
    if (!(eigenvalues[i] > 0.0)) continue;
    const double ratio = eigenvalues[i + 1] / eigenvalues[i];
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = i + 1;
    }
  }
  return best;
}

int default_ratio_bound(int n) { return std::max(1, std::min(15, n - 1)); }

int bai_ng_icp2(const PcaDecomposition& pca, int T, int rmax) {
  const int n = static_cast<int>(pca.eigenvalues.size());
  if (rmax < 1 || rmax > std::min(n, T)) throw InputError("rmax must be in 1..min(n, T)");
  const double nd = n;
  const double td = T;
  const double penalty = (nd + td) / (nd * td) * std::log(std::min(nd, td));
  // V(r) = (nT)^{-1} sum of squared residuals = n^{-1} sum_{i>r} lambda_i
  int best = 1;
  double best_ic = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= rmax; ++r) {
    const double v = pca.eigenvalues.tail(n - r).sum() / nd;
    if (!(v > 0.0)) throw NumericError("rank deficient panel: zero residual variance at r = " + std::to_string(r));
    const double ic = std::log(v) + r * penalty;
    if (ic < best_ic) {
      best_ic = ic;
      best = r;
    }
  }
  return best;
}

int bai_ng_icp2(const Eigen::Ref<const Eigen::MatrixXd>& x, int rmax) {
  return bai_ng_icp2(sw_pca(x), static_cast<int>(x.rows()), rmax);
}

void write_factor_csv(std::ostream& out, const FactorSeries& factors) {
  const bool dated = factors.dates.size() == static_cast<std::size_t>(factors.values.rows());
  out << (dated ? "date" : "t");
  for (Eigen::Index c = 0; c < factors.values.cols(); ++c) out << ",F" << (c + 1);
  out << '\n';
  for (Eigen::Index r = 0; r < factors.values.rows(); ++r) {
    out << (dated ? factors.dates[r].iso() : std::to_string(r + 1));
    for (Eigen::Index c = 0; c < factors.values.cols(); ++c) out << ',' << csv::format_double(factors.values(r, c));
    out << '\n';
  }
}

}  // namespace fmmde
