#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fmmde/date.hpp"

namespace fmmde {

enum class FactorMethod { fmmde, sw };

struct FactorSource {
  FactorMethod method = FactorMethod::fmmde;
  int k0 = 0;  // FMMDE only

  [[nodiscard]] std::string label() const;
};

/// Orthonormal basis M = [Lambda, B]; the first r columns span the factor space.
struct FactorBasis {
  Eigen::MatrixXd basis;
  int r = 0;
  FactorSource source;
  Eigen::VectorXd eigenvalues;  // descending

  [[nodiscard]] auto loadings() const { return basis.leftCols(r); }
};

struct FactorSeries {
  Eigen::MatrixXd values;  // T x r
  FactorSource source;
  std::vector<YearMonth> dates;  // optional; empty when not dated
};

/// Eigenvectors of Gamma_k0 with every column kept (r = n).
FactorBasis fmmde_basis(const Eigen::Ref<const Eigen::MatrixXd>& x, int k0);

/// FMMDE basis plus the unscaled projection F_t = Lambda' x_t over all T rows.
std::pair<FactorBasis, FactorSeries> extract_fmmde(const Eigen::Ref<const Eigen::MatrixXd>& x, int k0, int r);

/// Principal components of S = X'X / T.
struct PcaDecomposition {
  Eigen::VectorXd eigenvalues;  // descending, clamped at zero
  Eigen::MatrixXd eigenvectors;
};
PcaDecomposition sw_pca(const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Stock-Watson factors F_t = D_r^{-1} V_r' x_t (unit sample second moment).
FactorSeries extract_sw(const Eigen::Ref<const Eigen::MatrixXd>& x, int r);
FactorSeries extract_sw(const Eigen::Ref<const Eigen::MatrixXd>& x, const PcaDecomposition& pca, int r);

/// argmin_{1<=i<=R} lambda_{i+1}/lambda_i, smallest index on ties; ratios
/// with lambda_i = 0 are skipped.
int eigenvalue_ratio_r(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, int R);

/// Default search bound min(15, n - 1).
int default_ratio_bound(int n);

/// Bai-Ng IC_p2 over r = 1..rmax (0 is not searched).
int bai_ng_icp2(const Eigen::Ref<const Eigen::MatrixXd>& x, int rmax);
int bai_ng_icp2(const PcaDecomposition& pca, int T, int rmax);

void write_factor_csv(std::ostream& out, const FactorSeries& factors);

}  // namespace fmmde
