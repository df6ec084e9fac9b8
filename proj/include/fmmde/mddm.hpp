#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace fmmde {

/// Which lag(s) a divergence matrix conditions on.
struct LagSpec {
  enum class Kind { single, cumulative };
  Kind kind = Kind::single;
  int value = 1;  // lag j, or cumulative budget k0

  [[nodiscard]] std::string label() const;
};

/// Sample martingale difference divergence matrix; n x n, symmetric PSD.
struct MddMatrix {
  Eigen::MatrixXd values;
  LagSpec lag_spec;
  int sample_len = 0;  // T used
};

/// Eigenpairs sorted by descending eigenvalue. Each eigenvector's entry of
/// largest magnitude is positive (first such entry on ties).
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// |z_r - z_l| for all row pairs.
Eigen::MatrixXd pairwise_distances(const Eigen::Ref<const Eigen::MatrixXd>& z);

/// MDD_T(x_t | z_{t-j})^2 over the T - j retained time points, where the
/// conditioning rows are `z_source` shifted by j. Clamped at zero when the
/// estimate is negative only by rounding.
double mdd_sq(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::MatrixXd>& z_source,
              int lag);

/// MDDM_T(x_t | x_{t-j}).
MddMatrix mddm(const Eigen::Ref<const Eigen::MatrixXd>& x, int lag);

/// MDDM_T(response_t | conditioning_{t-j}); both panels share the time axis.
MddMatrix mddm_conditional(const Eigen::Ref<const Eigen::MatrixXd>& response,
                           const Eigen::Ref<const Eigen::MatrixXd>& conditioning, int lag);

/// MDDM_T(x_t | x_{t-j}) for j = 1..max_lag, sharing one distance matrix.
std::vector<MddMatrix> mddm_by_lag(const Eigen::Ref<const Eigen::MatrixXd>& x, int max_lag);

/// Gamma_k0 = sum_{j=1}^{k0} MDDM_T(x_t | x_{t-j}).
MddMatrix cumulative_mddm(const Eigen::Ref<const Eigen::MatrixXd>& x, int k0);

/// Running sums of `per_lag`: element k is Gamma_{k+1}.
std::vector<MddMatrix> cumulative_sums(const std::vector<MddMatrix>& per_lag);

EigenSystem eigen_sym(const Eigen::Ref<const Eigen::MatrixXd>& m);
inline EigenSystem eigen_sym(const MddMatrix& m) { return eigen_sym(m.values); }

/// Sets eigenvalues in [-1e-8 * max(1, lambda_max), 0) to zero; throws NumericError on
/// anything more negative.
Eigen::VectorXd clamp_psd(const Eigen::VectorXd& eigenvalues);

/// Row-major CSV with a `# lag_spec=...` header line.
void write_mddm_csv(std::ostream& out, const MddMatrix& m);

}  // namespace fmmde
