#pragma once

// Distance kernels behind the martingale difference divergence estimators.
//
// Every kernel exists twice: `reference` is the plain serial loop nest kept
// for testing, `fast` is the OpenMP/BLAS-3 version used by the library.
// Both compute
//
//   distance_matrix(z)(h, l)          = |z_h - z_l|          (rows of z)
//   distance_form(u, dist)            = sum_{h,l} dist(h,l) u_h u_l'
//   univariate_distance_form(u, z)    = sum_{h,l} u_h u_l |z_h - z_l|
//
// `fast` results agree with `reference` to rounding; they are not bitwise
// identical.

#include <Eigen/Dense>
#include <span>

namespace fmmde::kernels {

namespace reference {

Eigen::MatrixXd distance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& z);
Eigen::MatrixXd distance_form(const Eigen::Ref<const Eigen::MatrixXd>& u,
                              const Eigen::Ref<const Eigen::MatrixXd>& dist);
double univariate_distance_form(std::span<const double> u, std::span<const double> z);

}  // namespace reference

namespace fast {

Eigen::MatrixXd distance_matrix(const Eigen::Ref<const Eigen::MatrixXd>& z);
/// `dist` must be symmetric; the result is exactly symmetric.
Eigen::MatrixXd distance_form(const Eigen::Ref<const Eigen::MatrixXd>& u,
                              const Eigen::Ref<const Eigen::MatrixXd>& dist);
/// O(m log m) via sorting on z and prefix sums.
double univariate_distance_form(std::span<const double> u, std::span<const double> z);

}  // namespace fast

}  // namespace fmmde::kernels
