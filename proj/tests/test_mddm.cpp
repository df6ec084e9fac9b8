#include <random>
#include <sstream>

#include "doctest.h"
#include "fmmde/error.hpp"
#include "fmmde/mddm.hpp"
#include "oracles/oracles.hpp"

using namespace fmmde;

namespace {

Eigen::MatrixXd gaussian(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = nd(rng);
  return m;
}

// Mildly dependent panel so the divergences are not all near zero.
Eigen::MatrixXd ar_panel(int T, int n, unsigned seed) {
  auto e = gaussian(T, n, seed);
  for (int t = 1; t < T; ++t) e.row(t) += 0.6 * e.row(t - 1).array().tanh().matrix();
  return e;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("pairwise distances") {
  Eigen::MatrixXd z(3, 1);
  z << 0, 3, 4;
  Eigen::MatrixXd expect(3, 3);
  expect << 0, 3, 4, 3, 0, 1, 4, 1, 0;
  CHECK(pairwise_distances(z) == expect);
  CHECK(pairwise_distances(Eigen::MatrixXd::Constant(4, 2, 1.5)).isZero(0));
  Eigen::MatrixXd w(2, 2);
  w << 0, 0, 3, 4;
  CHECK(pairwise_distances(w)(0, 1) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("mdd_sq examples") {
  const auto z = gaussian(30, 3, 1);
  CHECK(mdd_sq(Eigen::VectorXd::Constant(30, 2.0), z, 1) == 0.0);

  Eigen::VectorXd x(4);
  x << 1, 2, 3, 4;
  const double v = mdd_sq(x, x, 1);
  CHECK(v == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(v == doctest::Approx(oracle::mdd_sq_pairs(x, x, 1)).epsilon(1e-13));

  const auto y = gaussian(30, 1, 2).col(0).eval();
  const double base = mdd_sq(y, z, 2);
  CHECK(mdd_sq(y, -3.0 * z, 2) == doctest::Approx(3.0 * base).epsilon(1e-12));
  CHECK(base == doctest::Approx(oracle::mdd_sq_pairs(y, z, 2)).epsilon(1e-11));
  CHECK_THROWS_AS(mdd_sq(x, x, 2), InputError);
  CHECK_THROWS_AS(mdd_sq(x, x, 0), InputError);
}

TEST_CASE("mdd_sq agrees with the double-loop oracle") {
  for (unsigned s = 0; s < 10; ++s) {
    const auto z = ar_panel(25 + 3 * s, 1 + s % 4, 100 + s);
    const Eigen::VectorXd x = z.col(0).array().square();
    const int lag = 1 + s % 3;
    const double got = mdd_sq(x, z, lag);
    const double want = oracle::mdd_sq_pairs(x, z, lag);
    CHECK(got >= 0.0);
    CHECK(std::abs(got - want) <= 1e-10 * std::max(1e-12, std::abs(want)));
  }
}

TEST_CASE("mddm examples") {
  for (unsigned s = 0; s < 5; ++s) {
    const auto x = ar_panel(50, 1, 300 + s);
    const auto m = mddm(x, 1);
    CHECK(m.values.rows() == 1);
    CHECK(std::abs(m.values(0, 0) - mdd_sq(x.col(0), x, 1)) <= 1e-10 * m.values(0, 0));
  }
  Eigen::MatrixXd flat(20, 3);
  for (int t = 0; t < 20; ++t) flat.row(t) << 1.0, -2.0, 0.5;
  CHECK(mddm(flat, 2).values.isZero(0));

  const auto x = ar_panel(60, 4, 17);
  const std::vector<int> perm{2, 0, 3, 1};
  Eigen::MatrixXd xp(60, 4);
  for (int j = 0; j < 4; ++j) xp.col(j) = x.col(perm[j]);
  const auto a = mddm(x, 1).values;
  const auto b = mddm(xp, 1).values;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(b(i, j) - a(perm[i], perm[j])) <= 1e-12 * a.cwiseAbs().maxCoeff());

  const auto m3 = mddm(x, 3);
  CHECK(m3.lag_spec.kind == LagSpec::Kind::single);
  CHECK(m3.lag_spec.value == 3);
  CHECK(m3.sample_len == 60);
  CHECK_THROWS_AS(mddm(x.topRows(4), 2), InputError);
}

TEST_CASE("mddm agrees with the explicit oracle") {
  for (unsigned s = 0; s < 8; ++s) {
    const auto x = ar_panel(30 + 5 * s, 2 + s % 5, 500 + s);
    for (int lag : {1, 2, 4}) {
      CHECK(rel(mddm(x, lag).values, oracle::mddm(x, lag)) < 1e-10);
    }
  }
  const auto resp = gaussian(40, 3, 8);
  const auto cond = ar_panel(40, 5, 9);
  CHECK(rel(mddm_conditional(resp, cond, 2).values, oracle::mddm(resp, cond, 2)) < 1e-10);
}

TEST_CASE("mddm is symmetric and positive semidefinite on random panels") {
  for (unsigned s = 0; s < 100; ++s) {
    const int n = 1 + static_cast<int>(s % 9);
    const int T = 12 + static_cast<int>((s * 7) % 50);
    const auto x = ar_panel(T, n, 1000 + s);
    const auto m = mddm(x, 1 + s % 3).values;
    REQUIRE((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double top = std::max(1.0, es.eigenvalues().maxCoeff());
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-8 * top);
    for (int i = 0; i < n; ++i) {
      const double d = mdd_sq(x.col(i), x, 1 + s % 3);
      REQUIRE(std::abs(m(i, i) - d) <= 1e-10 * std::max(1e-14, d));
    }
  }
}

TEST_CASE("mddm invariances") {
  const auto x = ar_panel(70, 5, 41);
  const auto z = ar_panel(70, 3, 42);
  const auto base = mddm_conditional(x, z, 2).values;

  Eigen::MatrixXd shifted = z;
  shifted.rowwise() += Eigen::RowVector3d(4.0, -1.0, 100.0);
  CHECK(rel(mddm_conditional(x, shifted, 2).values, base) < 1e-10);

  CHECK(rel(mddm_conditional(x, -2.5 * z, 2).values, 2.5 * base) < 1e-12);
  CHECK(rel(mddm_conditional(3.0 * x, z, 2).values, 9.0 * base) < 1e-12);

  Eigen::MatrixXd xs = x;
  xs.rowwise() += Eigen::RowVectorXd::LinSpaced(5, 1, 5);
  CHECK(rel(mddm_conditional(xs, z, 2).values, base) < 1e-10);
}

TEST_CASE("linear map identity") {
  const auto x = ar_panel(80, 6, 77);
  const auto lambda = gaussian(6, 2, 78);
  const Eigen::MatrixXd projected = x * lambda;
  const auto lhs = (lambda.transpose() * mddm(x, 1).values * lambda).eval();
  const auto rhs = mddm_conditional(projected, x, 1).values;
  CHECK(rel(rhs, lhs) < 1e-10);
}

TEST_CASE("cumulative mddm") {
  const auto x = ar_panel(90, 6, 3);
  CHECK(cumulative_mddm(x, 1).values == mddm(x, 1).values);
  const auto g2 = cumulative_mddm(x, 2);
  CHECK(g2.lag_spec.kind == LagSpec::Kind::cumulative);
  CHECK(g2.lag_spec.value == 2);
  CHECK(rel(g2.values, mddm(x, 1).values + mddm(x, 2).values) < 1e-14);

  const auto per_lag = mddm_by_lag(x, 6);
  REQUIRE(per_lag.size() == 6);
  for (int j = 0; j < 6; ++j) CHECK(rel(per_lag[j].values, mddm(x, j + 1).values) < 1e-12);
  const auto sums = cumulative_sums(per_lag);
  CHECK(rel(sums[5].values, cumulative_mddm(x, 6).values) < 1e-12);

  const auto g6 = cumulative_mddm(gaussian(150, 8, 4), 6).values;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g6);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8 * g6.norm());

  double bound = 0.0;
  for (const auto& m : per_lag) bound += Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.values).eigenvalues().maxCoeff();
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sums[5].values).eigenvalues().maxCoeff() <= bound * (1 + 1e-12));
  CHECK_THROWS_AS(cumulative_mddm(x.topRows(8), 6), InputError);
}

TEST_CASE("eigen_sym") {
  const Eigen::Matrix3d d = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto es = eigen_sym(d);
  CHECK(es.eigenvalues == Eigen::Vector3d(3, 2, 1));
  Eigen::Matrix3d perm;
  perm << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  CHECK(es.eigenvectors.isApprox(perm, 1e-15));

  Eigen::Matrix2d pair;
  pair << 2, 1, 1, 2;
  const auto ep = eigen_sym(pair);
  CHECK(ep.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(ep.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(ep.eigenvectors(0, 0) > 0);
  CHECK(ep.eigenvectors(0, 1) > 0);  // tie goes to the first entry

  const auto zero = eigen_sym(Eigen::MatrixXd::Zero(4, 4));
  CHECK(zero.eigenvalues.isZero(0));
  CHECK(zero.eigenvectors == Eigen::MatrixXd::Identity(4, 4));

  const auto g = cumulative_mddm(ar_panel(100, 7, 8), 3).values;
  const auto eg = eigen_sym(g);
  for (int i = 0; i + 1 < 7; ++i) CHECK(eg.eigenvalues[i] >= eg.eigenvalues[i + 1]);
  CHECK((eg.eigenvectors.transpose() * eg.eigenvectors - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXd back = eg.eigenvectors * eg.eigenvalues.asDiagonal() * eg.eigenvectors.transpose();
  CHECK((back - g).norm() <= 1e-8 * g.norm());
  for (int c = 0; c < 7; ++c) {
    Eigen::Index at;
    eg.eigenvectors.col(c).cwiseAbs().maxCoeff(&at);
    CHECK(eg.eigenvectors(at, c) > 0);
  }
  Eigen::Matrix2d asym;
  asym << 1, 2, 0, 1;
  CHECK_THROWS(eigen_sym(asym));
}

TEST_CASE("clamp_psd") {
  Eigen::Vector3d v(2.0, -1e-9, 0.5);
  const auto c = clamp_psd(v);
  CHECK(c[1] == 0.0);
  CHECK(c[0] == 2.0);
  CHECK_THROWS_AS(clamp_psd(Eigen::Vector3d(2.0, 0.5, -1e-3)), NumericError);
}

TEST_CASE("mddm csv") {
  std::ostringstream os;
  write_mddm_csv(os, cumulative_mddm(ar_panel(20, 2, 1), 2));
  const auto text = os.str();
  CHECK(text.rfind("# lag_spec=", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
