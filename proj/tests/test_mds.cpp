#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "cfair/mds.hpp"
#include "cfair/rng.hpp"

using namespace cfair;

namespace {

Eigen::MatrixXd pairwise(const Eigen::MatrixXd& pts) {
  const long m = pts.rows();
  Eigen::MatrixXd d(m, m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) d(i, j) = (pts.row(i) - pts.row(j)).norm();
  return d;
}

}  // namespace

TEST_CASE("three points with 3-4-5 distances embed exactly") {
  // Right triangle in 2-D, lifted to 14 dimensions with zero padding.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 14);
  x(1, 0) = 3.0;   // distance(0,1) = 3
  x(2, 1) = 4.0;   // distance(0,2) = 4, distance(1,2) = 5
  EmbeddingResult r = classical_mds(x);
  REQUIRE(r.coordinates.rows() == 3);
  REQUIRE(r.coordinates.cols() == 2);
  CHECK_FALSE(r.degenerate);
  const Eigen::MatrixXd d = pairwise(r.coordinates);
  CHECK(d(0, 1) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(d(0, 2) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(d(1, 2) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(r.stress < 1e-9);
  CHECK(r.imputed == 0);
}

TEST_CASE("identical vectors collapse to the origin") {
  Eigen::MatrixXd x(4, 14);
  for (long i = 0; i < 4; ++i)
    for (long j = 0; j < 14; ++j) x(i, j) = 0.25 * static_cast<double>(j);
  EmbeddingResult r = classical_mds(x);
  CHECK(r.coordinates.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.degenerate);
}

TEST_CASE("coordinates are centered and eigenvalues descend") {
  Rng rng(12);
  Eigen::MatrixXd x(10, 14);
  for (long i = 0; i < 10; ++i)
    for (long j = 0; j < 14; ++j) x(i, j) = rng.uniform();
  EmbeddingResult r = classical_mds(x);
  CHECK(std::abs(r.coordinates.col(0).mean()) < 1e-9);
  CHECK(std::abs(r.coordinates.col(1).mean()) < 1e-9);
  REQUIRE(r.eigenvalues.size() == 10);
  for (long i = 1; i < 10; ++i) CHECK(r.eigenvalues(i - 1) >= r.eigenvalues(i) - 1e-12);
}

TEST_CASE("sign convention: first sizable coordinate of each axis is positive") {
  Rng rng(34);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd x(8, 14);
    for (long i = 0; i < 8; ++i)
      for (long j = 0; j < 14; ++j) x(i, j) = rng.normal();
    EmbeddingResult r = classical_mds(x);
    for (int axis = 0; axis < 2; ++axis) {
      for (long i = 0; i < 8; ++i) {
        const double v = r.coordinates(i, axis);
        if (std::abs(v) > 1e-9) {
          CHECK(v > 0.0);
          break;
        }
      }
    }
  }
}

TEST_CASE("repeat runs are bit identical") {
  Rng rng(56);
  Eigen::MatrixXd x(12, 14);
  for (long i = 0; i < 12; ++i)
    for (long j = 0; j < 14; ++j) x(i, j) = rng.uniform();
  EmbeddingResult a = classical_mds(x);
  EmbeddingResult b = classical_mds(x);
  CHECK(a.coordinates == b.coordinates);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.stress == b.stress);
}

TEST_CASE("agreement with an independent eigendecomposition") {
  Rng rng(78);
  Eigen::MatrixXd x(10, 14);
  for (long i = 0; i < 10; ++i)
    for (long j = 0; j < 14; ++j) x(i, j) = rng.uniform();
  EmbeddingResult r = classical_mds(x);

  // Independent Torgerson pipeline written against Eigen directly.
  const long m = 10;
  Eigen::MatrixXd d2(m, m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) d2(i, j) = (x.row(i) - x.row(j)).squaredNorm();
  const Eigen::MatrixXd jc =
      Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / m);
  const Eigen::MatrixXd b = -0.5 * jc * d2 * jc;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (b + b.transpose()));
  // top-2 eigenpairs (Eigen returns ascending)
  for (int axis = 0; axis < 2; ++axis) {
    const long idx = m - 1 - axis;
    const double lambda = es.eigenvalues()(idx);
    REQUIRE(lambda > 0.0);
    Eigen::VectorXd col = es.eigenvectors().col(idx) * std::sqrt(lambda);
    // align sign with the library's convention before comparing
    for (long i = 0; i < m; ++i) {
      if (std::abs(col(i)) > 1e-9) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
    for (long i = 0; i < m; ++i)
      CHECK(r.coordinates(i, axis) == doctest::Approx(col(i)).epsilon(1e-6));
  }

  // Embedded distances never exceed the originals (projection property).
  const Eigen::MatrixXd orig = pairwise(x);
  const Eigen::MatrixXd emb = pairwise(r.coordinates);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) CHECK(emb(i, j) <= orig(i, j) + 1e-9);
}

TEST_CASE("NaN cells are imputed to zero and counted") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 14);
  x(1, 0) = 3.0;
  x(2, 1) = 4.0;
  x(3, 2) = 1.0;
  Eigen::MatrixXd with_nan = x;
  with_nan(3, 2) = std::numeric_limits<double>::quiet_NaN();
  with_nan(0, 5) = std::numeric_limits<double>::quiet_NaN();
  EmbeddingResult r = classical_mds(with_nan);
  CHECK(r.imputed == 2);
  Eigen::MatrixXd imputed_input = x;
  imputed_input(3, 2) = 0.0;
  imputed_input(0, 5) = 0.0;
  EmbeddingResult ref = classical_mds(imputed_input);
  CHECK(r.coordinates == ref.coordinates);
}

TEST_CASE("too few rows raise") {
  Eigen::MatrixXd x(2, 14);
  x.setZero();
  CHECK_THROWS_AS(classical_mds(x), DataError);
}

TEST_CASE("collinear input flags a 1-D embedding as degenerate") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(5, 14);
  for (long i = 0; i < 5; ++i) x(i, 3) = static_cast<double>(i);
  EmbeddingResult r = classical_mds(x);
  CHECK(r.degenerate);
  // The single informative axis still reproduces the line's geometry.
  const Eigen::MatrixXd d = pairwise(r.coordinates);
  CHECK(d(0, 4) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(r.coordinates.col(1).cwiseAbs().maxCoeff() == 0.0);
}
