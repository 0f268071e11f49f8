#include "cfair/mds.hpp"

#include <cmath>

namespace cfair {

EmbeddingResult classical_mds(const Eigen::MatrixXd& vectors) {
  const Eigen::Index m = vectors.rows();
  if (m < 3) throw DataError("embedding needs at least 3 records");

  EmbeddingResult result;
  Eigen::MatrixXd x = vectors;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (!std::isfinite(x(i, j))) {
        x(i, j) = 0.0;
        ++result.imputed;
      }
    }
  }

  Eigen::MatrixXd d2(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    d2(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double s = (x.row(i) - x.row(j)).squaredNorm();
      d2(i, j) = s;
      d2(j, i) = s;
    }
  }

  const Eigen::MatrixXd j_mat =
      Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  Eigen::MatrixXd b = -0.5 * j_mat * d2 * j_mat;
  b = 0.5 * (b + b.transpose().eval());  // keep the solver on an exactly symmetric input

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) throw DataError("eigendecomposition failed");

  result.eigenvalues = solver.eigenvalues().reverse();
  const double tol = 1e-12 * std::max(1.0, std::abs(result.eigenvalues(0)));

  result.coordinates = Eigen::MatrixXd::Zero(m, 2);
  int positive = 0;
  for (int axis = 0; axis < 2; ++axis) {
    const double lambda = result.eigenvalues(axis);
    if (lambda > tol) {
      ++positive;
      Eigen::VectorXd v = solver.eigenvectors().col(m - 1 - axis);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (std::abs(v(i)) > tol) {
          if (v(i) < 0.0) v = -v;
          break;
        }
      }
      result.coordinates.col(axis) = v * std::sqrt(lambda);
    }
  }
  result.degenerate = positive < 2;

  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double orig = std::sqrt(d2(i, j));
      const double emb = (result.coordinates.row(i) - result.coordinates.row(j)).norm();
      num += (orig - emb) * (orig - emb);
      den += orig * orig;
    }
  }
  result.stress = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return result;
}

}  // namespace cfair
