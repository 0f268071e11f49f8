#pragma once

#include <Eigen/Dense>

#include "cfair/dataset.hpp"

namespace cfair {

struct EmbeddingResult {
  Eigen::MatrixXd coordinates;  // m x 2, column means 0
  Eigen::VectorXd eigenvalues;  // all m, descending
  double stress = 0.0;          // Kruskal stress-1 of the 2-D embedding
  bool degenerate = false;      // fewer than 2 positive eigenvalues
  long imputed = 0;             // NaN input cells replaced by 0
};

/// Classical (Torgerson) MDS of the row vectors under Euclidean distance:
/// double-center -D^2/2, take the top-2 eigenpairs, scale eigenvectors by
/// sqrt(eigenvalue). Axis sign fixed so the first nonzero coordinate of
/// each axis is positive. NaN cells are imputed to 0 and counted.
EmbeddingResult classical_mds(const Eigen::MatrixXd& vectors);

}  // namespace cfair
