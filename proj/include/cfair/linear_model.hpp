#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cfair {

struct LogisticConfig {
  double lambda = 1e-4;  // L2 penalty on the weights (bias unpenalized)
  int iterations = 1000;
};

/// Linear classifier with a fixed, fully deterministic training recipe:
/// zero initialization, full-batch gradient descent for a fixed iteration
/// count, step size 1/L with L an upper bound on the Lipschitz constant of
/// the regularized logistic loss gradient. Identical inputs give identical
/// weights on every run.
struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  bool constant = false;  // single-class training data
  int constant_label = 0;

  double score(const Eigen::RowVectorXd& x) const {
    return constant ? (constant_label == 1 ? 1.0 : -1.0) : x.dot(weights) + bias;
  }
  int predict(const Eigen::RowVectorXd& x) const { return score(x) >= 0.0 ? 1 : 0; }
};

LinearModel fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const LogisticConfig& cfg = {});

/// Mean regularized logistic loss of a model on (x, y); used by tests to
/// check the descent is monotone.
double logistic_loss(const LinearModel& m, const Eigen::MatrixXd& x,
                     const std::vector<int>& y, double lambda = 1e-4);

}  // namespace cfair
