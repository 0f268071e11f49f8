#include "cfair/linear_model.hpp"

#include <cmath>

namespace cfair {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

}  // namespace

LinearModel fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const LogisticConfig& cfg) {
  const long n = x.rows(), d = x.cols();
  LinearModel m;
  m.weights = Eigen::VectorXd::Zero(d);

  bool has0 = false, has1 = false;
  for (int v : y) (v == 1 ? has1 : has0) = true;
  if (!has0 || !has1) {
    m.constant = true;
    m.constant_label = has1 ? 1 : 0;
    return m;
  }

  Eigen::VectorXd s(n);
  for (long i = 0; i < n; ++i) s(i) = y[static_cast<size_t>(i)] == 1 ? 1.0 : -1.0;

  // Hessian bound: (1/4n)·trace(X̃ᵀX̃) + λ with the bias column appended.
  const double lipschitz =
      (x.squaredNorm() + static_cast<double>(n)) / (4.0 * static_cast<double>(n)) + cfg.lambda;
  const double step = 1.0 / lipschitz;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  Eigen::VectorXd z(n), g(n);
  for (int it = 0; it < cfg.iterations; ++it) {
    z = x * w;
    z.array() += b;
    // g_i = -s_i * sigmoid(-s_i z_i)
    for (long i = 0; i < n; ++i) g(i) = -s(i) / (1.0 + std::exp(s(i) * z(i)));
    Eigen::VectorXd grad_w = x.transpose() * g / static_cast<double>(n) + cfg.lambda * w;
    const double grad_b = g.sum() / static_cast<double>(n);
    w -= step * grad_w;
    b -= step * grad_b;
  }
  m.weights = w;
  m.bias = b;
  return m;
}

double logistic_loss(const LinearModel& m, const Eigen::MatrixXd& x,
                     const std::vector<int>& y, double lambda) {
  const long n = x.rows();
  double loss = 0.0;
  for (long i = 0; i < n; ++i) {
    const double s = y[static_cast<size_t>(i)] == 1 ? 1.0 : -1.0;
    loss += softplus(-s * (x.row(i).dot(m.weights) + m.bias));
  }
  return loss / static_cast<double>(n) + 0.5 * lambda * m.weights.squaredNorm();
}

}  // namespace cfair
