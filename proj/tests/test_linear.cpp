#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cfair/linear_model.hpp"
#include "cfair/rng.hpp"

using namespace cfair;

namespace {

struct Problem {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Problem separated_blobs(int per_class, uint64_t seed, double gap = 4.0) {
  Rng rng(seed);
  Problem p;
  p.x.resize(2 * per_class, 2);
  p.y.resize(static_cast<size_t>(2 * per_class));
  for (int i = 0; i < per_class; ++i) {
    p.x(i, 0) = rng.normal() - gap / 2;
    p.x(i, 1) = rng.normal();
    p.y[static_cast<size_t>(i)] = 0;
    p.x(per_class + i, 0) = rng.normal() + gap / 2;
    p.x(per_class + i, 1) = rng.normal();
    p.y[static_cast<size_t>(per_class + i)] = 1;
  }
  return p;
}

}  // namespace

TEST_CASE("separable data is classified perfectly") {
  Problem p = separated_blobs(50, 1, 12.0);
  LinearModel m = fit_logistic(p.x, p.y);
  int correct = 0;
  for (long i = 0; i < p.x.rows(); ++i)
    correct += (m.predict(p.x.row(i)) == p.y[static_cast<size_t>(i)]) ? 1 : 0;
  CHECK(correct == p.x.rows());
  CHECK_FALSE(m.constant);
}

TEST_CASE("training is deterministic") {
  Problem p = separated_blobs(40, 3, 1.0);
  LinearModel a = fit_logistic(p.x, p.y);
  LinearModel b = fit_logistic(p.x, p.y);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("flipping the labels negates the separator") {
  Problem p = separated_blobs(30, 5, 1.5);
  std::vector<int> flipped(p.y.size());
  for (size_t i = 0; i < p.y.size(); ++i) flipped[i] = 1 - p.y[i];
  LinearModel m = fit_logistic(p.x, p.y);
  LinearModel f = fit_logistic(p.x, flipped);
  CHECK((m.weights + f.weights).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(m.bias + f.bias) < 1e-9);
}

TEST_CASE("descent decreases the regularized loss") {
  Problem p = separated_blobs(30, 9, 0.5);
  LinearModel early = fit_logistic(p.x, p.y, LogisticConfig{1e-4, 100});
  LinearModel late = fit_logistic(p.x, p.y, LogisticConfig{1e-4, 1000});
  LinearModel zero;
  zero.weights = Eigen::VectorXd::Zero(2);
  const double l0 = logistic_loss(zero, p.x, p.y);
  const double l100 = logistic_loss(early, p.x, p.y);
  const double l1000 = logistic_loss(late, p.x, p.y);
  CHECK(l100 < l0);
  CHECK(l1000 <= l100 + 1e-12);
}

TEST_CASE("rotating the inputs rotates the weights") {
  Problem p = separated_blobs(25, 13, 2.0);
  const double theta = 0.7;
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::MatrixXd xr = p.x * rot.transpose();
  LinearModel m = fit_logistic(p.x, p.y);
  LinearModel mr = fit_logistic(xr, p.y);
  // Scores are invariant: w_r = R w, so w_r . (R x) = w . x.
  const Eigen::VectorXd back = rot.transpose() * mr.weights;
  CHECK((back - m.weights).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(mr.bias - m.bias) < 1e-9);
}

TEST_CASE("single class collapses to a constant model") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  LinearModel m1 = fit_logistic(x, {1, 1, 1});
  CHECK(m1.constant);
  CHECK(m1.predict(x.row(0)) == 1);
  CHECK(m1.score(x.row(1)) == 1.0);
  LinearModel m0 = fit_logistic(x, {0, 0, 0});
  CHECK(m0.constant);
  CHECK(m0.predict(x.row(2)) == 0);
  CHECK(m0.score(x.row(0)) == -1.0);
}

TEST_CASE("regularization shrinks the weights") {
  Problem p = separated_blobs(30, 17);
  LinearModel weak = fit_logistic(p.x, p.y, LogisticConfig{1e-6, 1000});
  LinearModel strong = fit_logistic(p.x, p.y, LogisticConfig{1.0, 1000});
  CHECK(strong.weights.norm() < weak.weights.norm());
}
