#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cfair/learners.hpp"
#include "cfair/rng.hpp"

using namespace cfair;

namespace {

TabularDataset blob_dataset(int per_class, uint64_t seed, double gap) {
  Rng rng(seed);
  TabularDataset ds;
  const int n = 2 * per_class;
  ds.features.resize(n, 2);
  ds.feature_names = {"f0", "f1"};
  ds.target.resize(static_cast<size_t>(n));
  ds.group.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int cls = i < per_class ? 0 : 1;
    ds.features(i, 0) = rng.normal() + (cls == 1 ? gap / 2 : -gap / 2);
    ds.features(i, 1) = rng.normal();
    ds.target[static_cast<size_t>(i)] = cls;
    ds.group[static_cast<size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  return ds;
}

int tree_internal_nodes(const DecisionTree& t) {
  int cnt = 0;
  for (const auto& nd : t.nodes()) cnt += nd.leaf() ? 0 : 1;
  return cnt;
}

}  // namespace

TEST_CASE("learner names round trip") {
  CHECK(learner_from_name("LR") == LearnerId::LR);
  CHECK(learner_from_name("DT") == LearnerId::DT);
  CHECK(learner_from_name("KN") == LearnerId::KN);
  CHECK_FALSE(learner_from_name("SVM").has_value());
}

TEST_CASE("decision tree solves XOR exactly") {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 0, 1, 1, 0, 1, 1;
  std::vector<int> y = {0, 1, 1, 0};
  DecisionTree t = fit_tree(x, y);
  CHECK(tree_internal_nodes(t) >= 2);
  for (int i = 0; i < 4; ++i) CHECK(t.predict(x.row(i)) == y[static_cast<size_t>(i)]);
}

TEST_CASE("pure input gives a single leaf") {
  Eigen::MatrixXd x(5, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
  DecisionTree t = fit_tree(x, std::vector<int>(5, 1));
  CHECK(t.nodes().size() == 1);
  CHECK(t.nodes()[0].leaf());
  CHECK(t.predict(x.row(2)) == 1);
}

TEST_CASE("root split lands on the midpoint of the straddling values") {
  Eigen::MatrixXd x(20, 1);
  std::vector<int> y(20);
  // class 0 spread over [0, 0.45], class 1 over [0.55, 1].
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = 0.05 * i;  // 0 .. 0.45
    y[static_cast<size_t>(i)] = 0;
    x(10 + i, 0) = 0.55 + 0.05 * i;  // 0.55 .. 1.0
    y[static_cast<size_t>(10 + i)] = 1;
  }
  DecisionTree t = fit_tree(x, y);
  REQUIRE_FALSE(t.nodes()[0].leaf());
  CHECK(t.nodes()[0].feature == 0);
  CHECK(t.nodes()[0].threshold == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("identical feature rows with mixed labels become a majority leaf") {
  Eigen::MatrixXd x(4, 1);
  x << 2, 2, 2, 2;
  DecisionTree t = fit_tree(x, {1, 0, 1, 1});
  CHECK(t.nodes().size() == 1);
  CHECK(t.predict(x.row(0)) == 1);
  // Exact tie predicts 0.
  DecisionTree tie = fit_tree(x, {1, 0, 1, 0});
  CHECK(tie.predict(x.row(0)) == 0);
}

TEST_CASE("tree training is deterministic") {
  TabularDataset ds = blob_dataset(25, 5, 1.0);
  DecisionTree a = fit_tree(ds.features, ds.target);
  DecisionTree b = fit_tree(ds.features, ds.target);
  REQUIRE(a.nodes().size() == b.nodes().size());
  for (size_t i = 0; i < a.nodes().size(); ++i) {
    CHECK(a.nodes()[i].feature == b.nodes()[i].feature);
    CHECK(a.nodes()[i].threshold == b.nodes()[i].threshold);
    CHECK(a.nodes()[i].label == b.nodes()[i].label);
  }
}

TEST_CASE("tree predictions on training rows survive monotone feature maps") {
  TabularDataset ds = blob_dataset(20, 9, 0.6);
  DecisionTree base = fit_tree(ds.features, ds.target);
  Eigen::MatrixXd warped = ds.features;
  for (long i = 0; i < warped.rows(); ++i) {
    warped(i, 0) = std::exp(warped(i, 0));              // strictly increasing
    warped(i, 1) = warped(i, 1) * 3.0 + 1.0;            // affine increasing
  }
  DecisionTree mapped = fit_tree(warped, ds.target);
  for (long i = 0; i < warped.rows(); ++i)
    CHECK(base.predict(ds.features.row(i)) == mapped.predict(warped.row(i)));
}

TEST_CASE("knn unanimous vote") {
  Eigen::MatrixXd x(10, 2);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = 2.0;
  }
  KnnModel m = fit_knn(x, std::vector<int>(10, 1), 10);
  Eigen::RowVectorXd q(2);
  q << 1.0, 2.0;
  CHECK(m.predict(q) == 1);
  CHECK_FALSE(m.clamped);
}

TEST_CASE("knn vote tie falls back to the nearest neighbor") {
  // k=2: one point of each class; the nearer one decides.
  Eigen::MatrixXd x(2, 1);
  x << 1.0, 4.0;
  KnnModel m = fit_knn(x, {1, 0}, 2);
  Eigen::RowVectorXd q(1);
  q << 2.0;  // closer to the class-1 point
  CHECK(m.predict(q) == 1);
  q << 3.5;  // closer to the class-0 point
  CHECK(m.predict(q) == 0);
}

TEST_CASE("knn distance ties resolve by training index") {
  // Two coincident opposite-class points; k=1 must pick the lower index.
  Eigen::MatrixXd x(2, 1);
  x << 5.0, 5.0;
  KnnModel m = fit_knn(x, {1, 0}, 1);
  Eigen::RowVectorXd q(1);
  q << 5.0;
  CHECK(m.predict(q) == 1);
}

TEST_CASE("knn against an exhaustive-scan oracle") {
  Rng rng(303);
  Eigen::MatrixXd x(30, 2);
  std::vector<int> y(30);
  for (int i = 0; i < 30; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y[static_cast<size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  KnnModel m = fit_knn(x, y, 10);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::RowVectorXd q(2);
    q << rng.normal(), rng.normal();
    // oracle: full sort by (distance, index), majority of 10, tie -> nearest
    std::vector<std::pair<double, int>> all;
    for (int i = 0; i < 30; ++i) all.emplace_back((x.row(i) - q).norm(), i);
    std::sort(all.begin(), all.end());
    int v1 = 0;
    for (int i = 0; i < 10; ++i) v1 += y[static_cast<size_t>(all[static_cast<size_t>(i)].second)];
    int expect;
    if (v1 > 5)
      expect = 1;
    else if (v1 < 5)
      expect = 0;
    else
      expect = y[static_cast<size_t>(all[0].second)];
    CHECK(m.predict(q) == expect);
  }
}

TEST_CASE("knn clamps oversized k and flags it") {
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  KnnModel m = fit_knn(x, {0, 0, 1, 1}, 10);
  CHECK(m.clamped);
  CHECK(m.k == 4);
}

TEST_CASE("run_cv covers every row exactly once") {
  TabularDataset ds = blob_dataset(30, 21, 1.5);
  for (LearnerId lid : {LearnerId::LR, LearnerId::DT, LearnerId::KN}) {
    CvResult cv = run_cv(ds, lid, CvConfig{10, 10, 42, true});
    REQUIRE(cv.folds.size() == 10);
    std::set<int> seen;
    for (const auto& fold : cv.folds) {
      REQUIRE(fold.test_rows.size() == fold.y_pred.size());
      REQUIRE(fold.test_rows.size() == fold.y_true.size());
      REQUIRE(fold.test_rows.size() == fold.group.size());
      for (size_t i = 0; i < fold.test_rows.size(); ++i) {
        CHECK(seen.insert(fold.test_rows[i]).second);
        CHECK(fold.y_true[i] == ds.target[static_cast<size_t>(fold.test_rows[i])]);
        CHECK(fold.group[i] == ds.group[static_cast<size_t>(fold.test_rows[i])]);
      }
    }
    CHECK(seen.size() == static_cast<size_t>(ds.rows()));
  }
}

TEST_CASE("run_cv replays identically for the same seed") {
  TabularDataset ds = blob_dataset(20, 33, 0.5);
  for (LearnerId lid : {LearnerId::LR, LearnerId::DT, LearnerId::KN}) {
    CvResult a = run_cv(ds, lid, CvConfig{5, 10, 9, true});
    CvResult b = run_cv(ds, lid, CvConfig{5, 10, 9, true});
    REQUIRE(a.folds.size() == b.folds.size());
    for (size_t f = 0; f < a.folds.size(); ++f) {
      CHECK(a.folds[f].test_rows == b.folds[f].test_rows);
      CHECK(a.folds[f].y_pred == b.folds[f].y_pred);
    }
  }
}

TEST_CASE("run_cv reaches perfect accuracy on well separated blobs") {
  TabularDataset ds = blob_dataset(60, 47, 8.0);
  for (LearnerId lid : {LearnerId::LR, LearnerId::DT, LearnerId::KN}) {
    CvResult cv = run_cv(ds, lid, CvConfig{10, 10, 4, true});
    int correct = 0, total = 0;
    for (const auto& fold : cv.folds)
      for (size_t i = 0; i < fold.y_pred.size(); ++i) {
        correct += fold.y_pred[i] == fold.y_true[i] ? 1 : 0;
        ++total;
      }
    CHECK(correct == total);
  }
}

TEST_CASE("run_cv predictions never leak the held-out rows") {
  // Perturbing a test row's features must not move any other row's
  // prediction in the fold where that row is held out; equivalently the
  // fold model depends only on training rows. We check the stronger
  // deterministic statement: retrain with the held-out row's features
  // replaced by garbage -> same predictions for all other held-out rows in
  // other folds is NOT guaranteed (scaler changes), so restrict to the
  // same fold's other test rows.
  TabularDataset ds = blob_dataset(15, 77, 1.0);
  CvResult base = run_cv(ds, LearnerId::DT, CvConfig{5, 10, 11, true});
  const int victim = base.folds[0].test_rows[0];
  TabularDataset mutated = ds;
  mutated.features(victim, 0) += 1000.0;
  mutated.features(victim, 1) -= 1000.0;
  CvResult moved = run_cv(mutated, LearnerId::DT, CvConfig{5, 10, 11, true});
  // Fold layout only depends on labels and seed, so fold 0 is unchanged.
  REQUIRE(moved.folds[0].test_rows == base.folds[0].test_rows);
  for (size_t i = 1; i < base.folds[0].y_pred.size(); ++i)
    CHECK(moved.folds[0].y_pred[i] == base.folds[0].y_pred[i]);
}

TEST_CASE("run_cv can exclude the protected attribute from the design") {
  // Make the label equal to the protected attribute; with the attribute in
  // the design the model nails it, without it accuracy drops to chance.
  Rng rng(88);
  TabularDataset ds;
  ds.features.resize(100, 1);
  ds.feature_names = {"noise"};
  ds.target.resize(100);
  ds.group.resize(100);
  for (int i = 0; i < 100; ++i) {
    ds.features(i, 0) = rng.normal();
    ds.group[static_cast<size_t>(i)] = i % 2;
    ds.target[static_cast<size_t>(i)] = i % 2;
  }
  CvConfig with{5, 10, 3, true};
  CvConfig without{5, 10, 3, false};
  auto accuracy = [](const CvResult& cv) {
    int correct = 0, total = 0;
    for (const auto& fold : cv.folds)
      for (size_t i = 0; i < fold.y_pred.size(); ++i) {
        correct += fold.y_pred[i] == fold.y_true[i] ? 1 : 0;
        ++total;
      }
    return static_cast<double>(correct) / total;
  };
  CHECK(accuracy(run_cv(ds, LearnerId::LR, with)) == 1.0);
  CHECK(accuracy(run_cv(ds, LearnerId::LR, without)) < 0.75);
}

TEST_CASE("run_cv rejects degenerate fold counts") {
  TabularDataset ds = blob_dataset(10, 3, 1.0);
  CHECK_THROWS_AS(run_cv(ds, LearnerId::LR, CvConfig{1, 10, 0, true}), DataError);
  CHECK_THROWS_AS(run_cv(ds, LearnerId::LR, CvConfig{11, 10, 0, true}), DataError);
}
