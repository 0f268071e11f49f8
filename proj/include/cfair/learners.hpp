#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfair/dataset.hpp"
#include "cfair/linear_model.hpp"

namespace cfair {

enum class LearnerId { LR, DT, KN };

inline constexpr int kLearnerCount = 3;

inline constexpr std::array<const char*, 3> kLearnerNames = {"LR", "DT", "KN"};

std::optional<LearnerId> learner_from_name(const std::string& name);

/// CART-style binary decision tree: Gini impurity, midpoint thresholds,
/// x <= t goes left. Nodes are split while impure and any split producing
/// two non-empty children exists; ties on gain go to the lowest feature
/// index, then the lowest threshold.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
    bool leaf() const { return left < 0; }
  };

  int predict(const Eigen::RowVectorXd& x) const;
  const std::vector<Node>& nodes() const { return nodes_; }

  friend DecisionTree fit_tree(const Eigen::MatrixXd& X, const std::vector<int>& y);

 private:
  std::vector<Node> nodes_;
};

DecisionTree fit_tree(const Eigen::MatrixXd& X, const std::vector<int>& y);

/// k-nearest-neighbor classifier over the stored training matrix.
/// Neighbors are ordered by (distance, training row index); vote ties go to
/// the label of the nearest neighbor.
struct KnnModel {
  Eigen::MatrixXd train;
  std::vector<int> labels;
  int k = 10;
  bool clamped = false;  // requested k exceeded the training size

  int predict(const Eigen::RowVectorXd& x) const;
};

KnnModel fit_knn(const Eigen::MatrixXd& X, const std::vector<int>& y, int k = 10);

struct FoldPrediction {
  std::vector<int> test_rows;  // original dataset row indices
  std::vector<int> y_true;
  std::vector<int> y_pred;
  std::vector<int> group;  // 1 = privileged
};

struct CvResult {
  std::vector<FoldPrediction> folds;
  bool knn_clamped = false;
};

struct CvConfig {
  int k_folds = 10;
  int knn_k = 10;
  uint64_t seed = 0;
  bool include_protected = true;  // append the protected attribute to the design matrix
};

/// Stratified k-fold cross validation. Scaling is fit on each training
/// fold only; the protected attribute is appended as a model feature when
/// configured (the default), mirroring an audit where the attribute is
/// visible to the model but excluded from complexity profiling.
CvResult run_cv(const TabularDataset& ds, LearnerId learner, const CvConfig& cfg = {});

}  // namespace cfair
