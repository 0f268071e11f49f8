#include "cfair/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cfair {

namespace {

double gini(long c0, long c1) {
  const long n = c0 + c1;
  if (n == 0) return 0.0;
  const double p0 = static_cast<double>(c0) / static_cast<double>(n);
  const double p1 = static_cast<double>(c1) / static_cast<double>(n);
  return 1.0 - p0 * p0 - p1 * p1;
}

int majority_label(long c0, long c1) { return c1 > c0 ? 1 : 0; }

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = -1.0;
};

}  // namespace

std::optional<LearnerId> learner_from_name(const std::string& name) {
  for (size_t i = 0; i < kLearnerNames.size(); ++i) {
    if (name == kLearnerNames[i]) return static_cast<LearnerId>(i);
  }
  return std::nullopt;
}

int DecisionTree::predict(const Eigen::RowVectorXd& x) const {
  int node = 0;
  while (!nodes_[static_cast<size_t>(node)].leaf()) {
    const Node& nd = nodes_[static_cast<size_t>(node)];
    node = x(nd.feature) <= nd.threshold ? nd.left : nd.right;
  }
  return nodes_[static_cast<size_t>(node)].label;
}

DecisionTree fit_tree(const Eigen::MatrixXd& X, const std::vector<int>& y) {
  DecisionTree tree;
  if (X.rows() == 0) {
    tree.nodes_.push_back({});
    return tree;
  }
  struct Job {
    int node;
    std::vector<int> rows;
  };
  std::vector<int> all(static_cast<size_t>(X.rows()));
  std::iota(all.begin(), all.end(), 0);
  tree.nodes_.push_back({});
  std::vector<Job> stack;
  stack.push_back({0, std::move(all)});

  std::vector<std::pair<double, int>> sorted;  // (value, label), reused per feature
  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();
    long c0 = 0, c1 = 0;
    for (int r : job.rows) (y[static_cast<size_t>(r)] == 0 ? c0 : c1)++;
    DecisionTree::Node& node = tree.nodes_[static_cast<size_t>(job.node)];
    node.label = majority_label(c0, c1);
    if (c0 == 0 || c1 == 0) continue;  // pure leaf

    const double parent_imp = gini(c0, c1);
    const double total = static_cast<double>(job.rows.size());
    SplitChoice best;
    for (int f = 0; f < X.cols(); ++f) {
      sorted.clear();
      sorted.reserve(job.rows.size());
      for (int r : job.rows) sorted.emplace_back(X(r, f), y[static_cast<size_t>(r)]);
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      long l0 = 0, l1 = 0;
      for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        (sorted[i].second == 0 ? l0 : l1)++;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double thr = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
        const double left_n = static_cast<double>(i + 1);
        const double right_n = total - left_n;
        const double wimp =
            (left_n * gini(l0, l1) + right_n * gini(c0 - l0, c1 - l1)) / total;
        const double gain = parent_imp - wimp;
        if (gain > best.gain) {
          best = {true, f, thr, gain};
        }
      }
    }
    if (!best.found) continue;  // all rows identical across features: majority leaf

    std::vector<int> left_rows, right_rows;
    for (int r : job.rows)
      (X(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
    const int li = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back({});
    tree.nodes_.push_back({});
    DecisionTree::Node& parent = tree.nodes_[static_cast<size_t>(job.node)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = li;
    parent.right = li + 1;
    stack.push_back({li + 1, std::move(right_rows)});
    stack.push_back({li, std::move(left_rows)});
  }
  return tree;
}

KnnModel fit_knn(const Eigen::MatrixXd& X, const std::vector<int>& y, int k) {
  KnnModel model;
  model.train = X;
  model.labels = y;
  model.k = k;
  if (k > X.rows()) {
    model.k = static_cast<int>(X.rows());
    model.clamped = true;
  }
  return model;
}

int KnnModel::predict(const Eigen::RowVectorXd& x) const {
  const Eigen::Index n = train.rows();
  std::vector<std::pair<double, Eigen::Index>> order(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = {(train.row(i) - x).norm(), i};
  const size_t kk = static_cast<size_t>(std::min<Eigen::Index>(k, n));
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(kk), order.end());
  int votes1 = 0;
  for (size_t i = 0; i < kk; ++i)
    votes1 += labels[static_cast<size_t>(order[i].second)] == 1 ? 1 : 0;
  const int votes0 = static_cast<int>(kk) - votes1;
  if (votes1 != votes0) return votes1 > votes0 ? 1 : 0;
  return labels[static_cast<size_t>(order[0].second)];
}

CvResult run_cv(const TabularDataset& ds, LearnerId learner, const CvConfig& cfg) {
  ds.validate();
  if (cfg.k_folds < 2) throw DataError("k_folds must be at least 2");
  const FoldAssignment folds = stratified_folds(ds, cfg.k_folds, cfg.seed);

  const Eigen::Index d = ds.features.cols();
  const Eigen::Index dd = d + (cfg.include_protected ? 1 : 0);
  Eigen::MatrixXd design(ds.rows(), dd);
  design.leftCols(d) = ds.features;
  if (cfg.include_protected) {
    for (Eigen::Index i = 0; i < ds.rows(); ++i)
      design(i, d) = static_cast<double>(ds.group[static_cast<size_t>(i)]);
  }

  CvResult result;
  for (int f = 0; f < cfg.k_folds; ++f) {
    std::vector<int> train_rows, test_rows;
    for (int i = 0; i < static_cast<int>(ds.rows()); ++i)
      (folds.fold_of[static_cast<size_t>(i)] == f ? test_rows : train_rows).push_back(i);
    if (train_rows.empty() || test_rows.empty())
      throw DataError("cross validation fold is empty");

    Eigen::MatrixXd train_x(static_cast<Eigen::Index>(train_rows.size()), dd);
    std::vector<int> train_y(train_rows.size());
    for (size_t i = 0; i < train_rows.size(); ++i) {
      train_x.row(static_cast<Eigen::Index>(i)) = design.row(train_rows[i]);
      train_y[i] = ds.target[static_cast<size_t>(train_rows[i])];
    }
    const Scaler scaler = fit_scaler(train_x);
    const Eigen::MatrixXd train_s = scaler.apply(train_x);

    Eigen::MatrixXd test_x(static_cast<Eigen::Index>(test_rows.size()), dd);
    for (size_t i = 0; i < test_rows.size(); ++i)
      test_x.row(static_cast<Eigen::Index>(i)) = design.row(test_rows[i]);
    const Eigen::MatrixXd test_s = scaler.apply(test_x);

    FoldPrediction pred;
    pred.test_rows = test_rows;
    pred.y_true.resize(test_rows.size());
    pred.y_pred.resize(test_rows.size());
    pred.group.resize(test_rows.size());
    for (size_t i = 0; i < test_rows.size(); ++i) {
      pred.y_true[i] = ds.target[static_cast<size_t>(test_rows[i])];
      pred.group[i] = ds.group[static_cast<size_t>(test_rows[i])];
    }

    switch (learner) {
      case LearnerId::LR: {
        const LinearModel m = fit_logistic(train_s, train_y, LogisticConfig{});
        for (size_t i = 0; i < test_rows.size(); ++i)
          pred.y_pred[i] = m.predict(test_s.row(static_cast<Eigen::Index>(i)));
        break;
      }
      case LearnerId::DT: {
        const DecisionTree tree = fit_tree(train_s, train_y);
        for (size_t i = 0; i < test_rows.size(); ++i)
          pred.y_pred[i] = tree.predict(test_s.row(static_cast<Eigen::Index>(i)));
        break;
      }
      case LearnerId::KN: {
        const KnnModel knn = fit_knn(train_s, train_y, cfg.knn_k);
        result.knn_clamped = result.knn_clamped || knn.clamped;
        for (size_t i = 0; i < test_rows.size(); ++i)
          pred.y_pred[i] = knn.predict(test_s.row(static_cast<Eigen::Index>(i)));
        break;
      }
    }
    result.folds.push_back(std::move(pred));
  }
  return result;
}

}  // namespace cfair
