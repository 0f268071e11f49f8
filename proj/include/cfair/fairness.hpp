#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfair/learners.hpp"

namespace cfair {

struct GroupConfusion {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  int64_t total() const { return tp + fp + tn + fn; }
  int64_t positives_predicted() const { return tp + fp; }
  int64_t positives_actual() const { return tp + fn; }
};

struct ConfusionPair {
  GroupConfusion priv;
  GroupConfusion unpriv;
};

ConfusionPair group_confusion(const FoldPrediction& fold);

/// All three metrics are signed differences, unprivileged minus privileged,
/// so negative values indicate outcomes disfavoring the unprivileged group.
/// Each is computed as an exact cross-multiplied rational with a single
/// floating point division.
std::optional<double> statistical_parity(const ConfusionPair& c);
std::optional<double> equal_opportunity(const ConfusionPair& c);  // TPR difference
std::optional<double> predictive_parity(const ConfusionPair& c);  // FDR difference

enum class FairnessMetric { SP, EO, PP };

inline constexpr int kFairnessCount = 3;

inline constexpr std::array<const char*, 3> kFairnessNames = {"SP", "EO", "PP"};

struct FairnessValue {
  std::optional<double> value;  // mean over folds where defined
  int folds_used = 0;
  bool fair = false;  // defined and |value| <= band
};

struct LearnerFairness {
  std::array<FairnessValue, kFairnessCount> values;  // SP, EO, PP
  bool knn_clamped = false;

  const FairnessValue& at(FairnessMetric m) const { return values[static_cast<size_t>(m)]; }
};

/// Per-fold metric values averaged over the folds where they are defined.
LearnerFairness summarize_folds(const std::vector<ConfusionPair>& folds, double fair_band = 0.1);

struct FairnessConfig {
  int k_folds = 10;
  int knn_k = 10;
  double fair_band = 0.1;
  bool include_protected = true;
};

struct FairnessReport {
  std::array<LearnerFairness, kLearnerCount> per_learner;  // LR, DT, KN

  const FairnessValue& at(LearnerId l, FairnessMetric m) const {
    return per_learner[static_cast<size_t>(l)].at(m);
  }
};

/// Runs the 10-fold protocol for all three learners on the same fold split
/// and summarizes SP/EO/PP per learner. When cv_out is non-null the raw
/// out-of-fold predictions are copied there (indexed by LearnerId).
FairnessReport fairness_report(const TabularDataset& ds, uint64_t seed,
                               const FairnessConfig& cfg = {},
                               std::array<CvResult, kLearnerCount>* cv_out = nullptr);

}  // namespace cfair
