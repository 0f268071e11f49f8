#include "cfair/fairness.hpp"

#include <cmath>

namespace cfair {

namespace {

/// a/b - c/d as (a*d - c*b) / (b*d), exact in int64 before one division.
std::optional<double> rate_difference(int64_t a, int64_t b, int64_t c, int64_t d) {
  if (b == 0 || d == 0) return std::nullopt;
  return static_cast<double>(a * d - c * b) / static_cast<double>(b * d);
}

FairnessValue summarize(const std::vector<std::optional<double>>& per_fold, double band) {
  FairnessValue out;
  double sum = 0.0;
  for (const auto& v : per_fold) {
    if (v) {
      sum += *v;
      ++out.folds_used;
    }
  }
  if (out.folds_used > 0) {
    out.value = sum / static_cast<double>(out.folds_used);
    out.fair = std::abs(*out.value) <= band;
  }
  return out;
}

}  // namespace

ConfusionPair group_confusion(const FoldPrediction& fold) {
  ConfusionPair pair;
  for (size_t i = 0; i < fold.y_true.size(); ++i) {
    GroupConfusion& c = fold.group[i] == 1 ? pair.priv : pair.unpriv;
    const bool actual = fold.y_true[i] == 1;
    const bool predicted = fold.y_pred[i] == 1;
    if (actual && predicted)
      ++c.tp;
    else if (!actual && predicted)
      ++c.fp;
    else if (actual && !predicted)
      ++c.fn;
    else
      ++c.tn;
  }
  return pair;
}

std::optional<double> statistical_parity(const ConfusionPair& c) {
  return rate_difference(c.unpriv.positives_predicted(), c.unpriv.total(),
                         c.priv.positives_predicted(), c.priv.total());
}

std::optional<double> equal_opportunity(const ConfusionPair& c) {
  return rate_difference(c.unpriv.tp, c.unpriv.positives_actual(), c.priv.tp,
                         c.priv.positives_actual());
}

std::optional<double> predictive_parity(const ConfusionPair& c) {
  return rate_difference(c.unpriv.fp, c.unpriv.positives_predicted(), c.priv.fp,
                         c.priv.positives_predicted());
}

LearnerFairness summarize_folds(const std::vector<ConfusionPair>& folds, double fair_band) {
  std::vector<std::optional<double>> sp, eo, pp;
  sp.reserve(folds.size());
  eo.reserve(folds.size());
  pp.reserve(folds.size());
  for (const ConfusionPair& c : folds) {
    sp.push_back(statistical_parity(c));
    eo.push_back(equal_opportunity(c));
    pp.push_back(predictive_parity(c));
  }
  LearnerFairness out;
  out.values[0] = summarize(sp, fair_band);
  out.values[1] = summarize(eo, fair_band);
  out.values[2] = summarize(pp, fair_band);
  return out;
}

FairnessReport fairness_report(const TabularDataset& ds, uint64_t seed, const FairnessConfig& cfg,
                               std::array<CvResult, kLearnerCount>* cv_out) {
  FairnessReport report;
  for (int l = 0; l < kLearnerCount; ++l) {
    CvConfig cv;
    cv.k_folds = cfg.k_folds;
    cv.knn_k = cfg.knn_k;
    cv.seed = seed;
    cv.include_protected = cfg.include_protected;
    CvResult res = run_cv(ds, static_cast<LearnerId>(l), cv);
    std::vector<ConfusionPair> confusions;
    confusions.reserve(res.folds.size());
    for (const FoldPrediction& f : res.folds) confusions.push_back(group_confusion(f));
    LearnerFairness lf = summarize_folds(confusions, cfg.fair_band);
    lf.knn_clamped = res.knn_clamped;
    report.per_learner[static_cast<size_t>(l)] = lf;
    if (cv_out) (*cv_out)[static_cast<size_t>(l)] = std::move(res);
  }
  return report;
}

}  // namespace cfair
