#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfair/dataset.hpp"

namespace cfair {

/// The complexity metrics computed per group, in fixed vector order.
/// Every metric is oriented so that higher values mean a harder
/// classification problem (the class-balance entropy is inverted
/// accordingly).
enum class MetricId {
  F1v,      // class overlap along the Fisher direction
  L1,       // mean boundary distance of linearly misclassified points
  L2,       // linear classifier training error
  L3,       // linear classifier error on same-class interpolants
  N1,       // fraction of points touching a cross-class MST edge
  N2,       // intra/extra class nearest neighbor distance ratio
  N3,       // leave-one-out 1-NN error
  N4,       // 1-NN error on same-class interpolants
  T1,       // fraction of hyperspheres kept after absorption
  LSC,      // local set average cardinality, inverted
  Density,  // sparsity of the epsilon-neighborhood graph
  ClsCoef,  // 1 - mean local clustering coefficient of that graph
  C1,       // inverted entropy of class proportions
  C2,       // imbalance ratio
};

inline constexpr int kMetricCount = 14;

inline constexpr std::array<const char*, kMetricCount> kMetricNames = {
    "F1v", "L1", "L2", "L3", "N1", "N2", "N3", "N4", "T1", "LSC", "density", "cls_coef", "C1", "C2"};

std::optional<MetricId> metric_from_name(const std::string& name);

struct ComplexityConfig {
  double graph_epsilon = 0.15;  // neighborhood threshold on max-normalized distance
};

struct MetricTriple {
  std::optional<double> privileged;
  std::optional<double> unprivileged;
  std::optional<double> cmd;  // |privileged - unprivileged| when both defined
};

struct ComplexityProfile {
  std::array<MetricTriple, kMetricCount> metrics;
  bool degenerate_group = false;  // one of the protected groups is empty

  const MetricTriple& at(MetricId id) const { return metrics[static_cast<size_t>(id)]; }
  MetricTriple& at(MetricId id) { return metrics[static_cast<size_t>(id)]; }
};

/// Computes one metric on a point set (rows already standardized, group
/// constant columns already dropped). Returns nullopt when the value is
/// undefined for the input: fewer than 2 points, or a single class for the
/// metrics that need an enemy point. C1/C2 return 1 on single-class input.
/// The seed drives interpolant generation (L3/N4) and is ignored elsewhere.
std::optional<double> compute_metric(MetricId metric, const Eigen::MatrixXd& points,
                                     const std::vector<int>& labels, uint64_t seed = 0,
                                     const ComplexityConfig& cfg = {});

/// Standardizes the dataset globally, splits it on the protected attribute,
/// drops per-group constant columns and computes all 14 metrics on each
/// group plus their absolute differences.
ComplexityProfile compute_profile(const TabularDataset& ds, uint64_t seed = 0,
                                  const ComplexityConfig& cfg = {});

}  // namespace cfair
