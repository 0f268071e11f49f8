#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfair/audit.hpp"

namespace cfair {

/// Binarized view of one audit: complexity items (metric names) present
/// when the CMD exceeds the threshold, fairness items (SP_LR ... PP_KN)
/// present when the fold-averaged value falls outside the fair band.
struct Transaction {
  std::string dataset_id;
  std::vector<std::string> items;  // sorted, unique
};

bool is_complexity_item(const std::string& item);
bool is_fairness_item(const std::string& item);
std::string fairness_item_name(FairnessMetric metric, LearnerId learner);

struct ItemizeConfig {
  double cmd_threshold = 0.1;  // strict >
  double fair_band = 0.1;      // item present iff |value| > band
};

struct ItemizeResult {
  std::vector<Transaction> transactions;
  long undefined_values = 0;  // CMD or fairness cells skipped as undefined
};

ItemizeResult itemize(const std::vector<AuditRecord>& corpus, const ItemizeConfig& cfg = {});

struct Itemset {
  std::vector<std::string> items;  // sorted
  long count = 0;
  double support = 0.0;  // count / transaction count
};

/// Level-wise Apriori. Returns every itemset with support >= min_support,
/// sorted by (size asc, items lexicographic).
std::vector<Itemset> apriori(const std::vector<Transaction>& transactions,
                             double min_support = 0.1);

struct AssociationRule {
  std::vector<std::string> antecedent;  // complexity items, sorted
  std::vector<std::string> consequent;  // fairness items, sorted
  double support_antecedent = 0.0;
  double support_consequent = 0.0;
  double support = 0.0;
  double confidence = 0.0;
  double lift = 0.0;
};

/// One rule per frequent itemset that mixes both item kinds: complexity
/// items form the antecedent, fairness items the consequent. Rules with
/// lift <= min_lift are dropped; output sorted by (support desc, lift desc,
/// antecedent, consequent).
std::vector<AssociationRule> generate_rules(const std::vector<Transaction>& transactions,
                                            const std::vector<Itemset>& frequent,
                                            double min_lift = 1.0);

struct RuleEvaluation {
  std::vector<std::string> antecedent;
  std::vector<std::string> consequent;
  double support_antecedent = 0.0;
  double support_consequent = 0.0;
  double support = 0.0;
  std::optional<double> confidence;  // undefined when the antecedent never fires
  std::optional<double> lift;        // additionally undefined on zero consequent support
};

/// Recomputes the support/confidence/lift of fixed rules on a new corpus.
std::vector<RuleEvaluation> evaluate_rules(const std::vector<AssociationRule>& rules,
                                           const std::vector<Transaction>& transactions);

}  // namespace cfair
