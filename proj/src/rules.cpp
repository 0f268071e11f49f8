#include "cfair/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace cfair {

namespace {

std::vector<std::string> fairness_vocabulary() {
  std::vector<std::string> v;
  for (int l = 0; l < kLearnerCount; ++l)
    for (int f = 0; f < kFairnessCount; ++f)
      v.push_back(fairness_item_name(static_cast<FairnessMetric>(f), static_cast<LearnerId>(l)));
  return v;
}

}  // namespace

bool is_complexity_item(const std::string& item) { return metric_from_name(item).has_value(); }

bool is_fairness_item(const std::string& item) {
  static const std::vector<std::string> vocab = fairness_vocabulary();
  return std::find(vocab.begin(), vocab.end(), item) != vocab.end();
}

std::string fairness_item_name(FairnessMetric metric, LearnerId learner) {
  return std::string(kFairnessNames[static_cast<size_t>(metric)]) + "_" +
         kLearnerNames[static_cast<size_t>(learner)];
}

ItemizeResult itemize(const std::vector<AuditRecord>& corpus, const ItemizeConfig& cfg) {
  if (corpus.empty()) throw DataError("empty corpus");
  ItemizeResult result;
  result.transactions.reserve(corpus.size());
  for (const AuditRecord& rec : corpus) {
    Transaction t;
    t.dataset_id = rec.dataset_id;
    for (int m = 0; m < kMetricCount; ++m) {
      const auto& cmd = rec.profile.metrics[static_cast<size_t>(m)].cmd;
      if (!cmd)
        ++result.undefined_values;
      else if (*cmd > cfg.cmd_threshold)
        t.items.emplace_back(kMetricNames[static_cast<size_t>(m)]);
    }
    for (int l = 0; l < kLearnerCount; ++l) {
      for (int f = 0; f < kFairnessCount; ++f) {
        const auto& v =
            rec.fairness.at(static_cast<LearnerId>(l), static_cast<FairnessMetric>(f)).value;
        if (!v)
          ++result.undefined_values;
        else if (std::abs(*v) > cfg.fair_band)
          t.items.push_back(
              fairness_item_name(static_cast<FairnessMetric>(f), static_cast<LearnerId>(l)));
      }
    }
    std::sort(t.items.begin(), t.items.end());
    result.transactions.push_back(std::move(t));
  }
  return result;
}

namespace {

struct Universe {
  std::vector<std::string> items;           // sorted distinct
  std::vector<std::vector<int>> tx;         // per transaction: sorted item ids

  int id_of(const std::string& item) const {
    const auto it = std::lower_bound(items.begin(), items.end(), item);
    if (it == items.end() || *it != item) return -1;
    return static_cast<int>(it - items.begin());
  }
};

Universe build_universe(const std::vector<Transaction>& transactions) {
  Universe u;
  std::set<std::string> distinct;
  for (const Transaction& t : transactions) distinct.insert(t.items.begin(), t.items.end());
  u.items.assign(distinct.begin(), distinct.end());
  u.tx.reserve(transactions.size());
  for (const Transaction& t : transactions) {
    std::vector<int> ids;
    ids.reserve(t.items.size());
    for (const std::string& item : t.items) ids.push_back(u.id_of(item));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    u.tx.push_back(std::move(ids));
  }
  return u;
}

long count_support(const Universe& u, const std::vector<int>& itemset) {
  long cnt = 0;
  for (const auto& t : u.tx)
    if (std::includes(t.begin(), t.end(), itemset.begin(), itemset.end())) ++cnt;
  return cnt;
}

}  // namespace

std::vector<Itemset> apriori(const std::vector<Transaction>& transactions, double min_support) {
  if (!(min_support > 0.0 && min_support <= 1.0))
    throw DataError("min_support must lie in (0, 1]");
  if (transactions.empty()) throw DataError("empty corpus");
  const Universe u = build_universe(transactions);
  const double n = static_cast<double>(transactions.size());

  std::vector<Itemset> out;
  std::vector<std::vector<int>> level;
  for (int i = 0; i < static_cast<int>(u.items.size()); ++i) level.push_back({i});

  while (!level.empty()) {
    std::vector<std::vector<int>> frequent_here;
    std::set<std::vector<int>> frequent_lookup;
    for (const auto& cand : level) {
      const long cnt = count_support(u, cand);
      const double support = static_cast<double>(cnt) / n;
      if (support >= min_support) {
        Itemset is;
        for (int id : cand) is.items.push_back(u.items[static_cast<size_t>(id)]);
        is.count = cnt;
        is.support = support;
        out.push_back(std::move(is));
        frequent_here.push_back(cand);
        frequent_lookup.insert(cand);
      }
    }
    // Join step: pairs sharing all but the last item, then subset pruning.
    std::vector<std::vector<int>> next;
    for (size_t a = 0; a < frequent_here.size(); ++a) {
      for (size_t b = a + 1; b < frequent_here.size(); ++b) {
        const auto& x = frequent_here[a];
        const auto& y = frequent_here[b];
        if (!std::equal(x.begin(), x.end() - 1, y.begin())) continue;
        std::vector<int> cand = x;
        cand.push_back(y.back());
        if (cand[cand.size() - 2] > cand.back()) std::swap(cand[cand.size() - 2], cand.back());
        bool all_frequent = true;
        for (size_t drop = 0; drop + 1 < cand.size() && all_frequent; ++drop) {
          std::vector<int> sub = cand;
          sub.erase(sub.begin() + static_cast<long>(drop));
          all_frequent = frequent_lookup.count(sub) > 0;
        }
        if (all_frequent) next.push_back(std::move(cand));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }

  std::sort(out.begin(), out.end(), [](const Itemset& a, const Itemset& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
  return out;
}

std::vector<AssociationRule> generate_rules(const std::vector<Transaction>& transactions,
                                            const std::vector<Itemset>& frequent,
                                            double min_lift) {
  if (transactions.empty()) throw DataError("empty corpus");
  const Universe u = build_universe(transactions);
  const double n = static_cast<double>(transactions.size());

  std::vector<AssociationRule> rules;
  for (const Itemset& is : frequent) {
    std::vector<std::string> ante, cons;
    bool typed = true;
    for (const std::string& item : is.items) {
      if (is_complexity_item(item))
        ante.push_back(item);
      else if (is_fairness_item(item))
        cons.push_back(item);
      else
        typed = false;
    }
    if (!typed || ante.empty() || cons.empty()) continue;

    auto ids = [&](const std::vector<std::string>& items) {
      std::vector<int> out;
      for (const std::string& item : items) out.push_back(u.id_of(item));
      std::sort(out.begin(), out.end());
      return out;
    };
    const long cnt_a = count_support(u, ids(ante));
    const long cnt_c = count_support(u, ids(cons));
    const long cnt = count_support(u, ids(is.items));

    AssociationRule rule;
    rule.antecedent = ante;
    rule.consequent = cons;
    rule.support_antecedent = static_cast<double>(cnt_a) / n;
    rule.support_consequent = static_cast<double>(cnt_c) / n;
    rule.support = static_cast<double>(cnt) / n;
    rule.confidence = static_cast<double>(cnt) / static_cast<double>(cnt_a);
    rule.lift = static_cast<double>(cnt) * n / (static_cast<double>(cnt_a) * static_cast<double>(cnt_c));
    if (rule.lift > min_lift) rules.push_back(std::move(rule));
  }

  std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    if (a.support != b.support) return a.support > b.support;
    if (a.lift != b.lift) return a.lift > b.lift;
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
  });
  return rules;
}

std::vector<RuleEvaluation> evaluate_rules(const std::vector<AssociationRule>& rules,
                                           const std::vector<Transaction>& transactions) {
  if (transactions.empty()) throw DataError("empty corpus");
  const double n = static_cast<double>(transactions.size());

  auto count_items = [&](const std::vector<std::string>& items) {
    long cnt = 0;
    for (const Transaction& t : transactions) {
      bool all = true;
      for (const std::string& item : items) {
        if (!std::binary_search(t.items.begin(), t.items.end(), item)) {
          all = false;
          break;
        }
      }
      if (all) ++cnt;
    }
    return cnt;
  };

  std::vector<RuleEvaluation> out;
  out.reserve(rules.size());
  for (const AssociationRule& rule : rules) {
    std::vector<std::string> both = rule.antecedent;
    both.insert(both.end(), rule.consequent.begin(), rule.consequent.end());
    const long cnt_a = count_items(rule.antecedent);
    const long cnt_c = count_items(rule.consequent);
    const long cnt = count_items(both);

    RuleEvaluation ev;
    ev.antecedent = rule.antecedent;
    ev.consequent = rule.consequent;
    ev.support_antecedent = static_cast<double>(cnt_a) / n;
    ev.support_consequent = static_cast<double>(cnt_c) / n;
    ev.support = static_cast<double>(cnt) / n;
    if (cnt_a > 0) {
      ev.confidence = static_cast<double>(cnt) / static_cast<double>(cnt_a);
      if (cnt_c > 0)
        ev.lift =
            static_cast<double>(cnt) * n / (static_cast<double>(cnt_a) * static_cast<double>(cnt_c));
    }
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace cfair
