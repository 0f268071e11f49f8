#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfair/pipeline.hpp"

namespace py = pybind11;
using namespace cfair;

namespace {

using Matrix = std::vector<std::vector<double>>;

Eigen::MatrixXd to_eigen(const Matrix& rows, const char* what) {
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  const size_t d = rows[0].size();
  for (const auto& row : rows)
    if (row.size() != d) throw DataError(std::string(what) + ": ragged row lengths");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

TabularDataset make_dataset(const Matrix& features, const std::vector<int>& target,
                            const std::vector<int>& group,
                            std::vector<std::string> feature_names) {
  TabularDataset ds;
  ds.features = to_eigen(features, "features");
  if (feature_names.empty())
    for (long j = 0; j < ds.features.cols(); ++j) feature_names.push_back("f" + std::to_string(j));
  ds.feature_names = std::move(feature_names);
  ds.target = target;
  ds.group = group;
  ds.validate();
  return ds;
}

py::object opt_to_py(const std::optional<double>& v) {
  if (!v) return py::none();
  return py::float_(*v);
}

py::dict spec_to_dict(const ScenarioSpec& spec) {
  py::dict d;
  d["label"] = spec.label();
  d["scenario_id"] = spec.scenario_id;
  d["parameter_name"] = spec.parameter_name;
  d["parameter_value"] = spec.parameter_value;
  d["conditional_on_r"] = spec.conditional_on_r;
  d["variant_index"] = spec.variant_index;
  d["variant_count"] = spec.variant_count;
  d["n"] = spec.n;
  d["seed"] = spec.seed;
  return d;
}

py::dict dataset_to_dict(const TabularDataset& ds) {
  Matrix features(static_cast<size_t>(ds.rows()), std::vector<double>(static_cast<size_t>(ds.cols())));
  for (long i = 0; i < ds.rows(); ++i)
    for (long j = 0; j < ds.cols(); ++j)
      features[static_cast<size_t>(i)][static_cast<size_t>(j)] = ds.features(i, j);
  py::dict d;
  d["features"] = features;
  d["feature_names"] = ds.feature_names;
  d["target"] = ds.target;
  d["group"] = ds.group;
  return d;
}

py::dict profile_to_dict(const ComplexityProfile& profile) {
  py::dict metrics;
  for (int m = 0; m < kMetricCount; ++m) {
    const MetricTriple& t = profile.metrics[static_cast<size_t>(m)];
    py::dict cell;
    cell["priv"] = opt_to_py(t.privileged);
    cell["unpriv"] = opt_to_py(t.unprivileged);
    cell["cmd"] = opt_to_py(t.cmd);
    metrics[kMetricNames[static_cast<size_t>(m)]] = cell;
  }
  py::dict d;
  d["metrics"] = metrics;
  d["degenerate_group"] = profile.degenerate_group;
  return d;
}

py::dict report_to_dict(const FairnessReport& report) {
  py::dict d;
  for (int l = 0; l < kLearnerCount; ++l) {
    py::dict per;
    for (int f = 0; f < kFairnessCount; ++f) {
      const FairnessValue& v = report.at(static_cast<LearnerId>(l), static_cast<FairnessMetric>(f));
      py::dict cell;
      cell["value"] = opt_to_py(v.value);
      cell["fair"] = v.fair;
      cell["folds_used"] = v.folds_used;
      per[kFairnessNames[static_cast<size_t>(f)]] = cell;
    }
    per["knn_clamped"] = report.per_learner[static_cast<size_t>(l)].knn_clamped;
    d[kLearnerNames[static_cast<size_t>(l)]] = per;
  }
  return d;
}

std::vector<Transaction> make_transactions(const std::vector<std::vector<std::string>>& raw) {
  std::vector<Transaction> out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    Transaction t;
    t.dataset_id = std::to_string(i);
    t.items = raw[i];
    std::sort(t.items.begin(), t.items.end());
    t.items.erase(std::unique(t.items.begin(), t.items.end()), t.items.end());
    for (const std::string& item : t.items)
      if (!is_complexity_item(item) && !is_fairness_item(item))
        throw DataError("unknown item: " + item);
    out.push_back(std::move(t));
  }
  return out;
}

py::dict rule_to_dict(const std::vector<std::string>& ante, const std::vector<std::string>& cons,
                      double sup_a, double sup_c, double sup, const std::optional<double>& conf,
                      const std::optional<double>& lift) {
  py::dict d;
  d["antecedent"] = ante;
  d["consequent"] = cons;
  d["sup_a"] = sup_a;
  d["sup_c"] = sup_c;
  d["sup"] = sup;
  d["confidence"] = opt_to_py(conf);
  d["lift"] = opt_to_py(lift);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Group-wise classification-complexity and fairness audit toolkit";
  m.attr("__version__") = "0.1.0";

  py::register_exception<DataError>(m, "DataError");

  m.def("metric_names", [] {
    return std::vector<std::string>(kMetricNames.begin(), kMetricNames.end());
  });
  m.def("learner_names", [] {
    return std::vector<std::string>(kLearnerNames.begin(), kLearnerNames.end());
  });
  m.def("fairness_names", [] {
    return std::vector<std::string>(kFairnessNames.begin(), kFairnessNames.end());
  });

  m.def(
      "enumerate_catalog",
      [](long n, uint64_t seed) {
        py::list out;
        for (const ScenarioSpec& spec : enumerate_catalog(n, seed)) out.append(spec_to_dict(spec));
        return out;
      },
      py::arg("n") = 5000, py::arg("seed") = 42,
      "The 73 catalog scenario specs as dicts.");

  m.def(
      "generate_dataset",
      [](const std::string& label, long n, uint64_t seed) {
        for (const ScenarioSpec& spec : enumerate_catalog(n, seed)) {
          if (spec.label() != label) continue;
          const GenerationResult res = generate_dataset(spec);
          py::dict d = dataset_to_dict(res.dataset);
          d["spec"] = spec_to_dict(spec);
          d["total_rows"] = res.total_rows;
          d["kept_rows"] = res.kept_rows;
          d["total_privileged"] = res.total_privileged;
          d["kept_privileged"] = res.kept_privileged;
          return d;
        }
        throw DataError("unknown catalog label: " + label);
      },
      py::arg("label"), py::arg("n") = 5000, py::arg("seed") = 42,
      "Generate one catalog dataset by label (e.g. 'S1A', 'S1B3').");

  m.def(
      "compute_metric",
      [](const std::string& name, const Matrix& points, const std::vector<int>& labels,
         uint64_t seed) {
        const auto id = metric_from_name(name);
        if (!id) throw DataError("unknown metric: " + name);
        return opt_to_py(compute_metric(*id, to_eigen(points, "points"), labels, seed));
      },
      py::arg("name"), py::arg("points"), py::arg("labels"), py::arg("seed") = 0,
      "One complexity metric on a point set; None when undefined.");

  m.def(
      "compute_profile",
      [](const Matrix& features, const std::vector<int>& target, const std::vector<int>& group,
         uint64_t seed, const std::vector<std::string>& feature_names) {
        const TabularDataset ds = make_dataset(features, target, group, feature_names);
        return profile_to_dict(compute_profile(ds, seed));
      },
      py::arg("features"), py::arg("target"), py::arg("group"), py::arg("seed") = 0,
      py::arg("feature_names") = std::vector<std::string>{},
      "Per-group complexity metrics and their absolute differences (CMD).");

  m.def(
      "fairness_report",
      [](const Matrix& features, const std::vector<int>& target, const std::vector<int>& group,
         uint64_t seed, int k_folds, int knn_k, double fair_band, bool include_protected,
         const std::vector<std::string>& feature_names) {
        const TabularDataset ds = make_dataset(features, target, group, feature_names);
        FairnessConfig fc;
        fc.k_folds = k_folds;
        fc.knn_k = knn_k;
        fc.fair_band = fair_band;
        fc.include_protected = include_protected;
        return report_to_dict(fairness_report(ds, seed, fc));
      },
      py::arg("features"), py::arg("target"), py::arg("group"), py::arg("seed") = 0,
      py::arg("k_folds") = 10, py::arg("knn_k") = 10, py::arg("fair_band") = 0.1,
      py::arg("include_protected") = true,
      py::arg("feature_names") = std::vector<std::string>{},
      "SP/EO/PP for LR, DT and KN under stratified k-fold cross-validation.");

  m.def(
      "load_csv",
      [](const std::string& path, const std::string& target, const std::string& favorable,
         const std::string& protected_column, const std::string& privileged) {
        return dataset_to_dict(
            load_csv(path, CsvMapping{target, favorable, protected_column, privileged}));
      },
      py::arg("path"), py::arg("target") = "Y", py::arg("favorable") = "1",
      py::arg("protected_column") = "A", py::arg("privileged") = "1",
      "Load a headered CSV with a declared target/protected mapping.");

  m.def(
      "audit_csv",
      [](const std::string& path, const std::string& target, const std::string& favorable,
         const std::string& protected_column, const std::string& privileged, uint64_t seed,
         int k_folds, int knn_k, double fair_band, bool include_protected) {
        const TabularDataset ds =
            load_csv(path, CsvMapping{target, favorable, protected_column, privileged});
        RunConfig cfg;
        cfg.seed = seed;
        cfg.k_folds = k_folds;
        cfg.knn_k = knn_k;
        cfg.fair_band = fair_band;
        cfg.include_protected = include_protected;
        const std::string dataset_id = std::filesystem::path(path).stem().string();
        const AuditRecord rec =
            audit_dataset(ds, cfg, dataset_id, audit_seed_for(cfg.seed, dataset_id));
        py::dict d;
        d["dataset_id"] = rec.dataset_id;
        d["complexity"] = profile_to_dict(rec.profile);
        d["fairness"] = report_to_dict(rec.fairness);
        return d;
      },
      py::arg("path"), py::arg("target") = "Y", py::arg("favorable") = "1",
      py::arg("protected_column") = "A", py::arg("privileged") = "1", py::arg("seed") = 42,
      py::arg("k_folds") = 10, py::arg("knn_k") = 10, py::arg("fair_band") = 0.1,
      py::arg("include_protected") = true,
      "Full audit of one CSV: complexity profile plus fairness report.");

  m.def(
      "apriori",
      [](const std::vector<std::vector<std::string>>& transactions, double min_support) {
        py::list out;
        for (const Itemset& is : apriori(make_transactions(transactions), min_support)) {
          py::dict d;
          d["items"] = is.items;
          d["count"] = is.count;
          d["support"] = is.support;
          out.append(d);
        }
        return out;
      },
      py::arg("transactions"), py::arg("min_support") = 0.1,
      "Frequent itemsets of string transactions, sorted by (size, items).");

  m.def(
      "mine_rules",
      [](const std::vector<std::vector<std::string>>& transactions, double min_support,
         double min_lift) {
        const std::vector<Transaction> tx = make_transactions(transactions);
        const std::vector<Itemset> frequent = apriori(tx, min_support);
        py::list out;
        for (const AssociationRule& r : generate_rules(tx, frequent, min_lift))
          out.append(rule_to_dict(r.antecedent, r.consequent, r.support_antecedent,
                                  r.support_consequent, r.support, r.confidence, r.lift));
        return out;
      },
      py::arg("transactions"), py::arg("min_support") = 0.1, py::arg("min_lift") = 1.0,
      "Complexity -> fairness association rules mined from string transactions.");

  m.def(
      "evaluate_rules",
      [](const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& rules,
         const std::vector<std::vector<std::string>>& transactions) {
        std::vector<AssociationRule> fixed;
        for (const auto& [ante, cons] : rules) {
          if (ante.empty() || cons.empty())
            throw DataError("rule with empty antecedent or consequent");
          AssociationRule r;
          r.antecedent = ante;
          r.consequent = cons;
          for (const std::string& item : r.antecedent)
            if (!is_complexity_item(item)) throw DataError("unknown complexity item: " + item);
          for (const std::string& item : r.consequent)
            if (!is_fairness_item(item)) throw DataError("unknown fairness item: " + item);
          std::sort(r.antecedent.begin(), r.antecedent.end());
          std::sort(r.consequent.begin(), r.consequent.end());
          fixed.push_back(std::move(r));
        }
        py::list out;
        for (const RuleEvaluation& ev : evaluate_rules(fixed, make_transactions(transactions)))
          out.append(rule_to_dict(ev.antecedent, ev.consequent, ev.support_antecedent,
                                  ev.support_consequent, ev.support, ev.confidence, ev.lift));
        return out;
      },
      py::arg("rules"), py::arg("transactions"),
      "Re-evaluate fixed (antecedent, consequent) rules on a new corpus.");

  m.def(
      "classical_mds",
      [](const Matrix& vectors) {
        const EmbeddingResult emb = classical_mds(to_eigen(vectors, "vectors"));
        Matrix coords(static_cast<size_t>(emb.coordinates.rows()), std::vector<double>(2));
        for (long i = 0; i < emb.coordinates.rows(); ++i) {
          coords[static_cast<size_t>(i)][0] = emb.coordinates(i, 0);
          coords[static_cast<size_t>(i)][1] = emb.coordinates(i, 1);
        }
        std::vector<double> eigenvalues(emb.eigenvalues.data(),
                                        emb.eigenvalues.data() + emb.eigenvalues.size());
        py::dict d;
        d["coordinates"] = coords;
        d["eigenvalues"] = eigenvalues;
        d["stress"] = emb.stress;
        d["degenerate"] = emb.degenerate;
        d["imputed"] = emb.imputed;
        return d;
      },
      py::arg("vectors"),
      "Classical (Torgerson) 2-D embedding; NaN cells imputed to 0 and counted.");
}
