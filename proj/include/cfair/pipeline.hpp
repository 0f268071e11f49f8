#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cfair/audit.hpp"
#include "cfair/mds.hpp"
#include "cfair/rules.hpp"
#include "cfair/synthgen.hpp"

namespace cfair {

/// Resolved options for one command invocation. The semantic fields (the
/// ones that change results, not where they are written or how many threads
/// compute them) feed the config hash embedded in every output file.
struct RunConfig {
  long n = 5000;
  uint64_t seed = 42;
  int k_folds = 10;
  int knn_k = 10;
  double min_support = 0.1;
  double min_lift = 1.0;
  double cmd_threshold = 0.1;
  double fair_band = 0.1;
  bool include_protected = true;  // protected attribute visible to the learners
  ScmConfig scm;

  std::string out_dir = ".";
  int jobs = 1;
  bool strict = false;
  bool save_folds = false;

  std::string config_hash() const;
};

struct AuditInput {
  std::string file;
  CsvMapping mapping;
  std::string dataset_id;
  std::string scenario_id;     // empty when not from the catalog
  std::string parameter_name;  // empty when not from the catalog
  std::optional<double> parameter_value;
  std::optional<uint64_t> seed;
};

/// Flattened audit row as stored in corpus.csv (one line per dataset:
/// 14 CMD columns then the nine fairness columns SP_LR ... PP_KN).
struct CorpusRow {
  std::string dataset_id;
  std::string scenario_id;
  std::string parameter_name;
  std::optional<double> parameter_value;
  std::optional<uint64_t> seed;
  std::array<std::optional<double>, kMetricCount> cmd;
  std::array<std::array<std::optional<double>, kFairnessCount>, kLearnerCount> fairness;
};

struct CommandResult {
  int warnings = 0;
};

/// Complexity profile plus three-learner fairness report for one dataset.
/// The audit seed drives both the metric interpolants and the fold split.
AuditRecord audit_dataset(const TabularDataset& ds, const RunConfig& cfg,
                          const std::string& dataset_id, uint64_t audit_seed);

CommandResult run_generate(const RunConfig& cfg);
CommandResult run_audit(const RunConfig& cfg, const std::vector<AuditInput>& inputs,
                        bool rewrite_corpus);
CommandResult run_mine(const RunConfig& cfg, const std::string& corpus_path);
CommandResult run_evaluate(const RunConfig& cfg, const std::string& rules_path,
                           const std::string& corpus_path);
CommandResult run_embed(const RunConfig& cfg, const std::string& corpus_path);

/// Reads a generate manifest and resolves the audit inputs it describes
/// (file paths relative to the manifest's directory).
std::vector<AuditInput> inputs_from_manifest(const std::string& manifest_path);

CorpusRow corpus_row_from_audit(const AuditRecord& record);
std::vector<CorpusRow> load_corpus(const std::string& path);
std::vector<Transaction> corpus_transactions(const std::vector<CorpusRow>& rows,
                                             const ItemizeConfig& cfg, long* undefined_values);

std::vector<AssociationRule> load_rules_json(const std::string& path);

void save_fold_predictions(const CvResult& cv, const std::string& path,
                           const std::string& comment = "");

/// Derives the per-dataset audit seed from the run seed and the dataset id,
/// so results do not depend on audit order or parallel schedule.
uint64_t audit_seed_for(uint64_t run_seed, const std::string& dataset_id);

}  // namespace cfair
