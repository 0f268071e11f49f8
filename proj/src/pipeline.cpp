#include "cfair/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cfair/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace cfair {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + tmp);
    out << text;
    out.flush();
    if (!out) throw DataError("write failed: " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename into place: " + path);
}

/// Runs fn(0..count-1) on up to `jobs` threads; the first exception wins.
void parallel_for(long count, int jobs, const std::function<void(long)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const int nthreads = static_cast<int>(std::min<long>(jobs, count));
  threads.reserve(static_cast<size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["k_folds"] = cfg.k_folds;
  j["knn_k"] = cfg.knn_k;
  j["min_support"] = cfg.min_support;
  j["min_lift"] = cfg.min_lift;
  j["cmd_threshold"] = cfg.cmd_threshold;
  j["fair_band"] = cfg.fair_band;
  j["include_protected"] = cfg.include_protected;
  j["scm"] = {{"privileged_rate", cfg.scm.privileged_rate},
              {"q_on_r", cfg.scm.q_on_r},
              {"s_noise", cfg.scm.s_noise},
              {"shift_scale", cfg.scm.shift_scale},
              {"condition_above_median", cfg.scm.condition_above_median}};
  return j;
}

void write_config_sidecar(const RunConfig& cfg, const std::string& command) {
  json j = config_to_json(cfg);
  j["config_hash"] = cfg.config_hash();
  j["command"] = command;
  j["out_dir"] = cfg.out_dir;
  j["jobs"] = cfg.jobs;
  j["strict"] = cfg.strict;
  atomic_write_text((fs::path(cfg.out_dir) / (command + ".config.json")).string(),
                    j.dump(2) + "\n");
}

json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

json audit_to_json(const AuditRecord& rec, const RunConfig& cfg, const std::string& input_file,
                   uint64_t audit_seed, int* warnings) {
  json j;
  j["dataset_id"] = rec.dataset_id;
  j["config_hash"] = cfg.config_hash();
  j["inputs"] = {{"file", input_file}};
  j["audit_seed"] = audit_seed;
  if (!rec.scenario_id.empty()) {
    json s;
    s["scenario_id"] = rec.scenario_id;
    s["parameter_name"] = rec.parameter_name;
    s["parameter_value"] = optional_to_json(rec.parameter_value);
    if (rec.seed)
      s["seed"] = *rec.seed;
    else
      s["seed"] = nullptr;
    j["scenario"] = s;
  }

  long undefined = 0;
  json complexity;
  for (int m = 0; m < kMetricCount; ++m) {
    const MetricTriple& t = rec.profile.metrics[static_cast<size_t>(m)];
    complexity[kMetricNames[static_cast<size_t>(m)]] = {{"priv", optional_to_json(t.privileged)},
                                                        {"unpriv", optional_to_json(t.unprivileged)},
                                                        {"cmd", optional_to_json(t.cmd)}};
    if (!t.cmd) ++undefined;
  }
  j["complexity"] = complexity;

  json fairness = json::array();
  bool knn_clamped = false;
  for (int l = 0; l < kLearnerCount; ++l) {
    const LearnerFairness& lf = rec.fairness.per_learner[static_cast<size_t>(l)];
    knn_clamped = knn_clamped || lf.knn_clamped;
    for (int f = 0; f < kFairnessCount; ++f) {
      const FairnessValue& v = lf.values[static_cast<size_t>(f)];
      fairness.push_back({{"dataset_id", rec.dataset_id},
                          {"learner", kLearnerNames[static_cast<size_t>(l)]},
                          {"metric", kFairnessNames[static_cast<size_t>(f)]},
                          {"value", optional_to_json(v.value)},
                          {"fair", v.fair},
                          {"folds_used", v.folds_used}});
      if (!v.value) ++undefined;
    }
  }
  j["fairness"] = fairness;

  j["warnings"] = {{"degenerate_group", rec.profile.degenerate_group},
                   {"knn_clamped", knn_clamped},
                   {"undefined_values", undefined}};
  if (warnings && (rec.profile.degenerate_group || knn_clamped || undefined > 0)) ++(*warnings);
  return j;
}

const std::array<std::string, 4> kCorpusMetaColumns = {"dataset_id", "scenario_id",
                                                       "parameter_name", "parameter_value"};

std::vector<std::string> corpus_header() {
  std::vector<std::string> h(kCorpusMetaColumns.begin(), kCorpusMetaColumns.end());
  h.push_back("seed");
  for (int m = 0; m < kMetricCount; ++m)
    h.push_back(std::string("cmd_") + kMetricNames[static_cast<size_t>(m)]);
  for (int l = 0; l < kLearnerCount; ++l)
    for (int f = 0; f < kFairnessCount; ++f)
      h.push_back(fairness_item_name(static_cast<FairnessMetric>(f), static_cast<LearnerId>(l)));
  return h;
}

std::string corpus_line(const CorpusRow& row) {
  std::ostringstream os;
  os << row.dataset_id << ',' << row.scenario_id << ',' << row.parameter_name << ',';
  if (row.parameter_value) os << fmt_double(*row.parameter_value);
  os << ',';
  if (row.seed) os << *row.seed;
  for (int m = 0; m < kMetricCount; ++m) {
    os << ',';
    if (row.cmd[static_cast<size_t>(m)]) os << fmt_double(*row.cmd[static_cast<size_t>(m)]);
  }
  for (int l = 0; l < kLearnerCount; ++l) {
    for (int f = 0; f < kFairnessCount; ++f) {
      os << ',';
      const auto& v = row.fairness[static_cast<size_t>(l)][static_cast<size_t>(f)];
      if (v) os << fmt_double(*v);
    }
  }
  return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

std::optional<double> parse_optional_double(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return std::stod(cell);
}

std::string join_items(const std::vector<std::string>& items, const char* sep = " & ") {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string rules_csv_text(const std::vector<RuleEvaluation>& rows, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  os << "Antecedent,Consequent,Sup_A,Sup_C,Sup,Confidence,Lift\n";
  for (const RuleEvaluation& r : rows) {
    os << join_items(r.antecedent) << ',' << join_items(r.consequent) << ','
       << fmt_double(r.support_antecedent) << ',' << fmt_double(r.support_consequent) << ','
       << fmt_double(r.support) << ',';
    if (r.confidence) os << fmt_double(*r.confidence);
    os << ',';
    if (r.lift) os << fmt_double(*r.lift);
    os << '\n';
  }
  return os.str();
}

json rule_eval_to_json(const RuleEvaluation& r) {
  json j;
  j["antecedent"] = r.antecedent;
  j["consequent"] = r.consequent;
  j["sup_a"] = r.support_antecedent;
  j["sup_c"] = r.support_consequent;
  j["sup"] = r.support;
  j["confidence"] = optional_to_json(r.confidence);
  j["lift"] = optional_to_json(r.lift);
  return j;
}

RuleEvaluation eval_from_rule(const AssociationRule& r) {
  RuleEvaluation ev;
  ev.antecedent = r.antecedent;
  ev.consequent = r.consequent;
  ev.support_antecedent = r.support_antecedent;
  ev.support_consequent = r.support_consequent;
  ev.support = r.support;
  ev.confidence = r.confidence;
  ev.lift = r.lift;
  return ev;
}

}  // namespace

std::string RunConfig::config_hash() const {
  std::ostringstream os;
  os << "n=" << n << ";seed=" << seed << ";k_folds=" << k_folds << ";knn_k=" << knn_k
     << ";min_support=" << fmt_double(min_support) << ";min_lift=" << fmt_double(min_lift)
     << ";cmd_threshold=" << fmt_double(cmd_threshold) << ";fair_band=" << fmt_double(fair_band)
     << ";include_protected=" << (include_protected ? 1 : 0)
     << ";privileged_rate=" << fmt_double(scm.privileged_rate)
     << ";q_on_r=" << fmt_double(scm.q_on_r) << ";s_noise=" << fmt_double(scm.s_noise)
     << ";shift_scale=" << fmt_double(scm.shift_scale)
     << ";condition_above_median=" << (scm.condition_above_median ? 1 : 0);
  return hex64(fnv1a64(os.str()));
}

uint64_t audit_seed_for(uint64_t run_seed, const std::string& dataset_id) {
  return mix_seed(run_seed, "audit:" + dataset_id);
}

AuditRecord audit_dataset(const TabularDataset& ds, const RunConfig& cfg,
                          const std::string& dataset_id, uint64_t audit_seed) {
  AuditRecord rec;
  rec.dataset_id = dataset_id;
  rec.profile = compute_profile(ds, mix_seed(audit_seed, "profile"));
  FairnessConfig fc;
  fc.k_folds = cfg.k_folds;
  fc.knn_k = cfg.knn_k;
  fc.fair_band = cfg.fair_band;
  fc.include_protected = cfg.include_protected;
  rec.fairness = fairness_report(ds, mix_seed(audit_seed, "cv"), fc);
  return rec;
}

CommandResult run_generate(const RunConfig& cfg) {
  const std::string hash = cfg.config_hash();
  const fs::path out(cfg.out_dir);
  fs::create_directories(out / "datasets");

  const std::vector<ScenarioSpec> specs = enumerate_catalog(cfg.n, cfg.seed);
  std::vector<GenerationResult> results(specs.size());
  parallel_for(static_cast<long>(specs.size()), cfg.jobs, [&](long i) {
    const ScenarioSpec& spec = specs[static_cast<size_t>(i)];
    GenerationResult res = generate_dataset(spec, cfg.scm);
    save_csv(res.dataset, (out / "datasets" / (spec.label() + ".csv")).string(), "Y", "A",
             "config_hash=" + hash);
    results[static_cast<size_t>(i)] = std::move(res);
  });

  CommandResult cmd;
  json manifest;
  manifest["config_hash"] = hash;
  manifest["config"] = config_to_json(cfg);
  json entries = json::array();
  for (size_t i = 0; i < specs.size(); ++i) {
    const ScenarioSpec& spec = specs[i];
    const GenerationResult& res = results[i];
    json e;
    e["file"] = "datasets/" + spec.label() + ".csv";
    e["dataset_id"] = spec.label();
    e["scenario_id"] = spec.scenario_id;
    e["parameter_name"] = spec.parameter_name;
    e["parameter_value"] = spec.parameter_value;
    e["l_r"] = spec.conditional_on_r;
    e["variant_index"] = spec.variant_index;
    e["n"] = spec.n;
    e["seed"] = spec.seed;
    e["target_column"] = "Y";
    e["favorable_value"] = "1";
    e["protected_column"] = "A";
    e["privileged_value"] = "1";
    e["total_rows"] = res.total_rows;
    e["kept_rows"] = res.kept_rows;
    e["total_privileged"] = res.total_privileged;
    e["kept_privileged"] = res.kept_privileged;
    entries.push_back(std::move(e));
    if (res.kept_privileged == 0 || res.kept_rows == res.kept_privileged) ++cmd.warnings;
  }
  manifest["datasets"] = entries;
  atomic_write_text((out / "manifest.json").string(), manifest.dump(2) + "\n");
  write_config_sidecar(cfg, "generate");
  return cmd;
}

std::vector<AuditInput> inputs_from_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest: " + manifest_path);
  json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    throw DataError("invalid manifest JSON: " + std::string(e.what()));
  }
  if (!manifest.contains("datasets") || !manifest["datasets"].is_array())
    throw DataError("manifest has no datasets array: " + manifest_path);

  const fs::path base = fs::path(manifest_path).parent_path();
  std::vector<AuditInput> inputs;
  for (const json& e : manifest["datasets"]) {
    AuditInput a;
    a.file = (base / e.at("file").get<std::string>()).string();
    a.mapping.target_column = e.value("target_column", "Y");
    a.mapping.favorable_value = e.value("favorable_value", "1");
    a.mapping.protected_column = e.value("protected_column", "A");
    a.mapping.privileged_value = e.value("privileged_value", "1");
    a.dataset_id = e.value("dataset_id", fs::path(a.file).stem().string());
    a.scenario_id = e.value("scenario_id", "");
    a.parameter_name = e.value("parameter_name", "");
    if (e.contains("parameter_value") && e["parameter_value"].is_number())
      a.parameter_value = e["parameter_value"].get<double>();
    if (e.contains("seed") && e["seed"].is_number())
      a.seed = e["seed"].get<uint64_t>();
    inputs.push_back(std::move(a));
  }
  return inputs;
}

CorpusRow corpus_row_from_audit(const AuditRecord& rec) {
  CorpusRow row;
  row.dataset_id = rec.dataset_id;
  row.scenario_id = rec.scenario_id;
  row.parameter_name = rec.parameter_name;
  row.parameter_value = rec.parameter_value;
  row.seed = rec.seed;
  for (int m = 0; m < kMetricCount; ++m)
    row.cmd[static_cast<size_t>(m)] = rec.profile.metrics[static_cast<size_t>(m)].cmd;
  for (int l = 0; l < kLearnerCount; ++l)
    for (int f = 0; f < kFairnessCount; ++f)
      row.fairness[static_cast<size_t>(l)][static_cast<size_t>(f)] =
          rec.fairness.at(static_cast<LearnerId>(l), static_cast<FairnessMetric>(f)).value;
  return row;
}

CommandResult run_audit(const RunConfig& cfg, const std::vector<AuditInput>& inputs,
                        bool rewrite_corpus) {
  if (inputs.empty()) throw DataError("no datasets to audit");
  const std::string hash = cfg.config_hash();
  const fs::path out(cfg.out_dir);
  fs::create_directories(out / "audits");

  CommandResult cmd;
  std::vector<CorpusRow> rows(inputs.size());
  std::vector<int> warnings(inputs.size(), 0);
  parallel_for(static_cast<long>(inputs.size()), cfg.jobs, [&](long i) {
    const AuditInput& input = inputs[static_cast<size_t>(i)];
    const TabularDataset ds = load_csv(input.file, input.mapping);
    const uint64_t audit_seed = audit_seed_for(cfg.seed, input.dataset_id);

    AuditRecord rec;
    if (cfg.save_folds) {
      rec.dataset_id = input.dataset_id;
      rec.profile = compute_profile(ds, mix_seed(audit_seed, "profile"));
      FairnessConfig fc;
      fc.k_folds = cfg.k_folds;
      fc.knn_k = cfg.knn_k;
      fc.fair_band = cfg.fair_band;
      fc.include_protected = cfg.include_protected;
      std::array<CvResult, kLearnerCount> cvs;
      rec.fairness = fairness_report(ds, mix_seed(audit_seed, "cv"), fc, &cvs);
      for (int l = 0; l < kLearnerCount; ++l) {
        const std::string path =
            (out / "audits" /
             (input.dataset_id + ".folds." + kLearnerNames[static_cast<size_t>(l)] + ".csv"))
                .string();
        save_fold_predictions(cvs[static_cast<size_t>(l)], path, "config_hash=" + hash);
      }
    } else {
      rec = audit_dataset(ds, cfg, input.dataset_id, audit_seed);
    }
    rec.scenario_id = input.scenario_id;
    rec.parameter_name = input.parameter_name;
    rec.parameter_value = input.parameter_value;
    rec.seed = input.seed;

    int w = 0;
    const json j = audit_to_json(rec, cfg, input.file, audit_seed, &w);
    warnings[static_cast<size_t>(i)] = w;
    atomic_write_text((out / "audits" / (input.dataset_id + ".audit.json")).string(),
                      j.dump(2) + "\n");
    rows[static_cast<size_t>(i)] = corpus_row_from_audit(rec);
  });
  for (int w : warnings) cmd.warnings += w;

  const std::string corpus_path = (out / "corpus.csv").string();
  std::ostringstream body;
  for (const CorpusRow& row : rows) body << corpus_line(row) << '\n';
  if (rewrite_corpus || !fs::exists(corpus_path)) {
    std::ostringstream text;
    text << "# config_hash=" << hash << '\n' << join_items(corpus_header(), ",") << '\n'
         << body.str();
    atomic_write_text(corpus_path, text.str());
  } else {
    std::ifstream in(corpus_path, std::ios::binary);
    std::ostringstream existing;
    existing << in.rdbuf();
    atomic_write_text(corpus_path, existing.str() + body.str());
  }
  write_config_sidecar(cfg, "audit");
  return cmd;
}

std::vector<CorpusRow> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus: " + path);
  std::string line;
  do {
    if (!std::getline(in, line)) throw DataError("empty corpus: " + path);
  } while (!line.empty() && line[0] == '#');
  const std::vector<std::string> header = split_csv_line(line);
  const std::vector<std::string> expected = corpus_header();
  if (header != expected) throw DataError("corpus header mismatch in " + path);

  std::vector<CorpusRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != expected.size())
      throw DataError("corpus row has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(expected.size()));
    CorpusRow row;
    row.dataset_id = cells[0];
    row.scenario_id = cells[1];
    row.parameter_name = cells[2];
    row.parameter_value = parse_optional_double(cells[3]);
    if (!cells[4].empty()) row.seed = std::stoull(cells[4]);
    size_t c = 5;
    for (int m = 0; m < kMetricCount; ++m)
      row.cmd[static_cast<size_t>(m)] = parse_optional_double(cells[c++]);
    for (int l = 0; l < kLearnerCount; ++l)
      for (int f = 0; f < kFairnessCount; ++f)
        row.fairness[static_cast<size_t>(l)][static_cast<size_t>(f)] =
            parse_optional_double(cells[c++]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty corpus: " + path);
  return rows;
}

std::vector<Transaction> corpus_transactions(const std::vector<CorpusRow>& rows,
                                             const ItemizeConfig& cfg, long* undefined_values) {
  std::vector<AuditRecord> records;
  records.reserve(rows.size());
  for (const CorpusRow& row : rows) {
    AuditRecord rec;
    rec.dataset_id = row.dataset_id;
    for (int m = 0; m < kMetricCount; ++m)
      rec.profile.metrics[static_cast<size_t>(m)].cmd = row.cmd[static_cast<size_t>(m)];
    for (int l = 0; l < kLearnerCount; ++l)
      for (int f = 0; f < kFairnessCount; ++f)
        rec.fairness.per_learner[static_cast<size_t>(l)].values[static_cast<size_t>(f)].value =
            row.fairness[static_cast<size_t>(l)][static_cast<size_t>(f)];
    records.push_back(std::move(rec));
  }
  const ItemizeResult res = itemize(records, cfg);
  if (undefined_values) *undefined_values = res.undefined_values;
  return res.transactions;
}

CommandResult run_mine(const RunConfig& cfg, const std::string& corpus_path) {
  const std::string hash = cfg.config_hash();
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);

  const std::vector<CorpusRow> rows = load_corpus(corpus_path);
  ItemizeConfig ic;
  ic.cmd_threshold = cfg.cmd_threshold;
  ic.fair_band = cfg.fair_band;
  long undefined = 0;
  const std::vector<Transaction> transactions = corpus_transactions(rows, ic, &undefined);
  const std::vector<Itemset> frequent = apriori(transactions, cfg.min_support);
  const std::vector<AssociationRule> rules = generate_rules(transactions, frequent, cfg.min_lift);

  json j;
  j["config_hash"] = hash;
  j["inputs"] = {{"corpus", corpus_path}};
  j["transactions"] = transactions.size();
  j["undefined_values"] = undefined;
  json arr = json::array();
  std::vector<RuleEvaluation> evals;
  for (const AssociationRule& r : rules) {
    evals.push_back(eval_from_rule(r));
    arr.push_back(rule_eval_to_json(evals.back()));
  }
  j["rules"] = arr;
  atomic_write_text((out / "rules.json").string(), j.dump(2) + "\n");
  atomic_write_text((out / "rules.csv").string(), rules_csv_text(evals, hash));
  write_config_sidecar(cfg, "mine");

  CommandResult cmd;
  if (undefined > 0) ++cmd.warnings;
  return cmd;
}

std::vector<AssociationRule> load_rules_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rules file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("invalid rules JSON: " + std::string(e.what()));
  }
  const json& arr = j.is_array() ? j : j.contains("rules") ? j["rules"] : j;
  if (!arr.is_array()) throw DataError("rules file has no rule array: " + path);

  std::vector<AssociationRule> rules;
  for (const json& e : arr) {
    AssociationRule r;
    for (const json& item : e.at("antecedent")) {
      const std::string name = item.get<std::string>();
      if (!is_complexity_item(name))
        throw DataError("unknown complexity item in rules file: " + name);
      r.antecedent.push_back(name);
    }
    for (const json& item : e.at("consequent")) {
      const std::string name = item.get<std::string>();
      if (!is_fairness_item(name))
        throw DataError("unknown fairness item in rules file: " + name);
      r.consequent.push_back(name);
    }
    if (r.antecedent.empty() || r.consequent.empty())
      throw DataError("rule with empty antecedent or consequent in " + path);
    std::sort(r.antecedent.begin(), r.antecedent.end());
    std::sort(r.consequent.begin(), r.consequent.end());
    r.support_antecedent = e.value("sup_a", 0.0);
    r.support_consequent = e.value("sup_c", 0.0);
    r.support = e.value("sup", 0.0);
    r.confidence = e.value("confidence", 0.0);
    r.lift = e.value("lift", 0.0);
    rules.push_back(std::move(r));
  }
  return rules;
}

CommandResult run_evaluate(const RunConfig& cfg, const std::string& rules_path,
                           const std::string& corpus_path) {
  const std::string hash = cfg.config_hash();
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);

  const std::vector<AssociationRule> rules = load_rules_json(rules_path);
  const std::vector<CorpusRow> rows = load_corpus(corpus_path);
  ItemizeConfig ic;
  ic.cmd_threshold = cfg.cmd_threshold;
  ic.fair_band = cfg.fair_band;
  long undefined = 0;
  const std::vector<Transaction> transactions = corpus_transactions(rows, ic, &undefined);
  const std::vector<RuleEvaluation> evals = evaluate_rules(rules, transactions);

  CommandResult cmd;
  json j;
  j["config_hash"] = hash;
  j["inputs"] = {{"rules", rules_path}, {"corpus", corpus_path}};
  j["transactions"] = transactions.size();
  j["undefined_values"] = undefined;
  json arr = json::array();
  for (const RuleEvaluation& ev : evals) {
    arr.push_back(rule_eval_to_json(ev));
    if (!ev.confidence || !ev.lift) ++cmd.warnings;
  }
  j["rules"] = arr;
  atomic_write_text((out / "evaluation.json").string(), j.dump(2) + "\n");
  atomic_write_text((out / "evaluation.csv").string(), rules_csv_text(evals, hash));
  write_config_sidecar(cfg, "evaluate");
  if (undefined > 0) ++cmd.warnings;
  return cmd;
}

CommandResult run_embed(const RunConfig& cfg, const std::string& corpus_path) {
  const std::string hash = cfg.config_hash();
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);

  const std::vector<CorpusRow> rows = load_corpus(corpus_path);
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(rows.size()), kMetricCount);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int m = 0; m < kMetricCount; ++m)
      vectors(static_cast<Eigen::Index>(i), m) =
          rows[i].cmd[static_cast<size_t>(m)].value_or(std::nan(""));

  const EmbeddingResult emb = classical_mds(vectors);

  std::ostringstream os;
  os << "# config_hash=" << hash << '\n';
  os << "# corpus=" << corpus_path << '\n';
  os << "# stress=" << fmt_double(emb.stress) << '\n';
  os << "# degenerate=" << (emb.degenerate ? 1 : 0) << '\n';
  os << "# imputed=" << emb.imputed << '\n';
  os << "dataset_id,x,y,scenario_id,parameter_name,parameter_value,unfair_count,unfair_any\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    int unfair = 0;
    for (int l = 0; l < kLearnerCount; ++l)
      for (int f = 0; f < kFairnessCount; ++f) {
        const auto& v = rows[i].fairness[static_cast<size_t>(l)][static_cast<size_t>(f)];
        if (v && std::abs(*v) > cfg.fair_band) ++unfair;
      }
    os << rows[i].dataset_id << ',' << fmt_double(emb.coordinates(static_cast<Eigen::Index>(i), 0))
       << ',' << fmt_double(emb.coordinates(static_cast<Eigen::Index>(i), 1)) << ','
       << rows[i].scenario_id << ',' << rows[i].parameter_name << ',';
    if (rows[i].parameter_value) os << fmt_double(*rows[i].parameter_value);
    os << ',' << unfair << ',' << (unfair > 0 ? 1 : 0) << '\n';
  }
  atomic_write_text((out / "embedding.csv").string(), os.str());
  write_config_sidecar(cfg, "embed");

  CommandResult cmd;
  if (emb.degenerate) ++cmd.warnings;
  if (emb.imputed > 0) ++cmd.warnings;
  return cmd;
}

void save_fold_predictions(const CvResult& cv, const std::string& path,
                           const std::string& comment) {
  std::ostringstream os;
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "row_index,fold,y_true,y_pred,protected\n";
  for (size_t f = 0; f < cv.folds.size(); ++f) {
    const FoldPrediction& fp = cv.folds[f];
    for (size_t i = 0; i < fp.test_rows.size(); ++i) {
      os << fp.test_rows[i] << ',' << f << ',' << fp.y_true[i] << ',' << fp.y_pred[i] << ','
         << fp.group[i] << '\n';
    }
  }
  atomic_write_text(path, os.str());
}

}  // namespace cfair
