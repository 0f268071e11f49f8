#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfair/pipeline.hpp"

namespace {

using cfair::RunConfig;

/// Applies a JSON config file underneath explicitly passed flags: a file
/// value is used only when the matching flag was not given on the command
/// line.
void apply_config_file(RunConfig& cfg, const std::string& path, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw cfair::DataError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw cfair::DataError("invalid config JSON: " + std::string(e.what()));
  }
  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  if (j.contains("n") && unset("--n")) cfg.n = j["n"].get<long>();
  if (j.contains("seed") && unset("--seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("k_folds") && unset("--k-folds")) cfg.k_folds = j["k_folds"].get<int>();
  if (j.contains("knn_k") && unset("--knn-k")) cfg.knn_k = j["knn_k"].get<int>();
  if (j.contains("min_support") && unset("--min-support"))
    cfg.min_support = j["min_support"].get<double>();
  if (j.contains("min_lift") && unset("--min-lift")) cfg.min_lift = j["min_lift"].get<double>();
  if (j.contains("cmd_threshold") && unset("--cmd-threshold"))
    cfg.cmd_threshold = j["cmd_threshold"].get<double>();
  if (j.contains("fair_band") && unset("--fair-band")) cfg.fair_band = j["fair_band"].get<double>();
  if (j.contains("include_protected") && unset("--include-protected"))
    cfg.include_protected = j["include_protected"].get<bool>();
  if (j.contains("out_dir") && unset("--out")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("jobs") && unset("--jobs")) cfg.jobs = j["jobs"].get<int>();
  if (j.contains("strict") && unset("--strict")) cfg.strict = j["strict"].get<bool>();
  if (j.contains("scm")) {
    const nlohmann::json& s = j["scm"];
    if (s.contains("privileged_rate")) cfg.scm.privileged_rate = s["privileged_rate"].get<double>();
    if (s.contains("q_on_r")) cfg.scm.q_on_r = s["q_on_r"].get<double>();
    if (s.contains("s_noise")) cfg.scm.s_noise = s["s_noise"].get<double>();
    if (s.contains("shift_scale")) cfg.scm.shift_scale = s["shift_scale"].get<double>();
    if (s.contains("condition_above_median"))
      cfg.scm.condition_above_median = s["condition_above_median"].get<bool>();
  }
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--seed", cfg.seed, "Base seed for all derived randomness");
  cmd->add_option("--n", cfg.n, "Rows per generated dataset");
  cmd->add_option("--k-folds", cfg.k_folds, "Cross-validation fold count");
  cmd->add_option("--knn-k", cfg.knn_k, "Neighbor count for the KN learner");
  cmd->add_option("--min-support", cfg.min_support, "Apriori minimum support");
  cmd->add_option("--min-lift", cfg.min_lift, "Minimum lift for emitted rules");
  cmd->add_option("--cmd-threshold", cfg.cmd_threshold,
                  "CMD value above which a complexity item is present");
  cmd->add_option("--fair-band", cfg.fair_band,
                  "Half-width of the fair interval around zero");
  cmd->add_flag("--include-protected,!--exclude-protected", cfg.include_protected,
                "Expose the protected attribute to the learners (default on)");
  cmd->add_option("--out", cfg.out_dir, "Output directory");
  cmd->add_option("--jobs", cfg.jobs, "Parallel workers across datasets");
  cmd->add_flag("--strict", cfg.strict, "Escalate degenerate-result warnings to exit code 3");
  cmd->add_option("--config", config_path, "JSON config file; explicit flags take precedence");
}

int finish(const cfair::CommandResult& res, const RunConfig& cfg, const std::string& what) {
  if (res.warnings > 0) {
    std::cerr << what << ": " << res.warnings << " degenerate-result warning(s)\n";
    if (cfg.strict) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group complexity / fairness audit toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  CLI::App* generate = app.add_subcommand("generate", "Regenerate the 73-dataset bias catalog");
  add_common_flags(generate, cfg, config_path);

  CLI::App* audit =
      app.add_subcommand("audit", "Compute complexity profile and fairness report per dataset");
  add_common_flags(audit, cfg, config_path);
  std::string manifest_path;
  std::string input_path, dataset_id;
  cfair::CsvMapping mapping{"Y", "1", "A", "1"};
  bool save_folds = false;
  audit->add_option("--manifest", manifest_path, "Audit every dataset listed in a manifest");
  audit->add_option("--input", input_path, "Audit a single CSV file");
  audit->add_option("--id", dataset_id, "Dataset id for --input (default: file stem)");
  audit->add_option("--target", mapping.target_column, "Target column name");
  audit->add_option("--favorable", mapping.favorable_value, "Raw value mapped to target 1");
  audit->add_option("--protected", mapping.protected_column, "Protected attribute column name");
  audit->add_option("--privileged", mapping.privileged_value, "Raw value mapped to privileged");
  audit->add_flag("--save-folds", save_folds, "Write out-of-fold predictions per learner");

  CLI::App* mine = app.add_subcommand("mine", "Mine complexity->fairness association rules");
  add_common_flags(mine, cfg, config_path);
  std::string corpus_path;
  mine->add_option("--corpus", corpus_path, "Audit corpus CSV")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "Re-evaluate fixed rules on a corpus");
  add_common_flags(evaluate, cfg, config_path);
  std::string rules_path, eval_corpus;
  evaluate->add_option("--rules", rules_path, "Rules JSON produced by mine")->required();
  evaluate->add_option("--corpus", eval_corpus, "Audit corpus CSV")->required();

  CLI::App* embed = app.add_subcommand("embed", "Project CMD vectors to 2-D coordinates");
  add_common_flags(embed, cfg, config_path);
  std::string embed_corpus;
  embed->add_option("--corpus", embed_corpus, "Audit corpus CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors -> 1, --help -> 0
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_file(cfg, config_path, *active);
    cfg.save_folds = save_folds;

    if (active == generate) {
      const cfair::CommandResult res = cfair::run_generate(cfg);
      std::cout << "wrote catalog to " << cfg.out_dir << " (config " << cfg.config_hash() << ")\n";
      return finish(res, cfg, "generate");
    }
    if (active == audit) {
      std::vector<cfair::AuditInput> inputs;
      bool rewrite = false;
      if (!manifest_path.empty()) {
        inputs = cfair::inputs_from_manifest(manifest_path);
        rewrite = true;
      }
      if (!input_path.empty()) {
        cfair::AuditInput one;
        one.file = input_path;
        one.mapping = mapping;
        one.dataset_id =
            dataset_id.empty() ? std::filesystem::path(input_path).stem().string() : dataset_id;
        inputs.push_back(std::move(one));
      }
      if (inputs.empty()) {
        std::cerr << "audit: pass --manifest and/or --input\n";
        return 1;
      }
      const cfair::CommandResult res = cfair::run_audit(cfg, inputs, rewrite);
      std::cout << "audited " << inputs.size() << " dataset(s) into " << cfg.out_dir << "\n";
      return finish(res, cfg, "audit");
    }
    if (active == mine) {
      const cfair::CommandResult res = cfair::run_mine(cfg, corpus_path);
      std::cout << "wrote rules to " << cfg.out_dir << "\n";
      return finish(res, cfg, "mine");
    }
    if (active == evaluate) {
      const cfair::CommandResult res = cfair::run_evaluate(cfg, rules_path, eval_corpus);
      std::cout << "wrote evaluation to " << cfg.out_dir << "\n";
      return finish(res, cfg, "evaluate");
    }
    if (active == embed) {
      const cfair::CommandResult res = cfair::run_embed(cfg, embed_corpus);
      std::cout << "wrote embedding to " << cfg.out_dir << "\n";
      return finish(res, cfg, "embed");
    }
    std::cerr << "unknown subcommand\n";
    return 1;
  } catch (const cfair::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
