#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfair/pipeline.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cfair;

namespace {

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("cfair_cli_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
  std::string file(const std::string& rel) const { return (path / rel).string(); }

  static int& counter() {
    static int c = 0;
    return c;
  }
};

/// Runs the installed binary with the given arguments; stdout/stderr land in
/// a per-call log file so failures can be inspected from the test output.
int run_cli(const std::string& args, const TempDir& dir) {
  static int call = 0;
  const std::string log = dir.file("cli_" + std::to_string(call++) + ".log");
  const std::string cmd = std::string("\"") + CFAIR_CLI_PATH + "\" " + args + " >" + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("help and usage errors use exit codes zero and one") {
  TempDir dir("usage");
  CHECK(run_cli("--help", dir) == 0);
  CHECK(run_cli("generate --help", dir) == 0);
  CHECK(run_cli("", dir) == 1);                 // a subcommand is required
  CHECK(run_cli("frobnicate", dir) == 1);       // unknown subcommand
  CHECK(run_cli("mine", dir) == 1);             // --corpus is required
  CHECK(run_cli("evaluate --rules x.json", dir) == 1);
  CHECK(run_cli("generate --n notanumber", dir) == 1);
  CHECK(run_cli("audit --out " + dir.str(), dir) == 1);  // neither --manifest nor --input
}

TEST_CASE("missing input files map to exit code two") {
  TempDir dir("missing");
  const std::string out = " --out " + dir.str();
  CHECK(run_cli("audit --manifest " + dir.file("nope.json") + out, dir) == 2);
  CHECK(run_cli("audit --input " + dir.file("nope.csv") + out, dir) == 2);
  CHECK(run_cli("mine --corpus " + dir.file("nope.csv") + out, dir) == 2);
  CHECK(run_cli("evaluate --rules " + dir.file("r.json") + " --corpus " + dir.file("c.csv") + out,
                dir) == 2);
  CHECK(run_cli("embed --corpus " + dir.file("nope.csv") + out, dir) == 2);

  {
    std::ofstream bad(dir.file("bad.csv"));
    bad << "a,b\n1\n";
  }
  CHECK(run_cli("audit --input " + dir.file("bad.csv") + " --target Y --protected A" + out, dir) ==
        2);
}

TEST_CASE("the full command chain runs the study end to end") {
  TempDir dir("chain");
  const std::string common = " --n 120 --seed 11 --k-folds 5 --out " + dir.str();

  REQUIRE(run_cli("generate" + common, dir) == 0);
  REQUIRE(fs::exists(dir.file("manifest.json")));
  {
    long csv_count = 0;
    for (const auto& entry : fs::directory_iterator(dir.path / "datasets"))
      if (entry.path().extension() == ".csv") ++csv_count;
    CHECK(csv_count == 73);
  }

  REQUIRE(run_cli("audit --manifest " + dir.file("manifest.json") + common, dir) == 0);
  REQUIRE(fs::exists(dir.file("corpus.csv")));
  const std::vector<CorpusRow> rows = load_corpus(dir.file("corpus.csv"));
  CHECK(rows.size() == 73);

  REQUIRE(run_cli("mine --corpus " + dir.file("corpus.csv") + common, dir) == 0);
  REQUIRE(fs::exists(dir.file("rules.json")));
  CHECK(fs::exists(dir.file("rules.csv")));

  REQUIRE(run_cli("evaluate --rules " + dir.file("rules.json") + " --corpus " +
                      dir.file("corpus.csv") + common,
                  dir) == 0);
  CHECK(fs::exists(dir.file("evaluation.json")));
  CHECK(fs::exists(dir.file("evaluation.csv")));

  REQUIRE(run_cli("embed --corpus " + dir.file("corpus.csv") + common, dir) == 0);
  CHECK(fs::exists(dir.file("embedding.csv")));

  // The emitted hash reflects the flags that change results.
  RunConfig cfg;
  cfg.n = 120;
  cfg.seed = 11;
  cfg.k_folds = 5;
  const json manifest = read_json(dir.file("manifest.json"));
  CHECK(manifest.at("config_hash").get<std::string>() == cfg.config_hash());
  const std::string corpus_text = read_file(dir.file("corpus.csv"));
  CHECK(corpus_text.rfind("# config_hash=" + cfg.config_hash(), 0) == 0);
}

TEST_CASE("a single csv can be audited with a custom column mapping") {
  TempDir dir("mapping");
  {
    std::ofstream out(dir.file("hiring.csv"));
    out << "income,age,sex,hired\n";
    for (int i = 0; i < 24; ++i) {
      const int hired = i % 2;
      const char* sex = (i % 4 < 2) ? "male" : "female";
      out << (hired ? 60 + i : 30 + i) << "," << 20 + (i * 7) % 30 << "," << sex << ","
          << (hired ? "yes" : "no") << "\n";
    }
  }

  const int code = run_cli(
      "audit --input " + dir.file("hiring.csv") +
          " --target hired --favorable yes --protected sex --privileged male"
          " --id custom --k-folds 2 --seed 5 --out " +
          dir.str(),
      dir);
  REQUIRE(code == 0);
  REQUIRE(fs::exists(dir.file("audits/custom.audit.json")));
  REQUIRE(fs::exists(dir.file("corpus.csv")));
  const std::vector<CorpusRow> rows = load_corpus(dir.file("corpus.csv"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].dataset_id == "custom");
  CHECK(rows[0].scenario_id.empty());

  const json audit = read_json(dir.file("audits/custom.audit.json"));
  CHECK(audit.at("dataset_id").get<std::string>() == "custom");
  CHECK_FALSE(audit.contains("scenario"));

  // Without --id the dataset takes the file stem.
  const int again = run_cli("audit --input " + dir.file("hiring.csv") +
                                " --target hired --favorable yes --protected sex"
                                " --privileged male --k-folds 2 --seed 5 --out " +
                                dir.str(),
                            dir);
  REQUIRE(again == 0);
  CHECK(fs::exists(dir.file("audits/hiring.audit.json")));
  CHECK(load_corpus(dir.file("corpus.csv")).size() == 2);  // appended, not rewritten
}

TEST_CASE("strict mode escalates degenerate results to exit code three") {
  TempDir dir("strict");
  {
    // Every row is unprivileged, so the privileged group view is empty and
    // all CMDs are undefined.
    std::ofstream out(dir.file("onegroup.csv"));
    out << "x,A,Y\n";
    for (int i = 0; i < 12; ++i)
      out << i << ",0," << i % 2 << "\n";
  }
  const std::string args = "audit --input " + dir.file("onegroup.csv") +
                           " --k-folds 2 --out " + dir.str();
  CHECK(run_cli(args, dir) == 0);            // warnings alone do not fail the run
  CHECK(run_cli(args + " --strict", dir) == 3);
}

TEST_CASE("config files supply defaults but explicit flags win") {
  TempDir dir("config");
  {
    std::ofstream out(dir.file("run.json"));
    out << R"({"n": 90, "seed": 13, "k_folds": 4})";
  }

  REQUIRE(run_cli("generate --config " + dir.file("run.json") + " --out " + dir.str(), dir) == 0);
  {
    const json manifest = read_json(dir.file("manifest.json"));
    CHECK(manifest.at("config").at("n").get<long>() == 90);
    CHECK(manifest.at("config").at("seed").get<uint64_t>() == 13);
    CHECK(manifest.at("config").at("k_folds").get<int>() == 4);
  }

  TempDir dir2("config_override");
  REQUIRE(run_cli("generate --config " + dir.file("run.json") + " --n 110 --out " + dir2.str(),
                  dir2) == 0);
  {
    const json manifest = read_json(dir2.file("manifest.json"));
    CHECK(manifest.at("config").at("n").get<long>() == 110);  // flag beats file
    CHECK(manifest.at("config").at("seed").get<uint64_t>() == 13);
  }

  CHECK(run_cli("generate --config " + dir.file("missing.json") + " --out " + dir.str(), dir) == 2);
}

TEST_CASE("generation through the cli is reproducible") {
  TempDir a("repro_a");
  TempDir b("repro_b");

  REQUIRE(run_cli("generate --n 80 --seed 21 --out " + a.str(), a) == 0);
  REQUIRE(run_cli("generate --n 80 --seed 21 --out " + b.str(), b) == 0);
  CHECK(read_file(a.file("manifest.json")) == read_file(b.file("manifest.json")));
  CHECK(read_file(a.file("datasets/S1A.csv")) == read_file(b.file("datasets/S1A.csv")));
  CHECK(read_file(a.file("datasets/S2A12.csv")) == read_file(b.file("datasets/S2A12.csv")));

  TempDir c("repro_c");
  REQUIRE(run_cli("generate --n 80 --seed 22 --out " + c.str(), c) == 0);
  CHECK(read_file(a.file("datasets/S1A.csv")) != read_file(c.file("datasets/S1A.csv")));
}
