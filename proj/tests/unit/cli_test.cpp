#include <filesystem>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "lexbias/common.hpp"

namespace fs = std::filesystem;
using lexbias::read_file;
using lexbias::write_file;
using nlohmann::json;

namespace {

const fs::path kFixtures = LEXBIAS_FIXTURE_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lexbias_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "lexbias");
    ::testing::internal::CaptureStdout();
    ::testing::internal::CaptureStderr();
    const int rc = lexbias::cli::run(args);
    out_ = ::testing::internal::GetCapturedStdout();
    err_ = ::testing::internal::GetCapturedStderr();
    return rc;
  }

  std::string p(const std::string& rel) const { return (dir_ / rel).string(); }

  // synth -> train -> weat with small settings under `sub`.
  void pipeline(const std::string& sub, const std::string& seed) {
    ASSERT_EQ(run({"synth", "--beta", "1", "--docs", "800", "--seed", seed, "--out", p(sub + "/synthetic_1.txt"),
                   "--sets-out", p(sub + "/sets")}), 0) << err_;
    ASSERT_EQ(run({"train", "--shard", p(sub + "/synthetic_1.txt"), "--dim", "10", "--window", "5", "--min-count",
                   "3", "--iters", "5", "--seed", seed, "--out", p(sub + "/synthetic_1.bin")}), 0) << err_;
    ASSERT_EQ(run({"weat", "--embeddings", p(sub + "/synthetic_1.bin"), "--sets", p(sub + "/sets"), "--shuffles",
                   "200", "--seed", seed, "--out", p(sub + "/results/synthetic_1.json")}), 0) << err_;
  }

  fs::path dir_;
  std::string out_, err_;
};

}  // namespace

TEST_F(Cli, MissingRequiredFlagPrintsUsage) {
  EXPECT_EQ(run({"weat", "--out", p("x.json")}), 1);
  EXPECT_NE(err_.find("--embeddings"), std::string::npos);
  EXPECT_NE(err_.find("Usage"), std::string::npos);
}

TEST_F(Cli, UnknownFlagAndSubcommand) {
  EXPECT_EQ(run({"stats", "--shards", p("."), "--bogus"}), 1);
  EXPECT_NE(err_.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({}), 1);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_EQ(run({"train", "--help"}), 0);
  EXPECT_NE(out_.find("--dim"), std::string::npos);
}

TEST_F(Cli, InvalidInputExitsOne) {
  EXPECT_EQ(run({"train", "--shard", p("missing.txt"), "--out", p("e.bin")}), 1);
  EXPECT_EQ(run({"synth", "--beta", "2", "--out", p("s.txt")}), 1);
  EXPECT_NE(err_.find("beta"), std::string::npos);
}

TEST_F(Cli, WeatJsonHasAllFieldsAndManifest) {
  pipeline("a", "5");
  const auto j = json::parse(read_file(p("a/results/synthetic_1.json")));
  for (const char* k : {"schema", "label", "region", "period", "statistic_form", "observed", "randomized",
                        "randomized_stdev", "normalized", "normalized_defined", "p_value", "alpha", "significant",
                        "shuffles", "seed", "critical_value", "resolved_sizes", "dropped", "manifest"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j.at("randomized").size(), 200u);
  EXPECT_EQ(j.at("region"), "synthetic");
  const auto m = json::parse(read_file(p("a/results/synthetic_1.json.manifest.json")));
  EXPECT_EQ(m.at("id"), j.at("manifest"));
  EXPECT_EQ(m.at("subcommand"), "weat");
  EXPECT_EQ(m.at("seed"), 5);
  EXPECT_EQ(m.at("config").at("shuffles"), "200");
  EXPECT_EQ(m.at("inputs").size(), 2u);
  EXPECT_TRUE(m.at("timings").contains("total"));
}

TEST_F(Cli, FixedSeedRunsAreByteIdentical) {
  const std::vector<std::string> files = {"synthetic_1.txt", "synthetic_1.bin", "results/synthetic_1.json",
                                           "results/synthetic_1.json.manifest.json"};
  pipeline("a", "9");
  std::vector<std::string> first;
  for (const auto& f : files) first.push_back(read_file(p("a/" + f)));
  fs::remove_all(p("a"));
  pipeline("a", "9");
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto again = read_file(p("a/" + files[i]));
    if (files[i].ends_with("manifest.json")) {
      auto a = json::parse(first[i]), b = json::parse(again);
      a.erase("timings");
      b.erase("timings");
      EXPECT_EQ(a, b);
    } else {
      EXPECT_EQ(again, first[i]) << files[i];
    }
  }
  pipeline("b", "10");
  EXPECT_NE(read_file(p("b/synthetic_1.txt")), first[0]);
}

TEST_F(Cli, ConfigFileBelowFlags) {
  ASSERT_EQ(run({"synth", "--docs", "300", "--out", p("s/synthetic_1.txt")}), 0);
  write_file(p("run.cfg"), "# flat config\ndim = 7\niters = 2\nmin-count = 2\n");
  ASSERT_EQ(run({"train", "--config", p("run.cfg"), "--dim", "9", "--shard", p("s/synthetic_1.txt"), "--out",
                 p("e.txt"), "--format", "text"}), 0) << err_;
  const auto m = json::parse(read_file(p("e.txt.manifest.json")));
  EXPECT_EQ(m.at("config").at("dim"), "9");
  EXPECT_EQ(m.at("config").at("iters"), "2");
  EXPECT_EQ(m.at("config").at("window"), "20");
  const auto first = read_file(p("e.txt")).substr(0, read_file(p("e.txt")).find('\n'));
  EXPECT_EQ(lexbias::split(first, ' ').size(), 10u);

  write_file(p("bad.cfg"), "no-such-key = 1\n");
  EXPECT_EQ(run({"train", "--config", p("bad.cfg"), "--shard", p("s/synthetic_1.txt"), "--out", p("f.bin")}), 1);
}

TEST_F(Cli, IngestStatsAndReport) {
  ASSERT_EQ(run({"ingest", "--input", (kFixtures / "ingest_small.jsonl").string(), "--out", p("shards")}), 0) << err_;
  EXPECT_TRUE(fs::exists(p("shards/Northeast_1860-1889.txt")));
  EXPECT_EQ(read_file(p("shards/stats.csv")).substr(0, 31), "region,period,documents,tokens\n");
  const auto summary = json::parse(read_file(p("shards/ingest.json")));
  EXPECT_EQ(summary.at("assigned"), 6);
  EXPECT_TRUE(fs::exists(p("shards/manifest.json")));

  ASSERT_EQ(run({"stats", "--shards", p("shards")}), 0);
  EXPECT_NE(out_.find("Northeast,1860-1889,2,"), std::string::npos);

  fs::create_directories(p("results"));
  ASSERT_EQ(run({"report", "--results", p("results"), "--shards", p("shards"), "--out", p("report")}), 0) << err_;
  for (const char* f : {"significance_grid.csv", "normalized_grid.csv", "histograms.csv", "top_terms_by_period.csv",
                        "top_terms_by_region.csv", "report.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(p(std::string("report/") + f))) << f;
  }
  const auto first = read_file(p("report/report.json"));
  ASSERT_EQ(run({"report", "--results", p("results"), "--shards", p("shards"), "--out", p("report")}), 0);
  EXPECT_EQ(read_file(p("report/report.json")), first);
}

TEST_F(Cli, MakeReferenceAndCompare) {
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(run({"synth", "--docs", "1500", "--seed", std::to_string(i), "--out",
                   p("src/synthetic_" + std::to_string(i) + ".txt")}), 0);
  }
  ASSERT_EQ(run({"synth", "--docs", "10", "--out", p("sets_only.txt"), "--sets-out", p("sets")}), 0);
  ASSERT_EQ(run({"make-reference", "--shards", p("src"), "--k", "4", "--min-mb", "0.05", "--max-mb", "0.08",
                 "--segment-docs", "20", "--dim", "10", "--window", "5", "--min-count", "3", "--iters", "5",
                 "--shuffles", "100", "--sets", p("sets"), "--seed", "2", "--out", p("ref.json")}), 0) << err_;
  const auto ref = json::parse(read_file(p("ref.json")));
  EXPECT_EQ(ref.at("reference").size(), 6u);
  EXPECT_EQ(ref.at("shuffles"), 100);
  EXPECT_EQ(read_file(p("ref.csv")).substr(0, 35), "corpus,label,statistic,significant\n");

  // Two observed corpora in one period.
  for (const char* region : {"Northeast", "South"}) {
    const std::string stem = std::string(region) + "_1980-2009";
    ASSERT_EQ(run({"synth", "--beta", "0.5", "--docs", "800", "--out", p("obs/" + stem + ".txt")}), 0);
    ASSERT_EQ(run({"train", "--shard", p("obs/" + stem + ".txt"), "--dim", "10", "--window", "5", "--min-count",
                   "3", "--iters", "5", "--out", p("emb/" + stem + ".bin")}), 0);
    ASSERT_EQ(run({"weat", "--embeddings", p("emb/" + stem + ".bin"), "--sets", p("sets"), "--shuffles", "100",
                   "--out", p("res/" + stem + ".json")}), 0) << err_;
  }
  ASSERT_EQ(run({"compare", "--results", p("res"), "--reference", p("ref.json"), "--out", p("cmp.json"),
                 "--mean-pair", "Northeast:South"}), 0) << err_;
  const auto cmp = json::parse(read_file(p("cmp.json")));
  ASSERT_EQ(cmp.at("observed").size(), 1u);
  EXPECT_EQ(cmp.at("observed")[0].at("label"), "mean(Northeast:South)");
  ASSERT_EQ(run({"compare", "--results", p("res"), "--reference", p("ref.json"), "--out", p("cmp2.json")}), 0);
  EXPECT_EQ(json::parse(read_file(p("cmp2.json"))).at("observed")[0].at("label"),
            "Northeast_1980-2009:South_1980-2009");
  EXPECT_EQ(run({"compare", "--results", p("res"), "--reference", p("ref.json"), "--out", p("cmp3.json"),
                 "--pair", "Nowhere:South_1980-2009"}), 1);
}

TEST_F(Cli, SweepWritesOneRowPerBeta) {
  ASSERT_EQ(run({"sweep", "--betas", "0,1", "--docs", "600", "--dim", "10", "--window", "5", "--min-count", "3",
                 "--iters", "5", "--shuffles", "100", "--out", p("sweep.csv")}), 0) << err_;
  const auto csv = read_file(p("sweep.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  write_file(p("specs.json"), R"({"specs": [{"beta": 0.5, "documents": 600}]})");
  ASSERT_EQ(run({"sweep", "--specs", p("specs.json"), "--dim", "10", "--window", "5", "--min-count", "3",
                 "--iters", "5", "--shuffles", "100", "--out", p("sweep2.csv")}), 0) << err_;
  EXPECT_NE(read_file(p("sweep2.csv")).find("\n0.5,600,"), std::string::npos);
}
