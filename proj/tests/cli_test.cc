#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "vocra/io.h"
#include "vocra/pipeline.h"

namespace vocra {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "vocra");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vocra_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Writes an instance and its ground truth; returns the correspondence path.
  std::string generate(double rate, int seed, const std::string& mode = "sphere") {
    const Outcome r = run({"generate", "--outlier-rate", std::to_string(rate), "--seed",
                       std::to_string(seed), "--outlier-mode", mode, "--output",
                       path("pairs.txt"), "--ground-truth", path("gt.json")});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    return path("pairs.txt");
  }

  fs::path dir_;
};

TEST_F(CliTest, RegisterRecoversGroundTruth) {
  const std::string pairs = generate(0.95, 42);
  const Outcome r = run({"register", pairs, "--ground-truth", path("gt.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["rotation"].size(), 9u);
  EXPECT_EQ(j["translation"].size(), 3u);
  EXPECT_EQ(j["num_correspondences"], 1000);
  EXPECT_LT(j["evaluation"]["rot_err_deg"].get<double>(), 2.0);
  EXPECT_LT(j["evaluation"]["trans_err"].get<double>(), 0.05);
  EXPECT_GT(j["evaluation"]["recall"].get<double>(), 0.5);
  EXPECT_TRUE(j["diagnostics"].contains("gnc_iterations"));
}

TEST_F(CliTest, RegisterMatchesLibraryBitForBit) {
  const std::string pairs = generate(0.9, 3);
  const Outcome r = run({"register", pairs, "--no-timing", "--output", path("out.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::ifstream in(path("out.json"));
  const json j = json::parse(in);

  const RegistrationResult lib =
      vocra::vocra(read_correspondences(pairs, 0.01), VocraConfig::from_sigma(0.01));
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(j["rotation"][i].get<double>(), lib.transform.rotation.matrix()(i / 3, i % 3));
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(j["translation"][i].get<double>(), lib.transform.translation[i]);
  }
  EXPECT_EQ(j["inliers"].get<std::vector<Index>>(), lib.inliers);
  EXPECT_EQ(j["runtime_s"], 0.0);
}

TEST_F(CliTest, ExitCodes) {
  std::ofstream(path("bad.txt")) << "0 0 0 1 1 1\n0 0 zero 1 1 1\n";
  Outcome r = run({"register", path("bad.txt")});
  EXPECT_EQ(r.code, cli::kExitParse);
  const json e = json::parse(r.err);
  EXPECT_EQ(e["error"], "ParseError");
  EXPECT_NE(e["message"].get<std::string>().find("line 2"), std::string::npos);

  r = run({"register", path("missing.txt")});
  EXPECT_EQ(r.code, cli::kExitIo);
  EXPECT_EQ(json::parse(r.err)["error"], "IoError");

  // Every pair fails the scale test, so the solver reports NoConsensus.
  std::ofstream bad(path("scattered.txt"));
  for (int i = 0; i < 30; ++i) bad << 0.01 * i << " 0 0 " << 10.0 * i * i << " 0 0\n";
  bad.close();
  r = run({"register", path("scattered.txt")});
  EXPECT_EQ(r.code, cli::kExitSolver);
  EXPECT_EQ(json::parse(r.err)["error"], "NoConsensus");

  EXPECT_EQ(run({"register"}).code, cli::kExitParse);
  EXPECT_EQ(run({"bench", "--solvers", "icp"}).code, cli::kExitParse);
  EXPECT_EQ(run({"bench", "--outlier-mode", "cube"}).code, cli::kExitParse);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitParse);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, BenchWritesOneRowPerTrialAndSolver) {
  const Outcome r = run({"bench", "--n", "200", "--outlier-rate", "0.5", "--trials", "3",
                     "--solvers", "vocra,ransac", "--no-timing", "--output",
                     path("bench.csv"), "--json", path("bench.json"), "--outlier-mode",
                     "on-surface"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::ifstream csv(path("bench.csv"));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(csv, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[1].rfind("0,vocra,0.5,", 0), 0u) << lines[1];
  EXPECT_EQ(lines[2].rfind("0,ransac,0.5,", 0), 0u) << lines[2];
  EXPECT_NE(r.out.find("med_rot_deg"), std::string::npos);

  std::ifstream js(path("bench.json"));
  const json j = json::parse(js);
  ASSERT_EQ(j.size(), 6u);
  for (const json& rec : j) EXPECT_EQ(rec["outlier_mode"], "on-surface");
}

TEST_F(CliTest, BenchRerunIsByteIdentical) {
  const std::vector<std::string> args{"bench", "--n",      "300",       "--outlier-rate",
                                      "0.9",   "--trials", "2",         "--no-timing",
                                      "--solvers", "vocra,ransac"};
  const Outcome a = run(args);
  const Outcome b = run(args);
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
}

TEST_F(CliTest, VoteInspectReportsEarlyExit) {
  const std::string pairs = generate(0.0, 5);
  const Outcome r = run({"vote-inspect", pairs, "--ground-truth", path("gt.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.err.find("e_in=true"), std::string::npos) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "index,votes,rank,is_inlier");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1000u);
}

TEST_F(CliTest, VoteInspectKernels) {
  const std::string pairs = generate(0.95, 6);
  const Outcome tb = run({"vote-inspect", pairs});
  const Outcome zo = run({"vote-inspect", pairs, "--kernel", "zeroone"});
  ASSERT_EQ(tb.code, cli::kExitOk) << tb.err;
  ASSERT_EQ(zo.code, cli::kExitOk) << zo.err;
  EXPECT_NE(tb.err.find("e_in=false"), std::string::npos);
  EXPECT_NE(tb.out, zo.out);
  EXPECT_EQ(run({"vote-inspect", pairs, "--kernel", "huber"}).code, cli::kExitParse);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  generate(0.8, 9, "on-surface");
  std::stringstream first;
  first << std::ifstream(path("pairs.txt")).rdbuf();
  generate(0.8, 9, "on-surface");
  std::stringstream second;
  second << std::ifstream(path("pairs.txt")).rdbuf();
  EXPECT_EQ(first.str(), second.str());
  const GroundTruth gt = read_ground_truth(path("gt.json"));
  EXPECT_EQ(gt.inliers.size(), 200u);
}

}  // namespace
}  // namespace vocra
