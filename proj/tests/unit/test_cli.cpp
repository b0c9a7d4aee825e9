// Copyright 2026 The drm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "drm/csv.hpp"
#include "drm/eval.hpp"
#include "drm/readiness.hpp"
#include "oracles.hpp"
#include "run_config.hpp"
#include "test_support.hpp"

namespace drm {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "drm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kSmallConfig = R"({
  "gaze": {"forest": {"n_trees": 10}},
  "windows": {"length": 60, "stride": 10},
  "folds": {"n_folds": 2, "val_size": 40, "test_size": 40},
  "train": {"max_epochs": 1, "hidden": 4},
  "experiment": {"architectures": ["vanilla"], "cases": ["head", "both"]}
})";

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = std::make_unique<test::TempDir>("cli");
    data_ = root_->path() / "data";
    const CliRun r = cli({"synth", "--seed", "7", "--out", data_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    config_ = root_->path() / "small.json";
    test::write_file(config_, kSmallConfig);
  }
  static void TearDownTestSuite() { root_.reset(); }

  static std::unique_ptr<test::TempDir> root_;
  static fs::path data_, config_;
};

std::unique_ptr<test::TempDir> CliTest::root_;
fs::path CliTest::data_, CliTest::config_;

TEST_F(CliTest, SynthCorpusShapeAndDeterminism) {
  const auto files = test::list_files(data_);
  std::size_t sessions = 0, ratings = 0;
  for (const auto& f : files) {
    sessions += f.ends_with(".lmks.jsonl");
    ratings += f.ends_with(".ratings.csv");
  }
  EXPECT_EQ(sessions, 15u);
  EXPECT_EQ(ratings, 30u);
  const test::TempDir again("cli_again");
  ASSERT_EQ(cli({"synth", "--seed", "7", "--out", again.str()}).code, 0);
  ASSERT_EQ(test::list_files(again.path()), files);
  for (const auto& f : files) EXPECT_EQ(test::read_file(again.path() / f), test::read_file(data_ / f)) << f;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({"synth", "--seed", "7"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"synth", "--out", "x", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"features", "--out", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(cli({}).code, cli::kExitUsage);
  const test::TempDir d("cli_cfg");
  test::write_file(d.path() / "bad.json", R"({"windows": {"lenght": 60}})");
  const CliRun r = cli({"synth", "--config", (d.path() / "bad.json").string(), "--out", d.str()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("windows.lenght"), std::string::npos);
}

TEST_F(CliTest, HelpDocumentsEveryFlag) {
  for (const char* cmd : {"synth", "features", "train-gaze", "label", "train-readiness", "evaluate", "sweep"}) {
    const CliRun r = cli({cmd, "--help"});
    EXPECT_EQ(r.code, 0) << cmd;
    for (const char* flag : {"--config", "--seed", "--out", "--format"})
      EXPECT_NE(r.out.find(flag), std::string::npos) << cmd << " " << flag;
  }
}

TEST_F(CliTest, FeaturesTables) {
  const test::TempDir out("cli_feat");
  const CliRun r = cli({"features", "--data", data_.string(), "--out", out.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = test::read_file(out.path() / "synth_s00.features.csv");
  EXPECT_NE(text.find("frame,yaw,pitch,roll,ear_r,ear_l,hr_r,hr_l,vr_r,vr_l"), std::string::npos);
}

TEST_F(CliTest, TrainGazeCases) {
  const test::TempDir out("cli_gaze");
  const CliRun head = cli({"train-gaze", "--config", config_.string(), "--data", data_.string(), "--out", out.str(),
                        "--case", "head"});
  ASSERT_EQ(head.code, 0) << head.err;
  EXPECT_NE(head.out.find("input dims 3"), std::string::npos);
  const CliRun both = cli({"train-gaze", "--data", data_.string(), "--out", out.str(), "--format", "json"});
  ASSERT_EQ(both.code, 0) << both.err;
  const auto j = nlohmann::json::parse(test::read_file(out.path() / "gaze_report.json"));
  EXPECT_EQ(j.at("input_dims").get<int>(), 9);
  EXPECT_GE(j.at("accuracy").get<double>(), 0.9);
  EXPECT_TRUE(fs::exists(out.path() / "gaze_forest.json"));
  EXPECT_TRUE(fs::exists(out.path() / "gaze_confusion.csv"));
}

TEST_F(CliTest, CorruptSessionReportsIngestDiagnostic) {
  const test::TempDir bad("cli_bad");
  fs::copy(data_, bad.path(), fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  std::string text = test::read_file(bad.path() / "synth_s03.lmks.jsonl");
  text.insert(text.find('\n', text.find('\n') + 1) + 1, "{\"frame\": oops}\n");
  test::write_file(bad.path() / "synth_s03.lmks.jsonl", text);
  const CliRun r = cli({"features", "--data", bad.str(), "--out", bad.str()});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("synth_s03.lmks.jsonl"), std::string::npos);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST_F(CliTest, LabelWritesReadinessSeries) {
  const test::TempDir out("cli_label");
  ASSERT_EQ(cli({"label", "--data", data_.string(), "--out", out.str()}).code, 0);
  std::ifstream in(out.path() / "synth_s00.readiness.csv");
  const ReadinessSeries s = read_readiness_csv(in);
  EXPECT_EQ(s.values.size(), 360u);
  EXPECT_TRUE(fs::exists(out.path() / "hr_variability.csv"));
}

TEST_F(CliTest, TrainReadinessEvaluateAndSweep) {
  const test::TempDir out("cli_train");
  const CliRun tr = cli({"train-readiness", "--config", config_.string(), "--data", data_.string(), "--out", out.str()});
  ASSERT_EQ(tr.code, 0) << tr.err;
  std::ifstream rin(out.path() / "report.csv");
  const ExperimentReport report = read_report_csv(rin);
  EXPECT_EQ(report.rows.size(), 1u * 2u * 2u + 2u);
  EXPECT_EQ(report.metadata.at("seed"), "7");
  EXPECT_TRUE(fs::exists(out.path() / "models" / "vanilla_head_fold0.json"));
  EXPECT_TRUE(fs::exists(out.path() / "zone_correlation.csv"));

  // Re-running is byte-identical.
  const test::TempDir out2("cli_train2");
  ASSERT_EQ(cli({"train-readiness", "--config", config_.string(), "--data", data_.string(), "--out", out2.str()}).code,
            0);
  EXPECT_EQ(test::read_file(out.path() / "report.csv"), test::read_file(out2.path() / "report.csv"));
  EXPECT_EQ(test::read_file(out.path() / "models" / "vanilla_both_fold1.json"),
            test::read_file(out2.path() / "models" / "vanilla_both_fold1.json"));

  const CliRun ev = cli({"evaluate", "--config", config_.string(), "--data", data_.string(), "--out", out.str(),
                      "--model", (out.path() / "models" / "vanilla_both_fold1.json").string()});
  ASSERT_EQ(ev.code, 0) << ev.err;
  std::ifstream ein(out.path() / "evaluation.csv");
  const ExperimentReport er = read_report_csv(ein);
  ASSERT_FALSE(er.rows.empty());
  std::ifstream tin(out.path() / "evaluation_traces.csv");
  std::string line;
  std::getline(tin, line);
  EXPECT_EQ(line, "arch,case,fold,window,truth,prediction");
  std::vector<double> truth, pred;
  while (std::getline(tin, line)) {
    const auto f = split_csv(line);
    truth.push_back(parse_double(f[4]));
    pred.push_back(parse_double(f[5]));
  }
  EXPECT_NEAR(er.rows[0].test_mae, oracle::naive_mae(pred, truth), 1e-12);
  EXPECT_NEAR(er.rows[0].test_mae, mae(pred, truth), 1e-15);

  const CliRun sw = cli({"sweep", "--config", config_.string(), "--data", data_.string(), "--out", out.str(), "--param",
                      "folds", "--values", "2,3,99", "--arch", "vanilla", "--inputs", "head", "--format", "json"});
  ASSERT_EQ(sw.code, 0) << sw.err;
  std::ifstream sin(out.path() / "sweep.json");
  const ExperimentReport sr = read_report_json(sin);
  EXPECT_EQ(sr.rows.size(), 2u + 3u + 2u);
  ASSERT_EQ(sr.diagnostics.size(), 1u);
  EXPECT_NE(sr.diagnostics[0].find("folds=99"), std::string::npos);
}

TEST_F(CliTest, InfeasibleFoldsIsConfigError) {
  const test::TempDir out("cli_infeasible");
  const CliRun r = cli({"train-readiness", "--data", data_.string(), "--out", out.str()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("max"), std::string::npos);
}

TEST_F(CliTest, ConstantOracleModelScoresZero) {
  const test::TempDir d("cli_const");
  for (const auto& f : test::list_files(data_)) {
    if (!f.ends_with(".lmks.jsonl")) continue;
    fs::copy_file(data_ / f, d.path() / f);
    const std::string id = f.substr(0, f.size() - std::string(".lmks.jsonl").size());
    std::ofstream r(d.path() / (id + ".rater1.ratings.csv"));
    write_ratings(r, RatingSet{"rater1", 2.0, std::vector<int>(6, 3)});
  }
  ReadinessModel m;
  m.params = init_params({Architecture::Vanilla, 3, 2}, 0);
  m.params.set_zero();
  m.params.dense_b(0, 0) = 3.0;
  m.normalizer = {{0, 0, 0}, {1, 1, 1}, {true, true, true}};
  m.meta.feature_case = InputCase::Head;
  test::write_file(d.path() / "const.json", m.to_json());
  const CliRun r = cli({"evaluate", "--data", d.str(), "--out", d.str(), "--model", (d.path() / "const.json").string(),
                     "--config", config_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(d.path() / "evaluation.csv");
  EXPECT_EQ(read_report_csv(in).rows.at(0).test_mae, 0.0);
  EXPECT_EQ(cli({"evaluate", "--data", d.str(), "--out", d.str()}).code, cli::kExitUsage);
}

TEST(RunConfig, ReferenceConfigurationAccepted) {
  const auto j = nlohmann::json::parse(R"({
    "windows": {"length": 60, "stride": 1},
    "folds": {"n_folds": 4, "val_size": 460, "test_size": 460},
    "train": {"learning_rate": 0.001, "batch_size": 4, "max_epochs": 100}
  })");
  const cli::RunConfig c = cli::RunConfig::from_json(j);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.window_length, 60u);
  EXPECT_EQ(c.train.batch_size, 4u);
  EXPECT_EQ(cli::RunConfig::from_json(c.to_json()).to_json(), c.to_json());
  cli::RunConfig moved = c;
  moved.out_dir = "/elsewhere";
  EXPECT_EQ(moved.hash(), c.hash());
  moved.seed = 8;
  EXPECT_NE(moved.hash(), c.hash());
}

}  // namespace
}  // namespace drm
