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

// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "drm/adam.hpp"
#include "drm/dataset.hpp"
#include "drm/error.hpp"
#include "drm/eval.hpp"
#include "drm/features.hpp"
#include "drm/gazezone.hpp"
#include "drm/groundtruth.hpp"
#include "drm/rng.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace drm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::vector<std::string>& args, std::string* err_text = nullptr) {
  std::vector<std::string> full{"drm"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  if (code != 0) std::cerr << "drm";
  if (code != 0)
    for (const auto& a : args) std::cerr << ' ' << a;
  if (code != 0) std::cerr << " -> exit " << code << "\n" << err.str();
  return code;
}

// 1. EAR/HR/VR against per-formula oracles, plus scale/translation invariance.
Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(7, "acceptance/formulas"));
  double max_err = 0.0, max_inv = 0.0;
  for (int k = 0; k < 1000; ++k) {
    LandmarkFrame f = test::random_frame(rng);
    const auto& p = f.points;
    for (EyeSide side : {EyeSide::Right, EyeSide::Left}) {
      const EyeLandmarks& e = eye_landmarks(side);
      const auto pt = [&](int i) { return oracle::Pt{p[static_cast<std::size_t>(i)].x, p[static_cast<std::size_t>(i)].y}; };
      max_err = std::max(max_err, std::fabs(eye_aspect_ratio(p, side).value -
                                            oracle::ear(pt(e.top), pt(e.bottom), pt(e.corner_ref), pt(e.corner_far))));
      max_err = std::max(max_err, std::fabs(horizontal_gaze_ratio(p, side).value -
                                            oracle::axis_ratio(p[e.pupil].x, p[e.corner_ref].x, p[e.corner_far].x)));
      max_err = std::max(max_err, std::fabs(vertical_gaze_ratio(p, side).value -
                                            oracle::axis_ratio(p[e.pupil].y, p[e.top].y, p[e.bottom].y)));
    }
    const auto before = frame_features(f).eyes.values();
    const double s = rng.uniform(0.2, 5.0), tx = rng.uniform(-500, 500), ty = rng.uniform(-500, 500);
    for (Point2& q : f.points) q = {s * q.x + tx, s * q.y + ty};
    const auto after = frame_features(f).eyes.values();
    for (std::size_t i = 0; i < before.size(); ++i) max_inv = std::max(max_inv, std::fabs(before[i] - after[i]));
  }
  const double t = seconds_since(t0);
  return {max_err <= 1e-12 && max_inv <= 1e-9 && t < 5.0,
          "max oracle error " + fmt(max_err) + " (<= 1e-12), max invariance error " + fmt(max_inv) +
              " (<= 1e-9), " + fmt(t, 3) + " s (< 5 s)"};
}

// 2. BPTT gradients against central finite differences.
Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, worst_abs = 0.0;
  std::size_t checked = 0, above = 0;
  std::string where = "none";
  for (Architecture a : {Architecture::Vanilla, Architecture::Bidirectional})
    for (InputCase c : {InputCase::Head, InputCase::Gaze, InputCase::Both}) {
      const auto r = test::gradient_check(a, input_dims(c), 3, 5, 2, derive_seed(7, std::string("acceptance/grad/") +
                                                                                         to_string(a) + "/" + to_string(c)));
      checked += r.checked;
      above += r.relative;
      worst_abs = std::max(worst_abs, r.max_abs_error);
      if (r.max_relative_error > worst) {
        worst = r.max_relative_error;
        where = std::string(to_string(a)) + "/" + to_string(c) + " " + r.worst_parameter;
      }
    }
  const double t = seconds_since(t0);
  return {worst < 1e-4 && t < 60.0,
          std::to_string(checked) + " entries, max relative error " + fmt(worst) + " (worst " + where +
              ", < 1e-4), max |analytic - numeric| " + fmt(worst_abs) + ", " + std::to_string(above) +
              " compared relatively (|g| >= 1e-7), " + fmt(t, 3) + " s (< 60 s)"};
}

// 3. First Adam step on a scalar with g = 1.
Outcome criterion3() {
  Eigen::MatrixXd theta(1, 1), g(1, 1), m = Eigen::MatrixXd::Zero(1, 1), v = Eigen::MatrixXd::Zero(1, 1);
  theta(0, 0) = 1.0;
  g(0, 0) = 1.0;
  const AdamConfig cfg;
  adam_update(theta, g, m, v, cfg, 1);
  const double expected = oracle::adam_first_step(1.0, 1.0, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
  const double err = std::fabs(theta(0, 0) - expected);
  return {err <= 1e-9, "theta " + fmt(theta(0, 0), 12) + " vs hand " + fmt(expected, 12) + ", error " + fmt(err)};
}

// 4. Spline through ratings [1, 5, 1].
Outcome criterion4() {
  const std::vector<double> means{1, 5, 1};
  const double fps = 30.0, interval = 2.0;
  const std::size_t frames = 180;
  const ReadinessSeries s = interpolate_readiness(means, interval, fps, frames);
  const oracle::DenseSpline ref({2, 4, 6}, {1, 5, 1});
  double max_err = 0.0;
  bool in_range = true;
  for (int k = 0; k < 50; ++k) {
    const auto f = static_cast<std::size_t>(std::lround(k * (frames - 1) / 49.0));
    max_err = std::max(max_err, std::fabs(s.values[f] - std::clamp(ref(static_cast<double>(f) / fps), 1.0, 5.0)));
  }
  for (double v : s.values) in_range = in_range && v >= 1.0 && v <= 5.0;
  const bool knots = s.values[60] == 1.0 && s.values[120] == 5.0;
  return {max_err <= 1e-9 && knots && in_range,
          "max error vs dense spline " + fmt(max_err) + " at 50 points (<= 1e-9), knots exact " +
              (knots ? "yes" : "no") + ", range [1,5] " + (in_range ? "yes" : "no")};
}

// 5. Fold arithmetic and leakage probe.
Outcome criterion5() {
  const std::size_t cap = max_folds(5640, 460, 460);
  const double raw = 5640.0 / 920.0 - 1.0;
  bool layout = true;
  for (std::size_t k = 2; k <= cap; ++k) {
    const FoldPlan p = ts_folds(5640, k, 460, 460);
    std::size_t prev_test_end = p.folds.front().test.begin;
    for (const Fold& f : p.folds) {
      layout = layout && f.train.begin == 0 && f.train.end == f.validation.begin &&
               f.validation.end == f.test.begin && f.test.begin == prev_test_end && !f.train.empty();
      prev_test_end = f.test.end;
    }
    layout = layout && prev_test_end == 5640;
  }
  bool infeasible_rejected = false;
  try {
    ts_folds(5640, cap + 1, 460, 460);
  } catch (const Error&) {
    infeasible_rejected = true;
  }

  // Poison every frame not covered by a fold's training windows with NaN and
  // fit the normalizer on the training windows only.
  const std::size_t L = 60, n_frames = 5640 + L - 1;
  Rng rng(derive_seed(7, "acceptance/leakage"));
  SeriesMatrix base(kInputDims, static_cast<Eigen::Index>(n_frames));
  for (Eigen::Index i = 0; i < base.size(); ++i) base.data()[i] = rng.normal();
  const FoldPlan plan = ts_folds(5640, cap, 460, 460);
  bool leak_free = true;
  for (const Fold& f : plan.folds) {
    SeriesMatrix poisoned = base;
    for (std::size_t c = f.train.end - 1 + L; c < n_frames; ++c)
      poisoned.col(static_cast<Eigen::Index>(c)).setConstant(std::numeric_limits<double>::quiet_NaN());
    const auto windows = build_windows(std::make_shared<const SeriesMatrix>(poisoned),
                                       std::vector<double>(n_frames, 3.0), L);
    const Normalizer nz = fit_normalizer(take(windows, f.train), continuous_mask(InputCase::Both));
    for (std::size_t k = 0; k < nz.dims(); ++k) leak_free = leak_free && std::isfinite(nz.mean[k]) && std::isfinite(nz.std[k]);
    const auto normalized = nz.apply(take(windows, f.train));
    for (const Window& w : normalized) leak_free = leak_free && w.inputs().allFinite();
  }
  return {cap == 5 && layout && infeasible_rejected && leak_free,
          "5640/(460+460) - 1 = " + fmt(raw, 3) + " -> max folds " + std::to_string(cap) +
              ", ranges disjoint+chronological " + (layout ? "yes" : "no") + ", 6 folds rejected " +
              (infeasible_rejected ? "yes" : "no") + ", poisoned-future probe finite " + (leak_free ? "yes" : "no")};
}

// 6. Depth-1 tree vs exhaustive stump, vote totals, seeded determinism.
Outcome criterion6() {
  Rng rng(derive_seed(7, "acceptance/forest"));
  std::vector<LabeledSample> data(20);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (auto& s : data) {
    for (int j = 0; j < 9; ++j) s.x.push_back(rng.uniform(-1, 1));
    s.zone = zone_at(rng.below(4));
    x.push_back(s.x);
    y.push_back(static_cast<int>(index_of(s.zone)));
  }
  ForestConfig stump_cfg;
  stump_cfg.n_trees = 1;
  stump_cfg.max_depth = 1;
  stump_cfg.bootstrap = false;
  stump_cfg.features_per_split = 9;
  const TreeNode root = train_forest(data, stump_cfg, FeatureCase::Case2).trees()[0].nodes()[0];
  const oracle::Stump best = oracle::best_stump(x, y, static_cast<int>(kNumZones));
  const bool stump = root.feature == best.column && root.threshold == best.threshold;

  std::vector<LabeledSample> big(500);
  for (auto& s : big) {
    for (int j = 0; j < 9; ++j) s.x.push_back(rng.uniform(-1, 1));
    s.zone = zone_at(rng.below(kNumZones));
  }
  ForestConfig cfg;
  cfg.n_trees = 25;
  cfg.seed = derive_seed(7, "acceptance/forest/seed");
  const GazeForest a = train_forest(big, cfg, FeatureCase::Case2), b = train_forest(big, cfg, FeatureCase::Case2);
  bool totals = true;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> q(9);
    for (double& v : q) v = rng.uniform(-1.5, 1.5);
    std::uint32_t sum = 0;
    for (auto c : a.votes(q)) sum += c;
    totals = totals && sum == cfg.n_trees;
  }
  const bool deterministic = a.to_json() == b.to_json();
  return {stump && totals && deterministic,
          "stump split col " + std::to_string(root.feature) + " thr " + fmt(root.threshold, 10) + " vs oracle col " +
              std::to_string(best.column) + " thr " + fmt(best.threshold, 10) + ", vote totals == n_trees " +
              (totals ? "yes" : "no") + ", bit-exact reseed " + (deterministic ? "yes" : "no")};
}

const char* kBenchmarkConfig = R"({
  "seed": 7,
  "windows": {"length": 60, "stride": 3},
  "folds": {"n_folds": 2, "val_size": 150, "test_size": 150},
  "train": {"learning_rate": 0.001, "batch_size": 4, "max_epochs": 10},
  "experiment": {"architectures": ["bidirectional"], "cases": ["head", "both"]}
})";

struct E2E {
  bool ok = false;
  double acc_case1 = 0, acc_case2 = 0;
  std::map<std::string, ReportRow> agg;  // by case
  double seconds = 0;
};

double gaze_accuracy(const fs::path& dir) {
  std::ifstream in(dir / "gaze_report.json");
  return nlohmann::json::parse(in).at("accuracy").get<double>();
}

// synth -> train-gaze (both cases) -> train-readiness under `root`.
E2E end_to_end(const fs::path& root, const fs::path& config) {
  const auto t0 = std::chrono::steady_clock::now();
  E2E r;
  const std::string cfg = config.string();
  const fs::path data = root / "data";
  if (run_cli({"synth", "--config", cfg, "--out", data.string()}) != 0) return r;
  if (run_cli({"train-gaze", "--config", cfg, "--data", data.string(), "--out", (root / "gaze_case1").string(),
               "--case", "head", "--format", "json"}) != 0)
    return r;
  if (run_cli({"train-gaze", "--config", cfg, "--data", data.string(), "--out", (root / "gaze_case2").string(),
               "--case", "head+eye", "--format", "json"}) != 0)
    return r;
  if (run_cli({"train-readiness", "--config", cfg, "--data", data.string(), "--out", (root / "readiness").string()}) !=
      0)
    return r;
  r.acc_case1 = gaze_accuracy(root / "gaze_case1");
  r.acc_case2 = gaze_accuracy(root / "gaze_case2");
  std::ifstream in(root / "readiness" / "report.csv");
  for (const ReportRow& row : read_report_csv(in).rows)
    if (row.agg && row.arch == "bidirectional") r.agg[row.feature_case] = row;
  r.ok = r.agg.count("head") && r.agg.count("both");
  r.seconds = seconds_since(t0);
  return r;
}

Outcome criterion7(const E2E& e) {
  if (!e.ok) return {false, "pipeline run failed"};
  const ReportRow& both = e.agg.at("both");
  const ReportRow& head = e.agg.at("head");
  const double gain = 1.0 - both.test_mae / *both.baseline_mae;
  const bool a = e.acc_case2 >= e.acc_case1 && e.acc_case2 >= 0.90;
  const bool b = gain >= 0.30 && both.test_mae <= head.test_mae;
  return {a && b && e.seconds < 900.0,
          "(a) Case2 acc " + fmt(e.acc_case2) + " vs Case1 " + fmt(e.acc_case1) + " (>= Case1, >= 0.90); (b) bi/both MAE " +
              fmt(both.test_mae) + " vs baseline " + fmt(*both.baseline_mae) + " (-" + fmt(100 * gain, 3) +
              "%, need >= 30%), bi/head MAE " + fmt(head.test_mae) + "; " + fmt(e.seconds, 4) + " s (< 900 s)"};
}

Outcome criterion8(const fs::path& a, const fs::path& b, const E2E& second) {
  if (!second.ok) return {false, "second pipeline run failed"};
  std::vector<std::string> files, mismatched;
  for (const auto& entry : fs::recursive_directory_iterator(a))
    if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), a).string());
  std::sort(files.begin(), files.end());
  std::size_t models = 0, reports = 0;
  for (const std::string& f : files) {
    if (!fs::exists(b / f) || test::read_file(a / f) != test::read_file(b / f)) mismatched.push_back(f);
    models += f.find("models/") != std::string::npos || f.find("gaze_forest.json") != std::string::npos;
    reports += f.find("report") != std::string::npos;
  }
  std::size_t count_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) count_b += entry.is_regular_file();
  const bool same_set = count_b == files.size();
  const bool ok = mismatched.empty() && same_set && models > 0 && reports > 0;
  return {ok, std::to_string(files.size()) + " files compared (" + std::to_string(models) + " model files, " +
                  std::to_string(reports) + " reports), " + std::to_string(mismatched.size()) + " differ" +
                  (mismatched.empty() ? "" : " (first: " + mismatched.front() + ")")};
}

// 9. The reference configuration is accepted and yields the full arch x case x fold report.
Outcome criterion9(const fs::path& work, const fs::path& synth_data, const std::string& dmd_dir, std::size_t epochs) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool external = !dmd_dir.empty();
  nlohmann::json cfg = {{"seed", 7},
                        {"windows", {{"length", 60}, {"stride", 1}}},
                        {"train", {{"learning_rate", 0.001}, {"batch_size", 4}, {"max_epochs", external ? 100 : epochs}}},
                        {"folds", {{"n_folds", 4}, {"val_size", external ? 460 : 450}, {"test_size", external ? 460 : 450}}},
                        {"experiment",
                         {{"architectures", {"vanilla", "bidirectional"}}, {"cases", {"head", "gaze", "both"}}}}};
  const fs::path cfg_path = work / "reference_config.json";
  {
    std::ofstream o(cfg_path);
    o << cfg.dump(1) << '\n';
  }
  const fs::path out = work / "reference";
  const std::string data = external ? dmd_dir : synth_data.string();
  if (run_cli({"train-readiness", "--config", cfg_path.string(), "--data", data, "--out", out.string()}) != 0)
    return {false, "train-readiness rejected the reference configuration"};
  std::ifstream in(out / "report.csv");
  const ExperimentReport r = read_report_csv(in);
  std::map<std::pair<std::string, std::string>, std::size_t> folds, aggs;
  for (const ReportRow& row : r.rows) (row.agg ? aggs : folds)[{row.arch, row.feature_case}]++;
  bool shape = folds.size() == 6 && aggs.size() == 6;
  for (const auto& [k, n] : folds) shape = shape && n == 4;
  for (const auto& [k, n] : aggs) shape = shape && n == 1;
  bool meta = r.metadata.count("window_length") && r.metadata.at("window_length") == "60" &&
              r.metadata.at("learning_rate") == "0.001" && r.metadata.at("batch_size") == "4" &&
              r.metadata.at("n_folds") == "4";
  std::string table;
  for (const ReportRow& row : r.rows)
    if (row.agg) table += " " + row.arch.substr(0, 3) + "/" + row.feature_case + "=" + fmt(row.test_mae, 3);
  return {shape && meta,
          std::string(external ? "external data " + dmd_dir : "synthetic stand-in corpus (val/test 450, max_epochs " +
                                                                 std::to_string(epochs) + ")") +
              ": window 60, lr 0.001, batch 4, 4 folds accepted; 2x3x4 fold rows + 6 aggregates " +
              (shape ? "yes" : "no") + ";" + table + "; " + fmt(seconds_since(t0), 4) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drm acceptance criteria"};
  std::string work_dir = (fs::temp_directory_path() / "drm_acceptance").string();
  std::string dmd_dir;
  std::size_t reference_epochs = 1;
  app.add_option("--work-dir", work_dir, "Scratch directory (recreated)");
  app.add_option("--dmd-dir", dmd_dir, "Externally supplied data directory for criterion 9");
  app.add_option("--reference-epochs", reference_epochs, "max_epochs for criterion 9 on the synthetic stand-in");
  CLI11_PARSE(app, argc, argv);

  const fs::path work(work_dir);
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path cfg = work / "benchmark_config.json";
  {
    std::ofstream o(cfg);
    o << kBenchmarkConfig;
  }

  int failures = 0;
  const auto report = [&](int n, const Outcome& o) {
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
    failures += !o.pass;
  };
  const auto guarded = [&](int n, const std::function<Outcome()>& f) {
    try {
      report(n, f());
    } catch (const std::exception& e) {
      report(n, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  E2E first, second;
  guarded(7, [&] {
    first = end_to_end(work / "run_a", cfg);
    return criterion7(first);
  });
  guarded(8, [&] {
    const Outcome rerun6 = criterion6();
    second = end_to_end(work / "run_b", cfg);
    Outcome o = criterion8(work / "run_a", work / "run_b", second);
    o.pass = o.pass && rerun6.pass;
    o.detail += std::string(", criterion 6 rerun ") + (rerun6.pass ? "identical" : "failed");
    return o;
  });
  guarded(9, [&] { return criterion9(work, work / "run_a" / "data", dmd_dir, reference_epochs); });

  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
