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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drm/dataset.hpp"
#include "drm/gazezone.hpp"
#include "drm/groundtruth.hpp"
#include "drm/readiness.hpp"

namespace drm {

// (1/m) * sum |pred_i - truth_i|.
double mae(std::span<const double> predictions, std::span<const double> truths);

// Mean and population standard deviation.
std::pair<double, double> mean_and_std(std::span<const double> xs);

struct ReportRow {
  std::string arch;
  std::string feature_case;
  std::optional<std::size_t> fold;  // empty on aggregate rows
  double test_mae = 0.0;            // fold MAE, or the mean across folds when agg
  std::optional<double> baseline_mae;
  std::optional<std::size_t> best_epoch;
  bool agg = false;
  std::optional<double> std_mae;    // population std across folds, agg rows only
  std::string sweep_param;          // "folds" | "batch_size" | ""
  std::optional<long long> sweep_value;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// Per-window predictions of one (arch, case, fold) cell, for plot data.
struct PredictionTrace {
  std::string arch;
  std::string feature_case;
  std::size_t fold = 0;
  std::vector<std::size_t> window_index;
  std::vector<double> truth;
  std::vector<double> prediction;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> diagnostics;
  std::vector<PredictionTrace> traces;
};

struct ExperimentConfig {
  std::vector<Architecture> architectures{Architecture::Vanilla, Architecture::Bidirectional};
  std::vector<InputCase> cases{InputCase::Head, InputCase::Gaze, InputCase::Both};
  TrainConfig train;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool keep_traces = true;
  // Called once per trained cell, in report order.
  std::function<void(Architecture, InputCase, std::size_t fold, const ReadinessModel&)> on_model;
};

// Seed used for one cell, derived from the experiment seed by name.
std::uint64_t cell_seed(std::uint64_t master, Architecture arch, InputCase c, std::size_t fold);

// Trains and tests every (architecture, case, fold) cell. `windows` carry the
// full 18-row input layout, in chronological order.
ExperimentReport run_ablation(const std::vector<Window>& windows, const FoldPlan& plan, const ExperimentConfig& config);

enum class SweepParameter { Folds, BatchSize };

// One run per value for the first configured architecture and case.
// Fold-count values above max_folds are skipped with a diagnostic.
ExperimentReport sweep(const std::vector<Window>& windows, SweepParameter parameter, std::span<const long long> values,
                       std::size_t default_folds, std::size_t val_size, std::size_t test_size,
                       const ExperimentConfig& config);

// Appends one agg row per (sweep value, arch, case) group of fold rows.
void add_aggregates(ExperimentReport& report);

// CSV header: arch,case,fold,test_mae,baseline_mae,best_epoch,agg,std_mae,sweep_param,sweep_value
// Metadata precedes the header as "# key=value" lines, diagnostics as
// "# diagnostic=text".
void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_report_json(std::ostream& out, const ExperimentReport& report);
ExperimentReport read_report_csv(std::istream& in);
ExperimentReport read_report_json(std::istream& in);

enum class ReportFormat { Csv, Json };

// Writes `<dir>/<stem>.csv|json`, plus `<dir>/<stem>_traces.csv` when the
// report carries traces. Returns the paths written.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& dir, ReportFormat format,
                                     const std::string& stem = "report");

// Plot-data tables.
void write_traces_csv(std::ostream& out, std::span<const PredictionTrace> traces);
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m);
void write_correlation_csv(std::ostream& out, const std::array<std::optional<double>, kNumZones>& r);
void write_variability_csv(std::ostream& out, const std::array<std::optional<ClassStats>, 5>& stats);

}  // namespace drm
