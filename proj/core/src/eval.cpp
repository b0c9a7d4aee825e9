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

#include "drm/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "drm/csv.hpp"
#include "drm/error.hpp"
#include "drm/rng.hpp"

namespace drm {

double mae(std::span<const double> predictions, std::span<const double> truths) {
  if (predictions.size() != truths.size()) throw Error("mae: length mismatch");
  if (predictions.empty()) throw Error("mae: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) sum += std::abs(predictions[i] - truths[i]);
  return sum / static_cast<double>(predictions.size());
}

std::pair<double, double> mean_and_std(std::span<const double> xs) {
  if (xs.empty()) throw Error("mean_and_std: empty input");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

std::uint64_t cell_seed(std::uint64_t master, Architecture arch, InputCase c, std::size_t fold) {
  return derive_seed(master, std::string("readiness/") + to_string(arch) + "/" + to_string(c) + "/fold/" +
                                 std::to_string(fold));
}

namespace {

struct Cell {
  Architecture arch;
  InputCase feature_case;
  std::size_t fold;
};

struct CellResult {
  ReportRow row;
  PredictionTrace trace;
  std::optional<ReadinessModel> model;
};

// Runs jobs [0, n) on up to `threads` workers; results land by index so the
// outcome does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t n, std::size_t threads, F&& job) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<CellResult> run_cells(const std::vector<Window>& windows, const FoldPlan& plan,
                                  const std::vector<Cell>& cells, const ExperimentConfig& config,
                                  const TrainConfig& train_config) {
  std::map<InputCase, std::vector<Window>> per_case;
  for (const Cell& c : cells)
    if (!per_case.count(c.feature_case)) per_case[c.feature_case] = select_case(windows, c.feature_case);

  std::vector<CellResult> results(cells.size());
  parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const Fold& fold = plan.folds.at(cell.fold);
    const std::vector<Window>& ws = per_case.at(cell.feature_case);
    TrainConfig tc = train_config;
    tc.seed = cell_seed(config.seed, cell.arch, cell.feature_case, cell.fold);
    TrainResult tr = train(ws, fold, cell.arch, cell.feature_case, tc);

    const std::vector<Window> test = take(ws, fold.test);
    const std::vector<double> pred = predict_series(tr.model, test);
    std::vector<double> truth;
    truth.reserve(test.size());
    for (const Window& w : test) truth.push_back(w.target);
    double train_mean = 0.0;
    for (std::size_t k = fold.train.begin; k < fold.train.end; ++k) train_mean += ws[k].target;
    train_mean /= static_cast<double>(fold.train.size());
    const std::vector<double> constant(truth.size(), train_mean);

    CellResult& r = results[i];
    r.row.arch = to_string(cell.arch);
    r.row.feature_case = to_string(cell.feature_case);
    r.row.fold = cell.fold;
    r.row.test_mae = mae(pred, truth);
    r.row.baseline_mae = mae(constant, truth);
    r.row.best_epoch = tr.model.meta.best_epoch;
    if (config.keep_traces) {
      r.trace = {r.row.arch, r.row.feature_case, cell.fold, {}, truth, pred};
      for (std::size_t k = fold.test.begin; k < fold.test.end; ++k) r.trace.window_index.push_back(k);
    }
    if (config.on_model) r.model = std::move(tr.model);
  });
  if (config.on_model)
    for (std::size_t i = 0; i < cells.size(); ++i) config.on_model(cells[i].arch, cells[i].feature_case, cells[i].fold, *results[i].model);
  return results;
}

void stamp_metadata(ExperimentReport& report, const ExperimentConfig& config, const TrainConfig& tc) {
  report.metadata["seed"] = std::to_string(config.seed);
  report.metadata["learning_rate"] = format_double(tc.learning_rate);
  report.metadata["batch_size"] = std::to_string(tc.batch_size);
  report.metadata["max_epochs"] = std::to_string(tc.max_epochs);
  report.metadata["std"] = "population";
  report.metadata["selection"] = "min-validation-mae";
}

}  // namespace

void add_aggregates(ExperimentReport& report) {
  struct Key {
    std::string sweep_param;
    std::optional<long long> sweep_value;
    std::string arch, feature_case;
    bool operator<(const Key& o) const {
      return std::tie(sweep_param, sweep_value, arch, feature_case) <
             std::tie(o.sweep_param, o.sweep_value, o.arch, o.feature_case);
    }
  };
  std::vector<Key> order;
  std::map<Key, std::vector<const ReportRow*>> groups;
  for (const ReportRow& r : report.rows) {
    if (r.agg) continue;
    Key k{r.sweep_param, r.sweep_value, r.arch, r.feature_case};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) order.push_back(k);
    it->second.push_back(&r);
  }
  std::vector<ReportRow> aggs;
  for (const Key& k : order) {
    std::vector<double> maes, base;
    for (const ReportRow* r : groups[k]) {
      maes.push_back(r->test_mae);
      if (r->baseline_mae) base.push_back(*r->baseline_mae);
    }
    const auto [mean, sd] = mean_and_std(maes);
    ReportRow a;
    a.arch = k.arch;
    a.feature_case = k.feature_case;
    a.test_mae = mean;
    if (base.size() == maes.size()) a.baseline_mae = mean_and_std(base).first;
    a.agg = true;
    a.std_mae = sd;
    a.sweep_param = k.sweep_param;
    a.sweep_value = k.sweep_value;
    aggs.push_back(std::move(a));
  }
  report.rows.insert(report.rows.end(), aggs.begin(), aggs.end());
}

ExperimentReport run_ablation(const std::vector<Window>& windows, const FoldPlan& plan, const ExperimentConfig& config) {
  if (plan.folds.empty()) throw Error("run_ablation: fold plan is empty");
  if (plan.n_windows != windows.size()) throw Error("run_ablation: fold plan does not match the window count");
  std::vector<Cell> cells;
  for (Architecture a : config.architectures)
    for (InputCase c : config.cases)
      for (std::size_t k = 0; k < plan.folds.size(); ++k) cells.push_back({a, c, k});

  ExperimentReport report;
  for (CellResult& r : run_cells(windows, plan, cells, config, config.train)) {
    report.rows.push_back(std::move(r.row));
    if (config.keep_traces) report.traces.push_back(std::move(r.trace));
  }
  add_aggregates(report);
  stamp_metadata(report, config, config.train);
  report.metadata["n_folds"] = std::to_string(plan.folds.size());
  report.metadata["val_size"] = std::to_string(plan.val_size);
  report.metadata["test_size"] = std::to_string(plan.test_size);
  return report;
}

ExperimentReport sweep(const std::vector<Window>& windows, SweepParameter parameter, std::span<const long long> values,
                       std::size_t default_folds, std::size_t val_size, std::size_t test_size,
                       const ExperimentConfig& config) {
  if (config.architectures.empty() || config.cases.empty()) throw Error("sweep: no architecture or case configured");
  const Architecture arch = config.architectures.front();
  const InputCase feature_case = config.cases.front();
  const std::string param = parameter == SweepParameter::Folds ? "folds" : "batch_size";
  const std::size_t cap = max_folds(windows.size(), val_size, test_size);

  ExperimentReport report;
  for (long long v : values) {
    TrainConfig tc = config.train;
    std::size_t folds = default_folds;
    if (parameter == SweepParameter::Folds) {
      if (v < 2 || static_cast<std::size_t>(v) > cap) {
        report.diagnostics.push_back("folds=" + std::to_string(v) + " infeasible: max feasible folds is " +
                                     std::to_string(cap) + " for " + std::to_string(windows.size()) +
                                     " windows with validation " + std::to_string(val_size) + " + test " +
                                     std::to_string(test_size));
        continue;
      }
      folds = static_cast<std::size_t>(v);
    } else {
      if (v < 1) {
        report.diagnostics.push_back("batch_size=" + std::to_string(v) + " infeasible: must be >= 1");
        continue;
      }
      tc.batch_size = static_cast<std::size_t>(v);
    }
    const FoldPlan plan = ts_folds(windows.size(), folds, val_size, test_size);
    std::vector<Cell> cells;
    for (std::size_t k = 0; k < plan.folds.size(); ++k) cells.push_back({arch, feature_case, k});
    for (CellResult& r : run_cells(windows, plan, cells, config, tc)) {
      r.row.sweep_param = param;
      r.row.sweep_value = v;
      report.rows.push_back(std::move(r.row));
      if (config.keep_traces) report.traces.push_back(std::move(r.trace));
    }
  }
  add_aggregates(report);
  stamp_metadata(report, config, config.train);
  report.metadata["sweep"] = param;
  report.metadata["val_size"] = std::to_string(val_size);
  report.metadata["test_size"] = std::to_string(test_size);
  return report;
}

}  // namespace drm
