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
#include <optional>
#include <string>
#include <vector>

#include "drm/adam.hpp"
#include "drm/dataset.hpp"
#include "drm/lstm.hpp"

namespace drm {

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 4;
  std::size_t max_epochs = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  // Units per direction; the architecture's standard size when empty.
  std::optional<std::size_t> hidden;

  AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon}; }
  void validate() const;
};

struct ModelMetadata {
  InputCase feature_case = InputCase::Both;
  std::size_t window_length = 60;
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;  // 1-based
  double best_val_mae = 0.0;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

struct ReadinessModel {
  NetworkParams params;
  Normalizer normalizer;
  ModelMetadata meta;

  std::string to_json() const;
  static ReadinessModel from_json(const std::string& text);
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_mae = 0.0;
  double val_mae = 0.0;
};

struct TrainResult {
  ReadinessModel model;
  std::vector<EpochStats> history;
};

// Chronological mini-batches, Adam on the batch-mean absolute error. After
// every epoch the validation MAE is measured and the parameters with the
// lowest value (earliest on ties) are returned. Windows carry the case's
// columns, unnormalized.
TrainResult train(const std::vector<Window>& train_windows, const std::vector<Window>& val_windows,
                  Architecture arch, InputCase feature_case, const TrainConfig& config);

TrainResult train(const std::vector<Window>& windows, const Fold& fold, Architecture arch, InputCase feature_case,
                  const TrainConfig& config);

// One raw (unclamped unless asked) prediction per window.
std::vector<double> predict_series(const ReadinessModel& model, const std::vector<Window>& windows,
                                   bool clamp = false);

}  // namespace drm
