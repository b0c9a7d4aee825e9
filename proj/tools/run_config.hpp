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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drm/dataset.hpp"
#include "drm/gazezone.hpp"
#include "drm/lstm.hpp"
#include "drm/readiness.hpp"

namespace drm::cli {

// Invalid configuration or flag values; reported with exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 7;
  std::string data_dir;
  std::string out_dir;
  std::string format = "csv";

  FeatureCase gaze_case = FeatureCase::Case2;
  double train_ratio = 0.8;
  bool chronological_split = false;
  ForestConfig forest;
  std::string forest_path;

  double interval_seconds = 2.0;
  bool spline_clamp = true;

  std::size_t window_length = 60;
  std::size_t stride = 1;
  std::size_t n_folds = 4;
  std::size_t val_size = 460;
  std::size_t test_size = 460;

  TrainConfig train;
  std::vector<Architecture> architectures{Architecture::Vanilla, Architecture::Bidirectional};
  std::vector<InputCase> cases{InputCase::Head, InputCase::Gaze, InputCase::Both};
  std::size_t threads = 1;

  std::string sweep_parameter = "folds";
  std::vector<long long> sweep_values{2, 3, 4, 5};

  std::string model_path;

  nlohmann::json to_json() const;
  // Keys absent from `j` keep their defaults; unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);

  // FNV-1a of the canonical JSON without the data and output directories,
  // as 16 hex digits.
  std::string hash() const;

  void validate() const;
};

}  // namespace drm::cli
