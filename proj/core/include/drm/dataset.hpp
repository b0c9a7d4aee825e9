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

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "drm/features.hpp"
#include "drm/zone.hpp"

namespace drm {

// Full per-frame model input:
//   [0, 3)   yaw, pitch, roll
//   [3, 12)  one-hot gaze zone
//   [12, 18) ear_r, ear_l, hr_r, hr_l, vr_r, vr_l
inline constexpr std::size_t kInputDims = 18;
inline constexpr std::size_t kHeadBegin = 0;
inline constexpr std::size_t kZoneBegin = 3;
inline constexpr std::size_t kEyeBegin = 12;

using InputVector = std::array<double, kInputDims>;

// Which input blocks feed the readiness model.
enum class InputCase { Head, Gaze, Both };

std::size_t input_dims(InputCase c);
const char* to_string(InputCase c);
std::optional<InputCase> parse_input_case(std::string_view s);

// Indices into the full InputVector kept by a case, in order.
std::vector<std::size_t> selected_columns(InputCase c);

// Whether each selected column is continuous (one-hot columns are not).
std::vector<bool> continuous_mask(InputCase c);

InputVector make_input(const FrameFeatures& f, GazeZone zone);

std::vector<double> select_features(const InputVector& v, InputCase c);

// Column-per-frame matrix (dims x frames).
using SeriesMatrix = Eigen::MatrixXd;

SeriesMatrix assemble_inputs(std::span<const FrameFeatures> features, std::span<const GazeZone> zones);

// Keeps only the rows of the selected case.
SeriesMatrix select_rows(const SeriesMatrix& full, InputCase c);

// A window_length-frame slice of one session ending at frame `end`, with the
// readiness of frame `end` as target. Windows share their session matrix.
struct Window {
  std::shared_ptr<const SeriesMatrix> series;
  std::size_t end = 0;
  std::size_t length = 0;
  double target = 0.0;

  std::size_t begin() const { return end + 1 - length; }
  std::size_t dims() const { return static_cast<std::size_t>(series->rows()); }
  Eigen::Block<const SeriesMatrix, Eigen::Dynamic, Eigen::Dynamic, true> inputs() const {
    return series->middleCols(static_cast<Eigen::Index>(begin()), static_cast<Eigen::Index>(length));
  }
};

// Windows end at window_length-1, window_length-1+stride, ... <= n-1.
std::vector<Window> build_windows(std::shared_ptr<const SeriesMatrix> inputs, std::span<const double> readiness,
                                  std::size_t window_length = 60, std::size_t stride = 1);

// Re-expresses windows over the rows of `c`. Windows must carry the full
// 18-row layout.
std::vector<Window> select_case(const std::vector<Window>& full, InputCase c);

// z-score statistics for continuous dimensions; other dimensions pass through.
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<bool> scaled;

  std::size_t dims() const { return mean.size(); }
  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  // Normalizes each distinct session matrix once and rebinds the windows.
  std::vector<Window> apply(const std::vector<Window>& windows) const;

  friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

inline constexpr double kStdFloor = 1e-8;

// Statistics over the distinct frames covered by the training windows only.
Normalizer fit_normalizer(const std::vector<Window>& train, const std::vector<bool>& continuous);

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct Fold {
  IndexRange train;
  IndexRange validation;
  IndexRange test;
};

struct FoldPlan {
  std::size_t n_windows = 0;
  std::size_t val_size = 0;
  std::size_t test_size = 0;
  std::vector<Fold> folds;

  std::string describe() const;
};

// floor(n / (val + test) - 1): the largest fold count for which every fold
// keeps the same validation and test sizes.
std::size_t max_folds(std::size_t n_windows, std::size_t val_size, std::size_t test_size);

// Expanding-window folds over window indices. Fold k trains on [0, T_k),
// validates on the next val_size windows and tests on the following
// test_size; test blocks tile the tail so the last fold ends at n.
FoldPlan ts_folds(std::size_t n_windows, std::size_t n_folds, std::size_t val_size, std::size_t test_size);

template <typename T>
std::vector<T> take(const std::vector<T>& items, IndexRange r) {
  return std::vector<T>(items.begin() + static_cast<std::ptrdiff_t>(r.begin),
                        items.begin() + static_cast<std::ptrdiff_t>(r.end));
}

}  // namespace drm
