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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drm/features.hpp"
#include "drm/zone.hpp"

namespace drm {

// Column sets feeding the gaze-zone classifier.
//   Case1: yaw, pitch, roll
//   Case2: yaw, pitch, roll, ear_r, ear_l, hr_r, hr_l, vr_r, vr_l
enum class FeatureCase { Case1, Case2 };

std::size_t column_count(FeatureCase c);
const char* to_string(FeatureCase c);
std::optional<FeatureCase> parse_feature_case(std::string_view s);

std::vector<double> classifier_columns(const FrameFeatures& f, FeatureCase c);

struct LabeledSample {
  std::vector<double> x;
  GazeZone zone = GazeZone::G0;
};

struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Partitions indices [0, n). The test share is ceil((1 - train_ratio) * n),
// so 2331 items give 1864 / 467. Seeded shuffle unless `chronological`.
TrainTestSplit split_train_test(std::size_t n, double train_ratio, std::uint64_t seed,
                                bool chronological = false);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> apply_split(const std::vector<T>& items, const TrainTestSplit& s) {
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(s.train.size());
  out.second.reserve(s.test.size());
  for (std::size_t i : s.train) out.first.push_back(items[i]);
  for (std::size_t i : s.test) out.second.push_back(items[i]);
  return out;
}

using ZoneHistogram = std::array<std::uint32_t, kNumZones>;

// Highest count; ties go to the lowest zone.
GazeZone majority(const ZoneHistogram& h);

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  // unbounded when empty
  std::size_t min_samples_leaf = 1;
  std::size_t features_per_split = 0;    // 0 selects ceil(sqrt(columns))
  bool bootstrap = true;
  std::uint64_t seed = 0;

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

// Internal nodes send x[feature] <= threshold to `left`. Leaves have
// feature == -1 and carry the class histogram of their training samples.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  ZoneHistogram histogram{};

  bool is_leaf() const { return feature < 0; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const TreeNode& leaf_for(std::span<const double> x) const;
  GazeZone predict(std::span<const double> x) const { return majority(leaf_for(x).histogram); }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

class GazeForest {
 public:
  GazeForest() = default;
  GazeForest(ForestConfig config, FeatureCase feature_case, std::vector<DecisionTree> trees);

  const ForestConfig& config() const { return config_; }
  FeatureCase feature_case() const { return case_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  // One vote per tree; the total always equals the tree count.
  ZoneHistogram votes(std::span<const double> x) const;
  GazeZone predict(std::span<const double> x) const { return majority(votes(x)); }

  std::string to_json() const;
  static GazeForest from_json(const std::string& text);

  friend bool operator==(const GazeForest&, const GazeForest&) = default;

 private:
  ForestConfig config_;
  FeatureCase case_ = FeatureCase::Case2;
  std::vector<DecisionTree> trees_;
};

// Grows `config.n_trees` CART trees with Gini impurity. Each node picks the
// best split among a random subset of columns; split ties go to the lower
// column index, then the lower threshold.
GazeForest train_forest(const std::vector<LabeledSample>& train, const ForestConfig& config, FeatureCase c);

GazeZone predict_zone(const GazeForest& forest, const FrameFeatures& f);

// Rows are the true zone, columns the predicted zone.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumZones>, kNumZones> counts{};

  std::size_t total() const;
  std::size_t correct() const;
  double accuracy() const;
};

struct ClassifierEvaluation {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
};

ClassifierEvaluation evaluate_classifier(const GazeForest& forest, const std::vector<LabeledSample>& test);

}  // namespace drm
