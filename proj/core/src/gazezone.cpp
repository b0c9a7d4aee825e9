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

#include "drm/gazezone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "drm/error.hpp"
#include "drm/rng.hpp"

namespace drm {

std::string to_string(GazeZone z) { return "G" + std::to_string(index_of(z)); }

std::optional<GazeZone> parse_zone(std::string_view s) {
  if (s.size() != 2 || s[0] != 'G' || s[1] < '0' || s[1] > '8') return std::nullopt;
  return zone_at(static_cast<std::size_t>(s[1] - '0'));
}

std::array<double, kNumZones> one_hot(GazeZone z) {
  std::array<double, kNumZones> v{};
  v[index_of(z)] = 1.0;
  return v;
}

std::size_t column_count(FeatureCase c) { return c == FeatureCase::Case1 ? 3 : 9; }

const char* to_string(FeatureCase c) { return c == FeatureCase::Case1 ? "head" : "head+eye"; }

std::optional<FeatureCase> parse_feature_case(std::string_view s) {
  if (s == "head" || s == "case1" || s == "1") return FeatureCase::Case1;
  if (s == "head+eye" || s == "both" || s == "case2" || s == "2") return FeatureCase::Case2;
  return std::nullopt;
}

std::vector<double> classifier_columns(const FrameFeatures& f, FeatureCase c) {
  std::vector<double> x{f.head.yaw, f.head.pitch, f.head.roll};
  if (c == FeatureCase::Case2) {
    const auto eyes = f.eyes.values();
    x.insert(x.end(), eyes.begin(), eyes.end());
  }
  return x;
}

TrainTestSplit split_train_test(std::size_t n, double train_ratio, std::uint64_t seed, bool chronological) {
  if (n == 0) throw Error("split_train_test: empty input");
  if (!(train_ratio > 0.0 && train_ratio <= 1.0)) throw Error("split_train_test: ratio must be in (0, 1]");
  const double test_share = (1.0 - train_ratio) * static_cast<double>(n);
  const std::size_t n_test = std::min(n, static_cast<std::size_t>(std::ceil(test_share - 1e-9)));

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (!chronological) {
    Rng rng(derive_seed(seed, "gaze/split"));
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  }
  TrainTestSplit s;
  s.train.assign(idx.begin(), idx.end() - static_cast<std::ptrdiff_t>(n_test));
  s.test.assign(idx.end() - static_cast<std::ptrdiff_t>(n_test), idx.end());
  return s;
}

GazeZone majority(const ZoneHistogram& h) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumZones; ++k)
    if (h[k] > h[best]) best = k;
  return zone_at(best);
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const TreeNode& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes_[i];
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  // Children are always appended after their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

GazeForest::GazeForest(ForestConfig config, FeatureCase feature_case, std::vector<DecisionTree> trees)
    : config_(std::move(config)), case_(feature_case), trees_(std::move(trees)) {}

ZoneHistogram GazeForest::votes(std::span<const double> x) const {
  if (x.size() != column_count(case_))
    throw DimensionError("forest expects " + std::to_string(column_count(case_)) + " columns, got " +
                         std::to_string(x.size()));
  ZoneHistogram v{};
  for (const DecisionTree& t : trees_) ++v[index_of(t.predict(x))];
  return v;
}

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // n * weighted Gini of the children
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<LabeledSample>& data, const ForestConfig& cfg, std::size_t n_cols,
              std::size_t per_split, std::uint64_t seed)
      : data_(data), cfg_(cfg), n_cols_(n_cols), per_split_(per_split), rng_(seed) {}

  DecisionTree build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  static double impurity_mass(const ZoneHistogram& h, double n) {
    double sq = 0.0;
    for (auto c : h) sq += static_cast<double>(c) * static_cast<double>(c);
    return n - sq / n;
  }

  std::int32_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    ZoneHistogram hist{};
    for (std::size_t r : rows) ++hist[index_of(data_[r].zone)];
    nodes_[static_cast<std::size_t>(id)].histogram = hist;

    const bool pure = std::count_if(hist.begin(), hist.end(), [](auto c) { return c > 0; }) <= 1;
    const bool depth_capped = cfg_.max_depth && depth >= *cfg_.max_depth;
    if (pure || depth_capped || rows.size() < 2 * cfg_.min_samples_leaf) return id;

    const SplitChoice split = best_split(rows);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (data_[r].x[static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const std::int32_t l = grow(std::move(left), depth + 1);
    const std::int32_t r = grow(std::move(right), depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  std::vector<std::size_t> sample_columns() {
    std::vector<std::size_t> cols(n_cols_);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    if (per_split_ < n_cols_) {
      for (std::size_t i = 0; i < per_split_; ++i) std::swap(cols[i], cols[i + rng_.below(n_cols_ - i)]);
      cols.resize(per_split_);
      std::sort(cols.begin(), cols.end());
    }
    return cols;
  }

  SplitChoice best_split(const std::vector<std::size_t>& rows) {
    constexpr double kTieTolerance = 1e-9;
    SplitChoice best;
    const std::size_t n = rows.size();
    const std::size_t min_leaf = std::max<std::size_t>(1, cfg_.min_samples_leaf);
    std::vector<std::pair<double, std::size_t>> col(n);

    for (std::size_t c : sample_columns()) {
      for (std::size_t i = 0; i < n; ++i) col[i] = {data_[rows[i]].x[c], index_of(data_[rows[i]].zone)};
      std::sort(col.begin(), col.end());

      ZoneHistogram left{}, right{};
      for (const auto& [v, z] : col) ++right[z];
      for (std::size_t i = 0; i + 1 < n; ++i) {
        ++left[col[i].second];
        --right[col[i].second];
        if (!(col[i].first < col[i + 1].first)) continue;
        const std::size_t nl = i + 1, nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double score = impurity_mass(left, static_cast<double>(nl)) + impurity_mass(right, static_cast<double>(nr));
        if (best.feature < 0 || score < best.score - kTieTolerance) {
          double mid = 0.5 * (col[i].first + col[i + 1].first);
          if (!(mid < col[i + 1].first)) mid = col[i].first;
          best = {static_cast<int>(c), mid, score};
        }
      }
    }
    return best;
  }

  const std::vector<LabeledSample>& data_;
  const ForestConfig& cfg_;
  std::size_t n_cols_;
  std::size_t per_split_;
  Rng rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

GazeForest train_forest(const std::vector<LabeledSample>& train, const ForestConfig& config, FeatureCase c) {
  if (train.empty()) throw Error("train_forest: empty training set");
  if (config.n_trees < 1) throw Error("train_forest: n_trees must be >= 1");
  const std::size_t d = column_count(c);
  for (const auto& s : train)
    if (s.x.size() != d) throw DimensionError("train_forest: sample has " + std::to_string(s.x.size()) +
                                              " columns, case expects " + std::to_string(d));
  if (config.features_per_split > d)
    throw Error("train_forest: features_per_split " + std::to_string(config.features_per_split) +
                " exceeds column count " + std::to_string(d));
  const std::size_t per_split = config.features_per_split == 0
                                    ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))
                                    : config.features_per_split;

  std::vector<DecisionTree> trees;
  trees.reserve(config.n_trees);
  const std::size_t n = train.size();
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    const std::uint64_t seed = derive_seed(config.seed, "forest/tree/" + std::to_string(t));
    std::vector<std::size_t> rows(n);
    if (config.bootstrap) {
      Rng boot(derive_seed(seed, "bootstrap"));
      for (auto& r : rows) r = static_cast<std::size_t>(boot.below(n));
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    TreeBuilder builder(train, config, d, per_split, derive_seed(seed, "columns"));
    trees.push_back(builder.build(std::move(rows)));
  }
  return GazeForest(config, c, std::move(trees));
}

GazeZone predict_zone(const GazeForest& forest, const FrameFeatures& f) {
  return forest.predict(classifier_columns(f, forest.feature_case()));
}

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts)
    for (auto c : row) t += c;
  return t;
}

std::size_t ConfusionMatrix::correct() const {
  std::size_t t = 0;
  for (std::size_t k = 0; k < kNumZones; ++k) t += counts[k][k];
  return t;
}

double ConfusionMatrix::accuracy() const {
  const std::size_t t = total();
  return t == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(t);
}

ClassifierEvaluation evaluate_classifier(const GazeForest& forest, const std::vector<LabeledSample>& test) {
  if (test.empty()) throw Error("evaluate_classifier: empty test set");
  ClassifierEvaluation e;
  for (const auto& s : test) ++e.confusion.counts[index_of(s.zone)][index_of(forest.predict(s.x))];
  e.accuracy = e.confusion.accuracy();
  return e;
}

// Serialization -------------------------------------------------------------

namespace {
constexpr const char* kForestFormat = "drm-gaze-forest";
constexpr int kForestVersion = 1;
}  // namespace

std::string GazeForest::to_json() const {
  using nlohmann::json;
  json cfg = {{"n_trees", config_.n_trees},
              {"max_depth", config_.max_depth ? json(*config_.max_depth) : json(nullptr)},
              {"min_samples_leaf", config_.min_samples_leaf},
              {"features_per_split", config_.features_per_split},
              {"bootstrap", config_.bootstrap},
              {"seed", config_.seed}};
  json trees = json::array();
  for (const DecisionTree& t : trees_) {
    json nodes = json::array();
    for (const TreeNode& n : t.nodes()) {
      if (n.is_leaf()) {
        nodes.push_back({{"hist", n.histogram}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"hist", n.histogram}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  json j = {{"format", kForestFormat},
            {"version", kForestVersion},
            {"case", case_ == FeatureCase::Case1 ? "case1" : "case2"},
            {"columns", column_count(case_)},
            {"config", std::move(cfg)},
            {"trees", std::move(trees)}};
  return j.dump(1) + "\n";
}

GazeForest GazeForest::from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("forest model: ") + e.what(), 0);
  }
  try {
    if (j.at("format").get<std::string>() != kForestFormat) throw ParseError("not a gaze forest model file", 0);
    if (j.at("version").get<int>() != kForestVersion) throw ParseError("unsupported forest model version", 0);
    const auto fc = parse_feature_case(j.at("case").get<std::string>());
    if (!fc) throw ParseError("unknown feature case in forest model", 0);
    ForestConfig cfg;
    const json& jc = j.at("config");
    cfg.n_trees = jc.at("n_trees").get<std::size_t>();
    if (!jc.at("max_depth").is_null()) cfg.max_depth = jc.at("max_depth").get<std::size_t>();
    cfg.min_samples_leaf = jc.at("min_samples_leaf").get<std::size_t>();
    cfg.features_per_split = jc.at("features_per_split").get<std::size_t>();
    cfg.bootstrap = jc.at("bootstrap").get<bool>();
    cfg.seed = jc.at("seed").get<std::uint64_t>();

    const auto d = static_cast<int>(column_count(*fc));
    std::vector<DecisionTree> trees;
    for (const json& jt : j.at("trees")) {
      std::vector<TreeNode> nodes;
      for (const json& jn : jt) {
        TreeNode n;
        n.histogram = jn.at("hist").get<ZoneHistogram>();
        if (jn.contains("feature")) {
          n.feature = jn.at("feature").get<int>();
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<std::int32_t>();
          n.right = jn.at("right").get<std::int32_t>();
          if (n.feature < 0 || n.feature >= d) throw ParseError("split feature index out of range", 0);
        }
        nodes.push_back(n);
      }
      const auto size = static_cast<std::int32_t>(nodes.size());
      if (size == 0) throw ParseError("empty tree in forest model", 0);
      for (std::int32_t i = 0; i < size; ++i) {
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= size || n.right >= size))
          throw ParseError("bad child index in forest model", 0);
      }
      trees.emplace_back(std::move(nodes));
    }
    if (trees.size() != cfg.n_trees) throw ParseError("tree count does not match config", 0);
    return GazeForest(cfg, *fc, std::move(trees));
  } catch (const json::exception& e) {
    throw ParseError(std::string("forest model: ") + e.what(), 0);
  }
}

}  // namespace drm
