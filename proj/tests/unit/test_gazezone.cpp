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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "drm/error.hpp"
#include "drm/gazezone.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace drm {
namespace {

std::vector<LabeledSample> random_samples(std::uint64_t seed, std::size_t n, std::size_t d, int n_classes) {
  Rng rng(seed);
  std::vector<LabeledSample> out(n);
  for (auto& s : out) {
    for (std::size_t j = 0; j < d; ++j) s.x.push_back(rng.uniform(-1, 1));
    s.zone = zone_at(rng.below(static_cast<std::uint64_t>(n_classes)));
  }
  return out;
}

DecisionTree constant_tree(GazeZone z) {
  TreeNode leaf;
  leaf.histogram[index_of(z)] = 1;
  return DecisionTree({leaf});
}

TEST(Split, ReferenceCorpusCounts) {
  const TrainTestSplit s = split_train_test(2331, 0.8, 1);
  EXPECT_EQ(s.train.size(), 1864u);
  EXPECT_EQ(s.test.size(), 467u);
  const TrainTestSplit t = split_train_test(10, 0.8, 1);
  EXPECT_EQ(t.train.size(), 8u);
  EXPECT_EQ(t.test.size(), 2u);
}

TEST(Split, DeterministicPartition) {
  const TrainTestSplit a = split_train_test(100, 0.7, 42), b = split_train_test(100, 0.7, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  all.insert(a.test.begin(), a.test.end());
  EXPECT_EQ(all.size(), 100u);
  EXPECT_NE(a.test, split_train_test(100, 0.7, 43).test);
}

TEST(Split, Chronological) {
  const TrainTestSplit s = split_train_test(10, 0.8, 1, true);
  EXPECT_EQ(s.train, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(s.test, (std::vector<std::size_t>{8, 9}));
}

TEST(Split, EmptyInputThrows) { EXPECT_THROW(split_train_test(0, 0.8, 1), Error); }

TEST(Forest, SeparableToySet) {
  std::vector<LabeledSample> data;
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const bool pos = i % 2 == 0;
    data.push_back({{pos ? rng.uniform(10.5, 40) : rng.uniform(-40, -0.5), rng.uniform(-10, 10), rng.uniform(-5, 5)},
                    pos ? GazeZone::G5 : GazeZone::G0});
  }
  ForestConfig cfg;
  cfg.n_trees = 10;
  cfg.seed = 1;
  const GazeForest f = train_forest(data, cfg, FeatureCase::Case1);
  EXPECT_DOUBLE_EQ(evaluate_classifier(f, data).accuracy, 1.0);
}

void expect_stump_matches_oracle(const std::vector<LabeledSample>& data, FeatureCase c) {
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.max_depth = 1;
  cfg.bootstrap = false;
  cfg.features_per_split = column_count(c);
  const GazeForest f = train_forest(data, cfg, c);
  const TreeNode& root = f.trees().at(0).nodes().at(0);

  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (const auto& s : data) {
    x.push_back(s.x);
    y.push_back(static_cast<int>(index_of(s.zone)));
  }
  const oracle::Stump best = oracle::best_stump(x, y, static_cast<int>(kNumZones));
  ASSERT_FALSE(root.is_leaf());
  EXPECT_EQ(root.feature, best.column);
  EXPECT_DOUBLE_EQ(root.threshold, best.threshold);
  EXPECT_EQ(f.trees()[0].depth(), 1u);
}

TEST(Forest, DepthOneTreeMatchesExhaustiveStumpFourPoints) {
  const std::vector<LabeledSample> data{{{0.1, 5, 0}, GazeZone::G0},
                                        {{0.4, 1, 0}, GazeZone::G0},
                                        {{0.7, 3, 0}, GazeZone::G1},
                                        {{0.9, 2, 0}, GazeZone::G2}};
  expect_stump_matches_oracle(data, FeatureCase::Case1);
}

TEST(Forest, DepthOneTreeMatchesExhaustiveStumpRandom) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    expect_stump_matches_oracle(random_samples(seed, 20, 3, 3), FeatureCase::Case1);
    expect_stump_matches_oracle(random_samples(100 + seed, 20, 9, 4), FeatureCase::Case2);
  }
}

TEST(Forest, VoteTotalsEqualTreeCount) {
  const auto data = random_samples(9, 200, 9, 9);
  ForestConfig cfg;
  cfg.n_trees = 17;
  cfg.seed = 4;
  const GazeForest f = train_forest(data, cfg, FeatureCase::Case2);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(9);
    for (double& v : x) v = rng.uniform(-2, 2);
    const ZoneHistogram v = f.votes(x);
    std::uint32_t total = 0;
    for (auto c : v) total += c;
    EXPECT_EQ(total, 17u);
  }
}

TEST(Forest, SeededDeterminismAndJsonRoundTrip) {
  const auto data = random_samples(10, 150, 9, 5);
  ForestConfig cfg;
  cfg.n_trees = 8;
  cfg.seed = 99;
  const GazeForest a = train_forest(data, cfg, FeatureCase::Case2);
  const GazeForest b = train_forest(data, cfg, FeatureCase::Case2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(GazeForest::from_json(a.to_json()), a);
  cfg.seed = 100;
  EXPECT_NE(train_forest(data, cfg, FeatureCase::Case2).to_json(), a.to_json());
}

TEST(Forest, TooManyFeaturesPerSplit) {
  ForestConfig cfg;
  cfg.features_per_split = 4;
  EXPECT_THROW(train_forest(random_samples(1, 10, 3, 2), cfg, FeatureCase::Case1), Error);
}

TEST(Forest, MaxDepthAndMinLeafRespected) {
  const auto data = random_samples(12, 300, 9, 9);
  ForestConfig cfg;
  cfg.n_trees = 5;
  cfg.max_depth = 3;
  cfg.min_samples_leaf = 5;
  const GazeForest f = train_forest(data, cfg, FeatureCase::Case2);
  for (const auto& t : f.trees()) {
    EXPECT_LE(t.depth(), 3u);
    for (const auto& n : t.nodes()) {
      if (!n.is_leaf()) continue;
      std::uint32_t c = 0;
      for (auto h : n.histogram) c += h;
      EXPECT_GE(c, 5u);
    }
  }
}

TEST(Predict, IdenticalTreesVoteG3) {
  const GazeForest f({3, {}, 1, 0, true, 0}, FeatureCase::Case1,
                     {constant_tree(GazeZone::G3), constant_tree(GazeZone::G3), constant_tree(GazeZone::G3)});
  EXPECT_EQ(f.predict(std::vector<double>{0, 0, 0}), GazeZone::G3);
}

TEST(Predict, TieGoesToLowerZone) {
  const GazeForest f({4, {}, 1, 0, true, 0}, FeatureCase::Case1,
                     {constant_tree(GazeZone::G2), constant_tree(GazeZone::G1), constant_tree(GazeZone::G2),
                      constant_tree(GazeZone::G1)});
  EXPECT_EQ(f.predict(std::vector<double>{0, 0, 0}), GazeZone::G1);
  ZoneHistogram h{};
  h[1] = h[2] = 2;
  EXPECT_EQ(majority(h), GazeZone::G1);
}

TEST(Predict, SingleTreeManualDescent) {
  const auto data = random_samples(21, 60, 3, 4);
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.seed = 5;
  const GazeForest f = train_forest(data, cfg, FeatureCase::Case1);
  const auto& nodes = f.trees()[0].nodes();
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::size_t i = 0;
    while (nodes[i].feature >= 0)
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left
                                                                                                      : nodes[i].right);
    const auto& h = nodes[i].histogram;
    const auto top = std::max_element(h.begin(), h.end()) - h.begin();
    EXPECT_EQ(f.predict(x), zone_at(static_cast<std::size_t>(top)));
  }
}

TEST(Evaluate, PerfectAndConstantPredictors) {
  std::vector<LabeledSample> test;
  for (std::size_t z = 0; z < kNumZones; ++z) test.push_back({{static_cast<double>(z), 0, 0}, zone_at(z)});
  const GazeForest g0({1, {}, 1, 0, true, 0}, FeatureCase::Case1, {constant_tree(GazeZone::G0)});
  const ClassifierEvaluation e0 = evaluate_classifier(g0, test);
  EXPECT_DOUBLE_EQ(e0.accuracy, 1.0 / 9.0);
  for (std::size_t z = 0; z < kNumZones; ++z) EXPECT_EQ(e0.confusion.counts[z][0], 1u);

  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  cfg.features_per_split = 3;
  const GazeForest perfect = train_forest(test, cfg, FeatureCase::Case1);
  const ClassifierEvaluation e = evaluate_classifier(perfect, test);
  EXPECT_DOUBLE_EQ(e.accuracy, 1.0);
  for (std::size_t r = 0; r < kNumZones; ++r)
    for (std::size_t c = 0; c < kNumZones; ++c) EXPECT_EQ(e.confusion.counts[r][c], r == c ? 1u : 0u);
}

TEST(Evaluate, HandCountedMatrix) {
  TreeNode root;
  root.feature = 0;
  root.threshold = 0.5;
  root.left = 1;
  root.right = 2;
  TreeNode l, r;
  l.histogram[0] = 1;
  r.histogram[4] = 1;
  const GazeForest f({1, {}, 1, 0, true, 0}, FeatureCase::Case1, {DecisionTree({root, l, r})});
  const std::vector<LabeledSample> test{{{0, 0, 0}, GazeZone::G0}, {{1, 0, 0}, GazeZone::G0},
                                        {{1, 0, 0}, GazeZone::G4}, {{0, 0, 0}, GazeZone::G4},
                                        {{2, 0, 0}, GazeZone::G4}};
  const ClassifierEvaluation e = evaluate_classifier(f, test);
  EXPECT_EQ(e.confusion.counts[0][0], 1u);
  EXPECT_EQ(e.confusion.counts[0][4], 1u);
  EXPECT_EQ(e.confusion.counts[4][4], 2u);
  EXPECT_EQ(e.confusion.counts[4][0], 1u);
  EXPECT_EQ(e.confusion.total(), 5u);
  EXPECT_DOUBLE_EQ(e.accuracy, 0.6);
  EXPECT_THROW(evaluate_classifier(f, {}), Error);
}

TEST(Zone, OneHot) {
  const auto a = one_hot(GazeZone::G0);
  EXPECT_EQ(a[0], 1.0);
  const auto b = one_hot(GazeZone::G8);
  EXPECT_EQ(b[8], 1.0);
  for (std::size_t z = 0; z < kNumZones; ++z) {
    double s = 0;
    for (double v : one_hot(zone_at(z))) s += v;
    EXPECT_EQ(s, 1.0);
  }
  EXPECT_EQ(parse_zone("G7"), GazeZone::G7);
  EXPECT_FALSE(parse_zone("G9"));
}

}  // namespace
}  // namespace drm
