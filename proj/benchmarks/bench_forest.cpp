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

#include <benchmark/benchmark.h>

#include "drm/gazezone.hpp"
#include "drm/rng.hpp"

namespace {

std::vector<drm::LabeledSample> random_samples(std::size_t n, std::size_t d) {
  drm::Rng rng(5);
  std::vector<drm::LabeledSample> out(n);
  for (auto& s : out) {
    s.zone = drm::zone_at(rng.below(drm::kNumZones));
    s.x.resize(d);
    for (std::size_t j = 0; j < d; ++j) s.x[j] = rng.normal(static_cast<double>(drm::index_of(s.zone)) * 0.3, 1.0);
  }
  return out;
}

void BM_TrainForest(benchmark::State& state) {
  const auto data = random_samples(static_cast<std::size_t>(state.range(0)), 9);
  drm::ForestConfig cfg;
  cfg.n_trees = 20;
  for (auto _ : state) benchmark::DoNotOptimize(drm::train_forest(data, cfg, drm::FeatureCase::Case2));
}
BENCHMARK(BM_TrainForest)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const auto data = random_samples(2000, 9);
  drm::ForestConfig cfg;
  const auto forest = drm::train_forest(data, cfg, drm::FeatureCase::Case2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forest.predict(data[i].x));
    i = (i + 1) % data.size();
  }
}
BENCHMARK(BM_ForestPredict)->Unit(benchmark::kMicrosecond);

}  // namespace
