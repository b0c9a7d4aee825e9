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

#include "drm/features.hpp"
#include "drm/synth.hpp"

namespace {

void BM_FrameFeatures(benchmark::State& state) {
  drm::Scenario sc;
  sc.duration_s = 2.0;
  sc.script = {drm::zone_segment(drm::GazeZone::G2, 2.0)};
  const auto session = drm::generate_session(sc, 3).session;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(drm::frame_features(session.frames[i]));
    i = (i + 1) % session.frames.size();
  }
}
BENCHMARK(BM_FrameFeatures);

void BM_GenerateSession(benchmark::State& state) {
  const auto scenarios = drm::benchmark_scenarios(7);
  for (auto _ : state) benchmark::DoNotOptimize(drm::generate_session(scenarios[0], 11));
}
BENCHMARK(BM_GenerateSession)->Unit(benchmark::kMillisecond);

}  // namespace
