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

#include "drm/lstm.hpp"
#include "drm/rng.hpp"

namespace {

Eigen::MatrixXd random_sequence(std::size_t dims, std::size_t length, std::uint64_t seed) {
  drm::Rng rng(seed);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(length));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  return x;
}

drm::Architecture arch_of(int64_t v) { return v == 0 ? drm::Architecture::Vanilla : drm::Architecture::Bidirectional; }

void BM_Forward(benchmark::State& state) {
  const auto shape = drm::ModelShape::standard(arch_of(state.range(0)), 18);
  const auto params = drm::init_params(shape, 1);
  const Eigen::MatrixXd x = random_sequence(18, 60, 2);
  for (auto _ : state) benchmark::DoNotOptimize(drm::forward(params, x));
}
BENCHMARK(BM_Forward)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_ForwardBackward(benchmark::State& state) {
  const auto shape = drm::ModelShape::standard(arch_of(state.range(0)), 18);
  const auto params = drm::init_params(shape, 1);
  auto grads = params.zeros_like();
  const Eigen::MatrixXd x = random_sequence(18, 60, 2);
  drm::ForwardCache cache;
  for (auto _ : state) {
    const double y = drm::forward(params, x, &cache);
    drm::backward(params, cache, y > 0 ? 1.0 : -1.0, grads);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace
