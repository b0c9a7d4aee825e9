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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "drm/lstm.hpp"
#include "drm/rng.hpp"
#include "oracles.hpp"

namespace drm::test {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t checked = 0;
  double max_abs_error = 0.0;
  std::size_t relative = 0;  // entries compared by relative error
};

inline constexpr double kMagnitudeFloor = 1e-7;

// Relative error |a - n| / max(|a|, |n|); entries with both magnitudes below
// kMagnitudeFloor use the absolute difference instead.
inline double relative_error(double analytic, double numeric) {
  const double diff = std::fabs(analytic - numeric);
  const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  return scale < kMagnitudeFloor ? diff : diff / scale;
}

// Random tiny model and batch of `batch` windows of `length` frames; compares
// every analytic gradient entry with a central difference of step h.
inline GradCheckResult gradient_check(Architecture arch, std::size_t input_dim, std::size_t hidden, std::size_t length,
                                      std::size_t batch, std::uint64_t seed, double h = 1e-4) {
  NetworkParams params = init_params({arch, input_dim, hidden}, seed);
  Rng rng(derive_seed(seed, "gradcheck/data"));
  params.for_each([&](const std::string&, Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-0.8, 0.8);
  });

  std::vector<Window> windows;
  for (std::size_t b = 0; b < batch; ++b) {
    auto x = std::make_shared<SeriesMatrix>(static_cast<Eigen::Index>(input_dim), static_cast<Eigen::Index>(length));
    for (Eigen::Index i = 0; i < x->size(); ++i) x->data()[i] = rng.normal();
    // Targets far from any prediction keep every residual away from the kink.
    windows.push_back({x, length - 1, length, (b % 2 ? 5.0 : -5.0) + rng.uniform(-0.5, 0.5)});
  }

  NetworkParams grads = params.zeros_like();
  loss_and_gradient(params, windows, grads);

  std::vector<double*> p_ptr, g_ptr;
  std::vector<std::string> names;
  params.for_each([&](const std::string& n, Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      p_ptr.push_back(m.data() + i);
      names.push_back(n + "[" + std::to_string(i) + "]");
    }
  });
  grads.for_each([&](const std::string&, Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) g_ptr.push_back(m.data() + i);
  });

  GradCheckResult r;
  const auto loss = [&] { return batch_loss(params, windows); };
  for (std::size_t k = 0; k < p_ptr.size(); ++k) {
    const double numeric = oracle::central_difference(loss, p_ptr[k], h);
    const double e = relative_error(*g_ptr[k], numeric);
    const double diff = std::fabs(*g_ptr[k] - numeric);
    r.max_abs_error = std::max(r.max_abs_error, diff);
    r.relative += std::max(std::fabs(*g_ptr[k]), std::fabs(numeric)) >= kMagnitudeFloor;
    if (e > r.max_relative_error) {
      r.max_relative_error = e;
      r.worst_parameter = names[k];
    }
    ++r.checked;
  }
  return r;
}

}  // namespace drm::test
