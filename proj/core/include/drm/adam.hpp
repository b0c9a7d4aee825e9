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

#include <Eigen/Core>

#include "drm/lstm.hpp"

namespace drm {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Elementwise Adam with bias correction at step t >= 1:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
//   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps).
void adam_update(Eigen::Ref<Eigen::MatrixXd> theta, const Eigen::Ref<const Eigen::MatrixXd>& grad,
                 Eigen::Ref<Eigen::MatrixXd> m, Eigen::Ref<Eigen::MatrixXd> v, const AdamConfig& config,
                 std::size_t t);

struct AdamState {
  NetworkParams m;
  NetworkParams v;
  std::size_t t = 0;  // steps taken

  static AdamState for_params(const NetworkParams& p) { return {p.zeros_like(), p.zeros_like(), 0}; }
};

// Advances state.t and updates every tensor of `params`.
void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state, const AdamConfig& config);

}  // namespace drm
