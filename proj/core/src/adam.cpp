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

#include "drm/adam.hpp"

#include <cmath>
#include <vector>

#include "drm/error.hpp"

namespace drm {

void adam_update(Eigen::Ref<Eigen::MatrixXd> theta, const Eigen::Ref<const Eigen::MatrixXd>& grad,
                 Eigen::Ref<Eigen::MatrixXd> m, Eigen::Ref<Eigen::MatrixXd> v, const AdamConfig& config,
                 std::size_t t) {
  if (t < 1) throw Error("adam_update: step index must be >= 1");
  if (theta.rows() != grad.rows() || theta.cols() != grad.cols() || m.rows() != theta.rows() ||
      m.cols() != theta.cols() || v.rows() != theta.rows() || v.cols() != theta.cols())
    throw DimensionError("adam_update: shape mismatch");
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
  m = config.beta1 * m + (1.0 - config.beta1) * grad;
  v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
  theta.array() -= config.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + config.epsilon);
}

void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state, const AdamConfig& config) {
  ++state.t;
  std::vector<const Eigen::MatrixXd*> g;
  std::vector<Eigen::MatrixXd*> m, v;
  grads.for_each([&](const std::string&, const Eigen::MatrixXd& x) { g.push_back(&x); });
  state.m.for_each([&](const std::string&, Eigen::MatrixXd& x) { m.push_back(&x); });
  state.v.for_each([&](const std::string&, Eigen::MatrixXd& x) { v.push_back(&x); });
  std::size_t k = 0;
  params.for_each([&](const std::string&, Eigen::MatrixXd& theta) {
    if (k >= g.size()) throw DimensionError("adam_step: gradient structure does not match parameters");
    adam_update(theta, *g[k], *m[k], *v[k], config, state.t);
    ++k;
  });
  if (k != g.size()) throw DimensionError("adam_step: gradient structure does not match parameters");
}

}  // namespace drm
