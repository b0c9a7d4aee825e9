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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "drm/dataset.hpp"

namespace drm {

enum class Architecture { Vanilla, Bidirectional };

const char* to_string(Architecture a);
std::optional<Architecture> parse_architecture(std::string_view s);

// Gate blocks are stacked in this order along the rows of w, u and b.
enum class Gate { Input = 0, Forget = 1, Cell = 2, Output = 3 };

// Parameters of one LSTM direction.
struct LstmLayerParams {
  Eigen::MatrixXd w;  // 4H x D
  Eigen::MatrixXd u;  // 4H x H
  Eigen::MatrixXd b;  // 4H x 1

  Eigen::Index hidden() const { return u.cols(); }
  Eigen::Index input_size() const { return w.cols(); }

  auto gate_w(Gate g) { return w.middleRows(static_cast<int>(g) * hidden(), hidden()); }
  auto gate_u(Gate g) { return u.middleRows(static_cast<int>(g) * hidden(), hidden()); }
  auto gate_b(Gate g) { return b.middleRows(static_cast<int>(g) * hidden(), hidden()); }
};

struct ModelShape {
  Architecture arch = Architecture::Bidirectional;
  std::size_t input_dim = kInputDims;
  // Units per direction: 64 for vanilla, 32 for bidirectional by default.
  std::size_t hidden = 32;

  std::size_t directions() const { return arch == Architecture::Bidirectional ? 2 : 1; }
  std::size_t final_hidden() const { return hidden * directions(); }

  static ModelShape standard(Architecture arch, std::size_t input_dim);

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

// Two stacked recurrent layers and a linear dense head. `layers` holds one
// entry per (layer, direction): vanilla [l1, l2]; bidirectional
// [l1.fwd, l1.bwd, l2.fwd, l2.bwd].
struct NetworkParams {
  ModelShape shape;
  std::vector<LstmLayerParams> layers;
  Eigen::MatrixXd dense_w;  // 1 x final_hidden
  Eigen::MatrixXd dense_b;  // 1 x 1

  // Visits every tensor in a fixed order with a stable name.
  template <typename F>
  void for_each(F&& f) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string p = layer_name(i);
      f(p + ".w", layers[i].w);
      f(p + ".u", layers[i].u);
      f(p + ".b", layers[i].b);
    }
    f(std::string("dense.w"), dense_w);
    f(std::string("dense.b"), dense_b);
  }
  template <typename F>
  void for_each(F&& f) const {
    const_cast<NetworkParams*>(this)->for_each([&](const std::string& n, Eigen::MatrixXd& m) {
      f(n, static_cast<const Eigen::MatrixXd&>(m));
    });
  }

  std::string layer_name(std::size_t i) const;
  std::size_t parameter_count() const;
  NetworkParams zeros_like() const;
  void set_zero();
  bool all_finite() const;
};

// Uniform(-k, k) weights with k = 1/sqrt(hidden), forget-gate bias 1, other
// biases 0. Dense weights Uniform(-1/sqrt(F), 1/sqrt(F)), dense bias 0.
NetworkParams init_params(const ModelShape& shape, std::uint64_t seed);

// Activations of one direction over a sequence, indexed by time.
struct DirectionCache {
  Eigen::MatrixXd i, f, g, o;  // H x T gate activations
  Eigen::MatrixXd c, tanh_c, h;
};

struct ForwardCache {
  // Input to each layer (D x T); layer 2's input is layer 1's output.
  std::vector<Eigen::MatrixXd> layer_inputs;
  std::vector<DirectionCache> directions;  // same indexing as NetworkParams::layers
  Eigen::VectorXd features;                // input to the dense head
  double prediction = 0.0;
};

// x is (input_dim x T), zero initial states. Fills `cache` when given.
double forward(const NetworkParams& params, const Eigen::Ref<const Eigen::MatrixXd>& x,
               ForwardCache* cache = nullptr);

// Accumulates d(loss)/d(params) into `grads` given d(loss)/d(prediction).
void backward(const NetworkParams& params, const ForwardCache& cache, double d_prediction, NetworkParams& grads);

// Batch-mean absolute error and its exact gradient. The subgradient of
// |r| at r == 0 is 0. Windows must already be normalized.
double loss_and_gradient(const NetworkParams& params, std::span<const Window> batch, NetworkParams& grads);

double batch_loss(const NetworkParams& params, std::span<const Window> batch);

}  // namespace drm
