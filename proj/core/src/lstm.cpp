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

#include "drm/lstm.hpp"

#include <cmath>

#include "drm/error.hpp"
#include "drm/rng.hpp"

namespace drm {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(Architecture a) { return a == Architecture::Vanilla ? "vanilla" : "bidirectional"; }

std::optional<Architecture> parse_architecture(std::string_view s) {
  if (s == "vanilla") return Architecture::Vanilla;
  if (s == "bidirectional" || s == "bi") return Architecture::Bidirectional;
  return std::nullopt;
}

ModelShape ModelShape::standard(Architecture arch, std::size_t input_dim) {
  return {arch, input_dim, arch == Architecture::Vanilla ? std::size_t{64} : std::size_t{32}};
}

std::string NetworkParams::layer_name(std::size_t i) const {
  if (shape.arch == Architecture::Vanilla) return "l" + std::to_string(i + 1);
  return "l" + std::to_string(i / 2 + 1) + (i % 2 == 0 ? ".fwd" : ".bwd");
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const MatrixXd& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

NetworkParams NetworkParams::zeros_like() const {
  NetworkParams z = *this;
  z.set_zero();
  return z;
}

void NetworkParams::set_zero() {
  for_each([](const std::string&, MatrixXd& m) { m.setZero(); });
}

bool NetworkParams::all_finite() const {
  bool ok = true;
  for_each([&](const std::string&, const MatrixXd& m) { ok = ok && m.allFinite(); });
  return ok;
}

NetworkParams init_params(const ModelShape& shape, std::uint64_t seed) {
  if (shape.input_dim == 0 || shape.hidden == 0) throw DimensionError("init_params: sizes must be positive");
  Rng rng(derive_seed(seed, "readiness/init"));
  const auto h = static_cast<Index>(shape.hidden);
  const double k = 1.0 / std::sqrt(static_cast<double>(shape.hidden));
  auto uniform = [&](MatrixXd& m, double bound) {
    for (Index c = 0; c < m.cols(); ++c)
      for (Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform(-bound, bound);
  };

  NetworkParams p;
  p.shape = shape;
  const std::size_t dirs = shape.directions();
  for (std::size_t layer = 0; layer < 2; ++layer) {
    const auto in = static_cast<Index>(layer == 0 ? shape.input_dim : shape.final_hidden());
    for (std::size_t d = 0; d < dirs; ++d) {
      LstmLayerParams l;
      l.w.resize(4 * h, in);
      l.u.resize(4 * h, h);
      l.b = MatrixXd::Zero(4 * h, 1);
      uniform(l.w, k);
      uniform(l.u, k);
      l.gate_b(Gate::Forget).setOnes();
      p.layers.push_back(std::move(l));
    }
  }
  const auto f = static_cast<Index>(shape.final_hidden());
  p.dense_w.resize(1, f);
  uniform(p.dense_w, 1.0 / std::sqrt(static_cast<double>(f)));
  p.dense_b = MatrixXd::Zero(1, 1);
  return p;
}

namespace {

void check_shape(const NetworkParams& p, Index rows) {
  if (static_cast<std::size_t>(rows) != p.shape.input_dim)
    throw DimensionError("model expects " + std::to_string(p.shape.input_dim) + " input dims, window has " +
                         std::to_string(rows));
}

void run_direction(const LstmLayerParams& p, const MatrixXd& x, bool reverse, DirectionCache& dc) {
  const Index H = p.hidden();
  const Index T = x.cols();
  MatrixXd z_in = p.w * x;
  z_in.colwise() += p.b.col(0);
  for (MatrixXd* m : {&dc.i, &dc.f, &dc.g, &dc.o, &dc.c, &dc.tanh_c, &dc.h}) m->resize(H, T);

  // Cell-candidate rows are pre-scaled by 2 so one vectorized exp serves both
  // sigmoid(z) and tanh(z) = 2 sigmoid(2z) - 1.
  VectorXd scale = VectorXd::Constant(4 * H, -1.0);
  scale.segment(2 * H, H).setConstant(-2.0);
  VectorXd h = VectorXd::Zero(H);
  VectorXd c = VectorXd::Zero(H);
  VectorXd z(4 * H), a(4 * H);
  for (Index s = 0; s < T; ++s) {
    const Index t = reverse ? T - 1 - s : s;
    z.noalias() = z_in.col(t);
    z.noalias() += p.u * h;
    a = 1.0 / (1.0 + (z.array() * scale.array()).exp());
    dc.i.col(t) = a.segment(0, H);
    dc.f.col(t) = a.segment(H, H);
    dc.g.col(t) = (2.0 * a.segment(2 * H, H).array() - 1.0).matrix();
    dc.o.col(t) = a.segment(3 * H, H);
    c = (dc.f.col(t).array() * c.array() + dc.i.col(t).array() * dc.g.col(t).array()).matrix();
    dc.c.col(t) = c;
    dc.tanh_c.col(t) = (2.0 / (1.0 + (-2.0 * c.array()).exp()) - 1.0).matrix();
    h = (dc.o.col(t).array() * dc.tanh_c.col(t).array()).matrix();
    dc.h.col(t) = h;
  }
}

// Backpropagates output gradients d_h (H x T) through one direction. Adds
// parameter gradients into `g`; writes the input gradient into d_x if given.
void back_direction(const LstmLayerParams& p, const MatrixXd& x, bool reverse, const DirectionCache& dc,
                    const MatrixXd& d_h, LstmLayerParams& g, MatrixXd* d_x) {
  const Index H = p.hidden();
  const Index T = x.cols();
  MatrixXd dz(4 * H, T);
  VectorXd dh_next = VectorXd::Zero(H);
  VectorXd dc_next = VectorXd::Zero(H);
  VectorXd dh(H), dcell(H), c_prev(H);

  for (Index s = T - 1; s >= 0; --s) {
    const Index t = reverse ? T - 1 - s : s;
    const Index t_prev = reverse ? t + 1 : t - 1;
    dh = d_h.col(t) + dh_next;
    const auto i = dc.i.col(t).array();
    const auto f = dc.f.col(t).array();
    const auto gg = dc.g.col(t).array();
    const auto o = dc.o.col(t).array();
    const auto tc = dc.tanh_c.col(t).array();
    if (s > 0) {
      c_prev = dc.c.col(t_prev);
    } else {
      c_prev.setZero();
    }
    dcell = (dh.array() * o * (1.0 - tc * tc) + dc_next.array()).matrix();
    dz.col(t).segment(0, H) = (dcell.array() * gg * i * (1.0 - i)).matrix();
    dz.col(t).segment(H, H) = (dcell.array() * c_prev.array() * f * (1.0 - f)).matrix();
    dz.col(t).segment(2 * H, H) = (dcell.array() * i * (1.0 - gg * gg)).matrix();
    dz.col(t).segment(3 * H, H) = (dh.array() * tc * o * (1.0 - o)).matrix();
    dc_next = (dcell.array() * f).matrix();
    dh_next.noalias() = p.u.transpose() * dz.col(t);
  }

  g.w.noalias() += dz * x.transpose();
  g.b.col(0) += dz.rowwise().sum();
  if (T > 1) {
    if (reverse) {
      g.u.noalias() += dz.leftCols(T - 1) * dc.h.rightCols(T - 1).transpose();
    } else {
      g.u.noalias() += dz.rightCols(T - 1) * dc.h.leftCols(T - 1).transpose();
    }
  }
  if (d_x) d_x->noalias() = p.w.transpose() * dz;
}

}  // namespace

double forward(const NetworkParams& params, const Eigen::Ref<const MatrixXd>& x, ForwardCache* cache) {
  check_shape(params, x.rows());
  if (x.cols() == 0) throw DimensionError("forward: empty window");
  ForwardCache local;
  ForwardCache& fc = cache ? *cache : local;
  const Index T = x.cols();
  const auto H = static_cast<Index>(params.shape.hidden);

  fc.layer_inputs.resize(2);
  fc.directions.resize(params.layers.size());
  fc.layer_inputs[0] = x;

  if (params.shape.arch == Architecture::Vanilla) {
    run_direction(params.layers[0], fc.layer_inputs[0], false, fc.directions[0]);
    fc.layer_inputs[1] = fc.directions[0].h;
    run_direction(params.layers[1], fc.layer_inputs[1], false, fc.directions[1]);
    fc.features = fc.directions[1].h.col(T - 1);
  } else {
    run_direction(params.layers[0], fc.layer_inputs[0], false, fc.directions[0]);
    run_direction(params.layers[1], fc.layer_inputs[0], true, fc.directions[1]);
    fc.layer_inputs[1].resize(2 * H, T);
    fc.layer_inputs[1].topRows(H) = fc.directions[0].h;
    fc.layer_inputs[1].bottomRows(H) = fc.directions[1].h;
    run_direction(params.layers[2], fc.layer_inputs[1], false, fc.directions[2]);
    run_direction(params.layers[3], fc.layer_inputs[1], true, fc.directions[3]);
    fc.features.resize(2 * H);
    // Final state of each direction: forward ends at T-1, backward at 0.
    fc.features.head(H) = fc.directions[2].h.col(T - 1);
    fc.features.tail(H) = fc.directions[3].h.col(0);
  }
  fc.prediction = (params.dense_w * fc.features)(0, 0) + params.dense_b(0, 0);
  return fc.prediction;
}

void backward(const NetworkParams& params, const ForwardCache& cache, double d_prediction, NetworkParams& grads) {
  if (d_prediction == 0.0) return;
  const Index T = cache.layer_inputs[0].cols();
  const auto H = static_cast<Index>(params.shape.hidden);
  grads.dense_w.noalias() += d_prediction * cache.features.transpose();
  grads.dense_b(0, 0) += d_prediction;
  const VectorXd d_feat = params.dense_w.transpose() * d_prediction;

  if (params.shape.arch == Architecture::Vanilla) {
    MatrixXd d_h2 = MatrixXd::Zero(H, T);
    d_h2.col(T - 1) = d_feat;
    MatrixXd d_h1;
    back_direction(params.layers[1], cache.layer_inputs[1], false, cache.directions[1], d_h2, grads.layers[1], &d_h1);
    back_direction(params.layers[0], cache.layer_inputs[0], false, cache.directions[0], d_h1, grads.layers[0], nullptr);
  } else {
    MatrixXd d_fwd = MatrixXd::Zero(H, T);
    MatrixXd d_bwd = MatrixXd::Zero(H, T);
    d_fwd.col(T - 1) = d_feat.head(H);
    d_bwd.col(0) = d_feat.tail(H);
    MatrixXd d_x_fwd, d_x_bwd;
    back_direction(params.layers[2], cache.layer_inputs[1], false, cache.directions[2], d_fwd, grads.layers[2], &d_x_fwd);
    back_direction(params.layers[3], cache.layer_inputs[1], true, cache.directions[3], d_bwd, grads.layers[3], &d_x_bwd);
    d_x_fwd += d_x_bwd;
    const MatrixXd d_h1f = d_x_fwd.topRows(H);
    const MatrixXd d_h1b = d_x_fwd.bottomRows(H);
    back_direction(params.layers[0], cache.layer_inputs[0], false, cache.directions[0], d_h1f, grads.layers[0], nullptr);
    back_direction(params.layers[1], cache.layer_inputs[0], true, cache.directions[1], d_h1b, grads.layers[1], nullptr);
  }
}

double loss_and_gradient(const NetworkParams& params, std::span<const Window> batch, NetworkParams& grads) {
  if (batch.empty()) throw Error("loss_and_gradient: empty batch");
  grads = params.zeros_like();
  const double scale = 1.0 / static_cast<double>(batch.size());
  ForwardCache cache;
  double loss = 0.0;
  for (const Window& w : batch) {
    const double r = forward(params, w.inputs(), &cache) - w.target;
    loss += std::abs(r);
    const double sign = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    backward(params, cache, sign * scale, grads);
  }
  return loss * scale;
}

double batch_loss(const NetworkParams& params, std::span<const Window> batch) {
  if (batch.empty()) throw Error("batch_loss: empty batch");
  double loss = 0.0;
  for (const Window& w : batch) loss += std::abs(forward(params, w.inputs()) - w.target);
  return loss / static_cast<double>(batch.size());
}

}  // namespace drm
