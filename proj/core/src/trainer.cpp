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

#include "drm/readiness.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "drm/error.hpp"
#include "drm/groundtruth.hpp"

namespace drm {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error("train config: learning_rate must be > 0");
  if (batch_size < 1) throw Error("train config: batch_size must be >= 1");
  if (max_epochs < 1) throw Error("train config: max_epochs must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw Error("train config: betas must be in [0, 1)");
  if (!(epsilon > 0.0)) throw Error("train config: epsilon must be > 0");
  if (hidden && *hidden == 0) throw Error("train config: hidden must be positive");
}

namespace {

double dataset_mae(const NetworkParams& p, const std::vector<Window>& windows) {
  double sum = 0.0;
  for (const Window& w : windows) sum += std::abs(forward(p, w.inputs()) - w.target);
  return sum / static_cast<double>(windows.size());
}

void check_windows(const std::vector<Window>& ws, std::size_t dims, std::size_t length, const char* what) {
  for (const Window& w : ws) {
    if (w.dims() != dims)
      throw DimensionError(std::string(what) + " window has " + std::to_string(w.dims()) + " dims, case expects " +
                           std::to_string(dims));
    if (w.length != length) throw DimensionError(std::string(what) + " windows disagree on length");
  }
}

}  // namespace

TrainResult train(const std::vector<Window>& train_windows, const std::vector<Window>& val_windows,
                  Architecture arch, InputCase feature_case, const TrainConfig& config) {
  config.validate();
  if (train_windows.empty()) throw Error("train: empty training set");
  if (val_windows.empty()) throw Error("train: empty validation set");
  const std::size_t dims = input_dims(feature_case);
  const std::size_t length = train_windows.front().length;
  check_windows(train_windows, dims, length, "training");
  check_windows(val_windows, dims, length, "validation");

  ReadinessModel model;
  model.normalizer = fit_normalizer(train_windows, continuous_mask(feature_case));
  const std::vector<Window> train_n = model.normalizer.apply(train_windows);
  const std::vector<Window> val_n = model.normalizer.apply(val_windows);

  ModelShape shape = ModelShape::standard(arch, dims);
  if (config.hidden) shape.hidden = *config.hidden;
  NetworkParams params = init_params(shape, config.seed);
  double target_mean = 0.0;
  for (const Window& w : train_windows) target_mean += w.target;
  params.dense_b(0, 0) = target_mean / static_cast<double>(train_windows.size());

  AdamState state = AdamState::for_params(params);
  const AdamConfig adam = config.adam();
  NetworkParams grads = params.zeros_like();

  TrainResult result;
  NetworkParams best = params;
  double best_mae = INFINITY;
  std::size_t best_epoch = 0;
  const std::span<const Window> all(train_n);

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double train_sum = 0.0;
    for (std::size_t start = 0; start < all.size(); start += config.batch_size) {
      const std::size_t n = std::min(config.batch_size, all.size() - start);
      const double loss = loss_and_gradient(params, all.subspan(start, n), grads);
      train_sum += loss * static_cast<double>(n);
      adam_step(params, grads, state, adam);
    }
    const double val_mae = dataset_mae(params, val_n);
    result.history.push_back({epoch, train_sum / static_cast<double>(all.size()), val_mae});
    if (val_mae < best_mae) {
      best_mae = val_mae;
      best_epoch = epoch;
      best = params;
    }
  }
  if (!best.all_finite()) throw Error("train: parameters diverged to non-finite values");

  model.params = std::move(best);
  model.meta = {feature_case, length, config.seed, best_epoch, best_mae};
  result.model = std::move(model);
  return result;
}

TrainResult train(const std::vector<Window>& windows, const Fold& fold, Architecture arch, InputCase feature_case,
                  const TrainConfig& config) {
  if (fold.train.end > fold.validation.begin || fold.validation.end > fold.test.begin || fold.test.end > windows.size())
    throw Error("train: fold ranges are not chronological within the window list");
  return train(take(windows, fold.train), take(windows, fold.validation), arch, feature_case, config);
}

std::vector<double> predict_series(const ReadinessModel& model, const std::vector<Window>& windows, bool clamp) {
  std::vector<double> out;
  out.reserve(windows.size());
  for (const Window& w : windows) {
    if (w.dims() != model.params.shape.input_dim)
      throw DimensionError("predict_series: window has " + std::to_string(w.dims()) + " dims, model expects " +
                           std::to_string(model.params.shape.input_dim));
  }
  for (const Window& w : model.normalizer.apply(windows)) {
    const double y = forward(model.params, w.inputs());
    out.push_back(clamp ? std::clamp(y, kMinReadiness, kMaxReadiness) : y);
  }
  return out;
}

// Serialization -------------------------------------------------------------

namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "drm-readiness-model";
constexpr int kModelVersion = 1;

json tensor_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

void tensor_from_json(const json& j, Eigen::MatrixXd& m, const std::string& name) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  if (rows != m.rows() || cols != m.cols())
    throw ParseError("tensor '" + name + "' has shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", architecture expects " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()),
                     0);
  const auto& data = j.at("data");
  if (data.size() != static_cast<std::size_t>(rows * cols)) throw ParseError("tensor '" + name + "' data size mismatch", 0);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
}

}  // namespace

std::string ReadinessModel::to_json() const {
  json tensors = json::object();
  params.for_each([&](const std::string& name, const Eigen::MatrixXd& m) { tensors[name] = tensor_to_json(m); });
  json j = {{"format", kModelFormat},
            {"version", kModelVersion},
            {"architecture", drm::to_string(params.shape.arch)},
            {"input_dim", params.shape.input_dim},
            {"hidden", params.shape.hidden},
            {"gate_order", "input,forget,cell,output"},
            {"tensors", std::move(tensors)},
            {"normalizer", {{"mean", normalizer.mean}, {"std", normalizer.std}, {"scaled", normalizer.scaled}}},
            {"metadata",
             {{"feature_case", drm::to_string(meta.feature_case)},
              {"window_length", meta.window_length},
              {"seed", meta.seed},
              {"best_epoch", meta.best_epoch},
              {"best_val_mae", meta.best_val_mae}}}};
  return j.dump(1) + "\n";
}

ReadinessModel ReadinessModel::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("readiness model: ") + e.what(), 0);
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat) throw ParseError("not a readiness model file", 0);
    if (j.at("version").get<int>() != kModelVersion) throw ParseError("unsupported readiness model version", 0);
    const auto arch = parse_architecture(j.at("architecture").get<std::string>());
    if (!arch) throw ParseError("unknown architecture in model file", 0);
    ModelShape shape{*arch, j.at("input_dim").get<std::size_t>(), j.at("hidden").get<std::size_t>()};

    ReadinessModel m;
    m.params = init_params(shape, 0);
    const json& tensors = j.at("tensors");
    m.params.for_each([&](const std::string& name, Eigen::MatrixXd& t) { tensor_from_json(tensors.at(name), t, name); });

    const json& nz = j.at("normalizer");
    m.normalizer.mean = nz.at("mean").get<std::vector<double>>();
    m.normalizer.std = nz.at("std").get<std::vector<double>>();
    m.normalizer.scaled = nz.at("scaled").get<std::vector<bool>>();
    if (m.normalizer.mean.size() != shape.input_dim || m.normalizer.std.size() != shape.input_dim ||
        m.normalizer.scaled.size() != shape.input_dim)
      throw ParseError("normalizer dims do not match input_dim", 0);

    const json& md = j.at("metadata");
    const auto fc = parse_input_case(md.at("feature_case").get<std::string>());
    if (!fc || input_dims(*fc) != shape.input_dim) throw ParseError("feature case does not match input_dim", 0);
    m.meta = {*fc, md.at("window_length").get<std::size_t>(), md.at("seed").get<std::uint64_t>(),
              md.at("best_epoch").get<std::size_t>(), md.at("best_val_mae").get<double>()};
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("readiness model: ") + e.what(), 0);
  }
}

}  // namespace drm
