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

#include "drm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "drm/error.hpp"

namespace drm {

std::size_t input_dims(InputCase c) {
  switch (c) {
    case InputCase::Head: return 3;
    case InputCase::Gaze: return 15;
    case InputCase::Both: return 18;
  }
  return 0;
}

const char* to_string(InputCase c) {
  switch (c) {
    case InputCase::Head: return "head";
    case InputCase::Gaze: return "gaze";
    case InputCase::Both: return "both";
  }
  return "?";
}

std::optional<InputCase> parse_input_case(std::string_view s) {
  if (s == "head") return InputCase::Head;
  if (s == "gaze") return InputCase::Gaze;
  if (s == "both") return InputCase::Both;
  return std::nullopt;
}

std::vector<std::size_t> selected_columns(InputCase c) {
  std::vector<std::size_t> cols;
  const std::size_t lo = c == InputCase::Gaze ? kZoneBegin : 0;
  const std::size_t hi = c == InputCase::Head ? kZoneBegin : kInputDims;
  for (std::size_t i = lo; i < hi; ++i) cols.push_back(i);
  return cols;
}

std::vector<bool> continuous_mask(InputCase c) {
  std::vector<bool> mask;
  for (std::size_t i : selected_columns(c)) mask.push_back(i < kZoneBegin || i >= kEyeBegin);
  return mask;
}

InputVector make_input(const FrameFeatures& f, GazeZone zone) {
  InputVector v{};
  v[0] = f.head.yaw;
  v[1] = f.head.pitch;
  v[2] = f.head.roll;
  v[kZoneBegin + index_of(zone)] = 1.0;
  const auto eyes = f.eyes.values();
  std::copy(eyes.begin(), eyes.end(), v.begin() + kEyeBegin);
  return v;
}

std::vector<double> select_features(const InputVector& v, InputCase c) {
  std::vector<double> out;
  for (std::size_t i : selected_columns(c)) out.push_back(v[i]);
  return out;
}

SeriesMatrix assemble_inputs(std::span<const FrameFeatures> features, std::span<const GazeZone> zones) {
  if (features.size() != zones.size()) throw DimensionError("assemble_inputs: features/zones length mismatch");
  SeriesMatrix m(static_cast<Eigen::Index>(kInputDims), static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) {
    const InputVector v = make_input(features[i], zones[i]);
    for (std::size_t d = 0; d < kInputDims; ++d) m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = v[d];
  }
  return m;
}

SeriesMatrix select_rows(const SeriesMatrix& full, InputCase c) {
  if (static_cast<std::size_t>(full.rows()) != kInputDims)
    throw DimensionError("select_rows: expected the full " + std::to_string(kInputDims) + "-row layout");
  const auto cols = selected_columns(c);
  SeriesMatrix out(static_cast<Eigen::Index>(cols.size()), full.cols());
  for (std::size_t r = 0; r < cols.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = full.row(static_cast<Eigen::Index>(cols[r]));
  return out;
}

std::vector<Window> build_windows(std::shared_ptr<const SeriesMatrix> inputs, std::span<const double> readiness,
                                  std::size_t window_length, std::size_t stride) {
  if (!inputs) throw Error("build_windows: null input series");
  if (window_length == 0 || stride == 0) throw Error("build_windows: window_length and stride must be positive");
  const auto n = static_cast<std::size_t>(inputs->cols());
  if (readiness.size() != n) throw DimensionError("build_windows: inputs and readiness lengths differ");
  if (n < window_length)
    throw Error("build_windows: series of " + std::to_string(n) + " frames is shorter than window length " +
                std::to_string(window_length));
  std::vector<Window> out;
  out.reserve((n - window_length) / stride + 1);
  for (std::size_t end = window_length - 1; end < n; end += stride) out.push_back({inputs, end, window_length, readiness[end]});
  return out;
}

std::vector<Window> select_case(const std::vector<Window>& full, InputCase c) {
  std::map<const SeriesMatrix*, std::shared_ptr<const SeriesMatrix>> reduced;
  std::vector<Window> out;
  out.reserve(full.size());
  for (const Window& w : full) {
    auto& r = reduced[w.series.get()];
    if (!r) r = std::make_shared<const SeriesMatrix>(select_rows(*w.series, c));
    out.push_back({r, w.end, w.length, w.target});
  }
  return out;
}

Eigen::MatrixXd Normalizer::apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (static_cast<std::size_t>(x.rows()) != dims())
    throw DimensionError("normalizer expects " + std::to_string(dims()) + " dims, got " + std::to_string(x.rows()));
  Eigen::MatrixXd out = x;
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!scaled[d]) continue;
    const auto r = static_cast<Eigen::Index>(d);
    out.row(r) = ((x.row(r).array() - mean[d]) / std[d]).matrix();
  }
  return out;
}

std::vector<Window> Normalizer::apply(const std::vector<Window>& windows) const {
  std::map<const SeriesMatrix*, std::shared_ptr<const SeriesMatrix>> done;
  std::vector<Window> out;
  out.reserve(windows.size());
  for (const Window& w : windows) {
    auto& r = done[w.series.get()];
    if (!r) r = std::make_shared<const SeriesMatrix>(apply(*w.series));
    out.push_back({r, w.end, w.length, w.target});
  }
  return out;
}

Normalizer fit_normalizer(const std::vector<Window>& train, const std::vector<bool>& continuous) {
  if (train.size() < 2) throw Error("fit_normalizer: need at least 2 training windows");
  const std::size_t d = train.front().dims();
  if (continuous.size() != d) throw DimensionError("fit_normalizer: mask size does not match window dims");

  // Distinct frames per session matrix, in first-seen order.
  std::vector<const SeriesMatrix*> order;
  std::map<const SeriesMatrix*, std::vector<bool>> covered;
  for (const Window& w : train) {
    if (w.dims() != d) throw DimensionError("fit_normalizer: windows disagree on dims");
    auto [it, inserted] = covered.try_emplace(w.series.get(), std::vector<bool>(static_cast<std::size_t>(w.series->cols()), false));
    if (inserted) order.push_back(w.series.get());
    std::fill(it->second.begin() + static_cast<std::ptrdiff_t>(w.begin()),
              it->second.begin() + static_cast<std::ptrdiff_t>(w.end + 1), true);
  }

  Normalizer nz;
  nz.mean.assign(d, 0.0);
  nz.std.assign(d, 1.0);
  nz.scaled = continuous;
  std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
  double count = 0.0;
  for (const SeriesMatrix* s : order) {
    const auto& mask = covered[s];
    for (std::size_t f = 0; f < mask.size(); ++f) {
      if (!mask[f]) continue;
      count += 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double v = (*s)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(f));
        nz.mean[k] += v;
        lo[k] = std::min(lo[k], v);
        hi[k] = std::max(hi[k], v);
      }
    }
  }
  for (std::size_t k = 0; k < d; ++k) nz.mean[k] = lo[k] == hi[k] ? lo[k] : nz.mean[k] / count;

  std::vector<double> sq(d, 0.0);
  for (const SeriesMatrix* s : order) {
    const auto& mask = covered[s];
    for (std::size_t f = 0; f < mask.size(); ++f) {
      if (!mask[f]) continue;
      for (std::size_t k = 0; k < d; ++k) {
        const double v = (*s)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(f)) - nz.mean[k];
        sq[k] += v * v;
      }
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (!continuous[k]) {
      nz.mean[k] = 0.0;
      nz.std[k] = 1.0;
      continue;
    }
    nz.std[k] = std::max(std::sqrt(sq[k] / count), kStdFloor);
  }
  return nz;
}

std::size_t max_folds(std::size_t n_windows, std::size_t val_size, std::size_t test_size) {
  const std::size_t block = val_size + test_size;
  if (block == 0) return 0;
  const std::size_t q = n_windows / block;
  return q == 0 ? 0 : q - 1;
}

FoldPlan ts_folds(std::size_t n_windows, std::size_t n_folds, std::size_t val_size, std::size_t test_size) {
  if (val_size == 0 || test_size == 0) throw Error("ts_folds: validation and test sizes must be positive");
  if (n_folds < 2) throw Error("ts_folds: need at least 2 folds");
  const std::size_t cap = max_folds(n_windows, val_size, test_size);
  if (n_folds > cap)
    throw Error("ts_folds: " + std::to_string(n_folds) + " folds infeasible for " + std::to_string(n_windows) +
                " windows with validation " + std::to_string(val_size) + " + test " + std::to_string(test_size) +
                " (max " + std::to_string(cap) + ")");
  FoldPlan plan{n_windows, val_size, test_size, {}};
  for (std::size_t k = 0; k < n_folds; ++k) {
    const std::size_t test_end = n_windows - (n_folds - 1 - k) * test_size;
    const std::size_t test_begin = test_end - test_size;
    const std::size_t val_begin = test_begin - val_size;
    plan.folds.push_back({{0, val_begin}, {val_begin, test_begin}, {test_begin, test_end}});
  }
  return plan;
}

std::string FoldPlan::describe() const {
  std::ostringstream os;
  os << "fold,train_begin,train_end,val_begin,val_end,test_begin,test_end\n";
  for (std::size_t k = 0; k < folds.size(); ++k) {
    const Fold& f = folds[k];
    os << k << ',' << f.train.begin << ',' << f.train.end << ',' << f.validation.begin << ',' << f.validation.end
       << ',' << f.test.begin << ',' << f.test.end << '\n';
  }
  return os.str();
}

}  // namespace drm
