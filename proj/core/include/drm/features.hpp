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

#include <array>

#include "drm/ingest.hpp"

namespace drm {

enum class EyeSide { Right, Left };

enum class GazeAxis { Horizontal, Vertical };

// Horizontal: Right [0, .33), Centre [.33, .67), Left [.67, 1].
// Vertical: Up, Centre, Down with the same cut points.
enum class GazeBand { Right, Centre, Left, Up, Down };

// Denominators shorter than this (in pixels) flag the metric as degenerate.
inline constexpr double kDegenerateEpsilon = 1e-9;

// Value reported for a degenerate horizontal or vertical ratio.
inline constexpr double kNeutralGazeRatio = 0.5;

struct MetricValue {
  double value = 0.0;
  bool degenerate = false;
};

// Landmark indices entering each per-eye metric.
struct EyeLandmarks {
  int top, bottom;     // vertical pair (EAR numerator, VR)
  int corner_ref;      // HR reference corner
  int corner_far;      // HR far corner
  int pupil;
};

inline constexpr EyeLandmarks kRightEye{62, 66, 60, 64, 96};
inline constexpr EyeLandmarks kLeftEye{70, 74, 68, 72, 97};

inline constexpr const EyeLandmarks& eye_landmarks(EyeSide side) {
  return side == EyeSide::Right ? kRightEye : kLeftEye;
}

// ||P_bottom - P_top|| / ||P_far - P_ref||. Degenerate -> 0.
MetricValue eye_aspect_ratio(const LandmarkSet& points, EyeSide side);

// |x_pupil - x_ref| / |x_far - x_ref| clamped to [0, 1]. Degenerate -> 0.5.
MetricValue horizontal_gaze_ratio(const LandmarkSet& points, EyeSide side);

// |y_pupil - y_top| / |y_bottom - y_top| clamped to [0, 1]. Degenerate -> 0.5.
MetricValue vertical_gaze_ratio(const LandmarkSet& points, EyeSide side);

// `ratio` is expected in [0, 1]; values outside are assigned to the nearest
// end band.
GazeBand band_of(double ratio, GazeAxis axis);

const char* to_string(GazeBand band);

struct EyeMetrics {
  MetricValue ear_r, ear_l;
  MetricValue hr_r, hr_l;
  MetricValue vr_r, vr_l;

  // Order used wherever the six ratios are laid out as columns:
  // ear_r, ear_l, hr_r, hr_l, vr_r, vr_l.
  std::array<double, 6> values() const {
    return {ear_r.value, ear_l.value, hr_r.value, hr_l.value, vr_r.value, vr_l.value};
  }
};

struct FrameFeatures {
  HeadPose head;
  EyeMetrics eyes;
};

FrameFeatures frame_features(const LandmarkFrame& frame);

}  // namespace drm
