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

#include "drm/features.hpp"

#include <algorithm>
#include <cmath>

namespace drm {

namespace {

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

MetricValue clamped_ratio(double num, double den) {
  if (den < kDegenerateEpsilon) return {kNeutralGazeRatio, true};
  return {std::clamp(num / den, 0.0, 1.0), false};
}

}  // namespace

MetricValue eye_aspect_ratio(const LandmarkSet& points, EyeSide side) {
  const EyeLandmarks& e = eye_landmarks(side);
  const double den = distance(points[e.corner_far], points[e.corner_ref]);
  if (den < kDegenerateEpsilon) return {0.0, true};
  return {distance(points[e.bottom], points[e.top]) / den, false};
}

MetricValue horizontal_gaze_ratio(const LandmarkSet& points, EyeSide side) {
  const EyeLandmarks& e = eye_landmarks(side);
  const double ref = points[e.corner_ref].x;
  return clamped_ratio(std::abs(points[e.pupil].x - ref), std::abs(points[e.corner_far].x - ref));
}

MetricValue vertical_gaze_ratio(const LandmarkSet& points, EyeSide side) {
  const EyeLandmarks& e = eye_landmarks(side);
  const double top = points[e.top].y;
  return clamped_ratio(std::abs(points[e.pupil].y - top), std::abs(points[e.bottom].y - top));
}

GazeBand band_of(double ratio, GazeAxis axis) {
  const bool horizontal = axis == GazeAxis::Horizontal;
  if (ratio < 0.33) return horizontal ? GazeBand::Right : GazeBand::Up;
  if (ratio < 0.67) return GazeBand::Centre;
  return horizontal ? GazeBand::Left : GazeBand::Down;
}

const char* to_string(GazeBand band) {
  switch (band) {
    case GazeBand::Right: return "right";
    case GazeBand::Centre: return "centre";
    case GazeBand::Left: return "left";
    case GazeBand::Up: return "up";
    case GazeBand::Down: return "down";
  }
  return "?";
}

FrameFeatures frame_features(const LandmarkFrame& frame) {
  FrameFeatures f;
  f.head = frame.head_pose;
  const LandmarkSet& p = frame.points;
  f.eyes.ear_r = eye_aspect_ratio(p, EyeSide::Right);
  f.eyes.ear_l = eye_aspect_ratio(p, EyeSide::Left);
  f.eyes.hr_r = horizontal_gaze_ratio(p, EyeSide::Right);
  f.eyes.hr_l = horizontal_gaze_ratio(p, EyeSide::Left);
  f.eyes.vr_r = vertical_gaze_ratio(p, EyeSide::Right);
  f.eyes.vr_l = vertical_gaze_ratio(p, EyeSide::Left);
  return f;
}

}  // namespace drm
