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
#include <cstdint>
#include <string>
#include <vector>

#include "drm/groundtruth.hpp"
#include "drm/ingest.hpp"
#include "drm/zone.hpp"

namespace drm {

// Nominal head pose and gaze ratios of each zone, with the pose box a
// scripted target must fall in.
struct ZoneProfile {
  GazeZone zone;
  const char* name;
  HeadPose pose;
  double hr;
  double vr;
  double readiness;
  double yaw_lo, yaw_hi;
  double pitch_lo, pitch_hi;
};

const ZoneProfile& zone_profile(GazeZone zone);

inline constexpr double kOpenEar = 0.30;
inline constexpr double kClosedEar = 0.10;

struct Segment {
  GazeZone zone = GazeZone::G2;
  HeadPose pose;             // target, degrees
  double pose_jitter = 4.0;  // per-frame std, degrees
  double ear = kOpenEar;
  double hr = 0.5;
  double vr = 0.5;
  double ratio_jitter = 0.03;
  double dwell_s = 2.0;
  // Top and bottom eyelid points coincide on the left eye.
  bool collapse_left_eye = false;
  // Latent readiness while the segment lasts.
  double readiness = 5.0;
};

// Segment with the zone's nominal pose, ratios and readiness.
Segment zone_segment(GazeZone zone, double dwell_s, bool eyes_closed = false);

struct Scenario {
  std::string session_id = "synth";
  double fps = 30.0;
  double duration_s = 12.0;
  std::vector<Segment> script;
  double interval_seconds = 2.0;
  double landmark_jitter_px = 0.5;
  // Time constant of the first-order response of latent readiness to the
  // scripted segment values.
  double readiness_lag_s = 1.0;
  // Raters score the latent readiness at the end of each interval; rater 2
  // adds +1 (capped at 5) on this fraction of intervals.
  double rater2_offset_fraction = 0.15;
  double annotate_fraction = 1.0;

  // Throws Error when segments do not tile the duration, a pose target is
  // outside its zone's box, or a value is out of range.
  void validate() const;
};

struct SyntheticSession {
  SessionRecording session;
  std::array<RatingSet, 2> ratings;
  ReadinessSeries latent;
  // Scripted zone of every frame, labelled or not.
  std::vector<GazeZone> zones;
};

SyntheticSession generate_session(const Scenario& scenario, std::uint64_t seed);

// Scripts of the benchmark corpus: 15 sessions of 12 s at 30 fps.
std::vector<Scenario> benchmark_scenarios(std::uint64_t seed);

std::vector<SyntheticSession> generate_benchmark(std::uint64_t seed);

// Neutral 98-point face centred on the origin, eye width 40 px, with a depth
// coordinate per point.
struct TemplatePoint {
  double x, y, z;
};
const std::array<TemplatePoint, kNumLandmarks>& face_template();

}  // namespace drm
