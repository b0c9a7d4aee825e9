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
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "drm/zone.hpp"

namespace drm {

inline constexpr std::size_t kNumLandmarks = 98;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Euler angles in degrees.
struct HeadPose {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;

  friend bool operator==(const HeadPose&, const HeadPose&) = default;
};

using LandmarkSet = std::array<Point2, kNumLandmarks>;

// One frame of upstream landmark output in the WFLW 98-point convention:
// eyes at 60-75, irises at 96 (right) and 97 (left).
struct LandmarkFrame {
  std::size_t frame_index = 0;
  LandmarkSet points{};
  HeadPose head_pose;
  std::optional<GazeZone> zone_label;

  double timestamp_s(double fps) const { return static_cast<double>(frame_index) / fps; }

  friend bool operator==(const LandmarkFrame&, const LandmarkFrame&) = default;
};

struct SessionRecording {
  std::string session_id;
  double fps = 30.0;
  std::vector<LandmarkFrame> frames;

  double duration_s() const { return static_cast<double>(frames.size()) / fps; }

  friend bool operator==(const SessionRecording&, const SessionRecording&) = default;
};

// Per-rater readiness scores (1..5), one per consecutive interval from
// session start.
struct RatingSet {
  std::string rater_id;
  double interval_seconds = 2.0;
  std::vector<int> ratings;

  friend bool operator==(const RatingSet&, const RatingSet&) = default;
};

struct Diagnostic {
  std::optional<std::size_t> frame_index;
  std::string message;
};

// Session file (.lmks.jsonl): a header object {"session_id", "fps"} followed
// by one object per frame {"frame", "pose": [yaw,pitch,roll], "pts": [196
// numbers], "zone"?}. Frames are returned sorted by index. Throws ParseError
// naming the offending line.
SessionRecording parse_session(std::istream& in);

// Ratings file (.ratings.csv) with header `rater_id,interval,rating`. Lines
// starting with '#' are comments. All rows must share one rater id.
RatingSet parse_ratings(std::istream& in, double interval_seconds = 2.0);

// Empty iff every session invariant holds.
std::vector<Diagnostic> validate_session(const SessionRecording& session);

// Number of complete rating intervals a session spans.
std::size_t complete_intervals(const SessionRecording& session, double interval_seconds);

// Throws Error unless the ratings cover exactly the complete intervals of the
// session; trailing partial intervals are not rated.
void check_rating_coverage(const SessionRecording& session, const RatingSet& ratings);

// Writes the session in the format accepted by parse_session. Extra header
// keys (e.g. a config hash) are emitted verbatim when given.
void write_session(std::ostream& out, const SessionRecording& session,
                   const std::vector<std::pair<std::string, std::string>>& extra_header = {});

void write_ratings(std::ostream& out, const RatingSet& ratings,
                   const std::vector<std::string>& comments = {});

SessionRecording load_session(const std::string& path);
RatingSet load_ratings(const std::string& path, double interval_seconds = 2.0);

}  // namespace drm
