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
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "drm/ingest.hpp"
#include "drm/zone.hpp"

namespace drm {

inline constexpr double kMinReadiness = 1.0;
inline constexpr double kMaxReadiness = 5.0;

// Per-frame continuous readiness index.
struct ReadinessSeries {
  std::vector<double> values;
  double fps = 30.0;
  std::vector<std::string> rater_ids;
  double interval_seconds = 2.0;
};

// Elementwise mean of the raters' interval scores.
std::vector<double> merge_ratings(std::span<const RatingSet> rating_sets);

// Natural cubic spline through the knots (x_k, y_k); x strictly increasing,
// at least two knots. Evaluation outside [x_0, x_n] holds the end value.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;

  const std::vector<double>& knots() const { return x_; }
  // Second derivatives at the knots; zero at both ends.
  const std::vector<double>& curvature() const { return m_; }

 private:
  std::vector<double> x_, y_, m_;
};

struct InterpolationOptions {
  bool clamp = true;
};

// Knot k sits at the end of interval k, t = (k + 1) * interval_seconds; frame
// i is sampled at t = i / fps. Frames before the first or after the last knot
// take the nearest knot's value.
ReadinessSeries interpolate_readiness(std::span<const double> interval_means, double interval_seconds, double fps,
                                      std::size_t frame_count, InterpolationOptions options = {});

// Convenience: merge + interpolate for one session.
ReadinessSeries readiness_for_session(const SessionRecording& session, std::span<const RatingSet> ratings,
                                      InterpolationOptions options = {});

// Sample Pearson correlation. Throws Error if either series is constant.
double pearson(std::span<const double> a, std::span<const double> b);

struct ClassStats {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t count = 0;
};

// Readiness class of a value: round-half-up to 1..5.
int readiness_class(double readiness);

// Mean and population std of `ratio` over the frames of each readiness class
// (index 0 is class 1). Classes with no frames are absent.
std::array<std::optional<ClassStats>, 5> gaze_variability_by_class(std::span<const double> ratio,
                                                                   std::span<const double> readiness);

// Pearson r between each zone's one-hot indicator and readiness; absent for
// zones whose indicator is constant over the frames.
std::array<std::optional<double>, kNumZones> zone_readiness_correlation(std::span<const GazeZone> zones,
                                                                        std::span<const double> readiness);

// CSV with header `frame,readiness`.
void write_readiness_csv(std::ostream& out, const ReadinessSeries& series,
                         const std::vector<std::string>& comments = {});
ReadinessSeries read_readiness_csv(std::istream& in, double fps = 30.0);

}  // namespace drm
