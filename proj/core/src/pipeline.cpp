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

#include "drm/pipeline.hpp"

#include "drm/error.hpp"

namespace drm {

std::vector<FrameFeatures> session_features(const SessionRecording& session) {
  std::vector<FrameFeatures> out;
  out.reserve(session.frames.size());
  for (const LandmarkFrame& f : session.frames) out.push_back(frame_features(f));
  return out;
}

std::vector<LabeledSample> labeled_samples(const SessionRecording& session, std::span<const FrameFeatures> features,
                                           FeatureCase c) {
  if (features.size() != session.frames.size()) throw DimensionError("labeled_samples: feature count mismatch");
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < features.size(); ++i)
    if (const auto& z = session.frames[i].zone_label) out.push_back({classifier_columns(features[i], c), *z});
  return out;
}

std::vector<GazeZone> assign_zones(const SessionRecording& session, std::span<const FrameFeatures> features,
                                   const GazeForest& forest) {
  if (features.size() != session.frames.size()) throw DimensionError("assign_zones: feature count mismatch");
  std::vector<GazeZone> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& label = session.frames[i].zone_label;
    out.push_back(label ? *label : predict_zone(forest, features[i]));
  }
  return out;
}

PreparedSession prepare_session(const SessionRecording& session, std::span<const RatingSet> ratings,
                                const GazeForest& forest, InterpolationOptions options) {
  PreparedSession p;
  p.session_id = session.session_id;
  p.features = session_features(session);
  p.zones = assign_zones(session, p.features, forest);
  p.readiness = readiness_for_session(session, ratings, options);
  p.inputs = std::make_shared<const SeriesMatrix>(assemble_inputs(p.features, p.zones));
  return p;
}

std::vector<Window> corpus_windows(std::span<const PreparedSession> sessions, std::size_t window_length,
                                   std::size_t stride) {
  std::vector<Window> out;
  for (const PreparedSession& s : sessions) {
    std::vector<Window> ws = build_windows(s.inputs, s.readiness.values, window_length, stride);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

}  // namespace drm
