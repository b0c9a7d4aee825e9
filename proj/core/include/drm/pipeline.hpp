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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "drm/dataset.hpp"
#include "drm/gazezone.hpp"
#include "drm/groundtruth.hpp"
#include "drm/ingest.hpp"

namespace drm {

std::vector<FrameFeatures> session_features(const SessionRecording& session);

// Classifier samples of the annotated frames, in frame order.
std::vector<LabeledSample> labeled_samples(const SessionRecording& session, std::span<const FrameFeatures> features,
                                           FeatureCase c);

// The annotated zone where present, the forest's prediction elsewhere.
std::vector<GazeZone> assign_zones(const SessionRecording& session, std::span<const FrameFeatures> features,
                                   const GazeForest& forest);

struct PreparedSession {
  std::string session_id;
  std::vector<FrameFeatures> features;
  std::vector<GazeZone> zones;
  ReadinessSeries readiness;
  std::shared_ptr<const SeriesMatrix> inputs;  // full 18-row layout
};

PreparedSession prepare_session(const SessionRecording& session, std::span<const RatingSet> ratings,
                                const GazeForest& forest, InterpolationOptions options = {});

// Windows of every session, session after session; no window spans two
// sessions.
std::vector<Window> corpus_windows(std::span<const PreparedSession> sessions, std::size_t window_length = 60,
                                   std::size_t stride = 1);

}  // namespace drm
