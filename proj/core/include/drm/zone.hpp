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
#include <string>
#include <string_view>

namespace drm {

// In-cabin gaze regions of interest G0..G8. The enumerator order is the total
// order used for tie-breaking.
enum class GazeZone : int { G0 = 0, G1, G2, G3, G4, G5, G6, G7, G8 };

inline constexpr std::size_t kNumZones = 9;

inline constexpr std::size_t index_of(GazeZone z) { return static_cast<std::size_t>(z); }

inline constexpr GazeZone zone_at(std::size_t i) { return static_cast<GazeZone>(static_cast<int>(i)); }

std::string to_string(GazeZone z);

// Parses "G0".."G8"; nullopt otherwise.
std::optional<GazeZone> parse_zone(std::string_view s);

// 1.0 at the zone's index, 0.0 elsewhere.
std::array<double, kNumZones> one_hot(GazeZone z);

}  // namespace drm
