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

#include <string>
#include <string_view>
#include <vector>

namespace drm {

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Strict parse of a whole field; throws Error on trailing garbage.
double parse_double(std::string_view s);

// Splits on ',' (no quoting; none of our fields contain commas).
std::vector<std::string> split_csv(std::string_view line);

}  // namespace drm
