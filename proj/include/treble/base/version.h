// Copyright 2026 The Treble Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TREBLE_BASE_VERSION_H_
#define TREBLE_BASE_VERSION_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace treble {

// A `major.minor` version. No pre-release tags.
struct Version {
  uint32_t major = 0;
  uint32_t minor = 0;

  std::string ToString() const;
  static std::optional<Version> Parse(std::string_view text);

  auto operator<=>(const Version&) const = default;
};

}  // namespace treble

#endif  // TREBLE_BASE_VERSION_H_
