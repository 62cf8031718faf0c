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

#include "treble/base/version.h"

#include "treble/base/strings.h"

namespace treble {

std::string Version::ToString() const {
  return std::to_string(major) + "." + std::to_string(minor);
}

std::optional<Version> Version::Parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    return std::nullopt;
  }
  auto major = ParseUint(text.substr(0, dot));
  auto minor = ParseUint(text.substr(dot + 1));
  if (!major || !minor || *major > UINT32_MAX || *minor > UINT32_MAX) {
    return std::nullopt;
  }
  return Version{static_cast<uint32_t>(*major), static_cast<uint32_t>(*minor)};
}

}  // namespace treble
