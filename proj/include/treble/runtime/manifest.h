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

#ifndef TREBLE_RUNTIME_MANIFEST_H_
#define TREBLE_RUNTIME_MANIFEST_H_

#include <string>
#include <string_view>
#include <vector>

#include "treble/base/version.h"
#include "treble/wire/registry.h"

namespace treble::runtime {

struct HalEntry {
  // Package name, e.g. `demo.light`.
  std::string name;
  Version version;
  wire::Transport transport = wire::Transport::kBinderized;

  friend bool operator==(const HalEntry&, const HalEntry&) = default;
};

// The vendor interface object: which HAL versions a device provides and the
// VNDK snapshot it was built against.
struct VendorManifest {
  std::vector<HalEntry> hals;
  Version vndk;

  // Sorts entries by (name, version, transport).
  void Canonicalize();

  // `name@M.m/TRANSPORT` entries joined by `;`, then `vndk@M.m`, over the
  // canonical order.
  std::string VersionString() const;

  // Highest version entry named `name`, or nullptr.
  const HalEntry* Find(std::string_view name) const;

  // `manifest.tspec` block text. Parse throws Error(kSpecSyntaxError).
  static VendorManifest Parse(std::string_view text);
  std::string Emit() const;

  friend bool operator==(const VendorManifest&, const VendorManifest&) = default;
};

}  // namespace treble::runtime

#endif  // TREBLE_RUNTIME_MANIFEST_H_
