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

#ifndef TREBLE_COMPAT_COMPAT_H_
#define TREBLE_COMPAT_COMPAT_H_

#include <string>
#include <string_view>
#include <vector>

#include "treble/base/version.h"
#include "treble/ir/interface_spec.h"
#include "treble/runtime/manifest.h"

namespace treble::compat {

// Rule identifiers.
inline constexpr char kMajorMismatch[] = "MAJOR_MISMATCH";
inline constexpr char kMinorDowngrade[] = "MINOR_DOWNGRADE";
inline constexpr char kRemovedMethod[] = "REMOVED_METHOD";
inline constexpr char kSignatureChanged[] = "SIGNATURE_CHANGED";
inline constexpr char kOnewayChanged[] = "ONEWAY_CHANGED";
inline constexpr char kMethodReordered[] = "METHOD_REORDERED";
inline constexpr char kMethodInserted[] = "METHOD_INSERTED";
inline constexpr char kEnumOrdinalRemoved[] = "ENUM_ORDINAL_REMOVED";
inline constexpr char kEnumOrdinalRenumbered[] = "ENUM_ORDINAL_RENUMBERED";
inline constexpr char kStructChanged[] = "STRUCT_CHANGED";
inline constexpr char kMissingDep[] = "MISSING_DEP";
inline constexpr char kVndkDependencyViolation[] = "VNDK_DEPENDENCY_VIOLATION";
inline constexpr char kNamespaceViolation[] = "NAMESPACE_VIOLATION";
inline constexpr char kMissingHal[] = "MISSING_HAL";
inline constexpr char kMinorTooLow[] = "MINOR_TOO_LOW";
inline constexpr char kSnapshotUnsupported[] = "SNAPSHOT_UNSUPPORTED";

struct Violation {
  std::string rule;
  std::string subject;
  std::string detail;

  auto operator<=>(const Violation&) const = default;
};

// Compatible iff there are no violations. Violations are kept sorted.
struct CompatReport {
  std::vector<Violation> violations;

  bool compatible() const { return violations.empty(); }
  std::string_view verdict() const { return compatible() ? "COMPATIBLE" : "INCOMPATIBLE"; }
  bool Has(std::string_view rule) const;

  // The verdict line, then one `RULE subject: detail` line per violation.
  std::string ToText() const;
  // `verdict: X` then `violation: { rule: .. subject: ".." detail: ".." }`.
  std::string ToSpecText() const;
  static CompatReport ParseSpecText(std::string_view text);

  void Add(std::string rule, std::string subject, std::string detail);
  void Finish();
};

// Whether clients built against `old_spec` keep working against `new_spec`.
// Argument names are not part of the ABI. Throws Error(kPackageMismatch)
// when the two specs name different interfaces.
CompatReport CheckInterfaceCompat(const ir::InterfaceSpec& old_spec, const ir::InterfaceSpec& new_spec);

struct SnapshotPolicy {
  // Major versions retained, counting the platform's own.
  int window = 3;
};

// True iff platform_major - window < snapshot.major <= platform_major. The
// minor never matters. Throws Error(kInvalidArgument) for a window below 1.
bool SnapshotSupported(int platform_major, Version snapshot, SnapshotPolicy policy = {});

enum class LibCategory { kLlNdk, kNdk, kVndk, kVendor, kSystemPrivate };
std::string_view LibCategoryName(LibCategory category);

struct LibraryManifest {
  std::string name;
  LibCategory category = LibCategory::kNdk;
  std::vector<std::string> deps;

  friend bool operator==(const LibraryManifest&, const LibraryManifest&) = default;
};

// `lib: { name: "libfoo" category: VNDK deps: "liba,libb" }` entries.
// Throws Error(kSpecSyntaxError), also for duplicate names.
std::vector<LibraryManifest> ParseLibraryManifests(std::string_view text);
std::string EmitLibraryManifests(const std::vector<LibraryManifest>& libs);

enum class Namespace { kSystem, kVendor };

// Checks every dependency edge reachable from the libraries of `origin`
// (VENDOR libraries for kVendor, all others for kSystem) against the
// category matrix. Throws Error(kInvalidArgument) on duplicate names.
CompatReport CheckDependencyClosure(const std::vector<LibraryManifest>& libs, Namespace origin);

// A HAL the framework needs: package name and lowest acceptable version.
struct Requirement {
  std::string name;
  Version min;

  // `pkg@M.m`, optionally followed by `::IName`. Throws
  // Error(kInvalidArgument).
  static Requirement Parse(std::string_view text);
};

CompatReport CheckManifestAgainstFramework(const runtime::VendorManifest& manifest,
                                           const std::vector<Requirement>& requirements);

// One requirement per line; blank lines and `#` comments are skipped.
std::vector<Requirement> ParseRequirements(std::string_view text);

}  // namespace treble::compat

#endif  // TREBLE_COMPAT_COMPAT_H_
