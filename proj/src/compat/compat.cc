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

#include "treble/compat/compat.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "treble/base/error.h"
#include "treble/base/strings.h"
#include "treble/idl/ast.h"
#include "treble/ir/block_text.h"

namespace treble::compat {
namespace {

using ir::TypeTag;
using ir::VarSpec;

// `pkg@M.m::Name` -> `pkg::Name`. A type keeps its identity across minor
// versions of the package that declares it.
std::string Unversioned(const std::string& type_name) {
  size_t at = type_name.find('@');
  size_t sep = type_name.find("::");
  if (at == std::string::npos || sep == std::string::npos || sep < at) {
    return type_name;
  }
  return type_name.substr(0, at) + type_name.substr(sep);
}

std::string Describe(const VarSpec& var) {
  switch (var.type) {
    case TypeTag::kScalar:
      return std::string(idl::ScalarTypeName(var.scalar_type));
    case TypeTag::kString:
      return "string";
    case TypeTag::kVector:
      return "vec<" + Describe(*var.element) + ">";
    case TypeTag::kEnum:
      return "enum " + var.type_name + " : " + std::string(idl::ScalarTypeName(var.scalar_type));
    case TypeTag::kStruct:
      return "struct " + var.type_name;
    case TypeTag::kInterface:
      return "interface " + var.type_name;
  }
  return "?";
}

class TypeDiff {
 public:
  explicit TypeDiff(CompatReport& report) : report_(report) {}

  // `mismatch_rule` names an incompatible change at this position.
  void Compare(const VarSpec& old_var, const VarSpec& new_var, const std::string& subject,
               const char* mismatch_rule) {
    auto mismatch = [&] {
      report_.Add(mismatch_rule, subject, Describe(old_var) + " -> " + Describe(new_var));
    };
    if (old_var.type != new_var.type) {
      mismatch();
      return;
    }
    switch (old_var.type) {
      case TypeTag::kScalar:
        if (old_var.scalar_type != new_var.scalar_type) {
          mismatch();
        }
        return;
      case TypeTag::kString:
        return;
      case TypeTag::kVector:
        Compare(*old_var.element, *new_var.element, subject + "[]", mismatch_rule);
        return;
      case TypeTag::kInterface:
        if (Unversioned(old_var.type_name) != Unversioned(new_var.type_name)) {
          mismatch();
        }
        return;
      case TypeTag::kEnum:
        if (Unversioned(old_var.type_name) != Unversioned(new_var.type_name) ||
            old_var.scalar_type != new_var.scalar_type) {
          mismatch();
          return;
        }
        CompareEnum(old_var, new_var);
        return;
      case TypeTag::kStruct:
        if (Unversioned(old_var.type_name) != Unversioned(new_var.type_name)) {
          mismatch();
          return;
        }
        CompareStruct(old_var, new_var);
        return;
    }
  }

 private:
  void CompareEnum(const VarSpec& old_var, const VarSpec& new_var) {
    for (const idl::Enumerator& e : old_var.enumerators) {
      auto it = std::find_if(new_var.enumerators.begin(), new_var.enumerators.end(),
                             [&](const idl::Enumerator& n) { return n.name == e.name; });
      std::string subject = old_var.type_name + "." + e.name;
      if (it == new_var.enumerators.end()) {
        report_.Add(kEnumOrdinalRemoved, subject, "ordinal " + std::to_string(e.value) + " removed");
      } else if (it->value != e.value) {
        report_.Add(kEnumOrdinalRenumbered, subject, std::to_string(e.value) + " -> " + std::to_string(it->value));
      }
    }
  }

  void CompareStruct(const VarSpec& old_var, const VarSpec& new_var) {
    std::vector<std::string> old_names, new_names;
    for (const VarSpec& f : old_var.fields) {
      old_names.push_back(f.name);
    }
    for (const VarSpec& f : new_var.fields) {
      new_names.push_back(f.name);
    }
    if (old_names != new_names) {
      report_.Add(kStructChanged, old_var.type_name, "fields {" + Join(old_names, ", ") + "} -> {" +
                                                         Join(new_names, ", ") + "}");
      return;
    }
    for (size_t i = 0; i < old_var.fields.size(); ++i) {
      Compare(old_var.fields[i], new_var.fields[i], old_var.type_name + "." + old_var.fields[i].name,
              kStructChanged);
    }
  }

  CompatReport& report_;
};

void CompareList(TypeDiff& diff, CompatReport& report, const std::vector<VarSpec>& old_list,
                 const std::vector<VarSpec>& new_list, const std::string& method, const char* what) {
  if (old_list.size() != new_list.size()) {
    report.Add(kSignatureChanged, method,
               std::to_string(old_list.size()) + " " + what + " -> " + std::to_string(new_list.size()));
    return;
  }
  for (size_t i = 0; i < old_list.size(); ++i) {
    diff.Compare(old_list[i], new_list[i], method + "." + old_list[i].name, kSignatureChanged);
  }
}

std::optional<LibCategory> ParseCategory(std::string_view text) {
  for (LibCategory c : {LibCategory::kLlNdk, LibCategory::kNdk, LibCategory::kVndk, LibCategory::kVendor,
                        LibCategory::kSystemPrivate}) {
    if (LibCategoryName(c) == text) {
      return c;
    }
  }
  return std::nullopt;
}

// The rule an edge `from -> to` breaks, or nullptr.
const char* EdgeRule(LibCategory from, LibCategory to) {
  switch (from) {
    case LibCategory::kVndk:
      return to == LibCategory::kVendor || to == LibCategory::kSystemPrivate ? kVndkDependencyViolation : nullptr;
    case LibCategory::kVendor:
      return to == LibCategory::kSystemPrivate ? kNamespaceViolation : nullptr;
    case LibCategory::kLlNdk:
    case LibCategory::kNdk:
    case LibCategory::kSystemPrivate:
      return to == LibCategory::kVendor ? kNamespaceViolation : nullptr;
  }
  return nullptr;
}

}  // namespace

bool CompatReport::Has(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
}

void CompatReport::Add(std::string rule, std::string subject, std::string detail) {
  violations.push_back({std::move(rule), std::move(subject), std::move(detail)});
}

void CompatReport::Finish() {
  std::sort(violations.begin(), violations.end());
  violations.erase(std::unique(violations.begin(), violations.end()), violations.end());
}

std::string CompatReport::ToText() const {
  std::string out = std::string(verdict()) + "\n";
  for (const Violation& v : violations) {
    out += v.rule + " " + v.subject + ": " + v.detail + "\n";
  }
  return out;
}

std::string CompatReport::ToSpecText() const {
  ir::BlockNode root;
  root.Bare("verdict", std::string(verdict()));
  for (const Violation& v : violations) {
    ir::BlockNode node;
    node.Bare("rule", v.rule);
    node.Quoted("subject", v.subject);
    node.Quoted("detail", v.detail);
    root.Block("violation", std::move(node));
  }
  return ir::EmitBlockText(root);
}

CompatReport CompatReport::ParseSpecText(std::string_view text) {
  ir::BlockNode root = ir::ParseBlockText(text);
  root.CheckKeys({"verdict", "violation"});
  CompatReport report;
  for (const ir::BlockField* field : root.FindAll("violation")) {
    ir::BlockNode node = ir::BlockNode::Of(*field);
    node.CheckKeys({"rule", "subject", "detail"});
    report.Add(node.RequireBare("rule"), node.RequireQuoted("subject"), node.RequireQuoted("detail"));
  }
  report.Finish();
  if (root.RequireBare("verdict") != report.verdict()) {
    throw Error(ErrorCode::kSpecSyntaxError, "verdict disagrees with the violation list");
  }
  return report;
}

CompatReport CheckInterfaceCompat(const ir::InterfaceSpec& old_spec, const ir::InterfaceSpec& new_spec) {
  if (old_spec.package != new_spec.package || old_spec.component_name != new_spec.component_name) {
    throw Error(ErrorCode::kPackageMismatch, old_spec.fqname().ToString() + " and " +
                                                 new_spec.fqname().ToString() + " are different interfaces");
  }
  CompatReport report;
  std::string name = old_spec.package + "::" + old_spec.component_name;
  if (old_spec.version.major != new_spec.version.major) {
    report.Add(kMajorMismatch, name, old_spec.version.ToString() + " -> " + new_spec.version.ToString());
    return report;
  }
  if (new_spec.version.minor < old_spec.version.minor) {
    report.Add(kMinorDowngrade, name, old_spec.version.ToString() + " -> " + new_spec.version.ToString());
  }

  std::map<std::string, size_t> new_index;
  for (size_t i = 0; i < new_spec.apis.size(); ++i) {
    new_index.emplace(new_spec.apis[i].name, i);
  }
  TypeDiff diff(report);
  std::set<size_t> kept;
  size_t last = 0;
  bool any = false;
  for (const ir::ApiSpec& old_api : old_spec.apis) {
    auto it = new_index.find(old_api.name);
    if (it == new_index.end()) {
      report.Add(kRemovedMethod, old_api.name, "not in " + new_spec.version.ToString());
      continue;
    }
    const ir::ApiSpec& new_api = new_spec.apis[it->second];
    if (any && it->second < last) {
      report.Add(kMethodReordered, old_api.name, "now before " + new_spec.apis[last].name);
    }
    last = std::max(last, it->second);
    any = true;
    kept.insert(it->second);
    if (old_api.oneway != new_api.oneway) {
      report.Add(kOnewayChanged, old_api.name, old_api.oneway ? "oneway -> two-way" : "two-way -> oneway");
    }
    CompareList(diff, report, old_api.args, new_api.args, old_api.name, "args");
    CompareList(diff, report, old_api.returns, new_api.returns, old_api.name, "returns");
  }
  for (size_t i = 0; any && i < last; ++i) {
    if (!kept.contains(i)) {
      report.Add(kMethodInserted, new_spec.apis[i].name, "added before " + new_spec.apis[last].name);
    }
  }
  report.Finish();
  return report;
}

bool SnapshotSupported(int platform_major, Version snapshot, SnapshotPolicy policy) {
  if (policy.window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "snapshot window must be at least 1");
  }
  if (platform_major < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative platform version");
  }
  int64_t major = snapshot.major;
  return int64_t{platform_major} - policy.window < major && major <= platform_major;
}

std::string_view LibCategoryName(LibCategory category) {
  switch (category) {
    case LibCategory::kLlNdk:
      return "LL_NDK";
    case LibCategory::kNdk:
      return "NDK";
    case LibCategory::kVndk:
      return "VNDK";
    case LibCategory::kVendor:
      return "VENDOR";
    case LibCategory::kSystemPrivate:
      return "SYSTEM_PRIVATE";
  }
  return "?";
}

std::vector<LibraryManifest> ParseLibraryManifests(std::string_view text) {
  ir::BlockNode root = ir::ParseBlockText(text);
  root.CheckKeys({"lib"});
  std::vector<LibraryManifest> libs;
  std::set<std::string> names;
  for (const ir::BlockField* field : root.FindAll("lib")) {
    ir::BlockNode node = ir::BlockNode::Of(*field);
    node.CheckKeys({"name", "category", "deps"});
    std::string where = "line " + std::to_string(field->line) + ": ";
    LibraryManifest lib;
    lib.name = node.RequireQuoted("name");
    if (lib.name.empty() || !names.insert(lib.name).second) {
      throw Error(ErrorCode::kSpecSyntaxError, where + "duplicate or empty library name \"" + lib.name + "\"");
    }
    auto category = ParseCategory(node.RequireBare("category"));
    if (!category) {
      throw Error(ErrorCode::kSpecSyntaxError, where + "unknown category " + node.RequireBare("category"));
    }
    lib.category = *category;
    if (node.Find("deps")) {
      for (const std::string& dep : Split(node.RequireQuoted("deps"), ',')) {
        std::string_view trimmed = Trim(dep);
        if (!trimmed.empty()) {
          lib.deps.emplace_back(trimmed);
        }
      }
    }
    libs.push_back(std::move(lib));
  }
  return libs;
}

std::string EmitLibraryManifests(const std::vector<LibraryManifest>& libs) {
  ir::BlockNode root;
  for (const LibraryManifest& lib : libs) {
    ir::BlockNode node;
    node.Quoted("name", lib.name);
    node.Bare("category", std::string(LibCategoryName(lib.category)));
    node.Quoted("deps", Join(lib.deps, ","));
    root.Block("lib", std::move(node));
  }
  return ir::EmitBlockText(root);
}

CompatReport CheckDependencyClosure(const std::vector<LibraryManifest>& libs, Namespace origin) {
  std::map<std::string, const LibraryManifest*> by_name;
  for (const LibraryManifest& lib : libs) {
    if (!by_name.emplace(lib.name, &lib).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate library " + lib.name);
    }
  }
  std::set<std::string> reached;
  std::deque<const LibraryManifest*> queue;
  for (const auto& [name, lib] : by_name) {
    if ((lib->category == LibCategory::kVendor) == (origin == Namespace::kVendor)) {
      reached.insert(name);
      queue.push_back(lib);
    }
  }
  CompatReport report;
  while (!queue.empty()) {
    const LibraryManifest* lib = queue.front();
    queue.pop_front();
    for (const std::string& dep : lib->deps) {
      auto it = by_name.find(dep);
      if (it == by_name.end()) {
        report.Add(kMissingDep, lib->name, dep + " is not in the manifest set");
        continue;
      }
      const LibraryManifest* target = it->second;
      if (const char* rule = EdgeRule(lib->category, target->category)) {
        report.Add(rule, lib->name, std::string(LibCategoryName(lib->category)) + " " + lib->name + " -> " +
                                        std::string(LibCategoryName(target->category)) + " " + dep);
      }
      if (reached.insert(dep).second) {
        queue.push_back(target);
      }
    }
  }
  report.Finish();
  return report;
}

Requirement Requirement::Parse(std::string_view text) {
  std::string_view trimmed = Trim(text);
  size_t sep = trimmed.find("::");
  if (sep != std::string_view::npos) {
    trimmed = trimmed.substr(0, sep);
  }
  try {
    idl::PackageId id = idl::PackageId::Parse(trimmed);
    return Requirement{id.name, id.version};
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidArgument, "bad requirement \"" + std::string(text) + "\": " + e.message());
  }
}

std::vector<Requirement> ParseRequirements(std::string_view text) {
  std::vector<Requirement> out;
  for (const std::string& line : Split(text, '\n')) {
    std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') {
      continue;
    }
    out.push_back(Requirement::Parse(trimmed));
  }
  return out;
}

CompatReport CheckManifestAgainstFramework(const runtime::VendorManifest& manifest,
                                           const std::vector<Requirement>& requirements) {
  CompatReport report;
  for (const Requirement& req : requirements) {
    std::string subject = req.name + "@" + req.min.ToString();
    bool present = false, same_major = false, satisfied = false;
    std::vector<std::string> provided;
    for (const runtime::HalEntry& hal : manifest.hals) {
      if (hal.name != req.name) {
        continue;
      }
      present = true;
      provided.push_back(hal.version.ToString());
      if (hal.version.major == req.min.major) {
        same_major = true;
        satisfied |= hal.version.minor >= req.min.minor;
      }
    }
    if (!present) {
      report.Add(kMissingHal, subject, "device provides no " + req.name);
    } else if (!same_major) {
      report.Add(kMajorMismatch, subject, "device provides " + Join(provided, ", "));
    } else if (!satisfied) {
      report.Add(kMinorTooLow, subject, "device provides " + Join(provided, ", "));
    }
  }
  report.Finish();
  return report;
}

}  // namespace treble::compat
