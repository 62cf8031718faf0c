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

#include "treble/runtime/manifest.h"

#include <algorithm>
#include <tuple>

#include "treble/base/error.h"
#include "treble/idl/ast.h"
#include "treble/ir/block_text.h"

namespace treble::runtime {
namespace {

Version RequireVersion(const ir::BlockNode& node) {
  const std::string& text = node.RequireQuoted("version");
  auto version = Version::Parse(text);
  if (!version) {
    throw Error(ErrorCode::kSpecSyntaxError, "malformed version \"" + text + "\"");
  }
  return *version;
}

}  // namespace

void VendorManifest::Canonicalize() {
  std::sort(hals.begin(), hals.end(), [](const HalEntry& a, const HalEntry& b) {
    return std::tuple(a.name, a.version, a.transport) < std::tuple(b.name, b.version, b.transport);
  });
}

std::string VendorManifest::VersionString() const {
  VendorManifest canonical = *this;
  canonical.Canonicalize();
  std::string out;
  for (const HalEntry& hal : canonical.hals) {
    out += hal.name + "@" + hal.version.ToString() + "/" + std::string(wire::TransportName(hal.transport)) + ";";
  }
  return out + "vndk@" + vndk.ToString();
}

const HalEntry* VendorManifest::Find(std::string_view name) const {
  const HalEntry* best = nullptr;
  for (const HalEntry& hal : hals) {
    if (hal.name == name && (!best || best->version < hal.version)) {
      best = &hal;
    }
  }
  return best;
}

VendorManifest VendorManifest::Parse(std::string_view text) {
  ir::BlockNode root = ir::ParseBlockText(text);
  root.CheckKeys({"hal", "vndk"});
  VendorManifest manifest;
  for (const ir::BlockField* field : root.FindAll("hal")) {
    ir::BlockNode node = ir::BlockNode::Of(*field);
    node.CheckKeys({"name", "version", "transport"});
    HalEntry entry;
    entry.name = node.RequireQuoted("name");
    if (!idl::PackageId::IsValidName(entry.name)) {
      throw Error(ErrorCode::kSpecSyntaxError, "line " + std::to_string(field->line) + ": bad HAL name \"" +
                                                   entry.name + "\"");
    }
    entry.version = RequireVersion(node);
    auto transport = wire::ParseTransport(node.RequireBare("transport"));
    if (!transport) {
      throw Error(ErrorCode::kSpecSyntaxError,
                  "line " + std::to_string(field->line) + ": transport must be BINDERIZED or PASSTHROUGH");
    }
    entry.transport = *transport;
    manifest.hals.push_back(std::move(entry));
  }
  manifest.vndk = RequireVersion(root.RequireBlock("vndk"));
  manifest.Canonicalize();
  return manifest;
}

std::string VendorManifest::Emit() const {
  VendorManifest canonical = *this;
  canonical.Canonicalize();
  ir::BlockNode root;
  for (const HalEntry& hal : canonical.hals) {
    ir::BlockNode node;
    node.Quoted("name", hal.name);
    node.Quoted("version", hal.version.ToString());
    node.Bare("transport", std::string(wire::TransportName(hal.transport)));
    root.Block("hal", std::move(node));
  }
  ir::BlockNode vndk_node;
  vndk_node.Quoted("version", vndk.ToString());
  root.Block("vndk", std::move(vndk_node));
  return ir::EmitBlockText(root);
}

}  // namespace treble::runtime
