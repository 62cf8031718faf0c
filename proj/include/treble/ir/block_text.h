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

#ifndef TREBLE_IR_BLOCK_TEXT_H_
#define TREBLE_IR_BLOCK_TEXT_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace treble::ir {

// The `key: value` block format shared by `.spec` files, `manifest.tspec`,
// library manifests and compatibility reports. A value is a quoted string, a
// bare token or a nested `{ ... }` block; repeated keys form lists.
struct BlockNode;

struct QuotedValue {
  std::string text;
  friend bool operator==(const QuotedValue&, const QuotedValue&) = default;
};

struct BareValue {
  std::string text;
  friend bool operator==(const BareValue&, const BareValue&) = default;
};

struct BlockField {
  std::string key;
  std::variant<QuotedValue, BareValue, std::vector<BlockField>> value;
  int line = 0;

  bool is_block() const { return value.index() == 2; }

  friend bool operator==(const BlockField& a, const BlockField& b) {
    return a.key == b.key && a.value == b.value;
  }
};

struct BlockNode {
  std::vector<BlockField> fields;

  // Builders.
  BlockNode& Quoted(std::string key, std::string text);
  BlockNode& Bare(std::string key, std::string text);
  BlockNode& Block(std::string key, BlockNode child);

  // Accessors; the Require* forms throw Error(kSpecSyntaxError).
  const BlockField* Find(std::string_view key) const;
  std::vector<const BlockField*> FindAll(std::string_view key) const;
  const std::string& RequireQuoted(std::string_view key) const;
  const std::string& RequireBare(std::string_view key) const;
  BlockNode RequireBlock(std::string_view key) const;
  bool RequireBool(std::string_view key) const;
  // Every key must be in `allowed`.
  void CheckKeys(std::initializer_list<std::string_view> allowed) const;

  static BlockNode Of(const BlockField& field);

  friend bool operator==(const BlockNode&, const BlockNode&) = default;
};

// Throws Error(kSpecSyntaxError) with a line number.
BlockNode ParseBlockText(std::string_view text);

// Canonical form: one field per line, two-space indent, LF endings, empty
// blocks written `key: { }`.
std::string EmitBlockText(const BlockNode& node);

}  // namespace treble::ir

#endif  // TREBLE_IR_BLOCK_TEXT_H_
