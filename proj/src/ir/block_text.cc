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

#include "treble/ir/block_text.h"

#include <cctype>

#include "treble/base/error.h"

namespace treble::ir {
namespace {

[[noreturn]] void Fail(int line, const std::string& message) {
  throw Error(ErrorCode::kSpecSyntaxError, "line " + std::to_string(line) + ": " + message);
}

class BlockParser {
 public:
  explicit BlockParser(std::string_view text) : text_(text) {}

  std::vector<BlockField> ParseFields(bool nested) {
    std::vector<BlockField> fields;
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) {
        if (nested) {
          Fail(line_, "unterminated block");
        }
        return fields;
      }
      if (text_[pos_] == '}') {
        if (!nested) {
          Fail(line_, "unbalanced '}'");
        }
        ++pos_;
        return fields;
      }
      BlockField field;
      field.line = line_;
      field.key = ReadWord();
      if (field.key.empty()) {
        Fail(line_, std::string("expected key, found '") + text_[pos_] + "'");
      }
      SkipSpace();
      if (pos_ >= text_.size() || text_[pos_] != ':') {
        Fail(line_, "expected ':' after '" + field.key + "'");
      }
      ++pos_;
      SkipSpace();
      if (pos_ >= text_.size()) {
        Fail(line_, "missing value for '" + field.key + "'");
      }
      char c = text_[pos_];
      if (c == '{') {
        ++pos_;
        field.value = ParseFields(true);
      } else if (c == '"') {
        field.value = QuotedValue{ReadQuoted()};
      } else {
        std::string word = ReadWord();
        if (word.empty()) {
          Fail(line_, std::string("unexpected '") + c + "'");
        }
        field.value = BareValue{std::move(word)};
      }
      fields.push_back(std::move(field));
    }
  }

 private:
  void SkipSpace() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          ++pos_;
        }
      } else {
        return;
      }
    }
  }

  std::string ReadWord() {
    std::string word;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
          c == '+') {
        word += c;
        ++pos_;
      } else {
        break;
      }
    }
    return word;
  }

  std::string ReadQuoted() {
    int start_line = line_;
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) {
        Fail(start_line, "unterminated string");
      }
      char c = text_[pos_++];
      if (c == '"') {
        return out;
      }
      if (c == '\n') {
        Fail(start_line, "newline in string");
      }
      if (c == '\\') {
        if (pos_ >= text_.size()) {
          Fail(start_line, "unterminated escape");
        }
        char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          default: Fail(line_, std::string("unknown escape '\\") + e + "'");
        }
        continue;
      }
      out += c;
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
};

void Escape(std::string& out, const std::string& text) {
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
}

void Emit(std::string& out, const std::vector<BlockField>& fields, int depth) {
  std::string indent(static_cast<size_t>(depth) * 2, ' ');
  for (const BlockField& field : fields) {
    out += indent;
    out += field.key;
    out += ": ";
    if (const auto* q = std::get_if<QuotedValue>(&field.value)) {
      out += '"';
      Escape(out, q->text);
      out += "\"\n";
    } else if (const auto* b = std::get_if<BareValue>(&field.value)) {
      out += b->text;
      out += '\n';
    } else {
      const auto& children = std::get<std::vector<BlockField>>(field.value);
      if (children.empty()) {
        out += "{ }\n";
      } else {
        out += "{\n";
        Emit(out, children, depth + 1);
        out += indent;
        out += "}\n";
      }
    }
  }
}

}  // namespace

BlockNode& BlockNode::Quoted(std::string key, std::string text) {
  fields.push_back(BlockField{std::move(key), QuotedValue{std::move(text)}});
  return *this;
}

BlockNode& BlockNode::Bare(std::string key, std::string text) {
  fields.push_back(BlockField{std::move(key), BareValue{std::move(text)}});
  return *this;
}

BlockNode& BlockNode::Block(std::string key, BlockNode child) {
  fields.push_back(BlockField{std::move(key), std::move(child.fields)});
  return *this;
}

const BlockField* BlockNode::Find(std::string_view key) const {
  for (const BlockField& field : fields) {
    if (field.key == key) {
      return &field;
    }
  }
  return nullptr;
}

std::vector<const BlockField*> BlockNode::FindAll(std::string_view key) const {
  std::vector<const BlockField*> out;
  for (const BlockField& field : fields) {
    if (field.key == key) {
      out.push_back(&field);
    }
  }
  return out;
}

const std::string& BlockNode::RequireQuoted(std::string_view key) const {
  const BlockField* field = Find(key);
  if (!field) {
    Fail(fields.empty() ? 0 : fields.front().line, "missing '" + std::string(key) + "'");
  }
  const auto* q = std::get_if<QuotedValue>(&field->value);
  if (!q) {
    Fail(field->line, "'" + std::string(key) + "' must be a quoted string");
  }
  return q->text;
}

const std::string& BlockNode::RequireBare(std::string_view key) const {
  const BlockField* field = Find(key);
  if (!field) {
    Fail(fields.empty() ? 0 : fields.front().line, "missing '" + std::string(key) + "'");
  }
  const auto* b = std::get_if<BareValue>(&field->value);
  if (!b) {
    Fail(field->line, "'" + std::string(key) + "' must be a bare token");
  }
  return b->text;
}

BlockNode BlockNode::RequireBlock(std::string_view key) const {
  const BlockField* field = Find(key);
  if (!field) {
    Fail(fields.empty() ? 0 : fields.front().line, "missing '" + std::string(key) + "'");
  }
  if (!field->is_block()) {
    Fail(field->line, "'" + std::string(key) + "' must be a block");
  }
  return Of(*field);
}

bool BlockNode::RequireBool(std::string_view key) const {
  const std::string& token = RequireBare(key);
  if (token == "true") {
    return true;
  }
  if (token != "false") {
    Fail(Find(key)->line, "'" + std::string(key) + "' must be true or false");
  }
  return false;
}

void BlockNode::CheckKeys(std::initializer_list<std::string_view> allowed) const {
  for (const BlockField& field : fields) {
    bool known = false;
    for (std::string_view key : allowed) {
      known = known || field.key == key;
    }
    if (!known) {
      Fail(field.line, "unexpected key '" + field.key + "'");
    }
  }
}

BlockNode BlockNode::Of(const BlockField& field) {
  BlockNode node;
  if (const auto* children = std::get_if<std::vector<BlockField>>(&field.value)) {
    node.fields = *children;
  }
  return node;
}

BlockNode ParseBlockText(std::string_view text) {
  BlockNode node;
  node.fields = BlockParser(text).ParseFields(false);
  return node;
}

std::string EmitBlockText(const BlockNode& node) {
  std::string out;
  Emit(out, node.fields, 0);
  return out;
}

}  // namespace treble::ir
