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

#include "treble/cli/args.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "treble/base/error.h"
#include "treble/base/strings.h"
#include "treble/ir/block_text.h"
#include "treble/wire/conformance.h"

namespace treble::cli {
namespace {

using wire::TypedValue;

[[noreturn]] void Bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, path + ": " + what);
}

template <typename T>
T ParseInteger(std::string_view text, const std::string& path) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    Bad(path, "'" + std::string(text) + "' is not a valid " +
                  (std::numeric_limits<T>::is_signed ? "signed" : "unsigned") + " " +
                  std::to_string(sizeof(T) * 8) + "-bit integer");
  }
  return value;
}

double ParseReal(std::string_view text, const std::string& path) {
  std::string s(text);
  char* end = nullptr;
  errno = 0;
  double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    Bad(path, "'" + s + "' is not a number");
  }
  return value;
}

TypedValue Scalar(const ir::VarSpec& spec, std::string_view text, const std::string& path) {
  switch (spec.scalar_type) {
    case idl::ScalarType::kBool:
      if (text == "true" || text == "1") return TypedValue(true);
      if (text == "false" || text == "0") return TypedValue(false);
      Bad(path, "'" + std::string(text) + "' is not a bool");
    case idl::ScalarType::kInt32: return TypedValue(ParseInteger<int32_t>(text, path));
    case idl::ScalarType::kInt64: return TypedValue(ParseInteger<int64_t>(text, path));
    case idl::ScalarType::kUint32: return TypedValue(ParseInteger<uint32_t>(text, path));
    case idl::ScalarType::kUint64: return TypedValue(ParseInteger<uint64_t>(text, path));
    case idl::ScalarType::kFloat: {
      double v = ParseReal(text, path);
      if (std::isfinite(v) && std::abs(v) > std::numeric_limits<float>::max()) {
        Bad(path, "'" + std::string(text) + "' overflows a float");
      }
      return TypedValue(static_cast<float>(v));
    }
    case idl::ScalarType::kDouble: return TypedValue(ParseReal(text, path));
  }
  Bad(path, "unsupported scalar");
}

TypedValue Enum(const ir::VarSpec& spec, std::string_view text, const std::string& path) {
  for (const idl::Enumerator& e : spec.enumerators) {
    if (e.name == text) {
      return TypedValue(wire::EnumValue{spec.type_name, static_cast<int32_t>(e.value)});
    }
  }
  if (!text.empty() && (std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '-')) {
    return TypedValue(wire::EnumValue{spec.type_name, ParseInteger<int32_t>(text, path)});
  }
  Bad(path, "'" + std::string(text) + "' is not an enumerator of " + spec.type_name);
}

// Leaf values shared by tokens and args files.
TypedValue Leaf(const ir::VarSpec& spec, std::string_view text, const std::string& path) {
  switch (spec.type) {
    case ir::TypeTag::kScalar: return Scalar(spec, text, path);
    case ir::TypeTag::kString: return TypedValue(std::string(text));
    case ir::TypeTag::kEnum: return Enum(spec, text, path);
    case ir::TypeTag::kInterface:
      if (text == "null") return TypedValue(wire::Handle{0});
      return TypedValue(wire::Handle{ParseInteger<uint64_t>(text, path)});
    default: Bad(path, "needs a block value");
  }
}

TypedValue FromField(const ir::VarSpec& spec, const ir::BlockField& field, const std::string& path) {
  if (!field.is_block()) {
    const std::string& text = field.value.index() == 0 ? std::get<ir::QuotedValue>(field.value).text
                                                       : std::get<ir::BareValue>(field.value).text;
    return Leaf(spec, text, path);
  }
  ir::BlockNode node = ir::BlockNode::Of(field);
  if (spec.type == ir::TypeTag::kVector) {
    node.CheckKeys({"item"});
    wire::VecValue vec{wire::TagFor(*spec.element), {}};
    std::vector<const ir::BlockField*> items = node.FindAll("item");
    for (size_t i = 0; i < items.size(); ++i) {
      vec.items.push_back(FromField(*spec.element, *items[i], path + "[" + std::to_string(i) + "]"));
    }
    return TypedValue(std::move(vec));
  }
  if (spec.type == ir::TypeTag::kStruct) {
    wire::StructValue value{spec.type_name, {}};
    for (const ir::BlockField& f : node.fields) {
      bool known = false;
      for (const ir::VarSpec& s : spec.fields) known = known || s.name == f.key;
      if (!known) Bad(path, "no field '" + f.key + "' in " + spec.type_name);
    }
    for (const ir::VarSpec& field_spec : spec.fields) {
      const ir::BlockField* f = node.Find(field_spec.name);
      if (f == nullptr) Bad(path, "missing field '" + field_spec.name + "'");
      value.fields.push_back({field_spec.name, FromField(field_spec, *f, path + "." + field_spec.name)});
    }
    return TypedValue(std::move(value));
  }
  Bad(path, "unexpected block");
}

}  // namespace

TypedValue CoerceToken(const ir::VarSpec& spec, std::string_view token) {
  const std::string& path = spec.name;
  if (spec.type != ir::TypeTag::kVector) {
    return Leaf(spec, token, path);
  }
  const ir::VarSpec& element = *spec.element;
  if (element.type == ir::TypeTag::kVector || element.type == ir::TypeTag::kStruct) {
    Bad(path, "nested values need --args-file");
  }
  wire::VecValue vec{wire::TagFor(element), {}};
  if (!token.empty()) {
    std::vector<std::string> items = Split(token, ',');
    for (size_t i = 0; i < items.size(); ++i) {
      vec.items.push_back(Leaf(element, Trim(items[i]), path + "[" + std::to_string(i) + "]"));
    }
  }
  return TypedValue(std::move(vec));
}

std::vector<std::pair<std::string, TypedValue>> ParseArgsFile(const ir::ApiSpec& api, std::string_view text) {
  ir::BlockNode node = ir::ParseBlockText(text);
  std::vector<std::pair<std::string, TypedValue>> result;
  for (const ir::BlockField& field : node.fields) {
    const ir::VarSpec* spec = nullptr;
    for (const ir::VarSpec& arg : api.args) {
      if (arg.name == field.key) spec = &arg;
    }
    if (spec == nullptr) {
      Bad(field.key, api.name + " has no such argument");
    }
    for (const auto& [name, value] : result) {
      if (name == field.key) Bad(field.key, "given twice");
    }
    result.emplace_back(field.key, FromField(*spec, field, field.key));
  }
  return result;
}

std::vector<TypedValue> BuildArgs(const ir::ApiSpec& api, std::string_view args_file,
                                  const std::vector<std::string>& tokens) {
  std::map<std::string, TypedValue> given;
  if (!args_file.empty()) {
    for (auto& [name, value] : ParseArgsFile(api, args_file)) {
      given.insert_or_assign(name, std::move(value));
    }
  }
  for (const std::string& token : tokens) {
    size_t eq = token.find('=');
    if (eq == std::string::npos) {
      Bad(token, "expected name=value");
    }
    std::string name = token.substr(0, eq);
    const ir::VarSpec* spec = nullptr;
    for (const ir::VarSpec& arg : api.args) {
      if (arg.name == name) spec = &arg;
    }
    if (spec == nullptr) {
      Bad(name, api.name + " has no such argument");
    }
    given.insert_or_assign(name, CoerceToken(*spec, std::string_view(token).substr(eq + 1)));
  }
  std::vector<TypedValue> args;
  for (const ir::VarSpec& arg : api.args) {
    auto it = given.find(arg.name);
    if (it == given.end()) {
      Bad(arg.name, "missing argument of " + api.name);
    }
    args.push_back(it->second);
  }
  wire::CheckValues(api.args, args, api.name);
  return args;
}

}  // namespace treble::cli
