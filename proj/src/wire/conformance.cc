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

#include "treble/wire/conformance.h"

#include <cstdio>
#include <sstream>

#include "treble/base/error.h"

namespace treble::wire {
namespace {

[[noreturn]] void Mismatch(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::kTypeMismatch, path + ": " + message);
}

std::string Describe(const ir::VarSpec& spec) {
  switch (spec.type) {
    case ir::TypeTag::kScalar: return std::string(idl::ScalarTypeName(spec.scalar_type));
    case ir::TypeTag::kString: return "string";
    case ir::TypeTag::kVector: return "vec<" + Describe(*spec.element) + ">";
    default: return spec.type_name;
  }
}

std::string FormatFloat(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void Format(std::ostringstream& out, const TypedValue& value, const ir::VarSpec* spec) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          out << (v ? "true" : "false");
        } else if constexpr (std::is_same_v<T, float> || std::is_same_v<T, double>) {
          out << FormatFloat(v);
        } else if constexpr (std::is_integral_v<T>) {
          out << v;
        } else if constexpr (std::is_same_v<T, std::string>) {
          out << '"';
          for (char c : v) {
            if (c == '"' || c == '\\') {
              out << '\\';
            }
            out << c;
          }
          out << '"';
        } else if constexpr (std::is_same_v<T, VecValue>) {
          const ir::VarSpec* element =
              spec && spec->type == ir::TypeTag::kVector ? &*spec->element : nullptr;
          out << '[';
          for (size_t i = 0; i < v.items.size(); ++i) {
            out << (i > 0 ? ", " : "");
            Format(out, v.items[i], element);
          }
          out << ']';
        } else if constexpr (std::is_same_v<T, StructValue>) {
          out << '{';
          for (size_t i = 0; i < v.fields.size(); ++i) {
            const ir::VarSpec* field = nullptr;
            if (spec && spec->type == ir::TypeTag::kStruct && i < spec->fields.size()) {
              field = &spec->fields[i];
            }
            out << (i > 0 ? ", " : "") << v.fields[i].name << ": ";
            Format(out, v.fields[i].value, field);
          }
          out << '}';
        } else if constexpr (std::is_same_v<T, EnumValue>) {
          if (spec && spec->type == ir::TypeTag::kEnum) {
            for (const idl::Enumerator& e : spec->enumerators) {
              if (e.value == v.ordinal) {
                out << e.name;
                return;
              }
            }
          }
          out << v.ordinal;
        } else if constexpr (std::is_same_v<T, Handle>) {
          out << "handle:" << v.id;
        }
      },
      value.storage());
}

}  // namespace

void CheckValue(const ir::VarSpec& spec, const TypedValue& value, const std::string& path) {
  ValueTag expected = TagFor(spec);
  if (value.tag() != expected) {
    Mismatch(path, "expected " + Describe(spec) + ", got " + std::string(ValueTagName(value.tag())));
  }
  switch (spec.type) {
    case ir::TypeTag::kScalar:
    case ir::TypeTag::kString:
    case ir::TypeTag::kInterface:
      return;
    case ir::TypeTag::kVector: {
      const VecValue& vec = value.as<VecValue>();
      ValueTag element_tag = TagFor(*spec.element);
      if (vec.element_tag != element_tag) {
        Mismatch(path, "vector element tag " + std::string(ValueTagName(vec.element_tag)) +
                           ", expected " + std::string(ValueTagName(element_tag)));
      }
      for (size_t i = 0; i < vec.items.size(); ++i) {
        CheckValue(*spec.element, vec.items[i], path + "[" + std::to_string(i) + "]");
      }
      return;
    }
    case ir::TypeTag::kStruct: {
      const StructValue& s = value.as<StructValue>();
      if (s.type_name != spec.type_name) {
        Mismatch(path, "struct " + s.type_name + ", expected " + spec.type_name);
      }
      if (s.fields.size() != spec.fields.size()) {
        Mismatch(path, std::to_string(s.fields.size()) + " fields, expected " +
                           std::to_string(spec.fields.size()));
      }
      for (size_t i = 0; i < s.fields.size(); ++i) {
        if (s.fields[i].name != spec.fields[i].name) {
          Mismatch(path, "field " + std::to_string(i) + " is '" + s.fields[i].name +
                             "', expected '" + spec.fields[i].name + "'");
        }
        CheckValue(spec.fields[i], s.fields[i].value, path + "." + s.fields[i].name);
      }
      return;
    }
    case ir::TypeTag::kEnum: {
      const EnumValue& e = value.as<EnumValue>();
      if (e.type_name != spec.type_name) {
        Mismatch(path, "enum " + e.type_name + ", expected " + spec.type_name);
      }
      // The ordinal is 32 bits wide on the wire, so it always fits an int32_t
      // or uint32_t underlying type.
      return;
    }
  }
}

void CheckValues(const std::vector<ir::VarSpec>& specs, std::span<const TypedValue> values,
                 const std::string& where) {
  if (specs.size() != values.size()) {
    Mismatch(where, std::to_string(values.size()) + " values, expected " +
                        std::to_string(specs.size()));
  }
  for (size_t i = 0; i < specs.size(); ++i) {
    CheckValue(specs[i], values[i], where + "." + specs[i].name);
  }
}

TypedValue DefaultValue(const ir::VarSpec& spec) {
  switch (spec.type) {
    case ir::TypeTag::kScalar:
      switch (spec.scalar_type) {
        case idl::ScalarType::kBool: return TypedValue(false);
        case idl::ScalarType::kInt32: return TypedValue(int32_t{0});
        case idl::ScalarType::kInt64: return TypedValue(int64_t{0});
        case idl::ScalarType::kUint32: return TypedValue(uint32_t{0});
        case idl::ScalarType::kUint64: return TypedValue(uint64_t{0});
        case idl::ScalarType::kFloat: return TypedValue(0.0f);
        case idl::ScalarType::kDouble: return TypedValue(0.0);
      }
      break;
    case ir::TypeTag::kString:
      return TypedValue(std::string());
    case ir::TypeTag::kVector:
      return TypedValue(VecValue{TagFor(*spec.element), {}});
    case ir::TypeTag::kStruct: {
      StructValue value;
      value.type_name = spec.type_name;
      for (const ir::VarSpec& field : spec.fields) {
        value.fields.push_back(NamedValue{field.name, DefaultValue(field)});
      }
      return TypedValue(std::move(value));
    }
    case ir::TypeTag::kEnum: {
      int32_t ordinal =
          spec.enumerators.empty() ? 0 : static_cast<int32_t>(spec.enumerators.front().value);
      return TypedValue(EnumValue{spec.type_name, ordinal});
    }
    case ir::TypeTag::kInterface:
      return TypedValue(Handle{0});
  }
  return TypedValue(false);
}

std::string FormatValue(const TypedValue& value, const ir::VarSpec* spec) {
  std::ostringstream out;
  Format(out, value, spec);
  return out.str();
}

}  // namespace treble::wire
