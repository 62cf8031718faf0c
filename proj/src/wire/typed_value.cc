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

#include "treble/wire/typed_value.h"

#include <bit>

namespace treble::wire {

bool IsValidTag(uint8_t byte) { return byte >= 0x01 && byte <= 0x0C; }

std::string_view ValueTagName(ValueTag tag) {
  switch (tag) {
    case ValueTag::kBool: return "Bool";
    case ValueTag::kInt32: return "Int32";
    case ValueTag::kInt64: return "Int64";
    case ValueTag::kUint32: return "UInt32";
    case ValueTag::kUint64: return "UInt64";
    case ValueTag::kFloat32: return "Float32";
    case ValueTag::kFloat64: return "Float64";
    case ValueTag::kString: return "Str";
    case ValueTag::kVec: return "Vec";
    case ValueTag::kStruct: return "Struct";
    case ValueTag::kEnum: return "Enum";
    case ValueTag::kHandle: return "Handle";
  }
  return "?";
}

bool operator==(const VecValue& a, const VecValue& b) {
  return a.element_tag == b.element_tag && a.items == b.items;
}

bool operator==(const StructValue& a, const StructValue& b) {
  return a.type_name == b.type_name && a.fields == b.fields;
}

const TypedValue* StructValue::Field(std::string_view name) const {
  for (const NamedValue& field : fields) {
    if (field.name == name) {
      return &field.value;
    }
  }
  return nullptr;
}

bool operator==(const TypedValue& a, const TypedValue& b) {
  if (a.storage_.index() != b.storage_.index()) {
    return false;
  }
  if (const float* x = std::get_if<float>(&a.storage_)) {
    return std::bit_cast<uint32_t>(*x) == std::bit_cast<uint32_t>(std::get<float>(b.storage_));
  }
  if (const double* x = std::get_if<double>(&a.storage_)) {
    return std::bit_cast<uint64_t>(*x) == std::bit_cast<uint64_t>(std::get<double>(b.storage_));
  }
  return a.storage_ == b.storage_;
}

ValueTag TagFor(const ir::VarSpec& spec) {
  switch (spec.type) {
    case ir::TypeTag::kScalar:
      switch (spec.scalar_type) {
        case idl::ScalarType::kBool: return ValueTag::kBool;
        case idl::ScalarType::kInt32: return ValueTag::kInt32;
        case idl::ScalarType::kInt64: return ValueTag::kInt64;
        case idl::ScalarType::kUint32: return ValueTag::kUint32;
        case idl::ScalarType::kUint64: return ValueTag::kUint64;
        case idl::ScalarType::kFloat: return ValueTag::kFloat32;
        case idl::ScalarType::kDouble: return ValueTag::kFloat64;
      }
      break;
    case ir::TypeTag::kString: return ValueTag::kString;
    case ir::TypeTag::kVector: return ValueTag::kVec;
    case ir::TypeTag::kStruct: return ValueTag::kStruct;
    case ir::TypeTag::kEnum: return ValueTag::kEnum;
    case ir::TypeTag::kInterface: return ValueTag::kHandle;
  }
  return ValueTag::kBool;
}

}  // namespace treble::wire
