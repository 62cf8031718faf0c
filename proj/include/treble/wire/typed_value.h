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

#ifndef TREBLE_WIRE_TYPED_VALUE_H_
#define TREBLE_WIRE_TYPED_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "treble/ir/interface_spec.h"

namespace treble::wire {

// One-byte tags used on the wire.
enum class ValueTag : uint8_t {
  kBool = 0x01,
  kInt32 = 0x02,
  kInt64 = 0x03,
  kUint32 = 0x04,
  kUint64 = 0x05,
  kFloat32 = 0x06,
  kFloat64 = 0x07,
  kString = 0x08,
  kVec = 0x09,
  kStruct = 0x0A,
  kEnum = 0x0B,
  kHandle = 0x0C,
};

bool IsValidTag(uint8_t byte);
std::string_view ValueTagName(ValueTag tag);

class TypedValue;
struct NamedValue;

// Homogeneous vector; `element_tag` is kept even when empty.
struct VecValue {
  ValueTag element_tag = ValueTag::kInt32;
  std::vector<TypedValue> items;

  friend bool operator==(const VecValue& a, const VecValue& b);
};

struct StructValue {
  std::string type_name;
  std::vector<NamedValue> fields;

  const TypedValue* Field(std::string_view name) const;

  friend bool operator==(const StructValue& a, const StructValue& b);
};

struct EnumValue {
  std::string type_name;
  int32_t ordinal = 0;

  friend bool operator==(const EnumValue&, const EnumValue&) = default;
};

// Refers to a callback or service object registered on the sending side.
// Id 0 is the null handle.
struct Handle {
  uint64_t id = 0;

  friend bool operator==(const Handle&, const Handle&) = default;
};

// Self-describing runtime value.
class TypedValue {
 public:
  using Storage = std::variant<bool, int32_t, int64_t, uint32_t, uint64_t, float, double,
                               std::string, VecValue, StructValue, EnumValue, Handle>;

  TypedValue() : storage_(false) {}
  explicit TypedValue(bool v) : storage_(v) {}
  explicit TypedValue(int32_t v) : storage_(v) {}
  explicit TypedValue(int64_t v) : storage_(v) {}
  explicit TypedValue(uint32_t v) : storage_(v) {}
  explicit TypedValue(uint64_t v) : storage_(v) {}
  explicit TypedValue(float v) : storage_(v) {}
  explicit TypedValue(double v) : storage_(v) {}
  explicit TypedValue(std::string v) : storage_(std::move(v)) {}
  explicit TypedValue(const char* v) : storage_(std::string(v)) {}
  explicit TypedValue(VecValue v) : storage_(std::move(v)) {}
  explicit TypedValue(StructValue v) : storage_(std::move(v)) {}
  explicit TypedValue(EnumValue v) : storage_(std::move(v)) {}
  explicit TypedValue(Handle v) : storage_(v) {}

  ValueTag tag() const { return static_cast<ValueTag>(storage_.index() + 1); }
  const Storage& storage() const { return storage_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(storage_);
  }
  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&storage_);
  }

  // Floating-point payloads compare by bit pattern so that NaN round-trips
  // compare equal.
  friend bool operator==(const TypedValue& a, const TypedValue& b);

 private:
  Storage storage_;
};

struct NamedValue {
  std::string name;
  TypedValue value;

  friend bool operator==(const NamedValue&, const NamedValue&) = default;
};

// Wire tag carried by values of the given spec type.
ValueTag TagFor(const ir::VarSpec& spec);

}  // namespace treble::wire

#endif  // TREBLE_WIRE_TYPED_VALUE_H_
