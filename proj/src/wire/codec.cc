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

#include "treble/wire/codec.h"

#include <bit>
#include <cstdio>

#include "treble/base/error.h"

namespace treble::wire {
namespace {

template <typename T>
void PutLe(std::vector<uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  U bits = static_cast<U>(value);
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<uint8_t>(bits >> (8 * i)));
  }
}

void PutLength(std::vector<uint8_t>& out, size_t length, const char* what) {
  if (length > UINT32_MAX) {
    throw Error(ErrorCode::kValueTooLarge,
                std::string(what) + " of " + std::to_string(length) + " exceeds 2^32-1");
  }
  PutLe<uint32_t>(out, static_cast<uint32_t>(length));
}

void PutString(std::vector<uint8_t>& out, const std::string& text) {
  PutLength(out, text.size(), "string length");
  out.insert(out.end(), text.begin(), text.end());
}

void EncodeBody(const TypedValue& value, std::vector<uint8_t>& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          out.push_back(v ? 1 : 0);
        } else if constexpr (std::is_same_v<T, float>) {
          PutLe<uint32_t>(out, std::bit_cast<uint32_t>(v));
        } else if constexpr (std::is_same_v<T, double>) {
          PutLe<uint64_t>(out, std::bit_cast<uint64_t>(v));
        } else if constexpr (std::is_integral_v<T>) {
          PutLe<T>(out, v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          PutString(out, v);
        } else if constexpr (std::is_same_v<T, VecValue>) {
          out.push_back(static_cast<uint8_t>(v.element_tag));
          PutLength(out, v.items.size(), "vec length");
          for (const TypedValue& item : v.items) {
            if (item.tag() != v.element_tag) {
              throw Error(ErrorCode::kTypeMismatch, "vec of " +
                                                        std::string(ValueTagName(v.element_tag)) +
                                                        " holds a " +
                                                        std::string(ValueTagName(item.tag())));
            }
            EncodeBody(item, out);
          }
        } else if constexpr (std::is_same_v<T, StructValue>) {
          PutString(out, v.type_name);
          PutLength(out, v.fields.size(), "field count");
          for (const NamedValue& field : v.fields) {
            PutString(out, field.name);
            EncodeValue(field.value, out);
          }
        } else if constexpr (std::is_same_v<T, EnumValue>) {
          PutString(out, v.type_name);
          PutLe<int32_t>(out, v.ordinal);
        } else if constexpr (std::is_same_v<T, Handle>) {
          PutLe<uint64_t>(out, v.id);
        }
      },
      value.storage());
}

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t remaining() const { return bytes_.size() - pos_; }

  void Need(size_t n, const char* what) const {
    if (remaining() < n) {
      throw Error(ErrorCode::kTruncatedMessage, std::string("truncated ") + what + " at offset " +
                                                    std::to_string(pos_));
    }
  }

  template <typename T>
  T Le(const char* what) {
    Need(sizeof(T), what);
    std::make_unsigned_t<T> bits = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(bits);
  }

  uint8_t Byte(const char* what) {
    Need(1, what);
    return bytes_[pos_++];
  }

  std::string String(const char* what) {
    uint32_t length = Le<uint32_t>(what);
    Need(length, what);
    std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), length);
    pos_ += length;
    return out;
  }

  ValueTag Tag() {
    size_t at = pos_;
    uint8_t byte = Byte("value tag");
    if (!IsValidTag(byte)) {
      char hex[8];
      std::snprintf(hex, sizeof(hex), "0x%02X", byte);
      throw Error(ErrorCode::kUnknownTag, std::string("tag ") + hex + " at offset " + std::to_string(at));
    }
    return static_cast<ValueTag>(byte);
  }

  TypedValue Value() { return Body(Tag()); }

  TypedValue Body(ValueTag tag) {
    switch (tag) {
      case ValueTag::kBool: return TypedValue(Byte("bool") != 0);
      case ValueTag::kInt32: return TypedValue(Le<int32_t>("int32"));
      case ValueTag::kInt64: return TypedValue(Le<int64_t>("int64"));
      case ValueTag::kUint32: return TypedValue(Le<uint32_t>("uint32"));
      case ValueTag::kUint64: return TypedValue(Le<uint64_t>("uint64"));
      case ValueTag::kFloat32: return TypedValue(std::bit_cast<float>(Le<uint32_t>("float")));
      case ValueTag::kFloat64: return TypedValue(std::bit_cast<double>(Le<uint64_t>("double")));
      case ValueTag::kString: return TypedValue(String("string"));
      case ValueTag::kVec: {
        VecValue vec;
        vec.element_tag = Tag();
        uint32_t count = Le<uint32_t>("vec length");
        // Every element occupies at least one byte.
        Need(count, "vec elements");
        vec.items.reserve(count);
        for (uint32_t i = 0; i < count; ++i) {
          vec.items.push_back(Body(vec.element_tag));
        }
        return TypedValue(std::move(vec));
      }
      case ValueTag::kStruct: {
        StructValue value;
        value.type_name = String("struct name");
        uint32_t count = Le<uint32_t>("field count");
        Need(count, "struct fields");
        for (uint32_t i = 0; i < count; ++i) {
          std::string name = String("field name");
          value.fields.push_back(NamedValue{std::move(name), Value()});
        }
        return TypedValue(std::move(value));
      }
      case ValueTag::kEnum: {
        EnumValue value;
        value.type_name = String("enum name");
        value.ordinal = Le<int32_t>("enum ordinal");
        return TypedValue(std::move(value));
      }
      case ValueTag::kHandle: return TypedValue(Handle{Le<uint64_t>("handle")});
    }
    throw Error(ErrorCode::kUnknownTag, "unreachable tag");
  }

  void ExpectEnd() const {
    if (remaining() != 0) {
      throw Error(ErrorCode::kTrailingBytes, std::to_string(remaining()) + " bytes after message");
    }
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string_view MessageKindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kCall: return "CALL";
    case MessageKind::kReturn: return "RETURN";
    case MessageKind::kOneway: return "ONEWAY";
    case MessageKind::kEvent: return "EVENT";
    case MessageKind::kError: return "ERROR";
    case MessageKind::kHello: return "HELLO";
    case MessageKind::kLoad: return "LOAD";
    case MessageKind::kOk: return "OK";
  }
  return "?";
}

WireMessage MakeError(uint64_t correlation_id, std::string code, std::string detail) {
  WireMessage message;
  message.kind = MessageKind::kError;
  message.correlation_id = correlation_id;
  message.values.emplace_back(std::move(code));
  message.values.emplace_back(std::move(detail));
  return message;
}

std::pair<std::string, std::string> ErrorParts(const WireMessage& message) {
  std::string code = "UNKNOWN";
  std::string detail;
  if (!message.values.empty() && message.values[0].get_if<std::string>()) {
    code = message.values[0].as<std::string>();
  }
  if (message.values.size() > 1 && message.values[1].get_if<std::string>()) {
    detail = message.values[1].as<std::string>();
  }
  return {code, detail};
}

void EncodeValue(const TypedValue& value, std::vector<uint8_t>& out) {
  out.push_back(static_cast<uint8_t>(value.tag()));
  EncodeBody(value, out);
}

std::vector<uint8_t> EncodeValue(const TypedValue& value) {
  std::vector<uint8_t> out;
  EncodeValue(value, out);
  return out;
}

TypedValue DecodeValue(std::span<const uint8_t> bytes) {
  Reader reader(bytes);
  TypedValue value = reader.Value();
  reader.ExpectEnd();
  return value;
}

std::vector<uint8_t> Encode(const WireMessage& message) {
  std::vector<uint8_t> out;
  out.push_back(static_cast<uint8_t>(message.kind));
  PutLe<uint64_t>(out, message.correlation_id);
  PutString(out, message.fqname);
  PutString(out, message.method);
  PutLength(out, message.values.size(), "value count");
  for (const TypedValue& value : message.values) {
    EncodeValue(value, out);
  }
  return out;
}

WireMessage Decode(std::span<const uint8_t> payload) {
  Reader reader(payload);
  WireMessage message;
  uint8_t kind = reader.Byte("kind");
  if (kind < 1 || kind > 8) {
    throw Error(ErrorCode::kUnknownTag, "message kind " + std::to_string(kind));
  }
  message.kind = static_cast<MessageKind>(kind);
  message.correlation_id = reader.Le<uint64_t>("correlation id");
  message.fqname = reader.String("fqname");
  message.method = reader.String("method");
  uint32_t count = reader.Le<uint32_t>("value count");
  reader.Need(count, "values");
  message.values.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    message.values.push_back(reader.Value());
  }
  reader.ExpectEnd();
  return message;
}

std::vector<uint8_t> Frame(std::span<const uint8_t> payload) {
  std::vector<uint8_t> out;
  out.reserve(payload.size() + 4);
  PutLength(out, payload.size(), "frame");
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

void FrameSplitter::Feed(std::span<const uint8_t> bytes) {
  if (offset_ > 0 && offset_ == buffer_.size()) {
    buffer_.clear();
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<std::vector<uint8_t>> FrameSplitter::Next() {
  if (buffered() < 4) {
    return std::nullopt;
  }
  uint32_t length = 0;
  for (int i = 0; i < 4; ++i) {
    length |= static_cast<uint32_t>(buffer_[offset_ + i]) << (8 * i);
  }
  if (length > kMaxFrame) {
    throw Error(ErrorCode::kResourceExhausted, "frame of " + std::to_string(length) + " bytes");
  }
  if (buffered() < 4 + static_cast<size_t>(length)) {
    return std::nullopt;
  }
  auto begin = buffer_.begin() + static_cast<std::ptrdiff_t>(offset_ + 4);
  std::vector<uint8_t> payload(begin, begin + length);
  offset_ += 4 + length;
  if (offset_ > (1u << 16) && offset_ * 2 > buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  return payload;
}

}  // namespace treble::wire
