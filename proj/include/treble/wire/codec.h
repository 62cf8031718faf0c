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

#ifndef TREBLE_WIRE_CODEC_H_
#define TREBLE_WIRE_CODEC_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treble/wire/typed_value.h"

namespace treble::wire {

enum class MessageKind : uint8_t {
  kCall = 1,
  kReturn = 2,
  kOneway = 3,
  kEvent = 4,
  kError = 5,
  kHello = 6,
  kLoad = 7,
  kOk = 8,
};

std::string_view MessageKindName(MessageKind kind);

struct WireMessage {
  MessageKind kind = MessageKind::kCall;
  uint64_t correlation_id = 0;
  std::string fqname;
  std::string method;
  std::vector<TypedValue> values;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

// ERROR frames carry [Str code, Str detail].
WireMessage MakeError(uint64_t correlation_id, std::string code, std::string detail);
// Splits an ERROR message back into (code, detail).
std::pair<std::string, std::string> ErrorParts(const WireMessage& message);

// Payload layout (all integers little-endian):
//   u8 kind, u64 correlation_id, str fqname, str method, u32 count, values...
// where str is u32 length + UTF-8 bytes and each value is a tag byte followed
// by its body. Vec bodies are u8 element tag, u32 count, then the element
// bodies without their tags.
// Throws Error(kValueTooLarge) when a length does not fit in 32 bits.
std::vector<uint8_t> Encode(const WireMessage& message);

// Throws Error(kTruncatedMessage | kUnknownTag | kTrailingBytes).
WireMessage Decode(std::span<const uint8_t> payload);

void EncodeValue(const TypedValue& value, std::vector<uint8_t>& out);
std::vector<uint8_t> EncodeValue(const TypedValue& value);
TypedValue DecodeValue(std::span<const uint8_t> bytes);

// 4-byte little-endian length prefix followed by the payload.
std::vector<uint8_t> Frame(std::span<const uint8_t> payload);

// Reassembles frames from an arbitrary chunking of a byte stream.
class FrameSplitter {
 public:
  // Frames above this size are rejected as malformed.
  static constexpr uint32_t kMaxFrame = 256u << 20;

  void Feed(std::span<const uint8_t> bytes);
  // Next complete payload, if any. Throws Error(kResourceExhausted) on an
  // oversized length prefix.
  std::optional<std::vector<uint8_t>> Next();
  size_t buffered() const { return buffer_.size() - offset_; }

 private:
  std::vector<uint8_t> buffer_;
  size_t offset_ = 0;
};

}  // namespace treble::wire

#endif  // TREBLE_WIRE_CODEC_H_
