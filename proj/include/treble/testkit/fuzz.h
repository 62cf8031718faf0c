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

#ifndef TREBLE_TESTKIT_FUZZ_H_
#define TREBLE_TESTKIT_FUZZ_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "treble/ir/interface_spec.h"
#include "treble/wire/codec.h"

namespace treble::testkit {

enum class FailureClass { kCrash, kError, kHang };
std::string_view FailureClassName(FailureClass failure);

struct FuzzFinding {
  // The CALL that failed; replaying it reproduces `failure`.
  wire::WireMessage input;
  FailureClass failure = FailureClass::kError;
  uint64_t iteration = 0;
  uint64_t seed = 0;
  std::string detail;

  friend bool operator==(const FuzzFinding&, const FuzzFinding&) = default;
};

struct FuzzOptions {
  uint64_t budget = 10000;
  uint64_t seed = 0;
  // Return as soon as the first finding is recorded.
  bool stop_after_first = false;
  // A call taking longer is a HANG.
  std::chrono::milliseconds hang_timeout{2000};
};

struct FuzzResult {
  // One per (failure class, method), in discovery order.
  std::vector<FuzzFinding> findings;
  uint64_t iterations = 0;
  size_t corpus_size = 0;

  // One line per finding: iteration, class, method, arguments.
  std::string ToText(const ir::InterfaceSpec& spec) const;
};

// Greybox campaign against the service at `address`. Inputs are random
// spec-conforming calls to two-way apis or mutations of corpus entries; an
// input joins the corpus when its (method, status class) pair is new. The
// connection is re-established after a crash or hang. Status classes ignore
// returned values, so findings depend only on (spec, implementation,
// options) when failures do not depend on service state. Throws Error(kInvalidArgument) for
// a zero budget and Error(kServiceUnavailable).
FuzzResult Fuzz(const ir::InterfaceSpec& spec, const std::string& address, const FuzzOptions& options);

// Sends `input` once over a fresh connection. Returns the failure class, or
// nullopt when the call succeeded.
std::optional<FailureClass> Replay(const ir::InterfaceSpec& spec, const std::string& address,
                                   const wire::WireMessage& input,
                                   std::chrono::milliseconds hang_timeout = std::chrono::milliseconds(2000));

// Spec-conforming value generation. Enums draw uniformly from the declared
// enumerators; interface arguments are null handles.
wire::TypedValue GenerateValue(std::mt19937_64& rng, const ir::VarSpec& spec);
// A conforming variation of `value` touching one leaf.
wire::TypedValue MutateValue(std::mt19937_64& rng, const ir::VarSpec& spec, const wire::TypedValue& value);

}  // namespace treble::testkit

#endif  // TREBLE_TESTKIT_FUZZ_H_
