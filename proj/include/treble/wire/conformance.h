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

#ifndef TREBLE_WIRE_CONFORMANCE_H_
#define TREBLE_WIRE_CONFORMANCE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treble/ir/interface_spec.h"
#include "treble/wire/typed_value.h"

namespace treble::wire {

// Throws Error(kTypeMismatch) naming the offending path, e.g.
// `getPropConfigs.props[2]`.
void CheckValue(const ir::VarSpec& spec, const TypedValue& value, const std::string& path);

// Checks count and shape of an argument or return list.
void CheckValues(const std::vector<ir::VarSpec>& specs, std::span<const TypedValue> values,
                 const std::string& where);

// Zero scalars, empty strings and vectors, structs of defaults, the first
// enumerator (or ordinal 0), and the null handle.
TypedValue DefaultValue(const ir::VarSpec& spec);

// Human-readable rendering. With a spec, enum ordinals print as enumerator
// names.
std::string FormatValue(const TypedValue& value, const ir::VarSpec* spec = nullptr);

}  // namespace treble::wire

#endif  // TREBLE_WIRE_CONFORMANCE_H_
