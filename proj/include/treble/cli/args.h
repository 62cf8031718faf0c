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

#ifndef TREBLE_CLI_ARGS_H_
#define TREBLE_CLI_ARGS_H_

#include <string>
#include <string_view>
#include <vector>

#include "treble/ir/interface_spec.h"
#include "treble/wire/typed_value.h"

namespace treble::cli {

// Converts a command-line token. Scalars, strings, enums (name or ordinal)
// and vecs of those as comma-separated items; anything else needs an args
// file. Throws Error(kInvalidArgument).
wire::TypedValue CoerceToken(const ir::VarSpec& spec, std::string_view token);

// Block-text argument values keyed by argument name:
//
//   sample: { id: 5 label: "x" counts: { item: 1 item: 2 } color: RED }
//
// Vecs are blocks of repeated `item` keys. Interface handles are a bare
// integer id. Arguments left out of the file are absent from the result.
std::vector<std::pair<std::string, wire::TypedValue>> ParseArgsFile(const ir::ApiSpec& api,
                                                                    std::string_view text);

// Builds the argument list of `api` from an args file (may be empty) and
// `name=value` tokens, which take precedence. Every argument must be given.
std::vector<wire::TypedValue> BuildArgs(const ir::ApiSpec& api, std::string_view args_file,
                                        const std::vector<std::string>& tokens);

}  // namespace treble::cli

#endif  // TREBLE_CLI_ARGS_H_
