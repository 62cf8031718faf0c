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

#ifndef TREBLE_IDL_PARSER_H_
#define TREBLE_IDL_PARSER_H_

#include <string>
#include <vector>

#include "treble/idl/ast.h"

namespace treble::idl {

struct SourceFile {
  std::string name;
  std::string text;
};

// Parses the `.hal` documents of one package. Documents are read in name
// order; each must open with `package <id>;` matching `id`. Errors carry
// `file:line:column`.
PackageAST ParsePackage(std::vector<SourceFile> sources, const PackageId& id);

// Parses a single document, taking the package id from its header.
PackageAST ParseDocument(const SourceFile& source);

// Renders an AST as one `.hal` document accepted by ParseDocument.
std::string RenderPackage(const PackageAST& ast);

}  // namespace treble::idl

#endif  // TREBLE_IDL_PARSER_H_
