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

#ifndef TREBLE_IDL_RESOLVER_H_
#define TREBLE_IDL_RESOLVER_H_

#include <map>
#include <string>
#include <vector>

#include "treble/idl/ast.h"
#include "treble/idl/parser.h"

namespace treble::idl {

// A package whose type references are fully qualified and whose interfaces
// carry their complete method lists (ancestors first, flagged is_inherited).
struct ResolvedPackage {
  PackageAST ast;
  // Every struct and enum reachable from the package, keyed by
  // `package@M.m::Name`, with resolved field types.
  std::map<std::string, TypeDecl> types;

  friend bool operator==(const ResolvedPackage&, const ResolvedPackage&) = default;
};

using PackageSet = std::map<PackageId, PackageAST>;

// `deps` must hold every package reachable through imports, qualified
// references and `extends` chains. Resolving `Resolve(a, deps).ast` again
// yields the same result.
ResolvedPackage Resolve(const PackageAST& ast, const PackageSet& deps);

// Packages named by imports, qualified type references and `extends`.
std::vector<PackageId> ReferencedPackages(const PackageAST& ast);

// Finds packages on disk. A package `a.b.c@1.0` lives in `<root>/a/b/c/1.0/`
// as one or more `.hal` files.
class PackageLoader {
 public:
  explicit PackageLoader(std::vector<std::string> roots) : roots_(std::move(roots)) {}

  // Makes a package available without touching the filesystem.
  void Add(PackageAST ast);

  const PackageAST& Load(const PackageId& id);

  // Loads every package transitively referenced from `ast`.
  PackageSet LoadClosure(const PackageAST& ast);

 private:
  std::vector<std::string> roots_;
  PackageSet cache_;
};

}  // namespace treble::idl

#endif  // TREBLE_IDL_RESOLVER_H_
