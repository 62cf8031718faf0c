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

#ifndef TREBLE_IDL_AST_H_
#define TREBLE_IDL_AST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "treble/base/box.h"
#include "treble/base/version.h"

namespace treble::idl {

// `name@major.minor`, e.g. `hardware.automotive.vehicle@2.0`.
struct PackageId {
  std::string name;
  Version version;

  std::string ToString() const;
  // Throws Error(kSyntaxError) on malformed input.
  static PackageId Parse(std::string_view text);
  static bool IsValidName(std::string_view name);

  auto operator<=>(const PackageId&) const = default;
};

// `package@M.m::Name`; names an interface or a user type.
struct FqName {
  PackageId package;
  std::string name;

  std::string ToString() const;
  static FqName Parse(std::string_view text);

  auto operator<=>(const FqName&) const = default;
};

enum class ScalarType { kInt32, kInt64, kUint32, kUint64, kBool, kFloat, kDouble };

std::string_view ScalarTypeName(ScalarType type);
std::optional<ScalarType> ParseScalarType(std::string_view name);

struct TypeRef {
  enum class Kind {
    kScalar,
    kString,
    kVec,
    // Not yet resolved; `name` holds the spelling from the source, possibly
    // qualified.
    kNamed,
    kStruct,
    kEnum,
    kInterface,
  };

  Kind kind = Kind::kScalar;
  ScalarType scalar = ScalarType::kInt32;
  // kNamed: as written. kStruct/kEnum/kInterface: fully qualified.
  std::string name;
  Box<TypeRef> element;

  static TypeRef Scalar(ScalarType type);
  static TypeRef String();
  static TypeRef Vec(TypeRef element);
  static TypeRef Named(std::string name);

  friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

struct Param {
  std::string name;
  TypeRef type;

  friend bool operator==(const Param&, const Param&) = default;
};

struct MethodDecl {
  std::string name;
  std::vector<Param> args;
  std::vector<Param> returns;
  bool oneway = false;
  // Set by the resolver for methods copied from an ancestor interface.
  bool is_inherited = false;
  // Fully qualified name of the interface that declares this method. Empty
  // until resolved.
  std::string declared_in;

  friend bool operator==(const MethodDecl&, const MethodDecl&) = default;
};

struct InterfaceDecl {
  std::string name;
  // As written before resolution, fully qualified after.
  std::optional<std::string> extends;
  std::vector<MethodDecl> methods;

  friend bool operator==(const InterfaceDecl&, const InterfaceDecl&) = default;
};

struct StructField {
  std::string name;
  TypeRef type;

  friend bool operator==(const StructField&, const StructField&) = default;
};

struct StructDecl {
  std::string name;
  std::vector<StructField> fields;

  friend bool operator==(const StructDecl&, const StructDecl&) = default;
};

struct Enumerator {
  std::string name;
  int64_t value = 0;

  friend bool operator==(const Enumerator&, const Enumerator&) = default;
};

struct EnumDecl {
  std::string name;
  ScalarType underlying = ScalarType::kInt32;
  std::vector<Enumerator> enumerators;

  friend bool operator==(const EnumDecl&, const EnumDecl&) = default;
};

using TypeDecl = std::variant<StructDecl, EnumDecl>;

const std::string& TypeDeclName(const TypeDecl& decl);

struct PackageAST {
  PackageId id;
  std::vector<PackageId> imports;
  std::vector<TypeDecl> types;
  std::vector<InterfaceDecl> interfaces;

  const TypeDecl* FindType(std::string_view name) const;
  const InterfaceDecl* FindInterface(std::string_view name) const;

  friend bool operator==(const PackageAST&, const PackageAST&) = default;
};

}  // namespace treble::idl

#endif  // TREBLE_IDL_AST_H_
