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

#include "treble/idl/ast.h"

#include <cctype>

#include "treble/base/error.h"
#include "treble/base/strings.h"

namespace treble::idl {

std::string PackageId::ToString() const { return name + "@" + version.ToString(); }

bool PackageId::IsValidName(std::string_view name) {
  if (name.empty()) {
    return false;
  }
  for (const std::string& segment : Split(name, '.')) {
    if (segment.empty() || !std::islower(static_cast<unsigned char>(segment[0]))) {
      return false;
    }
    for (char c : segment) {
      if (!std::islower(static_cast<unsigned char>(c)) &&
          !std::isdigit(static_cast<unsigned char>(c)) && c != '_') {
        return false;
      }
    }
  }
  return true;
}

PackageId PackageId::Parse(std::string_view text) {
  auto at = text.find('@');
  if (at == std::string_view::npos) {
    throw Error(ErrorCode::kSyntaxError, "package id without version: " + std::string(text));
  }
  std::string_view name = text.substr(0, at);
  auto version = Version::Parse(text.substr(at + 1));
  if (!IsValidName(name) || !version) {
    throw Error(ErrorCode::kSyntaxError, "malformed package id: " + std::string(text));
  }
  return PackageId{std::string(name), *version};
}

std::string FqName::ToString() const { return package.ToString() + "::" + name; }

FqName FqName::Parse(std::string_view text) {
  auto sep = text.find("::");
  if (sep == std::string_view::npos || sep + 2 >= text.size()) {
    throw Error(ErrorCode::kSyntaxError, "malformed qualified name: " + std::string(text));
  }
  return FqName{PackageId::Parse(text.substr(0, sep)), std::string(text.substr(sep + 2))};
}

std::string_view ScalarTypeName(ScalarType type) {
  switch (type) {
    case ScalarType::kInt32: return "int32_t";
    case ScalarType::kInt64: return "int64_t";
    case ScalarType::kUint32: return "uint32_t";
    case ScalarType::kUint64: return "uint64_t";
    case ScalarType::kBool: return "bool";
    case ScalarType::kFloat: return "float";
    case ScalarType::kDouble: return "double";
  }
  return "?";
}

std::optional<ScalarType> ParseScalarType(std::string_view name) {
  static constexpr ScalarType kAll[] = {ScalarType::kInt32,  ScalarType::kInt64, ScalarType::kUint32,
                                        ScalarType::kUint64, ScalarType::kBool,  ScalarType::kFloat,
                                        ScalarType::kDouble};
  for (ScalarType type : kAll) {
    if (ScalarTypeName(type) == name) {
      return type;
    }
  }
  return std::nullopt;
}

TypeRef TypeRef::Scalar(ScalarType type) {
  TypeRef ref;
  ref.kind = Kind::kScalar;
  ref.scalar = type;
  return ref;
}

TypeRef TypeRef::String() {
  TypeRef ref;
  ref.kind = Kind::kString;
  return ref;
}

TypeRef TypeRef::Vec(TypeRef element) {
  TypeRef ref;
  ref.kind = Kind::kVec;
  ref.element = Box<TypeRef>(std::move(element));
  return ref;
}

TypeRef TypeRef::Named(std::string name) {
  TypeRef ref;
  ref.kind = Kind::kNamed;
  ref.name = std::move(name);
  return ref;
}

const std::string& TypeDeclName(const TypeDecl& decl) {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, decl);
}

const TypeDecl* PackageAST::FindType(std::string_view name) const {
  for (const TypeDecl& decl : types) {
    if (TypeDeclName(decl) == name) {
      return &decl;
    }
  }
  return nullptr;
}

const InterfaceDecl* PackageAST::FindInterface(std::string_view name) const {
  for (const InterfaceDecl& decl : interfaces) {
    if (decl.name == name) {
      return &decl;
    }
  }
  return nullptr;
}

}  // namespace treble::idl
