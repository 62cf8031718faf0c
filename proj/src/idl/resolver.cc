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

#include "treble/idl/resolver.h"

#include <algorithm>
#include <filesystem>
#include <set>

#include "treble/base/error.h"
#include "treble/base/strings.h"

namespace treble::idl {
namespace {

bool IsQualified(const std::string& name) { return name.find("::") != std::string::npos; }

class Resolver {
 public:
  Resolver(const PackageAST& root, const PackageSet& deps) : root_(root), deps_(deps) {}

  ResolvedPackage Run() {
    for (const PackageId& import : root_.imports) {
      if (import != root_.id && !deps_.contains(import)) {
        throw Error(ErrorCode::kImportMissing,
                    root_.id.ToString() + " imports " + import.ToString() + ", which was not supplied");
      }
    }
    ResolvedPackage out;
    out.ast.id = root_.id;
    out.ast.imports = root_.imports;
    for (const TypeDecl& decl : root_.types) {
      std::string fq = FqName{root_.id, TypeDeclName(decl)}.ToString();
      ResolveTypeDecl(root_, decl);
      out.ast.types.push_back(types_.at(fq));
    }
    for (const InterfaceDecl& iface : root_.interfaces) {
      InterfaceDecl resolved;
      resolved.name = iface.name;
      if (iface.extends) {
        resolved.extends = ResolveParentName(root_, iface);
      }
      resolved.methods = ResolveMethods(root_, iface);
      out.ast.interfaces.push_back(std::move(resolved));
    }
    out.types = std::move(types_);
    return out;
  }

 private:
  const PackageAST& PackageFor(const PackageId& id, const PackageAST& from) const {
    if (id == root_.id) {
      return root_;
    }
    auto it = deps_.find(id);
    if (it == deps_.end()) {
      throw Error(ErrorCode::kImportMissing,
                  from.id.ToString() + " references " + id.ToString() + ", which was not supplied");
    }
    return it->second;
  }

  struct Target {
    const PackageAST* package = nullptr;
    const TypeDecl* type = nullptr;
    const InterfaceDecl* iface = nullptr;

    std::string FqName() const {
      return idl::FqName{package->id, type ? TypeDeclName(*type) : iface->name}.ToString();
    }
  };

  Target Lookup(const std::string& name, const PackageAST& ctx) const {
    auto find_in = [](const PackageAST& package, const std::string& simple) -> Target {
      Target target;
      target.package = &package;
      target.type = package.FindType(simple);
      target.iface = package.FindInterface(simple);
      if (!target.type && !target.iface) {
        target.package = nullptr;
      }
      return target;
    };
    if (IsQualified(name)) {
      FqName fq = FqName::Parse(name);
      Target target = find_in(PackageFor(fq.package, ctx), fq.name);
      if (!target.package) {
        throw Error(ErrorCode::kUnresolvedName, "no declaration '" + name + "'");
      }
      return target;
    }
    if (Target local = find_in(ctx, name); local.package) {
      return local;
    }
    std::vector<Target> matches;
    for (const PackageId& import : ctx.imports) {
      if (Target t = find_in(PackageFor(import, ctx), name); t.package) {
        matches.push_back(t);
      }
    }
    if (matches.empty()) {
      throw Error(ErrorCode::kUnresolvedName,
                  "'" + name + "' is not declared in " + ctx.id.ToString() + " or its imports");
    }
    if (matches.size() > 1) {
      throw Error(ErrorCode::kUnresolvedName, "'" + name + "' is ambiguous in " + ctx.id.ToString());
    }
    return matches.front();
  }

  TypeRef ResolveType(const TypeRef& ref, const PackageAST& ctx) {
    switch (ref.kind) {
      case TypeRef::Kind::kScalar:
      case TypeRef::Kind::kString:
        return ref;
      case TypeRef::Kind::kVec: {
        TypeRef element = ResolveType(*ref.element, ctx);
        if (element.kind == TypeRef::Kind::kInterface) {
          throw Error(ErrorCode::kInvalidType,
                      "vec element cannot be an interface (" + element.name + ")");
        }
        return TypeRef::Vec(std::move(element));
      }
      case TypeRef::Kind::kNamed:
      case TypeRef::Kind::kStruct:
      case TypeRef::Kind::kEnum:
      case TypeRef::Kind::kInterface:
        break;
    }
    Target target = Lookup(ref.name, ctx);
    TypeRef out;
    out.name = target.FqName();
    if (target.iface) {
      out.kind = TypeRef::Kind::kInterface;
      return out;
    }
    ResolveTypeDecl(*target.package, *target.type);
    out.kind = std::holds_alternative<StructDecl>(*target.type) ? TypeRef::Kind::kStruct
                                                                : TypeRef::Kind::kEnum;
    return out;
  }

  void ResolveTypeDecl(const PackageAST& package, const TypeDecl& decl) {
    std::string fq = FqName{package.id, TypeDeclName(decl)}.ToString();
    if (types_.contains(fq)) {
      return;
    }
    if (const auto* e = std::get_if<EnumDecl>(&decl)) {
      types_.emplace(fq, *e);
      return;
    }
    if (!struct_stack_.insert(fq).second) {
      throw Error(ErrorCode::kInvalidType, "struct " + fq + " contains itself");
    }
    StructDecl resolved = std::get<StructDecl>(decl);
    for (StructField& field : resolved.fields) {
      field.type = ResolveType(field.type, package);
    }
    struct_stack_.erase(fq);
    types_.emplace(fq, std::move(resolved));
  }

  std::string ResolveParentName(const PackageAST& package, const InterfaceDecl& iface) {
    Target parent = Lookup(*iface.extends, package);
    if (!parent.iface) {
      throw Error(ErrorCode::kUnresolvedName,
                  iface.name + " extends '" + *iface.extends + "', which is not an interface");
    }
    return parent.FqName();
  }

  std::vector<MethodDecl> ResolveMethods(const PackageAST& package, const InterfaceDecl& iface) {
    std::string fq = FqName{package.id, iface.name}.ToString();
    if (auto it = methods_.find(fq); it != methods_.end()) {
      return it->second;
    }
    if (!iface_stack_.insert(fq).second) {
      throw Error(ErrorCode::kCyclicInheritance, "inheritance cycle through " + fq);
    }
    std::vector<MethodDecl> methods;
    if (iface.extends) {
      Target parent = Lookup(*iface.extends, package);
      if (!parent.iface) {
        throw Error(ErrorCode::kUnresolvedName,
                    iface.name + " extends '" + *iface.extends + "', which is not an interface");
      }
      for (MethodDecl method : ResolveMethods(*parent.package, *parent.iface)) {
        method.is_inherited = true;
        methods.push_back(std::move(method));
      }
    }
    for (const MethodDecl& decl : iface.methods) {
      if (decl.is_inherited) {
        continue;
      }
      auto clash = std::find_if(methods.begin(), methods.end(),
                                [&](const MethodDecl& m) { return m.name == decl.name; });
      if (clash != methods.end()) {
        throw Error(ErrorCode::kDuplicateDecl, fq + "::" + decl.name + " redeclares a method of " +
                                                   clash->declared_in);
      }
      MethodDecl method = decl;
      method.is_inherited = false;
      method.declared_in = fq;
      for (Param& arg : method.args) {
        arg.type = ResolveType(arg.type, package);
      }
      for (Param& ret : method.returns) {
        ret.type = ResolveType(ret.type, package);
      }
      methods.push_back(std::move(method));
    }
    iface_stack_.erase(fq);
    methods_.emplace(fq, methods);
    return methods;
  }

  const PackageAST& root_;
  const PackageSet& deps_;
  std::map<std::string, TypeDecl> types_;
  std::map<std::string, std::vector<MethodDecl>> methods_;
  std::set<std::string> struct_stack_;
  std::set<std::string> iface_stack_;
};

void CollectRef(const TypeRef& ref, std::set<PackageId>& out) {
  if (ref.kind == TypeRef::Kind::kVec) {
    CollectRef(*ref.element, out);
  } else if (!ref.name.empty() && IsQualified(ref.name)) {
    out.insert(FqName::Parse(ref.name).package);
  }
}

}  // namespace

ResolvedPackage Resolve(const PackageAST& ast, const PackageSet& deps) {
  return Resolver(ast, deps).Run();
}

std::vector<PackageId> ReferencedPackages(const PackageAST& ast) {
  std::set<PackageId> ids(ast.imports.begin(), ast.imports.end());
  for (const TypeDecl& decl : ast.types) {
    if (const auto* s = std::get_if<StructDecl>(&decl)) {
      for (const StructField& field : s->fields) {
        CollectRef(field.type, ids);
      }
    }
  }
  for (const InterfaceDecl& iface : ast.interfaces) {
    if (iface.extends && IsQualified(*iface.extends)) {
      ids.insert(FqName::Parse(*iface.extends).package);
    }
    for (const MethodDecl& method : iface.methods) {
      for (const Param& p : method.args) {
        CollectRef(p.type, ids);
      }
      for (const Param& p : method.returns) {
        CollectRef(p.type, ids);
      }
    }
  }
  ids.erase(ast.id);
  return {ids.begin(), ids.end()};
}

void PackageLoader::Add(PackageAST ast) {
  PackageId id = ast.id;
  cache_.insert_or_assign(id, std::move(ast));
}

const PackageAST& PackageLoader::Load(const PackageId& id) {
  if (auto it = cache_.find(id); it != cache_.end()) {
    return it->second;
  }
  namespace fs = std::filesystem;
  std::string relative = id.name;
  std::replace(relative.begin(), relative.end(), '.', '/');
  relative += "/" + id.version.ToString();
  for (const std::string& root : roots_) {
    fs::path dir = fs::path(root) / relative;
    if (!fs::is_directory(dir)) {
      continue;
    }
    std::vector<SourceFile> sources;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".hal") {
        sources.push_back(SourceFile{entry.path().string(), ReadFile(entry.path().string())});
      }
    }
    if (sources.empty()) {
      continue;
    }
    return cache_.emplace(id, ParsePackage(std::move(sources), id)).first->second;
  }
  throw Error(ErrorCode::kImportMissing, "package " + id.ToString() + " not found on the search path");
}

PackageSet PackageLoader::LoadClosure(const PackageAST& ast) {
  PackageSet closure;
  std::vector<PackageId> pending = ReferencedPackages(ast);
  while (!pending.empty()) {
    PackageId id = pending.back();
    pending.pop_back();
    if (id == ast.id || closure.contains(id)) {
      continue;
    }
    const PackageAST& dep = Load(id);
    closure.emplace(id, dep);
    for (const PackageId& next : ReferencedPackages(dep)) {
      pending.push_back(next);
    }
  }
  return closure;
}

}  // namespace treble::idl
