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

#include "treble/ir/interface_spec.h"

#include <filesystem>

#include "treble/base/error.h"
#include "treble/base/strings.h"
#include "treble/ir/block_text.h"

namespace treble::ir {
namespace {

constexpr TypeTag kAllTags[] = {TypeTag::kScalar, TypeTag::kString, TypeTag::kVector,
                                TypeTag::kStruct, TypeTag::kEnum,   TypeTag::kInterface};

VarSpec ConvertType(std::string name, const idl::TypeRef& type,
                    const std::map<std::string, idl::TypeDecl>& types) {
  using Kind = idl::TypeRef::Kind;
  VarSpec var;
  var.name = std::move(name);
  switch (type.kind) {
    case Kind::kScalar:
      var.type = TypeTag::kScalar;
      var.scalar_type = type.scalar;
      return var;
    case Kind::kString:
      var.type = TypeTag::kString;
      return var;
    case Kind::kVec:
      var.type = TypeTag::kVector;
      var.element = ConvertType("", *type.element, types);
      return var;
    case Kind::kInterface:
      var.type = TypeTag::kInterface;
      var.type_name = type.name;
      return var;
    case Kind::kStruct:
    case Kind::kEnum:
      break;
    case Kind::kNamed:
      throw Error(ErrorCode::kUnresolvedName, "unresolved type '" + type.name + "'");
  }
  auto it = types.find(type.name);
  if (it == types.end()) {
    throw Error(ErrorCode::kUnresolvedName, "no definition for " + type.name);
  }
  var.type_name = type.name;
  if (const auto* s = std::get_if<idl::StructDecl>(&it->second)) {
    var.type = TypeTag::kStruct;
    for (const idl::StructField& field : s->fields) {
      var.fields.push_back(ConvertType(field.name, field.type, types));
    }
  } else {
    const auto& e = std::get<idl::EnumDecl>(it->second);
    var.type = TypeTag::kEnum;
    var.scalar_type = e.underlying;
    var.enumerators = e.enumerators;
  }
  return var;
}

BlockNode VarToBlock(const VarSpec& var) {
  BlockNode node;
  if (!var.name.empty()) {
    node.Quoted("name", var.name);
  }
  node.Bare("type", std::string(TypeTagName(var.type)));
  switch (var.type) {
    case TypeTag::kScalar:
      node.Quoted("scalar_type", std::string(idl::ScalarTypeName(var.scalar_type)));
      break;
    case TypeTag::kString:
      break;
    case TypeTag::kVector:
      node.Block("vector_value", VarToBlock(*var.element));
      break;
    case TypeTag::kStruct: {
      BlockNode body;
      body.Quoted("name", var.type_name);
      for (const VarSpec& field : var.fields) {
        body.Block("field", VarToBlock(field));
      }
      node.Block("struct_value", std::move(body));
      break;
    }
    case TypeTag::kEnum: {
      BlockNode body;
      body.Quoted("name", var.type_name);
      body.Quoted("scalar_type", std::string(idl::ScalarTypeName(var.scalar_type)));
      for (const idl::Enumerator& enumerator : var.enumerators) {
        BlockNode item;
        item.Quoted("name", enumerator.name);
        item.Bare("value", std::to_string(enumerator.value));
        body.Block("enumerator", std::move(item));
      }
      node.Block("enum_value", std::move(body));
      break;
    }
    case TypeTag::kInterface:
      node.Quoted("predefined_type", var.type_name);
      break;
  }
  return node;
}

idl::ScalarType RequireScalar(const BlockNode& node) {
  const std::string& name = node.RequireQuoted("scalar_type");
  auto scalar = idl::ParseScalarType(name);
  if (!scalar) {
    throw Error(ErrorCode::kSpecSyntaxError, "unknown scalar_type \"" + name + "\"");
  }
  return *scalar;
}

VarSpec VarFromBlock(const BlockNode& node) {
  VarSpec var;
  if (node.Find("name")) {
    var.name = node.RequireQuoted("name");
  }
  const std::string& tag = node.RequireBare("type");
  bool known = false;
  for (TypeTag candidate : kAllTags) {
    if (TypeTagName(candidate) == tag) {
      var.type = candidate;
      known = true;
    }
  }
  if (!known) {
    throw Error(ErrorCode::kUnknownTypeTag, "type: " + tag);
  }
  switch (var.type) {
    case TypeTag::kScalar:
      node.CheckKeys({"name", "type", "scalar_type"});
      var.scalar_type = RequireScalar(node);
      break;
    case TypeTag::kString:
      node.CheckKeys({"name", "type"});
      break;
    case TypeTag::kVector:
      node.CheckKeys({"name", "type", "vector_value"});
      var.element = VarFromBlock(node.RequireBlock("vector_value"));
      break;
    case TypeTag::kStruct: {
      node.CheckKeys({"name", "type", "struct_value"});
      BlockNode body = node.RequireBlock("struct_value");
      body.CheckKeys({"name", "field"});
      var.type_name = body.RequireQuoted("name");
      for (const BlockField* field : body.FindAll("field")) {
        var.fields.push_back(VarFromBlock(BlockNode::Of(*field)));
      }
      break;
    }
    case TypeTag::kEnum: {
      node.CheckKeys({"name", "type", "enum_value"});
      BlockNode body = node.RequireBlock("enum_value");
      body.CheckKeys({"name", "scalar_type", "enumerator"});
      var.type_name = body.RequireQuoted("name");
      var.scalar_type = RequireScalar(body);
      for (const BlockField* field : body.FindAll("enumerator")) {
        BlockNode item = BlockNode::Of(*field);
        item.CheckKeys({"name", "value"});
        auto value = ParseInt(item.RequireBare("value"));
        if (!value) {
          throw Error(ErrorCode::kSpecSyntaxError,
                      "line " + std::to_string(field->line) + ": bad enumerator value");
        }
        var.enumerators.push_back(idl::Enumerator{item.RequireQuoted("name"), *value});
      }
      break;
    }
    case TypeTag::kInterface:
      node.CheckKeys({"name", "type", "predefined_type"});
      var.type_name = node.RequireQuoted("predefined_type");
      break;
  }
  return var;
}

}  // namespace

std::string_view TypeTagName(TypeTag tag) {
  switch (tag) {
    case TypeTag::kScalar: return "TYPE_SCALAR";
    case TypeTag::kString: return "TYPE_STRING";
    case TypeTag::kVector: return "TYPE_VECTOR";
    case TypeTag::kStruct: return "TYPE_STRUCT";
    case TypeTag::kEnum: return "TYPE_ENUM";
    case TypeTag::kInterface: return "TYPE_HIDL_INTERFACE";
  }
  return "?";
}

VarSpec VarSpec::Scalar(std::string name, idl::ScalarType type) {
  VarSpec var;
  var.name = std::move(name);
  var.type = TypeTag::kScalar;
  var.scalar_type = type;
  return var;
}

VarSpec VarSpec::String(std::string name) {
  VarSpec var;
  var.name = std::move(name);
  var.type = TypeTag::kString;
  return var;
}

VarSpec VarSpec::Vector(std::string name, VarSpec element) {
  VarSpec var;
  var.name = std::move(name);
  var.type = TypeTag::kVector;
  element.name.clear();
  var.element = std::move(element);
  return var;
}

idl::FqName InterfaceSpec::fqname() const {
  return idl::FqName{idl::PackageId{package, version}, component_name};
}

const ApiSpec* InterfaceSpec::FindApi(std::string_view name) const {
  for (const ApiSpec& api : apis) {
    if (api.name == name) {
      return &api;
    }
  }
  return nullptr;
}

VarSpec ToVarSpec(std::string name, const idl::TypeRef& type,
                  const std::map<std::string, idl::TypeDecl>& types) {
  return ConvertType(std::move(name), type, types);
}

std::vector<InterfaceSpec> Compile(const idl::ResolvedPackage& package) {
  std::vector<InterfaceSpec> specs;
  for (const idl::InterfaceDecl& iface : package.ast.interfaces) {
    InterfaceSpec spec;
    spec.component_name = iface.name;
    spec.package = package.ast.id.name;
    spec.version = package.ast.id.version;
    for (const idl::MethodDecl& method : iface.methods) {
      ApiSpec api;
      api.name = method.name;
      api.is_inherited = method.is_inherited;
      api.oneway = method.oneway;
      for (const idl::Param& arg : method.args) {
        api.args.push_back(ConvertType(arg.name, arg.type, package.types));
      }
      for (const idl::Param& ret : method.returns) {
        api.returns.push_back(ConvertType(ret.name, ret.type, package.types));
      }
      spec.apis.push_back(std::move(api));
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::string EmitSpecText(const InterfaceSpec& spec) {
  BlockNode root;
  root.Quoted("component_name", spec.component_name);
  root.Quoted("package", spec.package);
  root.Quoted("version", spec.version.ToString());
  BlockNode iface;
  for (const ApiSpec& api : spec.apis) {
    BlockNode node;
    node.Quoted("name", api.name);
    node.Bare("is_inherited", api.is_inherited ? "true" : "false");
    node.Bare("oneway", api.oneway ? "true" : "false");
    for (const VarSpec& arg : api.args) {
      node.Block("arg", VarToBlock(arg));
    }
    for (const VarSpec& ret : api.returns) {
      node.Block("return_type_hidl", VarToBlock(ret));
    }
    iface.Block("api", std::move(node));
  }
  root.Block("interface", std::move(iface));
  return EmitBlockText(root);
}

InterfaceSpec ParseSpecText(std::string_view text) {
  BlockNode root = ParseBlockText(text);
  root.CheckKeys({"component_name", "package", "version", "interface"});
  InterfaceSpec spec;
  spec.component_name = root.RequireQuoted("component_name");
  spec.package = root.RequireQuoted("package");
  auto version = Version::Parse(root.RequireQuoted("version"));
  if (!version) {
    throw Error(ErrorCode::kSpecSyntaxError, "malformed version");
  }
  spec.version = *version;
  BlockNode iface = root.RequireBlock("interface");
  iface.CheckKeys({"api"});
  for (const BlockField* field : iface.FindAll("api")) {
    BlockNode node = BlockNode::Of(*field);
    node.CheckKeys({"name", "is_inherited", "oneway", "arg", "return_type_hidl"});
    ApiSpec api;
    api.name = node.RequireQuoted("name");
    api.is_inherited = node.RequireBool("is_inherited");
    api.oneway = node.Find("oneway") ? node.RequireBool("oneway") : false;
    for (const BlockField* arg : node.FindAll("arg")) {
      api.args.push_back(VarFromBlock(BlockNode::Of(*arg)));
    }
    for (const BlockField* ret : node.FindAll("return_type_hidl")) {
      api.returns.push_back(VarFromBlock(BlockNode::Of(*ret)));
    }
    if (api.oneway && !api.returns.empty()) {
      throw Error(ErrorCode::kSpecSyntaxError,
                  "line " + std::to_string(field->line) + ": oneway api with return values");
    }
    spec.apis.push_back(std::move(api));
  }
  return spec;
}

void SpecLibrary::Add(InterfaceSpec spec) {
  std::string key = spec.fqname().ToString();
  specs_.insert_or_assign(std::move(key), std::move(spec));
}

void SpecLibrary::LoadDirectory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + dir);
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".spec") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  for (const fs::path& path : paths) {
    Add(ParseSpecText(ReadFile(path.string())));
  }
}

const InterfaceSpec* SpecLibrary::Find(std::string_view fqname) const {
  auto it = specs_.find(fqname);
  return it == specs_.end() ? nullptr : &it->second;
}

const InterfaceSpec& SpecLibrary::Get(std::string_view fqname) const {
  const InterfaceSpec* spec = Find(fqname);
  if (!spec) {
    throw Error(ErrorCode::kNotFound, "no spec for " + std::string(fqname));
  }
  return *spec;
}

std::vector<std::string> SpecLibrary::Names() const {
  std::vector<std::string> names;
  for (const auto& [name, spec] : specs_) {
    names.push_back(name);
  }
  return names;
}

std::vector<InterfaceSpec> CompilePackage(idl::PackageLoader& loader, const idl::PackageId& id) {
  const idl::PackageAST& ast = loader.Load(id);
  idl::PackageSet deps = loader.LoadClosure(ast);
  return Compile(idl::Resolve(ast, deps));
}

InterfaceSpec CompileInterface(idl::PackageLoader& loader, std::string_view fqname) {
  idl::FqName fq = idl::FqName::Parse(fqname);
  for (InterfaceSpec& spec : CompilePackage(loader, fq.package)) {
    if (spec.component_name == fq.name) {
      return std::move(spec);
    }
  }
  throw Error(ErrorCode::kNotFound, "no interface " + std::string(fqname));
}

}  // namespace treble::ir
