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

#include "generators.h"

#include <bit>
#include <limits>

namespace treble::testing {
namespace {

int Uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool Coin(Rng& rng) { return Uniform(rng, 0, 1) == 1; }

idl::ScalarType RandomScalar(Rng& rng) {
  static constexpr idl::ScalarType kAll[] = {
      idl::ScalarType::kInt32,  idl::ScalarType::kInt64, idl::ScalarType::kUint32,
      idl::ScalarType::kUint64, idl::ScalarType::kBool,  idl::ScalarType::kFloat,
      idl::ScalarType::kDouble};
  return kAll[Uniform(rng, 0, 6)];
}

// Types usable in a field or parameter given the names declared so far.
idl::TypeRef RandomTypeRef(Rng& rng, const std::vector<std::string>& user_types,
                           const std::vector<std::string>& interfaces, int depth,
                           bool allow_interface) {
  int choice = Uniform(rng, 0, 5);
  if (choice == 0 || depth <= 0) {
    return idl::TypeRef::Scalar(RandomScalar(rng));
  }
  if (choice == 1) {
    return idl::TypeRef::String();
  }
  if (choice == 2) {
    return idl::TypeRef::Vec(RandomTypeRef(rng, user_types, {}, depth - 1, false));
  }
  if (choice == 3 && allow_interface && !interfaces.empty()) {
    return idl::TypeRef::Named(interfaces[Uniform(rng, 0, static_cast<int>(interfaces.size()) - 1)]);
  }
  if (!user_types.empty()) {
    return idl::TypeRef::Named(user_types[Uniform(rng, 0, static_cast<int>(user_types.size()) - 1)]);
  }
  return idl::TypeRef::Scalar(RandomScalar(rng));
}

}  // namespace

std::string RandomIdent(Rng& rng, std::string_view prefix) {
  static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string out(prefix);
  int length = Uniform(rng, 1, 6);
  for (int i = 0; i < length; ++i) {
    out += kChars[Uniform(rng, 0, 35)];
  }
  return out;
}

idl::PackageAST RandomPackage(Rng& rng) {
  idl::PackageAST ast;
  int segments = Uniform(rng, 1, 3);
  for (int i = 0; i < segments; ++i) {
    ast.id.name += (i > 0 ? "." : "") + RandomIdent(rng, "p");
  }
  ast.id.version = Version{static_cast<uint32_t>(Uniform(rng, 0, 20)),
                           static_cast<uint32_t>(Uniform(rng, 0, 20))};

  std::vector<std::string> user_types;
  int type_count = Uniform(rng, 0, 4);
  for (int t = 0; t < type_count; ++t) {
    std::string name = "T" + std::to_string(t) + RandomIdent(rng, "x");
    if (Coin(rng)) {
      idl::EnumDecl e;
      e.name = name;
      e.underlying = Coin(rng) ? idl::ScalarType::kInt32 : idl::ScalarType::kUint32;
      int64_t value = e.underlying == idl::ScalarType::kInt32 ? Uniform(rng, -100, 100) : 0;
      int count = Uniform(rng, 0, 5);
      for (int i = 0; i < count; ++i) {
        e.enumerators.push_back(idl::Enumerator{"E" + std::to_string(i) + RandomIdent(rng, "_"), value});
        value += Uniform(rng, 1, 3);
      }
      ast.types.emplace_back(std::move(e));
    } else {
      idl::StructDecl s;
      s.name = name;
      int count = Uniform(rng, 0, 4);
      for (int i = 0; i < count; ++i) {
        s.fields.push_back(
            idl::StructField{"f" + std::to_string(i) + RandomIdent(rng, "_"),
                             RandomTypeRef(rng, user_types, {}, 2, false)});
      }
      ast.types.emplace_back(std::move(s));
    }
    user_types.push_back(name);
  }

  std::vector<std::string> interfaces;
  int iface_count = Uniform(rng, 1, 3);
  for (int i = 0; i < iface_count; ++i) {
    idl::InterfaceDecl iface;
    iface.name = "I" + std::to_string(i) + RandomIdent(rng, "x");
    if (!interfaces.empty() && Coin(rng)) {
      iface.extends = interfaces[Uniform(rng, 0, static_cast<int>(interfaces.size()) - 1)];
    }
    int method_count = Uniform(rng, 0, 4);
    for (int m = 0; m < method_count; ++m) {
      idl::MethodDecl method;
      // The index keeps names unique along any inheritance chain.
      method.name = "m" + std::to_string(i) + "_" + std::to_string(m) + RandomIdent(rng, "x");
      method.oneway = Uniform(rng, 0, 3) == 0;
      int arg_count = Uniform(rng, 0, 3);
      for (int a = 0; a < arg_count; ++a) {
        method.args.push_back(idl::Param{"a" + std::to_string(a),
                                         RandomTypeRef(rng, user_types, interfaces, 2, true)});
      }
      if (!method.oneway) {
        int ret_count = Uniform(rng, 1, 3);
        for (int r = 0; r < ret_count; ++r) {
          method.returns.push_back(idl::Param{"r" + std::to_string(r),
                                              RandomTypeRef(rng, user_types, interfaces, 2, true)});
        }
      }
      iface.methods.push_back(std::move(method));
    }
    interfaces.push_back(iface.name);
    ast.interfaces.push_back(std::move(iface));
  }
  return ast;
}

ir::VarSpec RandomVarSpec(Rng& rng, int depth) {
  int choice = depth <= 0 ? Uniform(rng, 0, 1) : Uniform(rng, 0, 5);
  ir::VarSpec var;
  switch (choice) {
    case 0:
      return ir::VarSpec::Scalar("", RandomScalar(rng));
    case 1:
      return ir::VarSpec::String("");
    case 2:
      return ir::VarSpec::Vector("", RandomVarSpec(rng, depth - 1));
    case 3: {
      var.type = ir::TypeTag::kStruct;
      var.type_name = "gen.types@1.0::S" + RandomIdent(rng, "x");
      int count = Uniform(rng, 0, 4);
      for (int i = 0; i < count; ++i) {
        ir::VarSpec field = RandomVarSpec(rng, depth - 1);
        field.name = "f" + std::to_string(i);
        var.fields.push_back(std::move(field));
      }
      return var;
    }
    case 4: {
      var.type = ir::TypeTag::kEnum;
      var.type_name = "gen.types@1.0::E" + RandomIdent(rng, "x");
      var.scalar_type = Coin(rng) ? idl::ScalarType::kInt32 : idl::ScalarType::kUint32;
      int64_t value = var.scalar_type == idl::ScalarType::kInt32 ? Uniform(rng, -50, 50) : 0;
      int count = Uniform(rng, 1, 6);
      for (int i = 0; i < count; ++i) {
        var.enumerators.push_back(idl::Enumerator{"V" + std::to_string(i), value});
        value += Uniform(rng, 1, 4);
      }
      return var;
    }
    default:
      var.type = ir::TypeTag::kInterface;
      var.type_name = "gen.cb@1.0::ICallback" + RandomIdent(rng, "x");
      return var;
  }
}

ir::InterfaceSpec RandomInterfaceSpec(Rng& rng) {
  ir::InterfaceSpec spec;
  spec.component_name = "I" + RandomIdent(rng, "x");
  spec.package = RandomIdent(rng, "p") + "." + RandomIdent(rng, "q");
  spec.version = Version{static_cast<uint32_t>(Uniform(rng, 0, 9)),
                         static_cast<uint32_t>(Uniform(rng, 0, 9))};
  int api_count = Uniform(rng, 0, 6);
  for (int i = 0; i < api_count; ++i) {
    ir::ApiSpec api;
    api.name = "api" + std::to_string(i) + RandomIdent(rng, "_");
    api.is_inherited = Coin(rng);
    api.oneway = Uniform(rng, 0, 3) == 0;
    int arg_count = Uniform(rng, 0, 3);
    for (int a = 0; a < arg_count; ++a) {
      ir::VarSpec arg = RandomVarSpec(rng, 3);
      arg.name = "arg" + std::to_string(a);
      api.args.push_back(std::move(arg));
    }
    if (!api.oneway) {
      int ret_count = Uniform(rng, 0, 3);
      for (int r = 0; r < ret_count; ++r) {
        ir::VarSpec ret = RandomVarSpec(rng, 3);
        ret.name = "ret" + std::to_string(r);
        api.returns.push_back(std::move(ret));
      }
    }
    spec.apis.push_back(std::move(api));
  }
  return spec;
}

wire::TypedValue RandomValue(Rng& rng, const ir::VarSpec& spec) {
  using wire::TypedValue;
  switch (spec.type) {
    case ir::TypeTag::kScalar:
      switch (spec.scalar_type) {
        case idl::ScalarType::kBool: return TypedValue(Coin(rng));
        case idl::ScalarType::kInt32: return TypedValue(static_cast<int32_t>(rng()));
        case idl::ScalarType::kInt64: return TypedValue(static_cast<int64_t>(rng()));
        case idl::ScalarType::kUint32: return TypedValue(static_cast<uint32_t>(rng()));
        case idl::ScalarType::kUint64: return TypedValue(static_cast<uint64_t>(rng()));
        // Raw bit patterns cover NaN payloads and infinities.
        case idl::ScalarType::kFloat: return TypedValue(std::bit_cast<float>(static_cast<uint32_t>(rng())));
        case idl::ScalarType::kDouble: return TypedValue(std::bit_cast<double>(static_cast<uint64_t>(rng())));
      }
      break;
    case ir::TypeTag::kString: {
      std::string text;
      int length = Uniform(rng, 0, 24);
      for (int i = 0; i < length; ++i) {
        text += static_cast<char>(Uniform(rng, 0x20, 0x7e));
      }
      if (Coin(rng)) {
        text += "\xc3\xa9\xe2\x82\xac";  // "é€"
      }
      return TypedValue(std::move(text));
    }
    case ir::TypeTag::kVector: {
      wire::VecValue vec;
      vec.element_tag = wire::TagFor(*spec.element);
      int count = Uniform(rng, 0, 4);
      for (int i = 0; i < count; ++i) {
        vec.items.push_back(RandomValue(rng, *spec.element));
      }
      return TypedValue(std::move(vec));
    }
    case ir::TypeTag::kStruct: {
      wire::StructValue value;
      value.type_name = spec.type_name;
      for (const ir::VarSpec& field : spec.fields) {
        value.fields.push_back(wire::NamedValue{field.name, RandomValue(rng, field)});
      }
      return TypedValue(std::move(value));
    }
    case ir::TypeTag::kEnum: {
      const auto& pick = spec.enumerators[Uniform(rng, 0, static_cast<int>(spec.enumerators.size()) - 1)];
      return TypedValue(wire::EnumValue{spec.type_name, static_cast<int32_t>(pick.value)});
    }
    case ir::TypeTag::kInterface:
      return TypedValue(wire::Handle{rng()});
  }
  return TypedValue(false);
}

}  // namespace treble::testing
