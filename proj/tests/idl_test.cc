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

#include <set>

#include "generators.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "treble/base/strings.h"
#include "treble/idl/parser.h"
#include "treble/idl/resolver.h"

namespace treble::idl {
namespace {

using ::treble::testing::HalDir;

PackageId Id(const std::string& text) { return PackageId::Parse(text); }

PackageAST ParseOne(const std::string& text, const std::string& id = "demo.test@1.0") {
  return ParsePackage({SourceFile{"test.hal", text}}, Id(id));
}

std::vector<std::string> MethodNames(const InterfaceDecl& iface) {
  std::vector<std::string> names;
  for (const MethodDecl& m : iface.methods) {
    names.push_back(m.name);
  }
  return names;
}

TEST(PackageIdTest, RendersNameAtVersion) {
  PackageId id = Id("hardware.automotive.vehicle@2.0");
  EXPECT_EQ(id.name, "hardware.automotive.vehicle");
  EXPECT_EQ(id.version, (Version{2, 0}));
  EXPECT_EQ(id.ToString(), "hardware.automotive.vehicle@2.0");
}

TEST(PackageIdTest, RejectsBadSegments) {
  EXPECT_TREBLE_ERROR(Id("Hardware.light@1.0"), ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(Id("hardware..light@1.0"), ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(Id("hardware.1light@1.0"), ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(Id("hardware.light@1"), ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(Id("hardware.light@1.0-rc1"), ErrorCode::kSyntaxError);
}

TEST(ParserTest, VehiclePackage) {
  PackageLoader loader({HalDir()});
  const PackageAST& ast = loader.Load(Id("hardware.automotive.vehicle@2.0"));
  ASSERT_EQ(ast.interfaces.size(), 2u);
  // Documents are read in name order: IVehicle.hal, IVehicleCallback.hal.
  EXPECT_EQ(ast.interfaces[0].name, "IVehicle");
  std::vector<std::string> names = MethodNames(ast.interfaces[0]);
  ASSERT_GE(names.size(), 3u);
  EXPECT_EQ(names[0], "getAllPropConfigs");
  EXPECT_EQ(names[1], "getPropConfigs");
  EXPECT_EQ(names[2], "subscribe");

  const InterfaceDecl& callback = ast.interfaces[1];
  EXPECT_EQ(callback.name, "IVehicleCallback");
  EXPECT_EQ(callback.methods[0].name, "onPropertyEvent");
  EXPECT_TRUE(callback.methods[0].oneway);
  EXPECT_TRUE(callback.methods[0].returns.empty());

  const MethodDecl& get_prop_configs = ast.interfaces[0].methods[1];
  ASSERT_EQ(get_prop_configs.args.size(), 1u);
  EXPECT_EQ(get_prop_configs.args[0].name, "props");
  EXPECT_EQ(get_prop_configs.args[0].type, TypeRef::Vec(TypeRef::Scalar(ScalarType::kInt32)));
  ASSERT_EQ(get_prop_configs.returns.size(), 2u);
  EXPECT_EQ(get_prop_configs.returns[0].type, TypeRef::Named("StatusCode"));
  EXPECT_EQ(get_prop_configs.returns[1].type, TypeRef::Vec(TypeRef::Named("VehiclePropConfig")));
}

TEST(ParserTest, EmptyInterface) {
  PackageAST ast = ParseOne("package demo.test@1.0;\ninterface IEmpty {};\n");
  ASSERT_EQ(ast.interfaces.size(), 1u);
  EXPECT_EQ(ast.interfaces[0].name, "IEmpty");
  EXPECT_TRUE(ast.interfaces[0].methods.empty());
}

TEST(ParserTest, OnewayWithResultsIsRejected) {
  try {
    ParseOne("package demo.test@1.0;\ninterface IPing {\n  oneway ping() generates (int32_t x);\n};\n");
    FAIL() << "expected SyntaxError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSyntaxError);
    // file:line:column of the offending 'generates'.
    EXPECT_NE(std::string(e.what()).find("test.hal:3:17"), std::string::npos) << e.what();
  }
}

TEST(ParserTest, TwoWayMethodNeedsResults) {
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\ninterface IA { f(int32_t a); };"),
                      ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\ninterface IA { f() generates (); };"),
                      ErrorCode::kSyntaxError);
}

TEST(ParserTest, SyntaxErrorsCarryLocation) {
  try {
    ParseOne("package demo.test@1.0;\n\ninterface IA {\n  f(int32_t a) generates (int32_t b)\n};\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSyntaxError);
    EXPECT_NE(std::string(e.what()).find("test.hal:5:1"), std::string::npos) << e.what();
  }
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\ninterface IA { $ };"), ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\ninterface A {};"), ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\nstruct vec { int32_t a; };"),
                      ErrorCode::kSyntaxError);
  EXPECT_TREBLE_ERROR(ParseOne("interface IA {};"), ErrorCode::kSyntaxError);
}

TEST(ParserTest, PackageLineMustMatch) {
  EXPECT_TREBLE_ERROR(ParseOne("package demo.other@1.0;\ninterface IA {};"), ErrorCode::kSyntaxError);
}

TEST(ParserTest, DuplicateDeclarations) {
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\nstruct S { int32_t a; };\nenum S : int32_t { A };"),
                      ErrorCode::kDuplicateDecl);
  EXPECT_TREBLE_ERROR(
      ParseOne("package demo.test@1.0;\ninterface IA { f() generates (int32_t a); f() generates (int32_t b); };"),
      ErrorCode::kDuplicateDecl);
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\nstruct S { int32_t a; bool a; };"),
                      ErrorCode::kDuplicateDecl);
  // Across documents of the same package.
  EXPECT_TREBLE_ERROR(ParsePackage({SourceFile{"a.hal", "package demo.test@1.0;\ninterface IA {};"},
                                    SourceFile{"b.hal", "package demo.test@1.0;\ninterface IA {};"}},
                                   Id("demo.test@1.0")),
                      ErrorCode::kDuplicateDecl);
}

TEST(ParserTest, EnumValuesAutoIncrementAndFit) {
  PackageAST ast =
      ParseOne("package demo.test@1.0;\nenum E : int32_t { A, B = 10, C, D = -3, F };");
  const auto& e = std::get<EnumDecl>(ast.types[0]);
  std::vector<int64_t> values;
  for (const Enumerator& x : e.enumerators) {
    values.push_back(x.value);
  }
  EXPECT_EQ(values, (std::vector<int64_t>{0, 10, 11, -3, -2}));
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\nenum E : uint32_t { A = -1 };"),
                      ErrorCode::kInvalidType);
  EXPECT_TREBLE_ERROR(ParseOne("package demo.test@1.0;\nenum E : int64_t { A };"),
                      ErrorCode::kInvalidType);
}

TEST(ParserTest, CommentsAndQualifiedRefs) {
  PackageAST ast = ParseOne(
      "// header\npackage demo.test@1.0; // trailing\nimport other.pkg@2.1;\n"
      "interface IA extends other.pkg@2.1::IBase {\n"
      "  f(vec<vec<other.pkg@2.1::Thing>> x) generates (bool ok); // note\n};\n");
  EXPECT_EQ(ast.imports, (std::vector<PackageId>{Id("other.pkg@2.1")}));
  EXPECT_EQ(ast.interfaces[0].extends, "other.pkg@2.1::IBase");
  EXPECT_EQ(ast.interfaces[0].methods[0].args[0].type,
            TypeRef::Vec(TypeRef::Vec(TypeRef::Named("other.pkg@2.1::Thing"))));
}

TEST(ParserTest, DeterministicAndRoundTripsOnRandomPackages) {
  testing::Rng rng(20260601);
  for (int i = 0; i < 600; ++i) {
    PackageAST ast = testing::RandomPackage(rng);
    std::string text = RenderPackage(ast);
    PackageAST parsed = ParsePackage({SourceFile{"gen.hal", text}}, ast.id);
    ASSERT_EQ(parsed, ast) << text;
    EXPECT_EQ(ParsePackage({SourceFile{"gen.hal", text}}, ast.id), parsed);
  }
}

TEST(ResolverTest, CrossPackageInheritance) {
  PackageLoader loader({HalDir()});
  const PackageAST& vendor = loader.Load(Id("vendor.bestmfr.light@1.0"));
  PackageSet deps = loader.LoadClosure(vendor);
  ASSERT_TRUE(deps.contains(Id("android.hardware.light@1.0")));
  ResolvedPackage resolved = Resolve(vendor, deps);

  const InterfaceDecl& iface = resolved.ast.interfaces[0];
  EXPECT_EQ(iface.extends, "android.hardware.light@1.0::ILight");
  ASSERT_EQ(iface.methods.size(), 4u);
  EXPECT_EQ(MethodNames(iface), (std::vector<std::string>{"setLight", "getSupportedTypes",
                                                          "setRainbowMode", "getRainbowMode"}));
  EXPECT_TRUE(iface.methods[0].is_inherited);
  EXPECT_TRUE(iface.methods[1].is_inherited);
  EXPECT_FALSE(iface.methods[2].is_inherited);
  EXPECT_FALSE(iface.methods[3].is_inherited);
  EXPECT_EQ(iface.methods[0].declared_in, "android.hardware.light@1.0::ILight");
  EXPECT_EQ(iface.methods[2].declared_in, "vendor.bestmfr.light@1.0::ILight");
  // `Status` in the vendor file resolves through the import.
  EXPECT_EQ(iface.methods[2].returns[0].type.kind, TypeRef::Kind::kEnum);
  EXPECT_EQ(iface.methods[2].returns[0].type.name, "android.hardware.light@1.0::Status");
  EXPECT_TRUE(resolved.types.contains("android.hardware.light@1.0::LightState"));
}

TEST(ResolverTest, NoDependenciesIsIdentityPlusFlags) {
  PackageAST ast = ParseOne(
      "package demo.test@1.0;\nenum E : int32_t { A };\nstruct S { E e; };\n"
      "interface IA { f(S s) generates (E e); };");
  ResolvedPackage resolved = Resolve(ast, {});
  EXPECT_EQ(resolved.ast.id, ast.id);
  ASSERT_EQ(resolved.ast.interfaces.size(), 1u);
  const MethodDecl& f = resolved.ast.interfaces[0].methods[0];
  EXPECT_FALSE(f.is_inherited);
  EXPECT_EQ(f.declared_in, "demo.test@1.0::IA");
  EXPECT_EQ(f.args[0].type.kind, TypeRef::Kind::kStruct);
  EXPECT_EQ(f.args[0].type.name, "demo.test@1.0::S");
  EXPECT_EQ(resolved.types.size(), 2u);
}

TEST(ResolverTest, MissingExtendsTargetIsImportMissing) {
  PackageAST ast = ParseOne(
      "package vendor.x.light@1.0;\nimport android.hardware.light@1.0;\n"
      "interface ILight extends android.hardware.light@1.0::ILight {};",
      "vendor.x.light@1.0");
  EXPECT_TREBLE_ERROR(Resolve(ast, {}), ErrorCode::kImportMissing);
  // Without the import line the qualified reference still needs the package.
  PackageAST bare = ParseOne(
      "package vendor.x.light@1.0;\ninterface ILight extends android.hardware.light@1.0::ILight {};",
      "vendor.x.light@1.0");
  EXPECT_TREBLE_ERROR(Resolve(bare, {}), ErrorCode::kImportMissing);
}

TEST(ResolverTest, ErrorCases) {
  EXPECT_TREBLE_ERROR(
      Resolve(ParseOne("package demo.test@1.0;\ninterface IA extends IB {};\ninterface IB extends IA {};"), {}),
      ErrorCode::kCyclicInheritance);
  EXPECT_TREBLE_ERROR(
      Resolve(ParseOne("package demo.test@1.0;\ninterface IA extends IA {};"), {}),
      ErrorCode::kCyclicInheritance);
  EXPECT_TREBLE_ERROR(
      Resolve(ParseOne("package demo.test@1.0;\ninterface IA { f(Nope n) generates (bool b); };"), {}),
      ErrorCode::kUnresolvedName);
  EXPECT_TREBLE_ERROR(
      Resolve(ParseOne("package demo.test@1.0;\nstruct S { int32_t a; };\ninterface IA extends S {};"), {}),
      ErrorCode::kUnresolvedName);
  EXPECT_TREBLE_ERROR(
      Resolve(ParseOne("package demo.test@1.0;\ninterface IA { f(vec<IA> cbs) generates (bool b); };"), {}),
      ErrorCode::kInvalidType);
  EXPECT_TREBLE_ERROR(
      Resolve(ParseOne("package demo.test@1.0;\nstruct A { B b; };\nstruct B { vec<A> a; };"), {}),
      ErrorCode::kInvalidType);
  // A child may not redeclare an inherited method.
  EXPECT_TREBLE_ERROR(
      Resolve(ParseOne("package demo.test@1.0;\ninterface IA { f() generates (bool b); };\n"
                       "interface IB extends IA { f() generates (bool b); };"),
              {}),
      ErrorCode::kDuplicateDecl);
}

TEST(ResolverTest, AmbiguousImportIsUnresolved) {
  PackageSet deps;
  deps.emplace(Id("a.one@1.0"), ParseOne("package a.one@1.0;\nstruct T { bool x; };", "a.one@1.0"));
  deps.emplace(Id("a.two@1.0"), ParseOne("package a.two@1.0;\nstruct T { bool y; };", "a.two@1.0"));
  PackageAST ast = ParseOne(
      "package demo.test@1.0;\nimport a.one@1.0;\nimport a.two@1.0;\n"
      "interface IA { f(T t) generates (bool b); };");
  EXPECT_TREBLE_ERROR(Resolve(ast, deps), ErrorCode::kUnresolvedName);
}

// Walks the `extends` chain of `fq` and returns every interface on it,
// nearest first.
std::vector<std::string> Ancestors(const std::string& fq, const ResolvedPackage& resolved) {
  std::vector<std::string> chain;
  std::string current = fq;
  while (true) {
    const InterfaceDecl* decl = resolved.ast.FindInterface(FqName::Parse(current).name);
    if (!decl || !decl->extends) {
      return chain;
    }
    current = *decl->extends;
    chain.push_back(current);
  }
}

TEST(ResolverTest, RandomPackagesIdempotentAndTraceable) {
  testing::Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    PackageAST ast = testing::RandomPackage(rng);
    ResolvedPackage once = Resolve(ast, {});
    ResolvedPackage twice = Resolve(once.ast, {});
    ASSERT_EQ(once, twice) << RenderPackage(ast);

    for (const InterfaceDecl& iface : once.ast.interfaces) {
      std::string fq = FqName{ast.id, iface.name}.ToString();
      std::vector<std::string> ancestors = Ancestors(fq, once);
      std::set<std::string> names;
      for (const MethodDecl& method : iface.methods) {
        EXPECT_TRUE(names.insert(method.name).second);
        if (!method.is_inherited) {
          EXPECT_EQ(method.declared_in, fq);
          continue;
        }
        // Exactly one ancestor declares the method locally.
        int owners = 0;
        for (const std::string& ancestor : ancestors) {
          const InterfaceDecl* decl = ast.FindInterface(FqName::Parse(ancestor).name);
          for (const MethodDecl& local : decl->methods) {
            owners += local.name == method.name ? 1 : 0;
          }
        }
        EXPECT_EQ(owners, 1) << method.name;
        EXPECT_NE(std::find(ancestors.begin(), ancestors.end(), method.declared_in), ancestors.end());
      }
    }
  }
}

}  // namespace
}  // namespace treble::idl
