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

#include "treble/idl/parser.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "treble/base/error.h"
#include "treble/base/strings.h"

namespace treble::idl {
namespace {

constexpr std::string_view kKeywords[] = {"package",   "import", "interface", "extends", "generates",
                                          "oneway",    "struct", "enum",      "vec"};

bool IsKeyword(std::string_view word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

bool IsReservedTypeName(std::string_view word) {
  return word == "string" || ParseScalarType(word).has_value();
}

struct Token {
  enum class Kind { kIdent, kInt, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  Lexer(const SourceFile& source) : source_(source) {}

  std::vector<Token> Tokenize() {
    std::vector<Token> tokens;
    while (true) {
      SkipSpaceAndComments();
      Token token;
      token.line = line_;
      token.column = column_;
      if (pos_ >= text().size()) {
        tokens.push_back(token);
        return tokens;
      }
      char c = text()[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        token.kind = Token::Kind::kIdent;
        while (pos_ < text().size() &&
               (std::isalnum(static_cast<unsigned char>(text()[pos_])) || text()[pos_] == '_')) {
          token.text += Advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        token.kind = Token::Kind::kInt;
        while (pos_ < text().size() && std::isdigit(static_cast<unsigned char>(text()[pos_]))) {
          token.text += Advance();
        }
      } else if (c == ':' && pos_ + 1 < text().size() && text()[pos_ + 1] == ':') {
        token.kind = Token::Kind::kPunct;
        token.text = "::";
        Advance();
        Advance();
      } else if (std::string_view(";,(){}<>@.:=-").find(c) != std::string_view::npos) {
        token.kind = Token::Kind::kPunct;
        token.text = std::string(1, Advance());
      } else {
        std::ostringstream msg;
        msg << source_.name << ":" << line_ << ":" << column_ << ": unexpected character '" << c
            << "'";
        throw Error(ErrorCode::kSyntaxError, msg.str());
      }
      tokens.push_back(std::move(token));
    }
  }

 private:
  const std::string& text() const { return source_.text; }

  char Advance() {
    char c = text()[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void SkipSpaceAndComments() {
    while (pos_ < text().size()) {
      char c = text()[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (c == '/' && pos_ + 1 < text().size() && text()[pos_ + 1] == '/') {
        while (pos_ < text().size() && text()[pos_] != '\n') {
          Advance();
        }
      } else {
        return;
      }
    }
  }

  const SourceFile& source_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct Location {
  std::string file;
  int line = 0;
  int column = 0;
};

// Accumulates declarations from the documents of one package and enforces
// package-wide name uniqueness.
class PackageBuilder {
 public:
  explicit PackageBuilder(std::optional<PackageId> expected) : expected_(std::move(expected)) {}

  PackageAST& ast() { return ast_; }
  const std::optional<PackageId>& expected() const { return expected_; }

  // Returns the location of a previous declaration with the same name.
  std::optional<Location> Claim(const std::string& name, Location where) {
    auto [it, inserted] = names_.emplace(name, std::move(where));
    if (inserted) {
      return std::nullopt;
    }
    return it->second;
  }

  void AddImport(const PackageId& id) {
    if (std::find(ast_.imports.begin(), ast_.imports.end(), id) == ast_.imports.end()) {
      ast_.imports.push_back(id);
    }
  }

 private:
  std::optional<PackageId> expected_;
  PackageAST ast_;
  std::map<std::string, Location> names_;
};

class Parser {
 public:
  Parser(const SourceFile& source, PackageBuilder& builder)
      : source_(source), tokens_(Lexer(source).Tokenize()), builder_(builder) {}

  void ParseFile() {
    const Token& start = Peek();
    ExpectKeyword("package");
    PackageId id = ParsePackageId();
    ExpectPunct(";");
    if (builder_.expected()) {
      if (id != *builder_.expected()) {
        Fail(start, "document declares package " + id.ToString() + ", expected " +
                        builder_.expected()->ToString());
      }
    }
    builder_.ast().id = id;
    while (AcceptKeyword("import")) {
      builder_.AddImport(ParsePackageId());
      ExpectPunct(";");
    }
    while (Peek().kind != Token::Kind::kEnd) {
      if (PeekKeyword("struct")) {
        ParseStruct();
      } else if (PeekKeyword("enum")) {
        ParseEnum();
      } else if (PeekKeyword("interface")) {
        ParseInterface();
      } else {
        Fail(Peek(), "expected 'struct', 'enum' or 'interface'");
      }
    }
  }

 private:
  [[noreturn]] void Fail(const Token& at, const std::string& message,
                         ErrorCode code = ErrorCode::kSyntaxError) const {
    std::ostringstream msg;
    msg << source_.name << ":" << at.line << ":" << at.column << ": " << message;
    throw Error(code, msg.str());
  }

  Location Here(const Token& at) const { return Location{source_.name, at.line, at.column}; }

  const Token& Peek(size_t ahead = 0) const {
    return tokens_[std::min(index_ + ahead, tokens_.size() - 1)];
  }

  const Token& Next() {
    const Token& token = Peek();
    if (index_ < tokens_.size() - 1) {
      ++index_;
    }
    return token;
  }

  bool PeekPunct(std::string_view punct, size_t ahead = 0) const {
    const Token& token = Peek(ahead);
    return token.kind == Token::Kind::kPunct && token.text == punct;
  }

  bool AcceptPunct(std::string_view punct) {
    if (PeekPunct(punct)) {
      Next();
      return true;
    }
    return false;
  }

  void ExpectPunct(std::string_view punct) {
    if (!AcceptPunct(punct)) {
      Fail(Peek(), "expected '" + std::string(punct) + "', found '" + Describe(Peek()) + "'");
    }
  }

  bool PeekKeyword(std::string_view keyword) const {
    return Peek().kind == Token::Kind::kIdent && Peek().text == keyword;
  }

  bool AcceptKeyword(std::string_view keyword) {
    if (PeekKeyword(keyword)) {
      Next();
      return true;
    }
    return false;
  }

  void ExpectKeyword(std::string_view keyword) {
    if (!AcceptKeyword(keyword)) {
      Fail(Peek(), "expected '" + std::string(keyword) + "'");
    }
  }

  static std::string Describe(const Token& token) {
    return token.kind == Token::Kind::kEnd ? "end of file" : token.text;
  }

  std::string ExpectIdent(std::string_view what) {
    const Token& token = Peek();
    if (token.kind != Token::Kind::kIdent) {
      Fail(token, "expected " + std::string(what) + ", found '" + Describe(token) + "'");
    }
    if (IsKeyword(token.text)) {
      Fail(token, "keyword '" + token.text + "' used as " + std::string(what));
    }
    return Next().text;
  }

  uint64_t ExpectInt() {
    const Token& token = Peek();
    if (token.kind != Token::Kind::kInt) {
      Fail(token, "expected integer, found '" + Describe(token) + "'");
    }
    auto value = ParseUint(token.text);
    if (!value) {
      Fail(token, "integer out of range: " + token.text);
    }
    Next();
    return *value;
  }

  // dotted-name '@' INT '.' INT
  PackageId ParsePackageId() {
    const Token& start = Peek();
    std::string name = ExpectIdent("package name");
    while (AcceptPunct(".")) {
      name += "." + ExpectIdent("package name segment");
    }
    ExpectPunct("@");
    return FinishPackageId(start, std::move(name));
  }

  PackageId FinishPackageId(const Token& start, std::string name) {
    if (!PackageId::IsValidName(name)) {
      Fail(start, "invalid package name '" + name + "'");
    }
    uint64_t major = ExpectInt();
    ExpectPunct(".");
    uint64_t minor = ExpectInt();
    if (major > UINT32_MAX || minor > UINT32_MAX) {
      Fail(start, "version component out of range");
    }
    return PackageId{std::move(name),
                     Version{static_cast<uint32_t>(major), static_cast<uint32_t>(minor)}};
  }

  // [package-id '::'] IDENT
  std::string ParseQualifiedRef() {
    const Token& start = Peek();
    std::string first = ExpectIdent("type name");
    if (!PeekPunct(".") && !PeekPunct("@")) {
      return first;
    }
    std::string name = first;
    while (AcceptPunct(".")) {
      name += "." + ExpectIdent("package name segment");
    }
    ExpectPunct("@");
    PackageId package = FinishPackageId(start, std::move(name));
    ExpectPunct("::");
    return package.ToString() + "::" + ExpectIdent("type name");
  }

  TypeRef ParseType() {
    const Token& token = Peek();
    if (token.kind != Token::Kind::kIdent) {
      Fail(token, "expected type, found '" + Describe(token) + "'");
    }
    if (auto scalar = ParseScalarType(token.text)) {
      Next();
      return TypeRef::Scalar(*scalar);
    }
    if (token.text == "string") {
      Next();
      return TypeRef::String();
    }
    if (AcceptKeyword("vec")) {
      ExpectPunct("<");
      TypeRef element = ParseType();
      ExpectPunct(">");
      return TypeRef::Vec(std::move(element));
    }
    return TypeRef::Named(ParseQualifiedRef());
  }

  std::string ExpectDeclName(const Token& at, std::string_view what) {
    std::string name = ExpectIdent(what);
    if (IsReservedTypeName(name)) {
      Fail(at, "'" + name + "' is a built-in type name");
    }
    return name;
  }

  void ClaimTypeName(const Token& at, const std::string& name) {
    if (auto previous = builder_.Claim(name, Here(at))) {
      Fail(at,
           "'" + name + "' already declared at " + previous->file + ":" +
               std::to_string(previous->line) + ":" + std::to_string(previous->column),
           ErrorCode::kDuplicateDecl);
    }
  }

  void ParseStruct() {
    ExpectKeyword("struct");
    const Token& at = Peek();
    StructDecl decl;
    decl.name = ExpectDeclName(at, "struct name");
    ClaimTypeName(at, decl.name);
    ExpectPunct("{");
    std::set<std::string> seen;
    while (!AcceptPunct("}")) {
      StructField field;
      field.type = ParseType();
      const Token& name_at = Peek();
      field.name = ExpectIdent("field name");
      if (!seen.insert(field.name).second) {
        Fail(name_at, "duplicate field '" + field.name + "'", ErrorCode::kDuplicateDecl);
      }
      ExpectPunct(";");
      decl.fields.push_back(std::move(field));
    }
    ExpectPunct(";");
    builder_.ast().types.emplace_back(std::move(decl));
  }

  void ParseEnum() {
    ExpectKeyword("enum");
    const Token& at = Peek();
    EnumDecl decl;
    decl.name = ExpectDeclName(at, "enum name");
    ClaimTypeName(at, decl.name);
    ExpectPunct(":");
    const Token& type_at = Peek();
    auto underlying = ParseScalarType(ExpectIdent("underlying type"));
    if (!underlying || (*underlying != ScalarType::kInt32 && *underlying != ScalarType::kUint32)) {
      Fail(type_at, "enum underlying type must be int32_t or uint32_t", ErrorCode::kInvalidType);
    }
    decl.underlying = *underlying;
    ExpectPunct("{");
    std::set<std::string> seen;
    int64_t next_value = 0;
    while (!AcceptPunct("}")) {
      const Token& name_at = Peek();
      Enumerator enumerator;
      enumerator.name = ExpectIdent("enumerator");
      if (!seen.insert(enumerator.name).second) {
        Fail(name_at, "duplicate enumerator '" + enumerator.name + "'", ErrorCode::kDuplicateDecl);
      }
      enumerator.value = next_value;
      if (AcceptPunct("=")) {
        bool negative = AcceptPunct("-");
        uint64_t magnitude = ExpectInt();
        if (magnitude > static_cast<uint64_t>(INT64_MAX)) {
          Fail(name_at, "enumerator value out of range", ErrorCode::kInvalidType);
        }
        enumerator.value =
            negative ? -static_cast<int64_t>(magnitude) : static_cast<int64_t>(magnitude);
      }
      int64_t lo = decl.underlying == ScalarType::kInt32 ? INT32_MIN : 0;
      int64_t hi = decl.underlying == ScalarType::kInt32 ? INT32_MAX : UINT32_MAX;
      if (enumerator.value < lo || enumerator.value > hi) {
        Fail(name_at, "enumerator '" + enumerator.name + "' does not fit " +
                          std::string(ScalarTypeName(decl.underlying)),
             ErrorCode::kInvalidType);
      }
      next_value = enumerator.value + 1;
      decl.enumerators.push_back(std::move(enumerator));
      if (!AcceptPunct(",")) {
        ExpectPunct("}");
        break;
      }
    }
    ExpectPunct(";");
    builder_.ast().types.emplace_back(std::move(decl));
  }

  std::vector<Param> ParseParams(std::set<std::string>& seen) {
    std::vector<Param> params;
    ExpectPunct("(");
    if (AcceptPunct(")")) {
      return params;
    }
    while (true) {
      Param param;
      param.type = ParseType();
      const Token& name_at = Peek();
      param.name = ExpectIdent("parameter name");
      if (!seen.insert(param.name).second) {
        Fail(name_at, "duplicate parameter '" + param.name + "'", ErrorCode::kDuplicateDecl);
      }
      params.push_back(std::move(param));
      if (AcceptPunct(")")) {
        return params;
      }
      ExpectPunct(",");
    }
  }

  MethodDecl ParseMethod() {
    MethodDecl method;
    method.oneway = AcceptKeyword("oneway");
    const Token& at = Peek();
    method.name = ExpectIdent("method name");
    std::set<std::string> seen;
    method.args = ParseParams(seen);
    const Token& generates_at = Peek();
    if (AcceptKeyword("generates")) {
      if (method.oneway) {
        Fail(generates_at, "oneway method '" + method.name + "' cannot generate results");
      }
      method.returns = ParseParams(seen);
      if (method.returns.empty()) {
        Fail(generates_at, "'generates' requires at least one result");
      }
    } else if (!method.oneway) {
      Fail(at, "method '" + method.name + "' must be oneway or declare 'generates (...)'");
    }
    ExpectPunct(";");
    return method;
  }

  void ParseInterface() {
    ExpectKeyword("interface");
    const Token& at = Peek();
    InterfaceDecl decl;
    decl.name = ExpectDeclName(at, "interface name");
    if (decl.name[0] != 'I') {
      Fail(at, "interface name '" + decl.name + "' must start with 'I'");
    }
    ClaimTypeName(at, decl.name);
    if (AcceptKeyword("extends")) {
      decl.extends = ParseQualifiedRef();
    }
    ExpectPunct("{");
    std::set<std::string> seen;
    while (!AcceptPunct("}")) {
      const Token& method_at = PeekKeyword("oneway") ? Peek(1) : Peek();
      MethodDecl method = ParseMethod();
      if (!seen.insert(method.name).second) {
        Fail(method_at, "method '" + method.name + "' declared twice in " + decl.name,
             ErrorCode::kDuplicateDecl);
      }
      decl.methods.push_back(std::move(method));
    }
    ExpectPunct(";");
    builder_.ast().interfaces.push_back(std::move(decl));
  }

  const SourceFile& source_;
  std::vector<Token> tokens_;
  size_t index_ = 0;
  PackageBuilder& builder_;
};

void RenderType(std::ostringstream& out, const TypeRef& type) {
  switch (type.kind) {
    case TypeRef::Kind::kScalar:
      out << ScalarTypeName(type.scalar);
      break;
    case TypeRef::Kind::kString:
      out << "string";
      break;
    case TypeRef::Kind::kVec:
      out << "vec<";
      RenderType(out, *type.element);
      out << ">";
      break;
    case TypeRef::Kind::kNamed:
    case TypeRef::Kind::kStruct:
    case TypeRef::Kind::kEnum:
    case TypeRef::Kind::kInterface:
      out << type.name;
      break;
  }
}

void RenderParams(std::ostringstream& out, const std::vector<Param>& params) {
  out << "(";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i > 0) {
      out << ", ";
    }
    RenderType(out, params[i].type);
    out << " " << params[i].name;
  }
  out << ")";
}

}  // namespace

PackageAST ParseDocument(const SourceFile& source) {
  PackageBuilder builder(std::nullopt);
  Parser(source, builder).ParseFile();
  return std::move(builder.ast());
}

PackageAST ParsePackage(std::vector<SourceFile> sources, const PackageId& id) {
  std::sort(sources.begin(), sources.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.name < b.name; });
  PackageBuilder builder(id);
  builder.ast().id = id;
  for (const SourceFile& source : sources) {
    Parser(source, builder).ParseFile();
  }
  return std::move(builder.ast());
}

std::string RenderPackage(const PackageAST& ast) {
  std::ostringstream out;
  out << "package " << ast.id.ToString() << ";\n";
  if (!ast.imports.empty()) {
    out << "\n";
    for (const PackageId& import : ast.imports) {
      out << "import " << import.ToString() << ";\n";
    }
  }
  for (const TypeDecl& type : ast.types) {
    out << "\n";
    if (const auto* s = std::get_if<StructDecl>(&type)) {
      out << "struct " << s->name << " {\n";
      for (const StructField& field : s->fields) {
        out << "    ";
        RenderType(out, field.type);
        out << " " << field.name << ";\n";
      }
      out << "};\n";
    } else {
      const auto& e = std::get<EnumDecl>(type);
      out << "enum " << e.name << " : " << ScalarTypeName(e.underlying) << " {\n";
      for (const Enumerator& enumerator : e.enumerators) {
        out << "    " << enumerator.name << " = ";
        if (enumerator.value < 0) {
          out << "-" << static_cast<uint64_t>(-(enumerator.value + 1)) + 1;
        } else {
          out << enumerator.value;
        }
        out << ",\n";
      }
      out << "};\n";
    }
  }
  for (const InterfaceDecl& iface : ast.interfaces) {
    out << "\ninterface " << iface.name;
    if (iface.extends) {
      out << " extends " << *iface.extends;
    }
    out << " {\n";
    for (const MethodDecl& method : iface.methods) {
      if (method.is_inherited) {
        continue;
      }
      out << "    " << (method.oneway ? "oneway " : "") << method.name;
      RenderParams(out, method.args);
      if (!method.oneway) {
        out << " generates ";
        RenderParams(out, method.returns);
      }
      out << ";\n";
    }
    out << "};\n";
  }
  return out.str();
}

}  // namespace treble::idl
