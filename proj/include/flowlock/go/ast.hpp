// Copyright 2026 The Flowlock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Syntax tree for the accepted Go subset. Nodes are immutable once parsed;
// line numbers are carried for diagnostics only and never compared.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace flowlock::go {

struct GoType;
struct Expr;
struct Stmt;
using GoTypePtr = std::shared_ptr<const GoType>;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;
using Block = std::vector<StmtPtr>;

struct Field {
  std::string name;  // empty for embedded (anonymous) fields and unnamed params
  GoTypePtr type;
  bool variadic = false;
};

struct GoType {
  enum class Kind : std::uint8_t { Name, Slice, Array, Pointer, Map, Chan, Func, Struct, Interface };
  Kind kind = Kind::Name;
  std::string name;  // Name: identifier, possibly qualified ("time.Duration"); Array: length text
  GoTypePtr elem;    // Slice, Array, Pointer, Map value, Chan element
  GoTypePtr key;     // Map key
  std::vector<Field> params;
  std::vector<Field> results;
  std::vector<Field> fields;  // Struct members
};

struct FuncLit;

struct Expr {
  enum class Kind : std::uint8_t {
    Ident,
    BasicLit,    // text holds the literal as written
    Composite,   // type{args}
    FuncLit,
    Paren,
    Selector,    // x.text
    Index,       // x[y]
    SliceExpr,   // x[args...] with empty slots as null
    TypeAssert,  // x.(type)
    Call,        // x(args); ellipsis marks f(xs...)
    Unary,       // text op x
    Binary,      // x text y
    KeyValue,    // x: y
    TypeExpr,    // a type in expression position, e.g. make's first argument
  };
  Kind kind = Kind::Ident;
  std::string text;
  ExprPtr x;
  ExprPtr y;
  std::vector<ExprPtr> args;
  GoTypePtr type;
  std::shared_ptr<const FuncLit> func;
  bool ellipsis = false;
  int line = 0;
};

struct FuncLit {
  std::string name;  // stable generated name, anon@<line>
  GoTypePtr sig;
  Block body;
  int line = 0;
};

struct Stmt {
  enum class Kind : std::uint8_t {
    Expr,
    Send,     // x <- y
    IncDec,   // x text
    Assign,   // lhs text rhs, text in {=, +=, ...}
    Define,   // lhs := rhs
    VarDecl,  // var names type = values
    ConstDecl,
    Go,
    Defer,
    Return,
    If,
    For,      // init; cond; post { body }
    Range,    // for key, value := range x { body }
    Block,
    Branch,   // break / continue
    Labeled,
    Empty,
  };
  Kind kind = Kind::Empty;
  std::string text;
  std::vector<ExprPtr> lhs;
  std::vector<ExprPtr> rhs;
  std::vector<std::string> names;
  GoTypePtr type;
  ExprPtr x;
  ExprPtr y;
  StmtPtr init;
  StmtPtr post;
  ExprPtr cond;
  Block body;
  Block els;           // If: else-block; an else-if is a single nested If
  bool has_else = false;
  bool define = false;  // Range uses :=
  int line = 0;
};

struct FuncDecl {
  std::string name;
  std::vector<Field> params;
  std::vector<Field> results;
  Block body;
  int line = 0;
};

struct TypeDecl {
  std::string name;
  GoTypePtr type;
  int line = 0;
};

struct SourceFile {
  std::string package_name;
  std::vector<std::string> imports;
  std::vector<TypeDecl> types;
  std::vector<StmtPtr> globals;  // VarDecl and ConstDecl statements in source order
  std::vector<FuncDecl> functions;
};

// Small construction helpers keep the parser readable.
inline ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
inline StmtPtr make_stmt(Stmt s) { return std::make_shared<const Stmt>(std::move(s)); }
inline GoTypePtr make_type(GoType t) { return std::make_shared<const GoType>(std::move(t)); }

inline ExprPtr ident_expr(std::string name, int line) {
  Expr e;
  e.kind = Expr::Kind::Ident;
  e.text = std::move(name);
  e.line = line;
  return make_expr(std::move(e));
}

inline StmtPtr empty_stmt(int line) {
  Stmt s;
  s.line = line;
  return make_stmt(std::move(s));
}

}  // namespace flowlock::go
