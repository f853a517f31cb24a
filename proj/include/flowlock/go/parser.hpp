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

// Recursive-descent parser for the accepted Go subset.
//
// Constructs the analysis cannot model are rejected here, with the feature
// name and line, so no verdict is ever produced for them:
//   buffered channels, select, switch, close, directional channel types,
//   goroutines started inside a for loop, sync primitives, methods, goto.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowlock/error.hpp"
#include "flowlock/go/ast.hpp"
#include "flowlock/go/lexer.hpp"

namespace flowlock::go {

[[noreturn]] inline void unsupported(const std::string& feature, int line) {
  throw FlowError(ErrorCode::Unsupported, feature + " at line " + std::to_string(line));
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(strip_bom(src))) {}

  SourceFile parse_file() {
    SourceFile f;
    skip_semis();
    expect_kw("package");
    f.package_name = expect_ident();
    expect_semi();
    skip_semis();
    while (peek().is_kw("import")) {
      next();
      if (accept_op("(")) {
        skip_semis();
        while (!peek().is_op(")")) {
          parse_import_spec(f);
          expect_semi_or(")");
        }
        expect_op(")");
      } else {
        parse_import_spec(f);
      }
      expect_semi();
      skip_semis();
    }
    while (peek().kind != Tok::Eof) {
      const Token& t = peek();
      if (t.is_kw("func")) {
        f.functions.push_back(parse_func_decl());
      } else if (t.is_kw("var") || t.is_kw("const")) {
        for (auto& s : parse_value_decl()) f.globals.push_back(std::move(s));
      } else if (t.is_kw("type")) {
        for (auto& d : parse_type_decl()) f.types.push_back(std::move(d));
      } else {
        fail("declaration");
      }
      if (peek().kind != Tok::Eof) expect_semi();
      skip_semis();
    }
    return f;
  }

 private:
  static std::string_view strip_bom(std::string_view s) {
    return s.substr(0, 3) == "\xEF\xBB\xBF" ? s.substr(3) : s;
  }

  // -- token plumbing ------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  int line() const { return peek().line; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::Eof ? "end of file" : (t.text == ";" ? "newline" : "'" + t.text + "'");
    throw FlowError(ErrorCode::SyntaxError, "line " + std::to_string(t.line) + ": expected " + expected + ", found " + found);
  }

  bool accept_op(std::string_view op) {
    if (!peek().is_op(op)) return false;
    next();
    return true;
  }
  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail("'" + std::string(op) + "'");
  }
  void expect_kw(std::string_view kw) {
    if (!peek().is_kw(kw)) fail("'" + std::string(kw) + "'");
    next();
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail("identifier");
    return next().text;
  }
  void expect_semi() {
    if (!accept_op(";")) fail("';' or newline");
  }
  // A closing token may replace the final semicolon of a list.
  void expect_semi_or(std::string_view closer) {
    if (peek().is_op(closer)) return;
    expect_semi();
  }
  void skip_semis() {
    while (peek().is_op(";")) next();
  }

  void parse_import_spec(SourceFile& f) {
    if (peek().kind == Tok::Ident || peek().is_op(".") || peek().is_op("_")) next();
    if (peek().kind != Tok::String) fail("import path");
    std::string path = next().text;
    f.imports.push_back(path.substr(1, path.size() - 2));
  }

  // -- declarations --------------------------------------------------------

  FuncDecl parse_func_decl() {
    FuncDecl d;
    d.line = line();
    expect_kw("func");
    if (peek().is_op("(")) unsupported("method declaration", d.line);
    d.name = expect_ident();
    if (peek().is_op("[")) unsupported("type parameters", d.line);
    auto sig = parse_signature();
    d.params = sig->params;
    d.results = sig->results;
    if (peek().is_op("{")) {
      d.body = parse_block();
    }
    return d;
  }

  std::vector<TypeDecl> parse_type_decl() {
    expect_kw("type");
    std::vector<TypeDecl> out;
    auto one = [&] {
      TypeDecl d;
      d.line = line();
      d.name = expect_ident();
      if (peek().is_op("[")) unsupported("type parameters", d.line);
      accept_op("=");
      d.type = parse_type();
      out.push_back(std::move(d));
    };
    if (accept_op("(")) {
      skip_semis();
      while (!peek().is_op(")")) {
        one();
        expect_semi_or(")");
        skip_semis();
      }
      expect_op(")");
    } else {
      one();
    }
    return out;
  }

  // var/const declarations, possibly grouped; one statement per line of the group.
  std::vector<StmtPtr> parse_value_decl() {
    bool is_const = peek().is_kw("const");
    next();
    std::vector<StmtPtr> out;
    auto one = [&] {
      Stmt s;
      s.kind = is_const ? Stmt::Kind::ConstDecl : Stmt::Kind::VarDecl;
      s.line = line();
      s.names.push_back(expect_ident());
      while (accept_op(",")) s.names.push_back(expect_ident());
      if (!peek().is_op("=") && !peek().is_op(";") && !peek().is_op(")")) s.type = parse_type();
      if (accept_op("=")) s.rhs = parse_expr_list();
      out.push_back(make_stmt(std::move(s)));
    };
    if (accept_op("(")) {
      skip_semis();
      while (!peek().is_op(")")) {
        one();
        expect_semi_or(")");
        skip_semis();
      }
      expect_op(")");
    } else {
      one();
    }
    return out;
  }

  // -- types ---------------------------------------------------------------

  bool starts_type() const {
    const Token& t = peek();
    return t.kind == Tok::Ident || t.is_op("[") || t.is_op("*") || t.is_op("(") || t.is_kw("map") ||
           t.is_kw("chan") || t.is_kw("func") || t.is_kw("struct") || t.is_kw("interface") || t.is_op("<-");
  }

  GoTypePtr parse_type() {
    int ln = line();
    const Token& t = peek();
    GoType g;
    if (t.kind == Tok::Ident) {
      g.kind = GoType::Kind::Name;
      g.name = next().text;
      if (accept_op(".")) {
        if (g.name == "sync") unsupported("sync primitive", ln);
        g.name += "." + expect_ident();
      }
      return make_type(std::move(g));
    }
    if (accept_op("(")) {
      auto inner = parse_type();
      expect_op(")");
      return inner;
    }
    if (accept_op("[")) {
      if (accept_op("]")) {
        g.kind = GoType::Kind::Slice;
      } else {
        g.kind = GoType::Kind::Array;
        if (accept_op("...")) {
          g.name = "...";
        } else {
          auto len = parse_expr();
          g.name = len->kind == Expr::Kind::BasicLit || len->kind == Expr::Kind::Ident ? len->text : "?";
        }
        expect_op("]");
      }
      g.elem = parse_type();
      return make_type(std::move(g));
    }
    if (accept_op("*")) {
      g.kind = GoType::Kind::Pointer;
      g.elem = parse_type();
      return make_type(std::move(g));
    }
    if (t.is_kw("map")) {
      next();
      g.kind = GoType::Kind::Map;
      expect_op("[");
      g.key = parse_type();
      expect_op("]");
      g.elem = parse_type();
      return make_type(std::move(g));
    }
    if (t.is_op("<-")) unsupported("directional channel type", ln);
    if (t.is_kw("chan")) {
      next();
      if (peek().is_op("<-")) unsupported("directional channel type", ln);
      g.kind = GoType::Kind::Chan;
      g.elem = parse_type();
      return make_type(std::move(g));
    }
    if (t.is_kw("func")) {
      next();
      return parse_signature();
    }
    if (t.is_kw("struct")) {
      next();
      g.kind = GoType::Kind::Struct;
      expect_op("{");
      skip_semis();
      while (!peek().is_op("}")) {
        parse_struct_fields(g.fields);
        expect_semi_or("}");
        skip_semis();
      }
      expect_op("}");
      return make_type(std::move(g));
    }
    if (t.is_kw("interface")) {
      next();
      g.kind = GoType::Kind::Interface;
      expect_op("{");
      int depth = 1;
      while (depth > 0) {
        if (peek().kind == Tok::Eof) fail("'}'");
        if (peek().is_op("{")) ++depth;
        if (peek().is_op("}")) --depth;
        next();
      }
      return make_type(std::move(g));
    }
    fail("type");
  }

  void parse_struct_fields(std::vector<Field>& out) {
    int ln = line();
    bool embedded = peek().is_op("*") ||
                    (peek().kind == Tok::Ident &&
                     (peek(1).is_op(";") || peek(1).is_op("}") || peek(1).is_op(".") || peek(1).kind == Tok::String));
    if (embedded) {
      accept_op("*");
      std::string name = expect_ident();
      if (accept_op(".")) {
        if (name == "sync") unsupported("sync primitive", ln);
        name += "." + expect_ident();
      }
      out.push_back(Field{"", make_type(GoType{GoType::Kind::Name, name, {}, {}, {}, {}, {}})});
    } else {
      std::vector<std::string> names{expect_ident()};
      while (accept_op(",")) names.push_back(expect_ident());
      auto ty = parse_type();
      for (auto& n : names) out.push_back(Field{n, ty});
    }
    if (peek().kind == Tok::String) next();  // struct tag
  }

  // Parses "(params) results" after the func keyword (and name, if any).
  GoTypePtr parse_signature() {
    GoType g;
    g.kind = GoType::Kind::Func;
    g.params = parse_params();
    if (peek().is_op("(")) {
      g.results = parse_params();
    } else if (starts_type() && !peek().is_op("{")) {
      g.results.push_back(Field{"", parse_type()});
    }
    return make_type(std::move(g));
  }

  std::vector<Field> parse_params() {
    expect_op("(");
    struct Entry {
      std::string name;
      GoTypePtr type;
      bool variadic = false;
    };
    std::vector<Entry> entries;
    bool any_named = false;
    while (!peek().is_op(")")) {
      Entry e;
      if (peek().kind == Tok::Ident && !peek(1).is_op(",") && !peek(1).is_op(")") && !peek(1).is_op(".")) {
        e.name = next().text;
        any_named = true;
      }
      if (accept_op("...")) e.variadic = true;
      e.type = parse_type();
      entries.push_back(std::move(e));
      if (!accept_op(",")) break;
    }
    expect_op(")");
    std::vector<Field> out;
    if (!any_named) {
      for (auto& e : entries) out.push_back(Field{"", e.type, e.variadic});
      return out;
    }
    // In a named list, a bare identifier is a name sharing the next type.
    std::vector<std::string> pending;
    for (auto& e : entries) {
      if (e.name.empty()) {
        if (e.type->kind != GoType::Kind::Name) fail("parameter name");
        pending.push_back(e.type->name);
        continue;
      }
      for (auto& n : pending) out.push_back(Field{n, e.type, e.variadic});
      pending.clear();
      out.push_back(Field{e.name, e.type, e.variadic});
    }
    if (!pending.empty()) fail("parameter type");
    return out;
  }

  // -- statements ----------------------------------------------------------

  Block parse_block() {
    expect_op("{");
    Block out;
    skip_semis();
    while (!peek().is_op("}")) {
      if (peek().kind == Tok::Eof) fail("'}'");
      auto s = parse_stmt();
      if (s) out.push_back(std::move(s));
      if (!peek().is_op("}")) expect_semi();
      skip_semis();
    }
    expect_op("}");
    return out;
  }

  StmtPtr parse_stmt() {
    const Token& t = peek();
    int ln = t.line;
    if (t.kind == Tok::Keyword) {
      const std::string& k = t.text;
      if (k == "var" || k == "const") {
        auto decls = parse_value_decl();
        if (decls.size() == 1) return decls.front();
        Stmt b;
        b.kind = Stmt::Kind::Block;
        b.line = ln;
        b.text = "decl";
        b.body = std::move(decls);
        return make_stmt(std::move(b));
      }
      if (k == "type") {
        parse_type_decl();
        return empty_stmt(ln);
      }
      if (k == "go" || k == "defer") {
        next();
        if (k == "go" && loop_depth_ > 0) unsupported("goroutine started inside a for loop", ln);
        Stmt s;
        s.kind = k == "go" ? Stmt::Kind::Go : Stmt::Kind::Defer;
        s.line = ln;
        s.x = parse_expr();
        if (s.x->kind != Expr::Kind::Call) fail("function call after " + k);
        return make_stmt(std::move(s));
      }
      if (k == "return") {
        next();
        Stmt s;
        s.kind = Stmt::Kind::Return;
        s.line = ln;
        if (!peek().is_op(";") && !peek().is_op("}")) s.rhs = parse_expr_list();
        return make_stmt(std::move(s));
      }
      if (k == "if") return parse_if();
      if (k == "for") return parse_for();
      if (k == "break" || k == "continue") {
        next();
        Stmt s;
        s.kind = Stmt::Kind::Branch;
        s.line = ln;
        s.text = k;
        if (peek().kind == Tok::Ident) s.names.push_back(next().text);
        return make_stmt(std::move(s));
      }
      if (k == "select") unsupported("select statement", ln);
      if (k == "switch") unsupported("switch statement", ln);
      if (k == "goto") unsupported("goto statement", ln);
      if (k == "fallthrough") unsupported("fallthrough statement", ln);
      if (k == "func" || k == "struct" || k == "map" || k == "chan" || k == "interface") return parse_simple_stmt(false);
      fail("statement");
    }
    if (t.is_op("{")) {
      Stmt s;
      s.kind = Stmt::Kind::Block;
      s.line = ln;
      s.body = parse_block();
      return make_stmt(std::move(s));
    }
    if (t.is_op(";")) return empty_stmt(ln);
    if (t.kind == Tok::Ident && peek(1).is_op(":") ) {
      Stmt s;
      s.kind = Stmt::Kind::Labeled;
      s.line = ln;
      s.text = next().text;
      next();
      skip_semis();
      if (peek().is_op("}")) return make_stmt(std::move(s));
      s.body.push_back(parse_stmt());
      return make_stmt(std::move(s));
    }
    return parse_simple_stmt(false);
  }

  // in_header permits "k, v := range x" and "range x".
  StmtPtr parse_simple_stmt(bool in_header) {
    int ln = line();
    if (in_header && peek().is_kw("range")) {
      next();
      Stmt s;
      s.kind = Stmt::Kind::Range;
      s.line = ln;
      s.x = parse_expr();
      return make_stmt(std::move(s));
    }
    auto lhs = parse_expr_list();
    const Token& t = peek();
    Stmt s;
    s.line = ln;
    if (t.is_op("<-")) {
      next();
      if (lhs.size() != 1) fail("single channel");
      s.kind = Stmt::Kind::Send;
      s.x = lhs.front();
      s.y = parse_expr();
      return make_stmt(std::move(s));
    }
    if (t.is_op("++") || t.is_op("--")) {
      s.kind = Stmt::Kind::IncDec;
      s.text = next().text;
      s.x = lhs.front();
      return make_stmt(std::move(s));
    }
    if (t.is_op(":=") || t.is_op("=")) {
      bool def = t.is_op(":=");
      next();
      if (in_header && peek().is_kw("range")) {
        next();
        s.kind = Stmt::Kind::Range;
        s.define = def;
        s.lhs = std::move(lhs);
        s.x = parse_expr();
        return make_stmt(std::move(s));
      }
      s.kind = def ? Stmt::Kind::Define : Stmt::Kind::Assign;
      s.text = def ? ":=" : "=";
      s.lhs = std::move(lhs);
      s.rhs = parse_expr_list();
      if (def) {
        for (const auto& e : s.lhs) {
          if (e->kind != Expr::Kind::Ident) fail("identifier on left side of :=");
        }
      }
      return make_stmt(std::move(s));
    }
    if (t.kind == Tok::Op && t.text.size() >= 2 && t.text.back() == '=' && t.text != "==" && t.text != "!=" &&
        t.text != "<=" && t.text != ">=") {
      s.kind = Stmt::Kind::Assign;
      s.text = next().text;
      s.lhs = std::move(lhs);
      s.rhs = parse_expr_list();
      return make_stmt(std::move(s));
    }
    if (lhs.size() != 1) fail("':=' or '='");
    s.kind = Stmt::Kind::Expr;
    s.x = lhs.front();
    return make_stmt(std::move(s));
  }

  StmtPtr parse_if() {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.line = line();
    expect_kw("if");
    int saved = expr_level_;
    expr_level_ = -1;
    StmtPtr first = parse_simple_stmt(false);
    if (accept_op(";")) {
      s.init = first;
      s.cond = parse_expr();
    } else {
      if (first->kind != Stmt::Kind::Expr) fail("condition");
      s.cond = first->x;
    }
    expr_level_ = saved;
    s.body = parse_block();
    if (peek().is_kw("else")) {
      next();
      s.has_else = true;
      if (peek().is_kw("if")) {
        s.els.push_back(parse_if());
      } else {
        s.els = parse_block();
      }
    }
    return make_stmt(std::move(s));
  }

  StmtPtr parse_for() {
    Stmt s;
    s.kind = Stmt::Kind::For;
    s.line = line();
    expect_kw("for");
    int saved = expr_level_;
    expr_level_ = -1;
    if (!peek().is_op("{")) {
      StmtPtr first;
      if (!peek().is_op(";")) first = parse_simple_stmt(true);
      if (first && first->kind == Stmt::Kind::Range) {
        Stmt r = *first;
        r.line = s.line;
        expr_level_ = saved;
        ++loop_depth_;
        r.body = parse_block();
        --loop_depth_;
        return make_stmt(std::move(r));
      }
      if (accept_op(";")) {
        s.init = first;
        if (!peek().is_op(";")) s.cond = parse_expr();
        expect_op(";");
        if (!peek().is_op("{")) s.post = parse_simple_stmt(false);
      } else {
        if (!first || first->kind != Stmt::Kind::Expr) fail("loop condition");
        s.cond = first->x;
      }
    }
    expr_level_ = saved;
    ++loop_depth_;
    s.body = parse_block();
    --loop_depth_;
    return make_stmt(std::move(s));
  }

  // -- expressions ---------------------------------------------------------

  std::vector<ExprPtr> parse_expr_list() {
    std::vector<ExprPtr> out{parse_expr()};
    while (accept_op(",")) out.push_back(parse_expr());
    return out;
  }

  static int precedence(const Token& t) {
    if (t.kind != Tok::Op) return 0;
    const std::string& o = t.text;
    if (o == "||") return 1;
    if (o == "&&") return 2;
    if (o == "==" || o == "!=" || o == "<" || o == "<=" || o == ">" || o == ">=") return 3;
    if (o == "+" || o == "-" || o == "|" || o == "^") return 4;
    if (o == "*" || o == "/" || o == "%" || o == "<<" || o == ">>" || o == "&" || o == "&^") return 5;
    return 0;
  }

  ExprPtr parse_expr(int min_prec = 1) {
    ExprPtr lhs = parse_unary();
    for (;;) {
      int p = precedence(peek());
      if (p < min_prec) return lhs;
      Expr e;
      e.kind = Expr::Kind::Binary;
      e.line = line();
      e.text = next().text;
      e.x = lhs;
      e.y = parse_expr(p + 1);
      lhs = make_expr(std::move(e));
    }
  }

  ExprPtr parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Op && (t.text == "+" || t.text == "-" || t.text == "!" || t.text == "^" || t.text == "*" ||
                              t.text == "&" || t.text == "<-")) {
      int ln = t.line;
      std::string op = next().text;
      if (op == "<-" && peek().is_kw("chan")) unsupported("directional channel type", ln);
      Expr e;
      e.kind = Expr::Kind::Unary;
      e.line = ln;
      e.text = op;
      e.x = parse_unary();
      return make_expr(std::move(e));
    }
    return parse_primary();
  }

  ExprPtr parse_operand() {
    const Token& t = peek();
    int ln = t.line;
    Expr e;
    e.line = ln;
    switch (t.kind) {
      case Tok::Int:
      case Tok::Float:
      case Tok::Imag:
      case Tok::Char:
      case Tok::String:
        e.kind = Expr::Kind::BasicLit;
        e.text = next().text;
        return make_expr(std::move(e));
      case Tok::Ident:
        e.kind = Expr::Kind::Ident;
        e.text = next().text;
        return make_expr(std::move(e));
      default:
        break;
    }
    if (accept_op("(")) {
      int saved = expr_level_;
      expr_level_ = 0;
      e.kind = Expr::Kind::Paren;
      e.x = parse_expr();
      expr_level_ = saved;
      expect_op(")");
      return make_expr(std::move(e));
    }
    if (t.is_kw("func")) {
      next();
      auto sig = parse_signature();
      if (!peek().is_op("{")) {
        e.kind = Expr::Kind::TypeExpr;
        e.type = sig;
        return make_expr(std::move(e));
      }
      FuncLit f;
      // Literals sharing a line get _2, _3, ... so names stay unique.
      int nth = ++anon_per_line_[ln];
      f.name = "anon@" + std::to_string(ln) + (nth > 1 ? "_" + std::to_string(nth) : "");
      f.sig = sig;
      f.line = ln;
      int saved = expr_level_;
      expr_level_ = 0;
      f.body = parse_block();
      expr_level_ = saved;
      e.kind = Expr::Kind::FuncLit;
      e.func = std::make_shared<const FuncLit>(std::move(f));
      return make_expr(std::move(e));
    }
    if (t.is_op("[") || t.is_kw("map") || t.is_kw("chan") || t.is_kw("struct") || t.is_kw("interface") ||
        t.is_op("*")) {
      e.kind = Expr::Kind::TypeExpr;
      e.type = parse_type();
      return make_expr(std::move(e));
    }
    fail("expression");
  }

  static bool type_like(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::Ident:
        return true;
      case Expr::Kind::TypeExpr:
        return e->type->kind != GoType::Kind::Func;
      case Expr::Kind::Selector:
        return e->x->kind == Expr::Kind::Ident;
      default:
        return false;
    }
  }

  ExprPtr parse_primary() {
    ExprPtr x = parse_operand();
    for (;;) {
      const Token& t = peek();
      int ln = t.line;
      if (t.is_op(".")) {
        next();
        Expr e;
        e.line = ln;
        e.x = x;
        if (accept_op("(")) {
          e.kind = Expr::Kind::TypeAssert;
          if (peek().is_kw("type")) unsupported("type switch", ln);
          e.type = parse_type();
          expect_op(")");
        } else {
          e.kind = Expr::Kind::Selector;
          e.text = expect_ident();
          if (x->kind == Expr::Kind::Ident && x->text == "sync") unsupported("sync primitive", ln);
        }
        x = make_expr(std::move(e));
      } else if (t.is_op("[")) {
        next();
        int saved = expr_level_;
        expr_level_ = 0;
        Expr e;
        e.line = ln;
        e.x = x;
        std::vector<ExprPtr> slots{nullptr};
        bool slice = false;
        if (!peek().is_op(":")) slots.back() = parse_expr();
        while (accept_op(":")) {
          slice = true;
          slots.push_back(peek().is_op(":") || peek().is_op("]") ? nullptr : parse_expr());
        }
        expr_level_ = saved;
        expect_op("]");
        if (slice) {
          e.kind = Expr::Kind::SliceExpr;
          e.args = std::move(slots);
        } else {
          e.kind = Expr::Kind::Index;
          e.y = slots.front();
        }
        x = make_expr(std::move(e));
      } else if (t.is_op("(")) {
        x = parse_call(x);
      } else if (t.is_op("{") && type_like(x) &&
                 (expr_level_ >= 0 || x->kind == Expr::Kind::TypeExpr)) {
        x = parse_composite(x->kind == Expr::Kind::TypeExpr ? x->type : name_type(x), ln);
      } else {
        return x;
      }
    }
  }

  static GoTypePtr name_type(const ExprPtr& e) {
    GoType g;
    g.kind = GoType::Kind::Name;
    g.name = e->kind == Expr::Kind::Selector ? e->x->text + "." + e->text : e->text;
    return make_type(std::move(g));
  }

  ExprPtr parse_call(const ExprPtr& fn) {
    int ln = line();
    expect_op("(");
    int saved = expr_level_;
    expr_level_ = 0;
    Expr e;
    e.kind = Expr::Kind::Call;
    e.line = ln;
    e.x = fn;
    bool is_make = fn->kind == Expr::Kind::Ident && (fn->text == "make" || fn->text == "new");
    while (!peek().is_op(")")) {
      if (is_make && e.args.empty() && starts_type() && peek().kind != Tok::Ident) {
        Expr te;
        te.kind = Expr::Kind::TypeExpr;
        te.line = line();
        te.type = parse_type();
        e.args.push_back(make_expr(std::move(te)));
      } else {
        e.args.push_back(parse_expr());
      }
      if (accept_op("...")) e.ellipsis = true;
      if (!accept_op(",")) break;
      skip_semis();
    }
    skip_semis();
    expect_op(")");
    expr_level_ = saved;
    if (fn->kind == Expr::Kind::Ident && fn->text == "close") unsupported("close", ln);
    if (fn->kind == Expr::Kind::Ident && fn->text == "make" && !e.args.empty() &&
        e.args.front()->kind == Expr::Kind::TypeExpr && e.args.front()->type->kind == GoType::Kind::Chan &&
        e.args.size() > 1) {
      const auto& size = e.args[1];
      if (!(size->kind == Expr::Kind::BasicLit && size->text == "0")) unsupported("buffered channel", ln);
    }
    return make_expr(std::move(e));
  }

  ExprPtr parse_composite(GoTypePtr type, int ln) {
    expect_op("{");
    int saved = expr_level_;
    expr_level_ = 0;
    Expr e;
    e.kind = Expr::Kind::Composite;
    e.line = ln;
    e.type = std::move(type);
    skip_semis();
    while (!peek().is_op("}")) {
      ExprPtr elem = parse_element();
      if (accept_op(":")) {
        Expr kv;
        kv.kind = Expr::Kind::KeyValue;
        kv.line = elem->line;
        kv.x = elem;
        kv.y = parse_element();
        elem = make_expr(std::move(kv));
      }
      e.args.push_back(std::move(elem));
      if (!accept_op(",")) break;
      skip_semis();
    }
    skip_semis();
    expect_op("}");
    expr_level_ = saved;
    return make_expr(std::move(e));
  }

  // A composite element may elide its type: {{1, 2}, {3, 4}}.
  ExprPtr parse_element() {
    if (peek().is_op("{")) return parse_composite(nullptr, line());
    return parse_expr();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int expr_level_ = 0;  // negative inside if/for headers, where '{' opens the body
  int loop_depth_ = 0;
  std::map<int, int> anon_per_line_;
};

inline SourceFile parse(std::string_view source) { return Parser(source).parse_file(); }

}  // namespace flowlock::go
