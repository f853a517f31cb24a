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

// Canonical Go rendering of a parsed file, and a line-free structural dump.
// Invariant: dump(parse(print_go(f))) == dump(f) for every accepted f.

#pragma once

#include <string>

#include "flowlock/go/ast.hpp"

namespace flowlock::go {

namespace detail {

inline std::string print_go_type(const GoTypePtr& t);

inline std::string print_fields(const std::vector<Field>& fs) {
  std::string out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) out += ", ";
    if (!fs[i].name.empty()) out += fs[i].name + " ";
    if (fs[i].variadic) out += "...";
    out += print_go_type(fs[i].type);
  }
  return out;
}

inline std::string print_signature(const GoType& f) {
  std::string out = "(" + print_fields(f.params) + ")";
  if (f.results.size() == 1 && f.results.front().name.empty()) {
    out += " " + print_go_type(f.results.front().type);
  } else if (!f.results.empty()) {
    out += " (" + print_fields(f.results) + ")";
  }
  return out;
}

inline std::string print_go_type(const GoTypePtr& t) {
  using K = GoType::Kind;
  switch (t->kind) {
    case K::Name: return t->name;
    case K::Slice: return "[]" + print_go_type(t->elem);
    case K::Array: return "[" + t->name + "]" + print_go_type(t->elem);
    case K::Pointer: return "*" + print_go_type(t->elem);
    case K::Map: return "map[" + print_go_type(t->key) + "]" + print_go_type(t->elem);
    case K::Chan: return "chan " + print_go_type(t->elem);
    case K::Func: return "func" + print_signature(*t);
    case K::Interface: return "interface{}";
    case K::Struct: {
      if (t->fields.empty()) return "struct{}";
      std::string out = "struct {";
      for (std::size_t i = 0; i < t->fields.size(); ++i) {
        out += i ? "; " : " ";
        const Field& f = t->fields[i];
        out += f.name.empty() ? print_go_type(f.type) : f.name + " " + print_go_type(f.type);
      }
      return out + " }";
    }
  }
  return "?";
}

class GoPrinter {
 public:
  std::string out;

  void file(const SourceFile& f) {
    out += "package " + f.package_name + "\n";
    if (!f.imports.empty()) {
      out += "\nimport (\n";
      for (const auto& i : f.imports) out += "\t\"" + i + "\"\n";
      out += ")\n";
    }
    for (const auto& t : f.types) out += "\ntype " + t.name + " " + print_go_type(t.type) + "\n";
    if (!f.globals.empty()) out += "\n";
    for (const auto& g : f.globals) {
      stmt(*g, 0);
      out += "\n";
    }
    for (const auto& fn : f.functions) {
      GoType sig;
      sig.kind = GoType::Kind::Func;
      sig.params = fn.params;
      sig.results = fn.results;
      out += "\nfunc " + fn.name + print_signature(sig) + " ";
      block(fn.body, 0);
      out += "\n";
    }
  }

  void block(const Block& b, int depth) {
    out += "{\n";
    for (const auto& s : b) {
      indent(depth + 1);
      stmt(*s, depth + 1);
      out += "\n";
    }
    indent(depth);
    out += "}";
  }

  void indent(int depth) { out.append(static_cast<std::size_t>(depth), '\t'); }

  void list(const std::vector<ExprPtr>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out += ", ";
      expr(*xs[i]);
    }
  }

  void stmt(const Stmt& s, int depth) {
    using K = Stmt::Kind;
    depth_ = depth;
    switch (s.kind) {
      case K::Expr: expr(*s.x); break;
      case K::Send:
        expr(*s.x);
        out += " <- ";
        expr(*s.y);
        break;
      case K::IncDec:
        expr(*s.x);
        out += s.text;
        break;
      case K::Assign:
      case K::Define:
        list(s.lhs);
        out += " " + s.text + " ";
        list(s.rhs);
        break;
      case K::VarDecl:
      case K::ConstDecl: {
        out += s.kind == K::VarDecl ? "var " : "const ";
        for (std::size_t i = 0; i < s.names.size(); ++i) out += (i ? ", " : "") + s.names[i];
        if (s.type) out += " " + print_go_type(s.type);
        if (!s.rhs.empty()) {
          out += " = ";
          list(s.rhs);
        }
        break;
      }
      case K::Go:
      case K::Defer:
        out += s.kind == K::Go ? "go " : "defer ";
        expr(*s.x);
        break;
      case K::Return:
        out += "return";
        if (!s.rhs.empty()) {
          out += " ";
          list(s.rhs);
        }
        break;
      case K::If:
        out += "if ";
        if (s.init) {
          stmt(*s.init, depth);
          out += "; ";
        }
        expr(*s.cond);
        out += " ";
        block(s.body, depth);
        if (s.has_else) {
          out += " else ";
          if (s.els.size() == 1 && s.els.front()->kind == K::If) {
            stmt(*s.els.front(), depth);
          } else {
            block(s.els, depth);
          }
        }
        break;
      case K::For:
        out += "for ";
        if (s.init || s.post) {
          if (s.init) stmt(*s.init, depth);
          out += "; ";
          if (s.cond) expr(*s.cond);
          out += "; ";
          if (s.post) stmt(*s.post, depth);
          out += " ";
        } else if (s.cond) {
          expr(*s.cond);
          out += " ";
        }
        block(s.body, depth);
        break;
      case K::Range:
        out += "for ";
        if (!s.lhs.empty()) {
          list(s.lhs);
          out += s.define ? " := " : " = ";
        }
        out += "range ";
        expr(*s.x);
        out += " ";
        block(s.body, depth);
        break;
      case K::Block:
        if (s.text == "decl") {
          // A grouped declaration; each member prints as "var x T = v".
          out += s.body.front()->kind == K::VarDecl ? "var (\n" : "const (\n";
          for (const auto& d : s.body) {
            indent(depth + 1);
            std::size_t mark = out.size();
            stmt(*d, depth + 1);
            out.erase(mark, d->kind == K::VarDecl ? 4 : 6);
            out += "\n";
          }
          indent(depth);
          out += ")";
        } else {
          block(s.body, depth);
        }
        break;
      case K::Branch:
        out += s.text;
        for (const auto& n : s.names) out += " " + n;
        break;
      case K::Labeled:
        out += s.text + ":";
        if (!s.body.empty()) {
          out += " ";
          stmt(*s.body.front(), depth);
        }
        break;
      case K::Empty: break;
    }
  }

  void expr(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
      case K::Ident:
      case K::BasicLit: out += e.text; break;
      case K::Composite:
        if (e.type) out += print_go_type(e.type);
        out += "{";
        list(e.args);
        out += "}";
        break;
      case K::FuncLit:
        out += "func" + print_signature(*e.func->sig) + " ";
        {
          int depth = depth_;
          block(e.func->body, depth);
          depth_ = depth;
        }
        break;
      case K::Paren:
        out += "(";
        expr(*e.x);
        out += ")";
        break;
      case K::Selector:
        expr(*e.x);
        out += "." + e.text;
        break;
      case K::Index:
        expr(*e.x);
        out += "[";
        expr(*e.y);
        out += "]";
        break;
      case K::SliceExpr:
        expr(*e.x);
        out += "[";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) out += ":";
          if (e.args[i]) expr(*e.args[i]);
        }
        out += "]";
        break;
      case K::TypeAssert:
        expr(*e.x);
        out += ".(" + print_go_type(e.type) + ")";
        break;
      case K::Call:
        expr(*e.x);
        out += "(";
        list(e.args);
        if (e.ellipsis) out += "...";
        out += ")";
        break;
      case K::Unary:
        out += e.text;
        // Keep "- -x" from lexing as "--x".
        if (e.x->kind == K::Unary && (e.text == "-" || e.text == "+" || e.text == "&") && e.x->text == e.text) out += " ";
        expr(*e.x);
        break;
      case K::Binary:
        // Operands keep their parse shape: a lower-precedence child came from parentheses.
        expr(*e.x);
        out += " " + e.text + " ";
        expr(*e.y);
        break;
      case K::KeyValue:
        expr(*e.x);
        out += ": ";
        expr(*e.y);
        break;
      case K::TypeExpr: out += print_go_type(e.type); break;
    }
  }

  int depth_ = 0;
};

// S-expression dump; omits lines and generated literal names.
class Dumper {
 public:
  std::string out;

  void type(const GoTypePtr& t) { out += t ? "<" + print_go_type(t) + ">" : "<>"; }

  void expr(const ExprPtr& e) {
    if (!e) {
      out += "nil";
      return;
    }
    out += "(E" + std::to_string(static_cast<int>(e->kind)) + " '" + e->text + "'";
    if (e->x) {
      out += " ";
      expr(e->x);
    }
    if (e->y) {
      out += " ";
      expr(e->y);
    }
    for (const auto& a : e->args) {
      out += " ";
      expr(a);
    }
    if (e->type) {
      out += " ";
      type(e->type);
    }
    if (e->func) {
      out += " ";
      type(e->func->sig);
      block(e->func->body);
    }
    if (e->ellipsis) out += " ...";
    out += ")";
  }

  void block(const Block& b) {
    out += "{";
    for (const auto& s : b) stmt(s);
    out += "}";
  }

  void stmt(const StmtPtr& s) {
    if (!s) {
      out += "nil";
      return;
    }
    out += "[S" + std::to_string(static_cast<int>(s->kind)) + " '" + s->text + "'";
    for (const auto& n : s->names) out += " " + n;
    for (const auto& e : s->lhs) {
      out += " ";
      expr(e);
    }
    out += " =";
    for (const auto& e : s->rhs) {
      out += " ";
      expr(e);
    }
    if (s->type) type(s->type);
    if (s->x) expr(s->x);
    if (s->y) expr(s->y);
    if (s->init) stmt(s->init);
    if (s->cond) expr(s->cond);
    if (s->post) stmt(s->post);
    block(s->body);
    if (s->has_else) block(s->els);
    if (s->define) out += " :=";
    out += "]";
  }

  void file(const SourceFile& f) {
    out += "package " + f.package_name + "\n";
    for (const auto& i : f.imports) out += "import " + i + "\n";
    for (const auto& t : f.types) {
      out += "type " + t.name + " ";
      type(t.type);
      out += "\n";
    }
    for (const auto& g : f.globals) {
      stmt(g);
      out += "\n";
    }
    for (const auto& fn : f.functions) {
      GoType sig;
      sig.kind = GoType::Kind::Func;
      sig.params = fn.params;
      sig.results = fn.results;
      out += "func " + fn.name + " " + print_signature(sig) + " ";
      block(fn.body);
      out += "\n";
    }
  }
};

}  // namespace detail

inline std::string print_go(const SourceFile& f) {
  detail::GoPrinter p;
  p.file(f);
  return p.out;
}

inline std::string dump(const SourceFile& f) {
  detail::Dumper d;
  d.file(f);
  return d.out;
}

}  // namespace flowlock::go
