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

// Translation of Go functions into coroutine definitions.
//
//   send          ch <- e        !elem(ch)
//   receive       <-ch           ?elem(ch)
//   go f(a)                      !Start(f){params ↦ a}
//   f(a), f ∈ M                  !Inline(f){params ↦ a}
//   defer f(a)                   spliced at function end, last deferred first
//   if p {A} else {B}            (A / p | B / ¬p), or the taken arm when p folds
//
// Channel identity is not tracked: a channel contributes only its element
// type. Constant propagation is intraprocedural and flows into callees only
// through direct call-site arguments.

#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flowlock/engine.hpp"
#include "flowlock/error.hpp"
#include "flowlock/go/ast.hpp"
#include "flowlock/go/parser.hpp"
#include "flowlock/predicate.hpp"
#include "flowlock/solver.hpp"
#include "flowlock/type.hpp"

namespace flowlock::go {

using Flow = std::vector<FlowItem>;

struct GoFunction {
  std::string name;  // anon@<line> for literals
  std::vector<Field> params;
  std::vector<Field> results;
  const Block* body = nullptr;
  std::vector<std::string> captured;  // enclosing-scope variables referenced (literals only)
  int line = 0;
  bool anonymous = false;
};

struct GoProgram {
  std::string package_name;
  std::map<std::string, GoFunction> functions;
  std::map<std::string, std::string> globals;  // package-level channel variable -> element type
  std::vector<std::pair<std::string, std::string>> subtypes;  // (sub, super) from embedded fields
  std::map<std::string, GoTypePtr> type_decls;
  std::shared_ptr<const SourceFile> source;  // owns every node referenced above
};

// Facts gathered while typing, beyond the definitions themselves.
struct TypingInfo {
  std::size_t iterations = 0;         // M' applications until the fixed point
  std::map<std::string, Type> anonymous;  // literal bodies, as typed at their use site
  VariableDomains domains;            // known ranges of condition variables
};

struct TypingEnv {
  std::map<std::string, Type> channel_elem_types;
  std::map<std::string, std::int64_t> constant_values;
  Definitions def_map;
};

// ---------------------------------------------------------------------------
// AST walking

namespace detail {

struct Visitor {
  std::function<void(const Expr&)> on_expr = [](const Expr&) {};
  std::function<void(const Stmt&)> on_stmt = [](const Stmt&) {};
  bool into_literals = true;

  void block(const Block& b) const {
    for (const auto& s : b) stmt(s);
  }
  void stmt(const StmtPtr& s) const {
    if (!s) return;
    on_stmt(*s);
    for (const auto& e : s->lhs) expr(e);
    for (const auto& e : s->rhs) expr(e);
    expr(s->x);
    expr(s->y);
    stmt(s->init);
    expr(s->cond);
    stmt(s->post);
    block(s->body);
    block(s->els);
  }
  void expr(const ExprPtr& e) const {
    if (!e) return;
    on_expr(*e);
    expr(e->x);
    expr(e->y);
    for (const auto& a : e->args) expr(a);
    if (e->func && into_literals) block(e->func->body);
  }
};

inline std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

inline bool is_int_like(const GoTypePtr& t) {
  if (!t || t->kind != GoType::Kind::Name) return false;
  static const std::set<std::string> kInts = {"int",    "int8",   "int16",  "int32", "int64",   "uint",
                                              "uint8",  "uint16", "uint32", "uint64", "uintptr", "byte",
                                              "rune",   "bool"};
  return kInts.contains(t->name);
}

inline std::optional<std::int64_t> parse_int_literal(std::string text) {
  std::erase(text, '_');
  int base = 10;
  std::size_t skip = 0;
  if (text.size() > 1 && text[0] == '0') {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[1])));
    if (c == 'x') base = 16, skip = 2;
    else if (c == 'b') base = 2, skip = 2;
    else if (c == 'o') base = 8, skip = 2;
    else base = 8, skip = 1;
  }
  try {
    std::size_t used = 0;
    auto v = std::stoll(text.substr(skip), &used, base);
    if (used != text.size() - skip) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::set<std::string> assigned_names(const Block& b) {
  std::set<std::string> out;
  Visitor v;
  v.into_literals = false;
  v.on_stmt = [&](const Stmt& s) {
    if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::Range) {
      for (const auto& e : s.lhs) {
        if (e->kind == Expr::Kind::Ident) out.insert(e->text);
      }
    }
    if (s.kind == Stmt::Kind::IncDec && s.x->kind == Expr::Kind::Ident) out.insert(s.x->text);
  };
  v.block(b);
  return out;
}

// break/continue/return inside a loop body, ignoring nested loops and literals.
inline bool has_early_exit(const Block& b) {
  for (const auto& s : b) {
    switch (s->kind) {
      case Stmt::Kind::Return: return true;
      case Stmt::Kind::Branch: return true;
      case Stmt::Kind::If:
        if (has_early_exit(s->body) || has_early_exit(s->els)) return true;
        break;
      case Stmt::Kind::Block:
      case Stmt::Kind::Labeled:
        if (has_early_exit(s->body)) return true;
        break;
      default: break;
    }
  }
  return false;
}

inline const FuncLit* as_literal(const ExprPtr& e) {
  const Expr* x = e.get();
  while (x && x->kind == Expr::Kind::Paren) x = x->x.get();
  return x && x->kind == Expr::Kind::FuncLit ? x->func.get() : nullptr;
}

}  // namespace detail

// Concrete name of a Go type: int -> Int, time.Time -> Time, *T -> T.
inline std::string concrete_name(const GoTypePtr& t) {
  using K = GoType::Kind;
  if (!t) return "Unknown";
  switch (t->kind) {
    case K::Name: {
      auto dot = t->name.rfind('.');
      return detail::capitalize(dot == std::string::npos ? t->name : t->name.substr(dot + 1));
    }
    case K::Pointer: return concrete_name(t->elem);
    case K::Slice: return "SliceOf" + concrete_name(t->elem);
    case K::Array: return "ArrayOf" + concrete_name(t->elem);
    case K::Chan: return "ChanOf" + concrete_name(t->elem);
    case K::Map: return "Map";
    case K::Func: return "Func";
    case K::Struct: return "Struct";
    case K::Interface: return "Interface";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Program assembly

inline GoProgram build_program(SourceFile file) {
  GoProgram p;
  auto src = std::make_shared<const SourceFile>(std::move(file));
  p.source = src;
  p.package_name = src->package_name;
  for (const auto& t : src->types) {
    p.type_decls[t.name] = t.type;
    if (t.type->kind != GoType::Kind::Struct) continue;
    for (const auto& f : t.type->fields) {
      if (f.name.empty()) p.subtypes.emplace_back(detail::capitalize(t.name), concrete_name(f.type));
    }
  }
  for (const auto& g : src->globals) {
    if (g->kind != Stmt::Kind::VarDecl) continue;
    for (std::size_t i = 0; i < g->names.size(); ++i) {
      GoTypePtr t = g->type;
      if (!t && i < g->rhs.size() && g->rhs[i]->kind == Expr::Kind::Call && !g->rhs[i]->args.empty() &&
          g->rhs[i]->x->kind == Expr::Kind::Ident && g->rhs[i]->x->text == "make") {
        t = g->rhs[i]->args.front()->type;
      }
      if (t && t->kind == GoType::Kind::Chan) p.globals[g->names[i]] = concrete_name(t->elem);
    }
  }
  std::set<std::string> builtins = {"true", "false", "nil", "iota", "len", "cap", "make", "new", "append",
                                    "panic", "print", "println", "copy", "delete", "recover", "_"};
  for (const auto& imp : src->imports) builtins.insert(imp.substr(imp.rfind('/') + 1));
  for (const auto& fn : src->functions) {
    if (p.functions.contains(fn.name) && fn.name != "init") {
      throw FlowError(ErrorCode::SyntaxError, "line " + std::to_string(fn.line) + ": function " + fn.name +
                                                  " redeclared");
    }
    GoFunction g{fn.name, fn.params, fn.results, &fn.body, {}, fn.line, false};
    p.functions.emplace(fn.name, g);

    // Names declared anywhere in the enclosing function.
    std::set<std::string> outer;
    for (const auto& f : fn.params) outer.insert(f.name);
    detail::Visitor decl;
    decl.on_stmt = [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::Define || (s.kind == Stmt::Kind::Range && s.define)) {
        for (const auto& e : s.lhs) outer.insert(e->text);
      }
      if (s.kind == Stmt::Kind::VarDecl || s.kind == Stmt::Kind::ConstDecl) outer.insert(s.names.begin(), s.names.end());
    };
    decl.block(fn.body);

    detail::Visitor lits;
    lits.on_expr = [&](const Expr& e) {
      if (e.kind != Expr::Kind::FuncLit) return;
      const FuncLit& lit = *e.func;
      GoFunction a{lit.name, lit.sig->params, lit.sig->results, &lit.body, {}, lit.line, true};
      std::set<std::string> local;
      for (const auto& f : lit.sig->params) local.insert(f.name);
      std::set<std::string> used;
      detail::Visitor inner;
      inner.on_stmt = [&](const Stmt& s) {
        if (s.kind == Stmt::Kind::Define || (s.kind == Stmt::Kind::Range && s.define)) {
          for (const auto& x : s.lhs) local.insert(x->text);
        }
        if (s.kind == Stmt::Kind::VarDecl) local.insert(s.names.begin(), s.names.end());
      };
      inner.on_expr = [&](const Expr& x) {
        if (x.kind == Expr::Kind::Ident) used.insert(x.text);
      };
      inner.block(lit.body);
      for (const auto& n : used) {
        if (!local.contains(n) && outer.contains(n) && !builtins.contains(n)) a.captured.push_back(n);
      }
      p.functions.emplace(lit.name, std::move(a));
    };
    lits.block(fn.body);
  }
  if (!p.functions.contains("main")) throw FlowError(ErrorCode::UnknownDefinition, "no main function");
  return p;
}

inline GoProgram parse_program(std::string_view source) { return build_program(parse(source)); }

// ---------------------------------------------------------------------------
// Membership of M

namespace detail {

// Direct channel use: a send, a receive, or a timer channel.
inline bool uses_channels(const Block& body) {
  bool found = false;
  Visitor v;
  v.on_stmt = [&](const Stmt& s) { found = found || s.kind == Stmt::Kind::Send; };
  v.on_expr = [&](const Expr& e) {
    found = found || (e.kind == Expr::Kind::Unary && e.text == "<-") ||
            (e.kind == Expr::Kind::Selector && e.x->kind == Expr::Kind::Ident && e.x->text == "time" &&
             e.text == "After");
  };
  v.block(body);
  return found;
}

inline std::set<std::string> callees(const Block& body) {
  std::set<std::string> out;
  Visitor v;
  v.on_expr = [&](const Expr& e) {
    if (e.kind == Expr::Kind::Call && e.x->kind == Expr::Kind::Ident) out.insert(e.x->text);
  };
  v.block(body);
  return out;
}

}  // namespace detail

// One application of M': the functions that use channels directly or call,
// start, or defer a member of `current`.
inline std::set<std::string> coroutine_step(const GoProgram& prog, const std::set<std::string>& current) {
  std::set<std::string> next;
  for (const auto& [name, fn] : prog.functions) {
    if (fn.anonymous) continue;
    bool member = detail::uses_channels(*fn.body);
    if (!member) {
      for (const auto& c : detail::callees(*fn.body)) {
        if (current.contains(c)) {
          member = true;
          break;
        }
      }
    }
    if (member) next.insert(name);
  }
  return next;
}

// ---------------------------------------------------------------------------
// Statement typing

class Typer {
 public:
  Typer(const GoProgram& prog, std::set<std::string> members) : prog_(prog), members_(std::move(members)) {
    scopes_.emplace_back();
    Flow sink;
    for (const auto& g : prog_.source->globals) stmt(*g, sink);
    globals_ = scopes_.front();
  }

  // Flow of a named function; parameters stay symbolic.
  Flow function_flow(const GoFunction& fn) {
    auto saved = std::move(scopes_);
    scopes_ = {globals_, Frame{}};
    declare_params(fn.params, {});
    Flow f = body_flow(*fn.body);
    scopes_ = std::move(saved);
    return f;
  }

  // Typing of a single statement in the current environment (exposed for tests).
  Flow type_stmt(const Stmt& s) {
    Flow out;
    ctxs_.emplace_back();
    stmt(s, out);
    finish_defers(out);
    ctxs_.pop_back();
    return out;
  }

  void declare_channel(const std::string& name, const std::string& elem_go_type) {
    GoType chan;
    chan.kind = GoType::Kind::Chan;
    chan.elem = make_type(GoType{GoType::Kind::Name, elem_go_type, {}, {}, {}, {}, {}});
    scopes_.back()[name] = VarInfo{make_type(std::move(chan)), std::nullopt, nullptr, std::nullopt};
  }

  TypingEnv env() const {
    TypingEnv e;
    for (const auto& frame : scopes_) {
      for (const auto& [n, v] : frame) {
        auto t = resolve(v.type);
        if (t && t->kind == GoType::Kind::Chan) e.channel_elem_types[n] = Type::concrete(concrete_name(t->elem));
        if (v.value) e.constant_values[n] = *v.value;
      }
    }
    return e;
  }

  std::map<std::string, Type> anonymous;
  VariableDomains domains;

 private:
  struct VarInfo {
    GoTypePtr type;
    std::optional<std::int64_t> value;
    const FuncLit* func = nullptr;
    std::optional<std::size_t> length;
  };
  using Frame = std::map<std::string, VarInfo>;

  struct Deferred {
    Flow items;
    Predicate guard;
  };
  struct Ctx {
    std::vector<Deferred> defers;
    std::vector<Predicate> guard;
  };

  static constexpr std::size_t kMaxUnroll = 64;

  // -- scopes ----------------------------------------------------------------

  VarInfo* lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void declare(const std::string& name, VarInfo v) {
    if (name != "_") scopes_.back()[name] = std::move(v);
  }

  void invalidate(const std::set<std::string>& names) {
    for (const auto& n : names) {
      if (auto* v = lookup(n)) {
        v->value.reset();
        v->length.reset();
      }
    }
  }

  void declare_params(const std::vector<Field>& params, const std::vector<ExprPtr>& args) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      VarInfo v{params[i].type, std::nullopt, nullptr, std::nullopt};
      if (i < args.size()) {
        v.value = const_eval(args[i]);
        v.func = detail::as_literal(args[i]);
        if (!v.func && args[i]->kind == Expr::Kind::Ident) {
          if (auto* a = lookup(args[i]->text)) v.func = a->func;
        }
      }
      declare(params[i].name, std::move(v));
    }
  }

  GoTypePtr resolve(GoTypePtr t) const {
    for (int i = 0; t && t->kind == GoType::Kind::Name && i < 16; ++i) {
      auto it = prog_.type_decls.find(t->name);
      if (it == prog_.type_decls.end()) break;
      t = it->second;
    }
    return t;
  }

  // -- static types ----------------------------------------------------------

  static GoTypePtr named(const std::string& n) { return make_type(GoType{GoType::Kind::Name, n, {}, {}, {}, {}, {}}); }

  const GoFunction* named_function(const ExprPtr& callee) {
    if (callee->kind != Expr::Kind::Ident || lookup(callee->text)) return nullptr;
    auto it = prog_.functions.find(callee->text);
    return it == prog_.functions.end() || it->second.anonymous ? nullptr : &it->second;
  }

  static bool is_time_after(const ExprPtr& callee) {
    return callee->kind == Expr::Kind::Selector && callee->x->kind == Expr::Kind::Ident && callee->x->text == "time" &&
           callee->text == "After";
  }

  std::vector<GoTypePtr> result_types(const Expr& call) {
    if (auto* fn = named_function(call.x)) {
      std::vector<GoTypePtr> out;
      for (const auto& r : fn->results) out.push_back(r.type);
      return out;
    }
    if (const auto* lit = detail::as_literal(call.x)) {
      std::vector<GoTypePtr> out;
      for (const auto& r : lit->sig->results) out.push_back(r.type);
      return out;
    }
    if (call.x->kind == Expr::Kind::Ident) {
      const std::string& n = call.x->text;
      if ((n == "make" || n == "new") && !call.args.empty() && call.args.front()->type) {
        if (n == "new") {
          GoType p;
          p.kind = GoType::Kind::Pointer;
          p.elem = call.args.front()->type;
          return {make_type(std::move(p))};
        }
        return {call.args.front()->type};
      }
      if (auto* v = lookup(n)) {
        auto t = resolve(v->type);
        if (t && t->kind == GoType::Kind::Func) {
          std::vector<GoTypePtr> out;
          for (const auto& r : t->results) out.push_back(r.type);
          return out;
        }
      }
    }
    if (is_time_after(call.x)) {
      GoType c;
      c.kind = GoType::Kind::Chan;
      c.elem = named("time.Time");
      return {make_type(std::move(c))};
    }
    return {};
  }

  GoTypePtr static_type(const ExprPtr& e) {
    using K = Expr::Kind;
    if (!e) return nullptr;
    switch (e->kind) {
      case K::Ident: {
        if (auto* v = lookup(e->text)) return v->type;
        if (e->text == "true" || e->text == "false") return named("bool");
        return nullptr;
      }
      case K::BasicLit:
        if (e->text.front() == '"' || e->text.front() == '`') return named("string");
        if (e->text.front() == '\'') return named("rune");
        return named(e->text.find_first_of(".eE") != std::string::npos && e->text.substr(0, 2) != "0x"
                         ? "float64"
                         : "int");
      case K::Paren: return static_type(e->x);
      case K::Composite:
      case K::TypeExpr: return e->type;
      case K::Call: {
        auto r = result_types(*e);
        return r.empty() ? nullptr : r.front();
      }
      case K::Unary: {
        auto t = resolve(static_type(e->x));
        if (e->text == "<-") return t && t->kind == GoType::Kind::Chan ? t->elem : nullptr;
        if (e->text == "&") {
          GoType p;
          p.kind = GoType::Kind::Pointer;
          p.elem = static_type(e->x);
          return make_type(std::move(p));
        }
        if (e->text == "*") return t && t->kind == GoType::Kind::Pointer ? t->elem : nullptr;
        if (e->text == "!") return named("bool");
        return static_type(e->x);
      }
      case K::Binary: {
        static const std::set<std::string> kBool = {"==", "!=", "<", "<=", ">", ">=", "&&", "||"};
        if (kBool.contains(e->text)) return named("bool");
        auto t = static_type(e->x);
        return t ? t : static_type(e->y);
      }
      case K::Index: {
        auto t = resolve(static_type(e->x));
        if (t && (t->kind == GoType::Kind::Slice || t->kind == GoType::Kind::Array || t->kind == GoType::Kind::Map)) {
          return t->elem;
        }
        return nullptr;
      }
      case K::SliceExpr: return static_type(e->x);
      case K::Selector: {
        auto t = resolve(static_type(e->x));
        if (t && t->kind == GoType::Kind::Pointer) t = resolve(t->elem);
        if (!t || t->kind != GoType::Kind::Struct) return nullptr;
        return field_type(*t, e->text, 0);
      }
      case K::FuncLit: return e->func->sig;
      case K::TypeAssert: return e->type;
      case K::KeyValue: return static_type(e->y);
    }
    return nullptr;
  }

  GoTypePtr field_type(const GoType& st, const std::string& field, int depth) const {
    for (const auto& f : st.fields) {
      if (f.name == field) return f.type;
    }
    if (depth > 8) return nullptr;
    for (const auto& f : st.fields) {
      if (!f.name.empty()) continue;
      auto t = resolve(f.type);
      if (t && t->kind == GoType::Kind::Struct) {
        if (auto r = field_type(*t, field, depth + 1)) return r;
      }
    }
    return nullptr;
  }

  Type chan_elem(const ExprPtr& ch) {
    auto t = resolve(static_type(ch));
    if (!t || t->kind != GoType::Kind::Chan) {
      std::string what = ch->kind == Expr::Kind::Ident ? "'" + ch->text + "'" : "channel expression";
      throw FlowError(ErrorCode::UnknownChannel,
                      "cannot resolve the element type of " + what + " at line " + std::to_string(ch->line));
    }
    return Type::concrete(concrete_name(t->elem));
  }

  // -- constant propagation ------------------------------------------------

  std::optional<std::int64_t> const_eval(const ExprPtr& e) {
    using K = Expr::Kind;
    if (!e) return std::nullopt;
    switch (e->kind) {
      case K::BasicLit:
        if (std::isdigit(static_cast<unsigned char>(e->text.front()))) return detail::parse_int_literal(e->text);
        return std::nullopt;
      case K::Ident: {
        if (auto* v = lookup(e->text)) return v->value;
        if (e->text == "true") return 1;
        if (e->text == "false") return 0;
        return std::nullopt;
      }
      case K::Paren: return const_eval(e->x);
      case K::Unary: {
        auto v = const_eval(e->x);
        if (!v) return std::nullopt;
        if (e->text == "-") return -*v;
        if (e->text == "+") return *v;
        if (e->text == "!") return *v ? 0 : 1;
        if (e->text == "^") return ~*v;
        return std::nullopt;
      }
      case K::Binary: {
        const std::string& op = e->text;
        auto a = const_eval(e->x);
        if (op == "&&" && a && !*a) return 0;
        if (op == "||" && a && *a) return 1;
        auto b = const_eval(e->y);
        if (!a || !b) return std::nullopt;
        if (op == "+") return *a + *b;
        if (op == "-") return *a - *b;
        if (op == "*") return *a * *b;
        if (op == "/") return *b ? std::optional<std::int64_t>(*a / *b) : std::nullopt;
        if (op == "%") return *b ? std::optional<std::int64_t>(*a % *b) : std::nullopt;
        if (op == "<<" && *b >= 0 && *b < 63) return *a << *b;
        if (op == ">>" && *b >= 0 && *b < 63) return *a >> *b;
        if (op == "&") return *a & *b;
        if (op == "|") return *a | *b;
        if (op == "^") return *a ^ *b;
        if (op == "==") return *a == *b;
        if (op == "!=") return *a != *b;
        if (op == "<") return *a < *b;
        if (op == "<=") return *a <= *b;
        if (op == ">") return *a > *b;
        if (op == ">=") return *a >= *b;
        if (op == "&&") return *a && *b;
        if (op == "||") return *a || *b;
        return std::nullopt;
      }
      case K::Call:
        if (e->x->kind == Expr::Kind::Ident && e->x->text == "len" && e->args.size() == 1) {
          if (auto n = length_of(e->args.front())) return static_cast<std::int64_t>(*n);
        }
        return std::nullopt;
      default: return std::nullopt;
    }
  }

  std::optional<std::size_t> length_of(const ExprPtr& e) {
    if (!e) return std::nullopt;
    if (e->kind == Expr::Kind::Composite) return e->args.size();
    if (e->kind == Expr::Kind::Ident) {
      if (auto* v = lookup(e->text)) return v->length;
    }
    if (e->kind == Expr::Kind::BasicLit && e->text.front() == '"') return e->text.size() - 2;
    return std::nullopt;
  }

  // rand.Intn(n) + k, in either operand order, has range [k, k+n-1].
  std::optional<Interval> random_range(const ExprPtr& e) {
    if (!e) return std::nullopt;
    if (e->kind == Expr::Kind::Paren) return random_range(e->x);
    if (e->kind == Expr::Kind::Call && e->x->kind == Expr::Kind::Selector && e->x->x->kind == Expr::Kind::Ident &&
        e->x->x->text == "rand" && (e->x->text == "Intn" || e->x->text == "Int63n" || e->x->text == "Int31n") &&
        e->args.size() == 1) {
      auto n = const_eval(e->args.front());
      if (n && *n > 0) return Interval{0, *n - 1};
      return Interval{0, std::nullopt};
    }
    if (e->kind == Expr::Kind::Binary && (e->text == "+" || e->text == "-")) {
      auto r = random_range(e->x);
      auto k = const_eval(e->y);
      if (!r && e->text == "+") {
        r = random_range(e->y);
        k = const_eval(e->x);
      }
      if (r && k) {
        std::int64_t d = e->text == "+" ? *k : -*k;
        return Interval{r->lo ? std::optional(*r->lo + d) : std::nullopt, r->hi ? std::optional(*r->hi + d) : std::nullopt};
      }
    }
    return std::nullopt;
  }

  // -- conditions ----------------------------------------------------------

  std::optional<Term> to_term(const ExprPtr& e) {
    if (auto v = const_eval(e)) return Term::integer(*v);
    if (e->kind == Expr::Kind::Paren) return to_term(e->x);
    if (e->kind == Expr::Kind::Ident) {
      auto* v = lookup(e->text);
      if (v && (!v->type || detail::is_int_like(resolve(v->type)))) return Term::var(e->text);
    }
    return std::nullopt;
  }

  Predicate opaque(int line) {
    std::string name = "cond@" + std::to_string(line);
    for (int k = 2; used_opaque_.contains(name); ++k) name = "cond@" + std::to_string(line) + "_" + std::to_string(k);
    used_opaque_.insert(name);
    domains[name] = Interval{0, 1};
    return Predicate::cmp(Term::var(name), CmpOp::Eq, Term::integer(1));
  }

  Predicate to_pred(const ExprPtr& e) {
    if (auto v = const_eval(e)) return *v ? Predicate::truth() : Predicate::falsity();
    switch (e->kind) {
      case Expr::Kind::Paren: return to_pred(e->x);
      case Expr::Kind::Unary:
        if (e->text == "!") return Predicate::negate(to_pred(e->x));
        break;
      case Expr::Kind::Ident: {
        auto* v = lookup(e->text);
        if (v && v->type && resolve(v->type)->kind == GoType::Kind::Name && resolve(v->type)->name == "bool") {
          if (!domains.contains(e->text)) domains[e->text] = Interval{0, 1};
          return Predicate::cmp(Term::var(e->text), CmpOp::Eq, Term::integer(1));
        }
        break;
      }
      case Expr::Kind::Binary: {
        const std::string& op = e->text;
        if (op == "&&") return Predicate::conj(to_pred(e->x), to_pred(e->y));
        if (op == "||") return Predicate::disj(to_pred(e->x), to_pred(e->y));
        static const std::map<std::string, CmpOp> kOps = {
            {"<", CmpOp::Lt}, {"<=", CmpOp::Le}, {"==", CmpOp::Eq}, {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
        if (kOps.contains(op) || op == "!=") {
          auto l = to_term(e->x);
          auto r = to_term(e->y);
          if (l && r) {
            if (op == "!=") return Predicate::negate(Predicate::cmp(*l, CmpOp::Eq, *r));
            return Predicate::cmp(*l, kOps.at(op), *r);
          }
        }
        break;
      }
      default: break;
    }
    return opaque(e->line);
  }

  Bindings bind_args(const std::vector<Field>& params, const std::vector<ExprPtr>& args) {
    Bindings b;
    for (std::size_t i = 0; i < params.size() && i < args.size(); ++i) {
      const Field& f = params[i];
      if (f.name.empty() || f.name == "_" || f.variadic || !detail::is_int_like(resolve(f.type))) continue;
      if (auto v = const_eval(args[i])) {
        b[f.name] = Term::integer(*v);
      } else if (auto t = to_term(args[i]); t && t->is_var()) {
        b[f.name] = *t;
      } else {
        b[f.name] = Term::var(f.name);
      }
    }
    return b;
  }

  // -- items -----------------------------------------------------------------

  void expr_items(const ExprPtr& e, Flow& out) {
    if (!e) return;
    switch (e->kind) {
      case Expr::Kind::FuncLit:
      case Expr::Kind::TypeExpr: return;
      case Expr::Kind::Unary:
        expr_items(e->x, out);
        if (e->text == "<-") out.push_back(FlowItem::receive(chan_elem(e->x)));
        return;
      case Expr::Kind::Call: call_items(*e, out); return;
      default:
        expr_items(e->x, out);
        expr_items(e->y, out);
        for (const auto& a : e->args) expr_items(a, out);
    }
  }

  const FuncLit* literal_callee(const ExprPtr& callee) {
    if (const auto* lit = detail::as_literal(callee)) return lit;
    if (callee->kind == Expr::Kind::Ident) {
      if (auto* v = lookup(callee->text)) return v->func;
    }
    return nullptr;
  }

  void args_items(const Expr& call, Flow& out) {
    for (const auto& a : call.args) expr_items(a, out);
  }

  void call_items(const Expr& call, Flow& out) {
    if (const auto* fn = named_function(call.x)) {
      args_items(call, out);
      if (members_.contains(fn->name)) {
        out.push_back(FlowItem::yield(Type::inline_app(Type::ref(fn->name), bind_args(fn->params, call.args))));
      }
      return;
    }
    if (const auto* lit = literal_callee(call.x)) {
      args_items(call, out);
      Flow body = literal_flow(*lit, call.args);
      out.insert(out.end(), body.begin(), body.end());
      return;
    }
    if (is_time_after(call.x)) {
      args_items(call, out);
      out.push_back(FlowItem::yield(Type::start(Type::cordef({FlowItem::yield(Type::concrete("Time"))}))));
      return;
    }
    expr_items(call.x, out);
    args_items(call, out);
  }

  Flow literal_flow(const FuncLit& lit, const std::vector<ExprPtr>& args) {
    scopes_.emplace_back();
    declare_params(lit.sig->params, args);
    Flow f = body_flow(lit.body);
    scopes_.pop_back();
    anonymous[lit.name] = Type::cordef(f);
    return f;
  }

  Flow body_flow(const Block& body) {
    ctxs_.emplace_back();
    Flow f;
    scopes_.emplace_back();
    block(body, 0, f);
    scopes_.pop_back();
    finish_defers(f);
    ctxs_.pop_back();
    return f;
  }

  void finish_defers(Flow& f) {
    auto& defers = ctxs_.back().defers;
    for (auto it = defers.rbegin(); it != defers.rend(); ++it) {
      if (it->guard.is_true()) {
        f.insert(f.end(), it->items.begin(), it->items.end());
      } else {
        emit_union(it->guard, it->items, {}, f);
      }
    }
    defers.clear();
  }

  Predicate current_guard() const { return Predicate::conj(ctxs_.back().guard); }

  static void emit_union(const Predicate& p, const Flow& thn, const Flow& els, Flow& out) {
    if (thn.empty() && els.empty()) return;
    Predicate np = Predicate::negate(p);
    bool single = thn.size() <= 1 && els.size() <= 1 && (thn.empty() || els.empty() || thn[0].dir == els[0].dir);
    if (single) {
      Dir d = thn.empty() ? els[0].dir : thn[0].dir;
      Type a = thn.empty() ? Type::zero() : thn[0].payload;
      Type b = els.empty() ? Type::zero() : els[0].payload;
      out.push_back(FlowItem{d, Type::union_of({Type::constrained(a, p), Type::constrained(b, np)})});
      return;
    }
    auto frag = [](const Flow& f) { return f.empty() ? Type::zero() : Type::cordef(f); };
    out.push_back(FlowItem::yield(Type::union_of({Type::constrained(frag(thn), p), Type::constrained(frag(els), np)})));
  }

  // -- statements ------------------------------------------------------------

  // Returns true when control cannot fall off the end of b[from..].
  bool block(const Block& b, std::size_t from, Flow& out) {
    for (std::size_t i = from; i < b.size(); ++i) {
      const Stmt& s = *b[i];
      switch (s.kind) {
        case Stmt::Kind::If: return if_stmt(s, b, i + 1, out);
        case Stmt::Kind::Return:
          for (const auto& e : s.rhs) expr_items(e, out);
          return true;
        case Stmt::Kind::Block: {
          if (s.text == "decl") {
            stmt(s, out);
            break;
          }
          scopes_.emplace_back();
          bool t = block(s.body, 0, out);
          scopes_.pop_back();
          if (t) return true;
          break;
        }
        default: stmt(s, out);
      }
    }
    return false;
  }

  bool if_stmt(const Stmt& s, const Block& b, std::size_t next, Flow& out) {
    scopes_.emplace_back();
    if (s.init) stmt(*s.init, out);
    Predicate p = to_pred(s.cond);
    // By index: typing an arm may push contexts and reallocate ctxs_.
    const std::size_t ci = ctxs_.size() - 1;
    auto guard = [this, ci]() -> std::vector<Predicate>& { return ctxs_[ci].guard; };

    auto arm = [&](const Block& body, const Predicate& g, Flow& f) {
      guard().push_back(g);
      scopes_.emplace_back();
      bool t = block(body, 0, f);
      scopes_.pop_back();
      guard().pop_back();
      return t;
    };

    if (p.is_true() || p.is_false()) {
      Flow f;
      bool t = arm(p.is_true() ? s.body : s.els, Predicate::truth(), f);
      scopes_.pop_back();
      out.insert(out.end(), f.begin(), f.end());
      return t || block(b, next, out);
    }

    auto before = scopes_;
    Flow thn, els;
    bool tt = arm(s.body, p, thn);
    auto after_then = scopes_;
    scopes_ = before;
    bool te = arm(s.els, Predicate::negate(p), els);
    auto after_else = scopes_;

    // A returning arm pulls the rest of the block into the other arm.
    bool pulled = false;
    if (tt != te) {
      pulled = true;
      bool into_else = tt;
      scopes_ = into_else ? after_else : after_then;
      scopes_.pop_back();
      guard().push_back(into_else ? Predicate::negate(p) : p);
      block(b, next, into_else ? els : thn);
      guard().pop_back();
    }
    scopes_ = before;
    scopes_.pop_back();
    emit_union(p, thn, els, out);
    if (pulled || (tt && te)) return true;
    auto changed = detail::assigned_names(s.body);
    auto more = detail::assigned_names(s.els);
    changed.insert(more.begin(), more.end());
    invalidate(changed);
    return block(b, next, out);
  }

  void define(const std::vector<ExprPtr>& lhs, const std::vector<ExprPtr>& rhs, const GoTypePtr& declared) {
    std::vector<GoTypePtr> multi;
    if (rhs.size() == 1 && lhs.size() > 1) {
      const auto& r = rhs.front();
      if (r->kind == Expr::Kind::Call) {
        multi = result_types(*r);
      } else if (r->kind == Expr::Kind::Unary && r->text == "<-") {
        multi = {static_type(r), named("bool")};
      } else if (r->kind == Expr::Kind::Index) {
        multi = {static_type(r), named("bool")};
      }
    }
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      VarInfo v;
      v.type = declared;
      if (rhs.size() == lhs.size()) {
        const auto& r = rhs[i];
        if (!v.type) v.type = static_type(r);
        v.value = const_eval(r);
        v.func = detail::as_literal(r);
        if (!v.func && r->kind == Expr::Kind::Ident) {
          if (auto* src = lookup(r->text)) v.func = src->func;
        }
        v.length = length_of(r);
        if (auto range = random_range(r)) {
          domains[lhs[i]->text] = *range;
          if (!v.type) v.type = named("int");
        }
      } else if (i < multi.size() && !v.type) {
        v.type = multi[i];
      }
      if (rhs.empty() && v.type && detail::is_int_like(resolve(v.type))) v.value = 0;
      declare(lhs[i]->text, std::move(v));
    }
  }

  void assign(const Stmt& s) {
    const std::string& op = s.text;
    for (std::size_t i = 0; i < s.lhs.size(); ++i) {
      const auto& l = s.lhs[i];
      if (l->kind != Expr::Kind::Ident) continue;
      auto* v = lookup(l->text);
      if (!v) continue;
      if (op == "=" && s.lhs.size() == s.rhs.size()) {
        v->value = const_eval(s.rhs[i]);
        v->length = length_of(s.rhs[i]);
        if (const auto* lit = detail::as_literal(s.rhs[i])) v->func = lit;
        if (auto range = random_range(s.rhs[i])) domains[l->text] = *range;
      } else if (op != "=" && s.rhs.size() == 1 && v->value) {
        Expr bin;
        bin.kind = Expr::Kind::Binary;
        bin.text = op.substr(0, op.size() - 1);
        bin.x = l;
        bin.y = s.rhs.front();
        v->value = const_eval(make_expr(std::move(bin)));
      } else {
        v->value.reset();
        v->length.reset();
      }
    }
  }

  void spawn_or_defer(const Stmt& s, Flow& out) {
    const Expr& call = *s.x;
    bool is_go = s.kind == Stmt::Kind::Go;
    Flow deferred;
    if (const auto* fn = named_function(call.x)) {
      args_items(call, out);
      if (members_.contains(fn->name)) {
        Bindings b = bind_args(fn->params, call.args);
        Type app = is_go ? Type::start(Type::ref(fn->name), b) : Type::inline_app(Type::ref(fn->name), b);
        if (is_go) out.push_back(FlowItem::yield(app));
        else deferred.push_back(FlowItem::yield(app));
      }
    } else if (const auto* lit = literal_callee(call.x)) {
      args_items(call, out);
      Flow body = literal_flow(*lit, call.args);
      if (is_go && !body.empty()) out.push_back(FlowItem::yield(Type::start(Type::cordef(body))));
      if (!is_go) deferred = std::move(body);
    } else if (is_time_after(call.x)) {
      args_items(call, out);
    } else {
      expr_items(call.x, out);
      args_items(call, out);
    }
    if (!deferred.empty()) ctxs_.back().defers.push_back(Deferred{std::move(deferred), current_guard()});
  }

  void stmt(const Stmt& s, Flow& out) {
    using K = Stmt::Kind;
    switch (s.kind) {
      case K::Expr: expr_items(s.x, out); return;
      case K::Send:
        expr_items(s.x, out);
        expr_items(s.y, out);
        out.push_back(FlowItem::yield(chan_elem(s.x)));
        return;
      case K::IncDec:
        if (s.x->kind == Expr::Kind::Ident) {
          if (auto* v = lookup(s.x->text); v && v->value) *v->value += s.text == "++" ? 1 : -1;
        } else {
          expr_items(s.x, out);
        }
        return;
      case K::Assign:
        for (const auto& l : s.lhs) {
          if (l->kind != Expr::Kind::Ident) expr_items(l, out);
        }
        for (const auto& r : s.rhs) expr_items(r, out);
        assign(s);
        return;
      case K::Define:
      case K::VarDecl:
      case K::ConstDecl: {
        for (const auto& r : s.rhs) expr_items(r, out);
        if (s.kind == K::Define) {
          define(s.lhs, s.rhs, nullptr);
        } else {
          std::vector<ExprPtr> names;
          for (const auto& n : s.names) names.push_back(ident_expr(n, s.line));
          define(names, s.rhs, s.type);
        }
        return;
      }
      case K::Go:
      case K::Defer: spawn_or_defer(s, out); return;
      case K::Return:
      case K::If:
      case K::Block: {
        Block one{std::make_shared<const Stmt>(s)};
        block(one, 0, out);
        return;
      }
      case K::For:
      case K::Range: loop(s, out); return;
      case K::Labeled:
        for (const auto& inner : s.body) stmt(*inner, out);
        return;
      case K::Branch:
      case K::Empty: return;
    }
  }

  [[noreturn]] static void unbounded(const Stmt& s) {
    unsupported("loop with channel operations and no constant trip count", s.line);
  }

  void loop(const Stmt& s, Flow& out) {
    if (s.kind == Stmt::Kind::Range) {
      auto over = resolve(static_type(s.x));
      if (over && over->kind == GoType::Kind::Chan) unsupported("range over a channel", s.line);
    }
    // A loop without channel interaction only disturbs constants.
    {
      auto saved = scopes_;
      std::size_t defers = ctxs_.back().defers.size();
      Flow probe;
      scopes_.emplace_back();
      if (s.init) stmt(*s.init, probe);
      if (s.kind == Stmt::Kind::Range) expr_items(s.x, probe);
      if (s.cond) expr_items(s.cond, probe);
      declare_range_vars(s, 0);
      scopes_.emplace_back();
      block(s.body, 0, probe);
      if (s.post) stmt(*s.post, probe);
      bool quiet = probe.empty() && ctxs_.back().defers.size() == defers;
      scopes_ = std::move(saved);
      ctxs_.back().defers.resize(defers);
      if (quiet) {
        auto changed = detail::assigned_names(s.body);
        if (s.post) changed.merge(detail::assigned_names(Block{s.post}));
        invalidate(changed);
        return;
      }
    }
    if (detail::has_early_exit(s.body)) unsupported("early exit from a loop with channel operations", s.line);

    scopes_.emplace_back();
    if (s.kind == Stmt::Kind::For) {
      if (s.init) stmt(*s.init, out);
      if (!s.cond) unbounded(s);
      for (std::size_t n = 0;; ++n) {
        auto c = const_eval(s.cond);
        if (!c) unbounded(s);
        if (!*c) break;
        if (n >= kMaxUnroll) unbounded(s);
        scopes_.emplace_back();
        block(s.body, 0, out);
        scopes_.pop_back();
        if (s.post) stmt(*s.post, out);
      }
    } else {
      expr_items(s.x, out);
      std::optional<std::size_t> n = length_of(s.x);
      if (!n) {
        if (auto k = const_eval(s.x); k && *k >= 0) n = static_cast<std::size_t>(*k);
      }
      if (!n || *n > kMaxUnroll) unbounded(s);
      for (std::size_t i = 0; i < *n; ++i) {
        scopes_.emplace_back();
        declare_range_vars(s, static_cast<std::int64_t>(i));
        block(s.body, 0, out);
        scopes_.pop_back();
      }
    }
    scopes_.pop_back();
  }

  void declare_range_vars(const Stmt& s, std::int64_t index) {
    if (s.kind != Stmt::Kind::Range || s.lhs.empty()) return;
    auto t = resolve(static_type(s.x));
    GoTypePtr elem = t && (t->kind == GoType::Kind::Slice || t->kind == GoType::Kind::Array ||
                           t->kind == GoType::Kind::Map)
                         ? t->elem
                         : nullptr;
    if (s.lhs[0]->kind == Expr::Kind::Ident) declare(s.lhs[0]->text, VarInfo{named("int"), index, nullptr, std::nullopt});
    if (s.lhs.size() > 1 && s.lhs[1]->kind == Expr::Kind::Ident) {
      declare(s.lhs[1]->text, VarInfo{elem, std::nullopt, nullptr, std::nullopt});
    }
  }

  const GoProgram& prog_;
  std::set<std::string> members_;
  std::vector<Frame> scopes_;
  Frame globals_;
  std::vector<Ctx> ctxs_{Ctx{}};
  std::set<std::string> used_opaque_;
};

// ---------------------------------------------------------------------------
// M as a fixed point

// Iterates M' from the empty map; each member is translated to its definition.
inline Definitions compute_m(const GoProgram& prog, TypingInfo* info = nullptr) {
  std::set<std::string> members;
  std::size_t iterations = 0;
  for (;;) {
    auto next = coroutine_step(prog, members);
    ++iterations;
    if (next == members) break;
    members = std::move(next);
  }
  Typer typer(prog, members);
  Definitions defs;
  for (const auto& [name, fn] : prog.functions) {
    if (fn.anonymous) continue;
    // Non-members are typed too, so that gated constructs such as ranging
    // over a channel are reported wherever they occur; their flow is empty.
    Flow f = typer.function_flow(fn);
    if (members.contains(name)) defs[name] = Type::cordef(std::move(f));
  }
  if (info) {
    info->iterations = iterations;
    info->anonymous = typer.anonymous;
    info->domains = typer.domains;
  }
  return defs;
}

}  // namespace flowlock::go
