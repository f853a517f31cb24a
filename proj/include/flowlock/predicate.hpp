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

// The constraint language attached to constrained types: boolean connectives
// over integer comparisons, symbol equality, variable bindings and named
// closed-world relations. Constructors normalize eagerly (And/Or are n-ary and
// flat, false absorbs conjunctions, ground comparisons fold to constants), so
// structural equality is the equality used everywhere else.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowlock/error.hpp"

namespace flowlock {

struct Term {
  enum class Kind : std::uint8_t { Var, Int, Sym };

  Kind kind = Kind::Int;
  std::string name;
  std::int64_t value = 0;

  static Term var(std::string n) { return Term{Kind::Var, std::move(n), 0}; }
  static Term integer(std::int64_t v) { return Term{Kind::Int, {}, v}; }
  static Term sym(std::string n) { return Term{Kind::Sym, std::move(n), 0}; }

  bool is_var() const { return kind == Kind::Var; }
  bool is_int() const { return kind == Kind::Int; }
  bool is_sym() const { return kind == Kind::Sym; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

inline std::string to_string(const Term& t) {
  return t.is_int() ? std::to_string(t.value) : t.name;
}

// Variable name -> value. A value is an integer, a Concrete symbol, or another
// variable.
using Bindings = std::map<std::string, Term>;

enum class CmpOp : std::uint8_t { Lt, Le, Eq, Ge, Gt };

inline std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

inline bool apply(CmpOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
  }
  return false;
}

// a op b  <=>  b mirror(op) a
inline CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Eq: return CmpOp::Eq;
  }
  return op;
}

class Predicate {
 public:
  enum class Kind : std::uint8_t { True, False, And, Or, Not, Cmp, Binding, Relation };

  Predicate() : node_(true_node()) {}

  static Predicate truth() { return Predicate(true_node()); }
  static Predicate falsity() { return Predicate(false_node()); }

  static Predicate conj(std::vector<Predicate> parts);
  static Predicate disj(std::vector<Predicate> parts);
  static Predicate negate(const Predicate& p);
  static Predicate cmp(Term lhs, CmpOp op, Term rhs);
  static Predicate binding(std::string var, Term value);
  static Predicate relation(std::string name, std::vector<Term> args);

  static Predicate conj(const Predicate& a, const Predicate& b) { return conj({a, b}); }
  static Predicate disj(const Predicate& a, const Predicate& b) { return disj({a, b}); }

  Kind kind() const { return node_->kind; }
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_constant() const { return is_true() || is_false(); }

  std::span<const Predicate> operands() const { return node_->operands; }
  const Term& lhs() const { return node_->lhs; }
  const Term& rhs() const { return node_->rhs; }
  CmpOp op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  std::span<const Term> args() const { return node_->args; }

  friend bool operator==(const Predicate& a, const Predicate& b);

 private:
  struct Node {
    explicit Node(Kind k) : kind(k) {}
    Node(Kind k, std::vector<Predicate> ops) : kind(k), operands(std::move(ops)) {}

    Kind kind = Kind::True;
    std::vector<Predicate> operands;  // And, Or, Not
    Term lhs;                         // Cmp; Binding variable
    Term rhs;                         // Cmp; Binding value
    CmpOp op = CmpOp::Eq;
    std::string name;                 // Relation
    std::vector<Term> args;           // Relation
  };

  explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> true_node() {
    static const auto n = std::make_shared<const Node>(Node(Kind::True));
    return n;
  }
  static std::shared_ptr<const Node> false_node() {
    static const auto n = std::make_shared<const Node>(Node(Kind::False));
    return n;
  }
  static Predicate make(Node n) { return Predicate(std::make_shared<const Node>(std::move(n))); }

  std::shared_ptr<const Node> node_;
};

inline bool operator==(const Predicate& a, const Predicate& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs && x.name == y.name &&
         x.args == y.args && x.operands == y.operands;
}

inline Predicate Predicate::conj(std::vector<Predicate> parts) {
  std::vector<Predicate> flat;
  for (auto& p : parts) {
    if (p.is_false()) return falsity();
    if (p.is_true()) continue;
    if (p.kind() == Kind::And) {
      for (const auto& q : p.operands()) {
        if (std::find(flat.begin(), flat.end(), q) == flat.end()) flat.push_back(q);
      }
    } else if (std::find(flat.begin(), flat.end(), p) == flat.end()) {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  return make(Node(Kind::And, std::move(flat)));
}

inline Predicate Predicate::disj(std::vector<Predicate> parts) {
  std::vector<Predicate> flat;
  for (auto& p : parts) {
    if (p.is_true()) return truth();
    if (p.is_false()) continue;
    if (p.kind() == Kind::Or) {
      for (const auto& q : p.operands()) {
        if (std::find(flat.begin(), flat.end(), q) == flat.end()) flat.push_back(q);
      }
    } else if (std::find(flat.begin(), flat.end(), p) == flat.end()) {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat.front();
  return make(Node(Kind::Or, std::move(flat)));
}

inline Predicate Predicate::negate(const Predicate& p) {
  if (p.is_true()) return falsity();
  if (p.is_false()) return truth();
  if (p.kind() == Kind::Not) return p.operands().front();
  return make(Node(Kind::Not, {p}));
}

inline Predicate Predicate::cmp(Term lhs, CmpOp op, Term rhs) {
  if (lhs == rhs) {
    return (op == CmpOp::Eq || op == CmpOp::Le || op == CmpOp::Ge) ? truth() : falsity();
  }
  if (!lhs.is_var() && !rhs.is_var()) {
    if (lhs.is_int() && rhs.is_int()) return apply(op, lhs.value, rhs.value) ? truth() : falsity();
    if (op != CmpOp::Eq) {
      throw FlowError(ErrorCode::UnsupportedPredicate,
                      "ordering comparison on symbols: " + to_string(lhs) + " " +
                          std::string(to_string(op)) + " " + to_string(rhs));
    }
    // Distinct symbols, or a symbol against an integer.
    return falsity();
  }
  Node n(Kind::Cmp);
  n.lhs = std::move(lhs);
  n.op = op;
  n.rhs = std::move(rhs);
  return make(std::move(n));
}

inline Predicate Predicate::binding(std::string var, Term value) {
  Node n(Kind::Binding);
  n.lhs = Term::var(std::move(var));
  n.rhs = std::move(value);
  return make(std::move(n));
}

inline Predicate Predicate::relation(std::string name, std::vector<Term> args) {
  Node n(Kind::Relation);
  n.name = std::move(name);
  n.args = std::move(args);
  return make(std::move(n));
}

namespace detail {

inline Term substitute_term(const Term& t, const Bindings& b) {
  if (!t.is_var()) return t;
  auto it = b.find(t.name);
  return it == b.end() ? t : it->second;
}

}  // namespace detail

// Replaces bound variables; ground comparisons fold to true/false. A Binding
// atom whose variable gets replaced turns into an equality.
inline Predicate substitute(const Predicate& p, const Bindings& b) {
  if (b.empty()) return p;
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::True:
    case K::False:
      return p;
    case K::And:
    case K::Or: {
      std::vector<Predicate> parts;
      for (const auto& q : p.operands()) parts.push_back(substitute(q, b));
      return p.kind() == K::And ? Predicate::conj(std::move(parts)) : Predicate::disj(std::move(parts));
    }
    case K::Not:
      return Predicate::negate(substitute(p.operands().front(), b));
    case K::Cmp:
      return Predicate::cmp(detail::substitute_term(p.lhs(), b), p.op(), detail::substitute_term(p.rhs(), b));
    case K::Binding: {
      Term var = detail::substitute_term(p.lhs(), b);
      Term value = detail::substitute_term(p.rhs(), b);
      if (var.is_var()) return Predicate::binding(var.name, value);
      return Predicate::cmp(var, CmpOp::Eq, value);
    }
    case K::Relation: {
      std::vector<Term> args;
      for (const auto& a : p.args()) args.push_back(detail::substitute_term(a, b));
      return Predicate::relation(p.name(), std::move(args));
    }
  }
  return p;
}

// Variables in order of first appearance, each listed once.
inline void collect_variables(const Predicate& p, std::vector<std::string>& out) {
  auto add = [&out](const Term& t) {
    if (t.is_var() && std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  };
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::True:
    case K::False:
      return;
    case K::And:
    case K::Or:
    case K::Not:
      for (const auto& q : p.operands()) collect_variables(q, out);
      return;
    case K::Cmp:
    case K::Binding:
      add(p.lhs());
      add(p.rhs());
      return;
    case K::Relation:
      for (const auto& a : p.args()) add(a);
      return;
  }
}

inline std::vector<std::string> variables_of(const Predicate& p) {
  std::vector<std::string> out;
  collect_variables(p, out);
  return out;
}

inline bool is_ground(const Predicate& p) { return variables_of(p).empty(); }

inline void collect_symbols(const Predicate& p, std::vector<std::string>& out) {
  auto add = [&out](const Term& t) {
    if (t.is_sym() && std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  };
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::True:
    case K::False:
      return;
    case K::And:
    case K::Or:
    case K::Not:
      for (const auto& q : p.operands()) collect_symbols(q, out);
      return;
    case K::Cmp:
    case K::Binding:
      add(p.lhs());
      add(p.rhs());
      return;
    case K::Relation:
      for (const auto& a : p.args()) add(a);
      return;
  }
}

namespace detail {

// 0: ||, 1: &&, 2: atoms and negation
inline void print_predicate(std::string& out, const Predicate& p, int context) {
  using K = Predicate::Kind;
  auto paren_if = [&out](bool cond, auto&& body) {
    if (cond) out += '(';
    body();
    if (cond) out += ')';
  };
  switch (p.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::And:
      paren_if(context > 1, [&] {
        bool first = true;
        for (const auto& q : p.operands()) {
          if (!first) out += " && ";
          first = false;
          print_predicate(out, q, 2);
        }
      });
      return;
    case K::Or:
      paren_if(context > 0, [&] {
        bool first = true;
        for (const auto& q : p.operands()) {
          if (!first) out += " || ";
          first = false;
          print_predicate(out, q, 1);
        }
      });
      return;
    case K::Not: {
      const auto& inner = p.operands().front();
      if (inner.kind() == K::Cmp && inner.op() == CmpOp::Eq) {
        out += to_string(inner.lhs()) + " != " + to_string(inner.rhs());
        return;
      }
      out += '!';
      bool bare = inner.kind() == K::Relation || inner.kind() == K::Not;
      paren_if(!bare, [&] { print_predicate(out, inner, 0); });
      return;
    }
    case K::Cmp:
      out += to_string(p.lhs());
      out += ' ';
      out += to_string(p.op());
      out += ' ';
      out += to_string(p.rhs());
      return;
    case K::Binding:
      out += p.lhs().name + " ↦ " + to_string(p.rhs());
      return;
    case K::Relation: {
      out += p.name() + '(';
      bool first = true;
      for (const auto& a : p.args()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(a);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Predicate& p) {
  std::string out;
  detail::print_predicate(out, p, 0);
  return out;
}

}  // namespace flowlock
