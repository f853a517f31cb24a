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

// Behavioral type terms. Every constructor returns canonical form:
//   - sequences are flat, Zero-free, singletons unwrap, empty is Zero
//   - a power with an integer exponent is expanded into a sequence
//   - stacked constraints collapse into one conjunction
//   - flow items never carry a sequence payload (distributed on entry)
//   - instances never contain a union
// so structural equality (operator==) is term equality.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowlock/error.hpp"
#include "flowlock/predicate.hpp"

namespace flowlock {

enum class Dir : std::uint8_t { Yield, Receive };

struct FlowItem;

class Type {
 public:
  enum class Kind : std::uint8_t {
    Zero,
    Concrete,
    Variable,
    Sequence,
    Tuple,
    Union,
    Constrained,
    Power,
    CorDef,
    CorIns,
    Start,
    Inline,
    Ref,
  };

  Type();

  static Type zero();
  static Type concrete(std::string name);
  static Type variable(std::string name);
  static Type seq(std::vector<Type> items);
  static Type tuple(std::vector<Type> items);
  static Type union_of(std::vector<Type> branches);
  static Type constrained(Type base, Predicate pred);
  static Type power(Type base, Term exponent);
  static Type cordef(std::vector<FlowItem> flow);
  static Type corins(std::vector<FlowItem> flow);
  static Type start(Type def, Bindings args = {});
  static Type inline_app(Type def, Bindings args = {});
  static Type ref(std::string name);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_zero() const { return is(Kind::Zero); }
  bool is_coroutine() const { return is(Kind::CorDef) || is(Kind::CorIns); }
  bool is_application() const { return is(Kind::Start) || is(Kind::Inline); }

  const std::string& name() const;                // Concrete, Variable, Ref
  std::span<const Type> items() const;            // Sequence, Tuple, Union
  const Type& base() const;                       // Constrained, Power
  const Predicate& pred() const;                  // Constrained
  const Term& exponent() const;                   // Power
  std::span<const FlowItem> flow() const;         // CorDef, CorIns
  const Type& def() const;                        // Start, Inline
  const Bindings& args() const;                   // Start, Inline

  friend bool operator==(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Type make(Node n);

  std::shared_ptr<const Node> node_;
};

struct FlowItem {
  Dir dir = Dir::Yield;
  Type payload;

  static FlowItem yield(Type t) { return FlowItem{Dir::Yield, std::move(t)}; }
  static FlowItem receive(Type t) { return FlowItem{Dir::Receive, std::move(t)}; }

  friend bool operator==(const FlowItem&, const FlowItem&) = default;
};

struct Type::Node {
  explicit Node(Kind k = Kind::Zero) : kind(k) {}

  Kind kind = Kind::Zero;
  std::string name;
  std::vector<Type> items;  // Sequence/Tuple/Union; [base] for Constrained/Power; [def] for Start/Inline
  Predicate pred;
  Term exponent;
  std::vector<FlowItem> flow;
  Bindings args;
};

inline Type Type::make(Node n) { return Type(std::make_shared<const Node>(std::move(n))); }

inline Type::Type() : node_(zero().node_) {}

inline Type Type::zero() {
  static const auto n = std::make_shared<const Node>();
  return Type(n);
}

inline Type::Kind Type::kind() const { return node_->kind; }
inline const std::string& Type::name() const { return node_->name; }
inline std::span<const Type> Type::items() const { return node_->items; }
inline const Type& Type::base() const { return node_->items.front(); }
inline const Predicate& Type::pred() const { return node_->pred; }
inline const Term& Type::exponent() const { return node_->exponent; }
inline std::span<const FlowItem> Type::flow() const { return node_->flow; }
inline const Type& Type::def() const { return node_->items.front(); }
inline const Bindings& Type::args() const { return node_->args; }

inline bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.exponent == y.exponent && x.items == y.items &&
         x.pred == y.pred && x.flow == y.flow && x.args == y.args;
}

inline Type Type::concrete(std::string name) {
  Node n(Kind::Concrete);
  n.name = std::move(name);
  return make(std::move(n));
}

inline Type Type::variable(std::string name) {
  Node n(Kind::Variable);
  n.name = std::move(name);
  return make(std::move(n));
}

inline Type Type::ref(std::string name) {
  Node n(Kind::Ref);
  n.name = std::move(name);
  return make(std::move(n));
}

inline Type Type::seq(std::vector<Type> items) {
  std::vector<Type> flat;
  for (auto& t : items) {
    if (t.is_zero()) continue;
    if (t.is(Kind::Sequence)) {
      flat.insert(flat.end(), t.items().begin(), t.items().end());
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (flat.empty()) return zero();
  if (flat.size() == 1) return flat.front();
  Node n(Kind::Sequence);
  n.items = std::move(flat);
  return make(std::move(n));
}

inline Type Type::tuple(std::vector<Type> items) {
  if (items.empty()) return zero();
  if (items.size() == 1) return items.front();
  Node n(Kind::Tuple);
  n.items = std::move(items);
  return make(std::move(n));
}

inline Type Type::union_of(std::vector<Type> branches) {
  std::vector<Type> flat;
  for (auto& t : branches) {
    if (t.is(Kind::Union)) {
      flat.insert(flat.end(), t.items().begin(), t.items().end());
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (flat.empty()) return zero();
  if (flat.size() == 1) return flat.front();
  Node n(Kind::Union);
  n.items = std::move(flat);
  return make(std::move(n));
}

inline Type Type::constrained(Type base, Predicate pred) {
  if (base.is(Kind::Constrained)) {
    pred = Predicate::conj(base.pred(), pred);
    base = base.base();
  }
  Node n(Kind::Constrained);
  n.items = {std::move(base)};
  n.pred = std::move(pred);
  return make(std::move(n));
}

inline Type Type::power(Type base, Term exponent) {
  if (exponent.is_sym()) {
    throw FlowError(ErrorCode::IllegalBinding, "sequence length bound to symbol " + exponent.name);
  }
  if (exponent.is_int()) {
    if (exponent.value < 0) {
      throw FlowError(ErrorCode::IllegalBinding, "negative sequence length " + std::to_string(exponent.value));
    }
    return seq(std::vector<Type>(static_cast<std::size_t>(exponent.value), base));
  }
  if (base.is_zero()) return zero();
  Node n(Kind::Power);
  n.items = {std::move(base)};
  n.exponent = std::move(exponent);
  return make(std::move(n));
}

namespace detail {

inline bool contains_union(const Type& t) {
  using K = Type::Kind;
  switch (t.kind()) {
    case K::Union: return true;
    case K::Sequence:
    case K::Tuple:
      return std::any_of(t.items().begin(), t.items().end(), contains_union);
    case K::Constrained:
    case K::Power:
      return contains_union(t.base());
    case K::CorIns:
      return std::any_of(t.flow().begin(), t.flow().end(),
                         [](const FlowItem& w) { return contains_union(w.payload); });
    default:
      // Definitions behind Start/Inline/corDef are resolved on instantiation.
      return false;
  }
}

inline std::vector<FlowItem> distribute_all(std::vector<FlowItem> flow) {
  std::vector<FlowItem> out;
  out.reserve(flow.size());
  for (auto& w : flow) {
    if (w.payload.is(Type::Kind::Sequence)) {
      for (const auto& t : w.payload.items()) out.push_back(FlowItem{w.dir, t});
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace detail

inline Type Type::cordef(std::vector<FlowItem> flow) {
  Node n(Kind::CorDef);
  n.flow = detail::distribute_all(std::move(flow));
  return make(std::move(n));
}

inline Type Type::corins(std::vector<FlowItem> flow) {
  Node n(Kind::CorIns);
  n.flow = detail::distribute_all(std::move(flow));
  for (const auto& w : n.flow) {
    if (detail::contains_union(w.payload)) {
      throw FlowError(ErrorCode::UnionInInstance, "coroutine instance contains a union");
    }
  }
  return make(std::move(n));
}

inline Type Type::start(Type def, Bindings args) {
  Node n(Kind::Start);
  n.items = {std::move(def)};
  n.args = std::move(args);
  return make(std::move(n));
}

inline Type Type::inline_app(Type def, Bindings args) {
  Node n(Kind::Inline);
  n.items = {std::move(def)};
  n.args = std::move(args);
  return make(std::move(n));
}

// ---------------------------------------------------------------------------
// Structural helpers

inline Type flatten(const Type& t) {
  using K = Type::Kind;
  switch (t.kind()) {
    case K::Sequence: {
      std::vector<Type> items;
      for (const auto& x : t.items()) items.push_back(flatten(x));
      return Type::seq(std::move(items));
    }
    case K::Tuple: {
      std::vector<Type> items;
      for (const auto& x : t.items()) items.push_back(flatten(x));
      return Type::tuple(std::move(items));
    }
    case K::Union: {
      std::vector<Type> items;
      for (const auto& x : t.items()) items.push_back(flatten(x));
      return Type::union_of(std::move(items));
    }
    case K::Constrained: return Type::constrained(flatten(t.base()), t.pred());
    case K::Power: return Type::power(flatten(t.base()), t.exponent());
    case K::CorDef:
    case K::CorIns: {
      std::vector<FlowItem> flow;
      for (const auto& w : t.flow()) flow.push_back(FlowItem{w.dir, flatten(w.payload)});
      return t.is(K::CorDef) ? Type::cordef(std::move(flow)) : Type::corins(std::move(flow));
    }
    case K::Start: return Type::start(flatten(t.def()), t.args());
    case K::Inline: return Type::inline_app(flatten(t.def()), t.args());
    default: return t;
  }
}

inline std::vector<FlowItem> distribute(Dir dir, const Type& t) {
  if (t.is(Type::Kind::Sequence)) {
    std::vector<FlowItem> out;
    for (const auto& x : t.items()) out.push_back(FlowItem{dir, x});
    return out;
  }
  return {FlowItem{dir, t}};
}

namespace detail {

inline void require_instance(const Type& i) {
  if (i.is(Type::Kind::CorDef)) {
    throw FlowError(ErrorCode::HeadOfDefinition, "head/tail taken from a coroutine definition");
  }
  if (!i.is(Type::Kind::CorIns)) throw FlowError(ErrorCode::NotAnInstance, "head/tail of a non-coroutine type");
  if (i.flow().empty()) throw FlowError(ErrorCode::EmptyInstance, "head/tail of an exhausted instance");
}

}  // namespace detail

inline const FlowItem& head(const Type& instance) {
  detail::require_instance(instance);
  return instance.flow().front();
}

inline Type tail(const Type& instance) {
  detail::require_instance(instance);
  return Type::corins({instance.flow().begin() + 1, instance.flow().end()});
}

template <typename T>
struct FirstResult {
  std::optional<T> found;
  std::vector<T> before;
  std::vector<T> after;
};

// Earliest element satisfying p, with everything before and after it.
template <typename T, typename P>
FirstResult<T> first(std::span<const T> s, P&& p) {
  FirstResult<T> r;
  auto it = std::find_if(s.begin(), s.end(), p);
  r.before.assign(s.begin(), it);
  if (it != s.end()) {
    r.found = *it;
    r.after.assign(it + 1, s.end());
  }
  return r;
}

template <typename T, typename P>
FirstResult<T> first(const std::vector<T>& s, P&& p) {
  return first(std::span<const T>(s), std::forward<P>(p));
}

template <typename T, typename P>
bool none(const std::vector<T>& s, P&& p) {
  return !first(s, std::forward<P>(p)).found.has_value();
}

// ---------------------------------------------------------------------------
// Substitution

namespace detail {

inline Type term_to_type(const Term& t, const std::string& var) {
  if (t.is_sym()) return Type::concrete(t.name);
  if (t.is_var()) return Type::variable(t.name);
  throw FlowError(ErrorCode::IllegalBinding, "type variable " + var + " bound to integer " + std::to_string(t.value));
}

inline Bindings substitute_bindings(const Bindings& args, const Bindings& b) {
  Bindings out;
  for (const auto& [k, v] : args) out.emplace(k, substitute_term(v, b));
  return out;
}

}  // namespace detail

// Replaces every bound variable: in type positions, power exponents, nested
// predicates and application arguments. The result is canonical.
inline Type substitute(const Type& t, const Bindings& b) {
  if (b.empty()) return t;
  using K = Type::Kind;
  switch (t.kind()) {
    case K::Zero:
    case K::Concrete:
    case K::Ref:
      return t;
    case K::Variable: {
      auto it = b.find(t.name());
      return it == b.end() ? t : detail::term_to_type(it->second, t.name());
    }
    case K::Sequence:
    case K::Tuple:
    case K::Union: {
      std::vector<Type> items;
      for (const auto& x : t.items()) items.push_back(substitute(x, b));
      if (t.is(K::Sequence)) return Type::seq(std::move(items));
      if (t.is(K::Tuple)) return Type::tuple(std::move(items));
      return Type::union_of(std::move(items));
    }
    case K::Constrained:
      return Type::constrained(substitute(t.base(), b), substitute(t.pred(), b));
    case K::Power:
      return Type::power(substitute(t.base(), b), detail::substitute_term(t.exponent(), b));
    case K::CorDef:
    case K::CorIns: {
      std::vector<FlowItem> flow;
      for (const auto& w : t.flow()) flow.push_back(FlowItem{w.dir, substitute(w.payload, b)});
      return t.is(K::CorDef) ? Type::cordef(std::move(flow)) : Type::corins(std::move(flow));
    }
    case K::Start:
    case K::Inline: {
      // Parameters named by the application shadow outer bindings inside def.
      Bindings inner = b;
      for (const auto& [k, v] : t.args()) inner.erase(k);
      Type def = inner.empty() ? t.def() : substitute(t.def(), inner);
      Bindings args = detail::substitute_bindings(t.args(), b);
      return t.is(K::Start) ? Type::start(std::move(def), std::move(args))
                            : Type::inline_app(std::move(def), std::move(args));
    }
  }
  return t;
}

// Variable -> type map, as written in the calculus. Only concrete types and
// variables are legal values.
inline Type substitute(const Type& t, const std::map<std::string, Type>& b) {
  Bindings terms;
  for (const auto& [k, v] : b) {
    if (v.is(Type::Kind::Concrete)) {
      terms.emplace(k, Term::sym(v.name()));
    } else if (v.is(Type::Kind::Variable)) {
      terms.emplace(k, Term::var(v.name()));
    } else {
      throw FlowError(ErrorCode::IllegalBinding, "variable " + k + " bound to a complex type or 0");
    }
  }
  return substitute(t, terms);
}

// ---------------------------------------------------------------------------
// Concrete collection

inline void collect_concrete(const Type& t, std::set<std::string>& out) {
  using K = Type::Kind;
  switch (t.kind()) {
    case K::Zero:
    case K::Variable:
    case K::Ref:
      return;
    case K::Concrete:
      out.insert(t.name());
      return;
    case K::Sequence:
    case K::Tuple:
    case K::Union:
      for (const auto& x : t.items()) collect_concrete(x, out);
      return;
    case K::Constrained: {
      collect_concrete(t.base(), out);
      std::vector<std::string> syms;
      collect_symbols(t.pred(), syms);
      out.insert(syms.begin(), syms.end());
      return;
    }
    case K::Power:
      collect_concrete(t.base(), out);
      return;
    case K::CorDef:
    case K::CorIns:
      for (const auto& w : t.flow()) collect_concrete(w.payload, out);
      return;
    case K::Start:
    case K::Inline:
      collect_concrete(t.def(), out);
      for (const auto& [k, v] : t.args()) {
        if (v.is_sym()) out.insert(v.name);
      }
      return;
  }
}

inline std::set<std::string> collect_concrete(const Type& t) {
  std::set<std::string> out;
  collect_concrete(t, out);
  return out;
}

// Variables used as types or lengths (not those only inside predicates).
inline void collect_type_variables(const Type& t, std::vector<std::string>& out) {
  auto add = [&out](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  using K = Type::Kind;
  switch (t.kind()) {
    case K::Variable: add(t.name()); return;
    case K::Sequence:
    case K::Tuple:
    case K::Union:
      for (const auto& x : t.items()) collect_type_variables(x, out);
      return;
    case K::Constrained: collect_type_variables(t.base(), out); return;
    case K::Power:
      collect_type_variables(t.base(), out);
      if (t.exponent().is_var()) add(t.exponent().name);
      return;
    case K::CorDef:
    case K::CorIns:
      for (const auto& w : t.flow()) collect_type_variables(w.payload, out);
      return;
    default: return;
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_type(std::string& out, const Type& t);

inline std::string print_bindings(const Bindings& b) {
  if (b.empty()) return {};
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : b) {
    if (!first) out += ", ";
    first = false;
    out += k + " ↦ " + to_string(v);
  }
  return out + "}";
}

// Items of sequences, tuples and power bases: constraints must be wrapped so
// their predicate does not swallow the separator.
inline void print_item(std::string& out, const Type& t) {
  if (t.is(Type::Kind::Constrained)) {
    out += '(';
    print_type(out, t);
    out += ')';
  } else {
    print_type(out, t);
  }
}

inline void print_flow_item(std::string& out, const FlowItem& w) {
  bool bare = w.dir == Dir::Yield && w.payload.is_application();
  if (!bare) out += w.dir == Dir::Yield ? '!' : '?';
  print_type(out, w.payload);
}

inline void print_flow(std::string& out, std::span<const FlowItem> flow) {
  out += '[';
  bool first = true;
  for (const auto& w : flow) {
    if (!first) out += "; ";
    first = false;
    print_flow_item(out, w);
  }
  out += ']';
}

inline void print_type(std::string& out, const Type& t) {
  using K = Type::Kind;
  switch (t.kind()) {
    case K::Zero: out += '0'; return;
    case K::Concrete:
    case K::Variable:
    case K::Ref:
      out += t.name();
      return;
    case K::Sequence: {
      auto items = t.items();
      bool uniform = std::all_of(items.begin(), items.end(), [&](const Type& x) { return x == items.front(); });
      if (uniform && !items.front().is(K::Power) && !items.front().is(K::Sequence)) {
        print_item(out, items.front());
        out += '^' + std::to_string(items.size());
        return;
      }
      out += '<';
      bool first = true;
      for (const auto& x : items) {
        if (!first) out += ", ";
        first = false;
        print_item(out, x);
      }
      out += '>';
      return;
    }
    case K::Tuple: {
      out += '(';
      bool first = true;
      for (const auto& x : t.items()) {
        if (!first) out += ", ";
        first = false;
        print_item(out, x);
      }
      out += ')';
      return;
    }
    case K::Union: {
      out += '(';
      bool first = true;
      for (const auto& x : t.items()) {
        if (!first) out += " | ";
        first = false;
        print_type(out, x);
      }
      out += ')';
      return;
    }
    case K::Constrained:
      print_item(out, t.base());
      out += " / ";
      out += to_string(t.pred());
      return;
    case K::Power:
      if (t.base().is(K::Power)) {
        out += '(';
        print_type(out, t.base());
        out += ')';
      } else {
        print_item(out, t.base());
      }
      out += '^' + to_string(t.exponent());
      return;
    case K::CorDef:
      out += "corDef";
      print_flow(out, t.flow());
      return;
    case K::CorIns:
      print_flow(out, t.flow());
      return;
    case K::Start:
    case K::Inline:
      out += t.is(K::Start) ? "Start(" : "Inline(";
      print_type(out, t.def());
      out += ')';
      out += print_bindings(t.args());
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Type& t) {
  std::string out;
  detail::print_type(out, t);
  return out;
}

inline std::string to_string(const FlowItem& w) {
  std::string out;
  detail::print_flow_item(out, w);
  return out;
}

}  // namespace flowlock
