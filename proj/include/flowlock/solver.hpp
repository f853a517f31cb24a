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

// Constraint handling: the Concrete universe with closed-world relations, a
// finite-domain solver for the predicate language, uniqueness filtering of
// interpretations, type matching, the constrained-type rewrites and the
// integer partition used to split analyses into cases.
//
// The solver decides the fragment exactly. Concrete variables range over the
// universe plus any symbol mentioned in the query. Integer variables are only
// compared against constants and each other, so only the relative order of
// values matters: every satisfiable query has a model drawn from
// {c + k : c a constant or 0, |k| <= #intvars + 1}, which is what we search.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flowlock/error.hpp"
#include "flowlock/predicate.hpp"
#include "flowlock/type.hpp"

namespace flowlock {

struct Relation {
  std::size_t arity = 0;
  std::set<std::vector<std::string>> tuples;
};

class Universe {
 public:
  Universe() = default;
  explicit Universe(std::set<std::string> symbols) : symbols_(std::move(symbols)) {}

  void add_symbol(const std::string& s) { symbols_.insert(s); }
  void add_symbols(const std::set<std::string>& s) { symbols_.insert(s.begin(), s.end()); }

  // The relation holds exactly on `tuples` and is false everywhere else.
  void register_relation(const std::string& name, const std::set<std::vector<std::string>>& tuples,
                         std::optional<std::size_t> arity = std::nullopt) {
    if (relations_.contains(name)) {
      throw FlowError(ErrorCode::RedefinedRelation, "relation " + name + " is already defined");
    }
    Relation r;
    r.arity = arity.value_or(tuples.empty() ? 0 : tuples.begin()->size());
    for (const auto& t : tuples) {
      if (t.size() != r.arity) {
        throw FlowError(ErrorCode::ArityMismatch, "relation " + name + " has tuples of different arity");
      }
      symbols_.insert(t.begin(), t.end());
    }
    r.tuples = tuples;
    relations_.emplace(name, std::move(r));
  }

  const Relation& relation(const std::string& name, std::size_t arity) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) {
      throw FlowError(ErrorCode::UnsupportedPredicate, "no interpretation for relation " + name);
    }
    if (it->second.arity != arity) {
      throw FlowError(ErrorCode::ArityMismatch, "relation " + name + " expects " +
                                                    std::to_string(it->second.arity) + " arguments");
    }
    return it->second;
  }

  bool holds(const std::string& name, const std::vector<std::string>& args) const {
    return relation(name, args.size()).tuples.contains(args);
  }

  const std::set<std::string>& symbols() const { return symbols_; }
  const std::map<std::string, Relation>& relations() const { return relations_; }

 private:
  std::set<std::string> symbols_;
  std::map<std::string, Relation> relations_;
};

enum class Domain : std::uint8_t { Int, Concrete };

// Uniquely determined bindings plus whatever constraint remains. Bottom (no
// match) is represented by an empty optional around this.
struct ConditionSet {
  Bindings bindings;
  Predicate residual;

  Predicate as_predicate() const {
    std::vector<Predicate> parts;
    for (const auto& [k, v] : bindings) parts.push_back(Predicate::binding(k, v));
    parts.push_back(residual);
    return Predicate::conj(std::move(parts));
  }

  friend bool operator==(const ConditionSet&, const ConditionSet&) = default;
};

// ---------------------------------------------------------------------------
// Three-valued evaluation: nullopt means "depends on unassigned variables".

namespace detail {

inline std::optional<Term> resolve(const Term& t, const Bindings& a) {
  if (!t.is_var()) return t;
  auto it = a.find(t.name);
  if (it == a.end() || it->second.is_var()) return std::nullopt;
  return it->second;
}

inline std::optional<bool> compare(const Term& l, CmpOp op, const Term& r) {
  if (l.is_int() && r.is_int()) return apply(op, l.value, r.value);
  if (op != CmpOp::Eq) return false;
  return l == r;
}

}  // namespace detail

inline std::optional<bool> evaluate(const Predicate& p, const Bindings& a, const Universe& u) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::And: {
      bool unknown = false;
      for (const auto& q : p.operands()) {
        auto v = evaluate(q, a, u);
        if (v == false) return false;
        if (!v) unknown = true;
      }
      return unknown ? std::nullopt : std::optional<bool>(true);
    }
    case K::Or: {
      bool unknown = false;
      for (const auto& q : p.operands()) {
        auto v = evaluate(q, a, u);
        if (v == true) return true;
        if (!v) unknown = true;
      }
      return unknown ? std::nullopt : std::optional<bool>(false);
    }
    case K::Not: {
      auto v = evaluate(p.operands().front(), a, u);
      return v ? std::optional<bool>(!*v) : std::nullopt;
    }
    case K::Cmp:
    case K::Binding: {
      auto l = detail::resolve(p.lhs(), a);
      auto r = detail::resolve(p.rhs(), a);
      if (!l || !r) return std::nullopt;
      return detail::compare(*l, p.kind() == K::Cmp ? p.op() : CmpOp::Eq, *r);
    }
    case K::Relation: {
      std::vector<std::string> args;
      for (const auto& t : p.args()) {
        auto v = detail::resolve(t, a);
        if (!v) return std::nullopt;
        if (!v->is_sym()) {
          u.relation(p.name(), p.args().size());
          return false;
        }
        args.push_back(v->name);
      }
      return u.holds(p.name(), args);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Domain inference

namespace detail {

class DomainInference {
 public:
  explicit DomainInference(const std::map<std::string, Domain>& hints) {
    for (const auto& [v, d] : hints) mark(v, d, "type position");
  }

  void scan(const Predicate& p) {
    using K = Predicate::Kind;
    switch (p.kind()) {
      case K::True:
      case K::False:
        return;
      case K::And:
      case K::Or:
      case K::Not:
        for (const auto& q : p.operands()) scan(q);
        return;
      case K::Cmp:
      case K::Binding:
        atom(p.lhs(), p.kind() == K::Cmp ? p.op() : CmpOp::Eq, p.rhs());
        return;
      case K::Relation:
        for (const auto& t : p.args()) {
          if (t.is_var()) mark(t.name, Domain::Concrete, "relation " + p.name());
        }
        return;
    }
  }

  std::map<std::string, Domain> result(const std::vector<std::string>& vars) {
    std::map<std::string, Domain> out;
    for (const auto& v : vars) {
      auto it = mark_.find(find(v));
      out[v] = it == mark_.end() ? Domain::Int : it->second;
    }
    return out;
  }

 private:
  void atom(const Term& l, CmpOp op, const Term& r) {
    if (l.is_var() && r.is_var()) {
      unite(l.name, r.name);
      if (op != CmpOp::Eq) mark(l.name, Domain::Int, "ordering comparison");
      return;
    }
    if (!l.is_var() && !r.is_var()) return;
    const Term& v = l.is_var() ? l : r;
    const Term& c = l.is_var() ? r : l;
    if (c.is_int()) {
      mark(v.name, Domain::Int, "comparison with " + to_string(c));
    } else {
      if (op != CmpOp::Eq) {
        throw FlowError(ErrorCode::UnsupportedPredicate, "ordering comparison between " + v.name + " and symbol " + c.name);
      }
      mark(v.name, Domain::Concrete, "equality with " + c.name);
    }
  }

  std::string find(const std::string& v) {
    auto it = parent_.find(v);
    if (it == parent_.end() || it->second == v) return v;
    std::string root = find(it->second);
    parent_[v] = root;
    return root;
  }

  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a);
    std::string rb = find(b);
    if (ra == rb) return;
    auto ma = mark_.find(ra);
    auto mb = mark_.find(rb);
    if (ma != mark_.end() && mb != mark_.end() && ma->second != mb->second) {
      throw FlowError(ErrorCode::DomainConflict, a + " and " + b + " are equated across integer and Concrete domains");
    }
    parent_[rb] = ra;
    if (mb != mark_.end()) {
      mark_[ra] = mb->second;
      mark_.erase(rb);
    }
  }

  void mark(const std::string& v, Domain d, const std::string& why) {
    std::string r = find(v);
    auto [it, inserted] = mark_.emplace(r, d);
    if (!inserted && it->second != d) {
      throw FlowError(ErrorCode::DomainConflict, "variable " + v + " used as both integer and Concrete (" + why + ")");
    }
  }

  std::map<std::string, std::string> parent_;
  std::map<std::string, Domain> mark_;
};

inline void collect_ints(const Predicate& p, std::set<std::int64_t>& out) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::And:
    case K::Or:
    case K::Not:
      for (const auto& q : p.operands()) collect_ints(q, out);
      return;
    case K::Cmp:
    case K::Binding:
      if (p.lhs().is_int()) out.insert(p.lhs().value);
      if (p.rhs().is_int()) out.insert(p.rhs().value);
      return;
    default:
      return;
  }
}

struct Bounds {
  std::int64_t lo = std::numeric_limits<std::int64_t>::min();
  std::int64_t hi = std::numeric_limits<std::int64_t>::max();
};

// Bounds implied by top-level conjuncts of the form `var op const`.
inline void narrow(const Predicate& p, std::map<std::string, Bounds>& b) {
  if (p.kind() == Predicate::Kind::And) {
    for (const auto& q : p.operands()) narrow(q, b);
    return;
  }
  if (p.kind() != Predicate::Kind::Cmp && p.kind() != Predicate::Kind::Binding) return;
  Term l = p.lhs();
  Term r = p.rhs();
  CmpOp op = p.kind() == Predicate::Kind::Cmp ? p.op() : CmpOp::Eq;
  if (!l.is_var() && r.is_var()) {
    std::swap(l, r);
    op = mirror(op);
  }
  if (!l.is_var() || !r.is_int()) return;
  auto it = b.find(l.name);
  if (it == b.end()) return;
  Bounds& x = it->second;
  const std::int64_t c = r.value;
  switch (op) {
    case CmpOp::Lt: x.hi = std::min(x.hi, c - 1); break;
    case CmpOp::Le: x.hi = std::min(x.hi, c); break;
    case CmpOp::Eq: x.lo = std::max(x.lo, c); x.hi = std::min(x.hi, c); break;
    case CmpOp::Ge: x.lo = std::max(x.lo, c); break;
    case CmpOp::Gt: x.lo = std::max(x.lo, c + 1); break;
  }
}

}  // namespace detail

// One solving context. Instances are cheap and never shared between calls.
class Solver {
 public:
  explicit Solver(const Universe& u, std::map<std::string, Domain> hints = {}) : u_(u), hints_(std::move(hints)) {}

  std::map<std::string, Domain> domains(const Predicate& expr) const {
    detail::DomainInference inf(hints_);
    inf.scan(expr);
    return inf.result(variables_of(expr));
  }

  std::optional<Bindings> solve(const Predicate& expr) const {
    if (expr.is_false()) return std::nullopt;
    std::vector<std::string> vars = variables_of(expr);
    auto doms = domains(expr);

    std::vector<std::string> syms(u_.symbols().begin(), u_.symbols().end());
    {
      std::vector<std::string> extra;
      collect_symbols(expr, extra);
      for (auto& s : extra) {
        if (std::find(syms.begin(), syms.end(), s) == syms.end()) syms.push_back(s);
      }
      std::sort(syms.begin(), syms.end());
    }

    std::set<std::int64_t> consts{0};
    detail::collect_ints(expr, consts);
    std::int64_t n_int = 0;
    std::map<std::string, detail::Bounds> bounds;
    for (const auto& v : vars) {
      if (doms[v] == Domain::Int) {
        ++n_int;
        bounds[v];
      }
    }
    detail::narrow(expr, bounds);
    std::vector<std::int64_t> points;
    for (auto c : consts) {
      for (std::int64_t k = -(n_int + 1); k <= n_int + 1; ++k) points.push_back(c + k);
    }

    std::vector<std::vector<Term>> candidates;
    for (const auto& v : vars) {
      std::vector<Term> cand;
      if (doms[v] == Domain::Concrete) {
        for (const auto& s : syms) cand.push_back(Term::sym(s));
      } else {
        const auto& b = bounds[v];
        if (b.lo > b.hi) return std::nullopt;
        std::set<std::int64_t> vals;
        for (auto x : points) {
          if (x >= b.lo && x <= b.hi) vals.insert(x);
        }
        if (b.lo != std::numeric_limits<std::int64_t>::min()) vals.insert(b.lo);
        if (b.hi != std::numeric_limits<std::int64_t>::max()) vals.insert(b.hi);
        std::vector<std::int64_t> ordered(vals.begin(), vals.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](std::int64_t x, std::int64_t y) {
          auto ax = x < 0 ? -x : x;
          auto ay = y < 0 ? -y : y;
          return ax != ay ? ax < ay : x > y;
        });
        for (auto x : ordered) cand.push_back(Term::integer(x));
      }
      candidates.push_back(std::move(cand));
    }

    Bindings a;
    if (search(expr, vars, candidates, 0, a)) return a;
    return std::nullopt;
  }

  bool satisfiable(const Predicate& expr) const { return solve(expr).has_value(); }

 private:
  bool search(const Predicate& expr, const std::vector<std::string>& vars,
              const std::vector<std::vector<Term>>& candidates, std::size_t k, Bindings& a) const {
    auto v = evaluate(expr, a, u_);
    if (v == false) return false;
    if (k == vars.size()) return v == true;
    for (const auto& c : candidates[k]) {
      a[vars[k]] = c;
      if (search(expr, vars, candidates, k + 1, a)) return true;
    }
    a.erase(vars[k]);
    return false;
  }

  const Universe& u_;
  std::map<std::string, Domain> hints_;
};

inline std::optional<Bindings> solve(const Predicate& expr, const Universe& u,
                                     const std::map<std::string, Domain>& hints = {}) {
  return Solver(u, hints).solve(expr);
}

// Keeps only bindings whose negation makes `expr` unsatisfiable; the residual
// is `expr` with those bindings substituted.
inline ConditionSet unique_bindings(const Predicate& expr, const Bindings& interp, const Universe& u,
                                    const std::map<std::string, Domain>& hints = {}) {
  ConditionSet cs;
  for (const auto& [var, val] : interp) {
    Solver fresh(u, hints);
    Predicate other = Predicate::conj(expr, Predicate::negate(Predicate::cmp(Term::var(var), CmpOp::Eq, val)));
    if (!fresh.satisfiable(other)) cs.bindings.emplace(var, val);
  }
  cs.residual = substitute(expr, cs.bindings);
  return cs;
}

// ---------------------------------------------------------------------------
// Matching

namespace detail {

inline Predicate term_eq(Term a, Term b) {
  if (b < a) std::swap(a, b);
  return Predicate::cmp(std::move(a), CmpOp::Eq, std::move(b));
}

inline Type peel(const Type& t, std::vector<Predicate>& preds) {
  if (t.is(Type::Kind::Constrained)) {
    preds.push_back(t.pred());
    return t.base();
  }
  return t;
}

inline Predicate with_sorted(Predicate eq, std::vector<Predicate> preds) {
  std::stable_sort(preds.begin(), preds.end(),
                   [](const Predicate& x, const Predicate& y) { return to_string(x) < to_string(y); });
  preds.insert(preds.begin(), std::move(eq));
  return Predicate::conj(std::move(preds));
}

inline Predicate unify(const Type& a, const Type& b);

inline std::vector<Type> as_list(const Type& t) {
  if (t.is_zero()) return {};
  if (t.is(Type::Kind::Sequence)) return {t.items().begin(), t.items().end()};
  return {t};
}

inline Predicate unify_lists(const std::vector<Type>& x, const std::vector<Type>& y);

inline Predicate unify_single(const Type& a, const Type& b) {
  using K = Type::Kind;
  if (a.is(K::Union) || b.is(K::Union)) {
    const Type& u = a.is(K::Union) ? a : b;
    const Type& o = a.is(K::Union) ? b : a;
    std::vector<Predicate> alts;
    for (const auto& br : u.items()) alts.push_back(unify(br, o));
    return Predicate::disj(std::move(alts));
  }
  if (a.is(K::Variable) || b.is(K::Variable)) {
    const Type& v = a.is(K::Variable) ? a : b;
    const Type& o = a.is(K::Variable) ? b : a;
    if (o.is(K::Variable)) return term_eq(Term::var(v.name()), Term::var(o.name()));
    if (o.is(K::Concrete)) return term_eq(Term::var(v.name()), Term::sym(o.name()));
    return Predicate::falsity();
  }
  if (a.kind() != b.kind()) return Predicate::falsity();
  switch (a.kind()) {
    case K::Concrete:
      return a.name() == b.name() ? Predicate::truth() : Predicate::falsity();
    case K::Tuple: {
      if (a.items().size() != b.items().size()) return Predicate::falsity();
      std::vector<Predicate> parts;
      for (std::size_t i = 0; i < a.items().size(); ++i) parts.push_back(unify(a.items()[i], b.items()[i]));
      return Predicate::conj(std::move(parts));
    }
    case K::CorDef:
    case K::CorIns: {
      if (a.flow().size() != b.flow().size()) return Predicate::falsity();
      std::vector<Predicate> parts;
      for (std::size_t i = 0; i < a.flow().size(); ++i) {
        if (a.flow()[i].dir != b.flow()[i].dir) return Predicate::falsity();
        parts.push_back(unify(a.flow()[i].payload, b.flow()[i].payload));
      }
      return Predicate::conj(std::move(parts));
    }
    default:
      return a == b ? Predicate::truth() : Predicate::falsity();
  }
}

inline Predicate unify_item(const Type& a, const Type& b) {
  using K = Type::Kind;
  if (a.is(K::Power) && b.is(K::Power)) {
    return Predicate::conj(unify(a.base(), b.base()), term_eq(a.exponent(), b.exponent()));
  }
  if (a.is(K::Power) || b.is(K::Power)) {
    const Type& p = a.is(K::Power) ? a : b;
    const Type& o = a.is(K::Power) ? b : a;
    return Predicate::conj(unify(p.base(), o), term_eq(p.exponent(), Term::integer(1)));
  }
  return unify(a, b);
}

// `x` holds the only symbolic power, at index k; it absorbs the length
// difference against `y`.
inline Predicate absorb(const std::vector<Type>& x, std::size_t k, const std::vector<Type>& y) {
  const std::size_t m = x.size();
  const std::size_t p = y.size();
  if (p + 1 < m) return Predicate::falsity();
  const std::size_t suffix = m - k - 1;
  const std::size_t middle = p - k - suffix;
  std::vector<Predicate> parts;
  for (std::size_t i = 0; i < k; ++i) parts.push_back(unify(x[i], y[i]));
  for (std::size_t i = 0; i < middle; ++i) parts.push_back(unify(x[k].base(), y[k + i]));
  for (std::size_t i = 0; i < suffix; ++i) parts.push_back(unify(x[k + 1 + i], y[k + middle + i]));
  parts.push_back(term_eq(x[k].exponent(), Term::integer(static_cast<std::int64_t>(middle))));
  return Predicate::conj(std::move(parts));
}

inline Predicate unify_lists(const std::vector<Type>& x, const std::vector<Type>& y) {
  auto powers = [](const std::vector<Type>& v) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is(Type::Kind::Power)) idx.push_back(i);
    }
    return idx;
  };
  auto px = powers(x);
  auto py = powers(y);
  if (px.size() + py.size() == 1) {
    return px.empty() ? absorb(y, py.front(), x) : absorb(x, px.front(), y);
  }
  if (x.size() != y.size()) return Predicate::falsity();
  std::vector<Predicate> parts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    parts.push_back(unify_item(x[i], y[i]));
    if (parts.back().is_false()) return Predicate::falsity();
  }
  return Predicate::conj(std::move(parts));
}

// Symmetric: unify(a, b) == unify(b, a) structurally.
inline Predicate unify(const Type& a0, const Type& b0) {
  std::vector<Predicate> preds;
  Type a = peel(a0, preds);
  Type b = peel(b0, preds);
  auto x = as_list(a);
  auto y = as_list(b);
  Predicate eq = (x.size() == 1 && y.size() == 1 && !x[0].is(Type::Kind::Power) && !y[0].is(Type::Kind::Power))
                     ? unify_single(x[0], y[0])
                     : unify_lists(x, y);
  if (eq.is_false()) return eq;
  return with_sorted(std::move(eq), std::move(preds));
}

inline void type_position_vars(const Type& t, std::map<std::string, Domain>& out) {
  std::vector<std::string> vars;
  collect_type_variables(t, vars);
  // collect_type_variables also reports power exponents; those are integers.
  std::vector<std::string> lengths;
  auto walk = [&](auto&& self, const Type& x) -> void {
    using K = Type::Kind;
    if (x.is(K::Power) && x.exponent().is_var()) lengths.push_back(x.exponent().name);
    if (x.is(K::Sequence) || x.is(K::Tuple) || x.is(K::Union)) {
      for (const auto& y : x.items()) self(self, y);
    } else if (x.is(K::Constrained) || x.is(K::Power)) {
      self(self, x.base());
    } else if (x.is_coroutine()) {
      for (const auto& w : x.flow()) self(self, w.payload);
    }
  };
  walk(walk, t);
  for (const auto& v : vars) out[v] = Domain::Concrete;
  for (const auto& v : lengths) out[v] = Domain::Int;
}

}  // namespace detail

// The boolean expression (a = b) && constraints(a) && constraints(b).
inline Predicate match_expression(const Type& a, const Type& b) { return detail::unify(a, b); }

inline std::optional<ConditionSet> match(const Type& a, const Type& b, const Universe& u) {
  Predicate expr = detail::unify(a, b);
  if (expr.is_false()) return std::nullopt;
  std::map<std::string, Domain> hints;
  detail::type_position_vars(a, hints);
  detail::type_position_vars(b, hints);
  Solver ctx(u, hints);
  auto interp = ctx.solve(expr);
  if (!interp) return std::nullopt;
  return unique_bindings(expr, *interp, u, hints);
}

// ---------------------------------------------------------------------------
// Constrained-type rewrites, applied bottom-up to fixpoint:
//   t / false => 0      t / true => t      t / p / q => t / (p && q)
//   t / (p && x ↦ v) => t[x ↦ v] / p

namespace detail {

inline bool take_binding(const Predicate& p, std::string& var, Term& value, Predicate& rest) {
  if (p.kind() == Predicate::Kind::Binding) {
    var = p.lhs().name;
    value = p.rhs();
    rest = Predicate::truth();
    return true;
  }
  if (p.kind() != Predicate::Kind::And) return false;
  auto ops = p.operands();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].kind() != Predicate::Kind::Binding) continue;
    var = ops[i].lhs().name;
    value = ops[i].rhs();
    std::vector<Predicate> others(ops.begin(), ops.end());
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
    rest = Predicate::conj(std::move(others));
    return true;
  }
  return false;
}

inline Predicate fold_ground(const Predicate& p, const Universe* u) {
  if (u == nullptr || p.is_constant() || !is_ground(p)) return p;
  auto v = evaluate(p, {}, *u);
  return v ? (*v ? Predicate::truth() : Predicate::falsity()) : p;
}

}  // namespace detail

inline Type reduce_constrained(const Type& t, const Universe* u = nullptr) {
  using K = Type::Kind;
  switch (t.kind()) {
    case K::Sequence:
    case K::Tuple:
    case K::Union: {
      std::vector<Type> items;
      for (const auto& x : t.items()) items.push_back(reduce_constrained(x, u));
      if (t.is(K::Sequence)) return Type::seq(std::move(items));
      if (t.is(K::Tuple)) return Type::tuple(std::move(items));
      return Type::union_of(std::move(items));
    }
    case K::Power:
      return Type::power(reduce_constrained(t.base(), u), t.exponent());
    case K::CorIns:
    case K::CorDef: {
      std::vector<FlowItem> flow;
      for (const auto& w : t.flow()) flow.push_back(FlowItem{w.dir, reduce_constrained(w.payload, u)});
      return t.is(K::CorDef) ? Type::cordef(std::move(flow)) : Type::corins(std::move(flow));
    }
    case K::Constrained: {
      Type base = reduce_constrained(t.base(), u);
      Predicate p = t.pred();
      for (;;) {
        p = detail::fold_ground(p, u);
        if (p.is_false() || base.is_zero()) return Type::zero();
        if (p.is_true()) return base;
        if (base.is(K::Constrained)) {
          p = Predicate::conj(base.pred(), p);
          base = base.base();
          continue;
        }
        std::string var;
        Term value;
        Predicate rest;
        if (!detail::take_binding(p, var, value, rest)) return Type::constrained(base, p);
        Bindings b{{var, value}};
        base = reduce_constrained(substitute(base, b), u);
        p = substitute(rest, b);
      }
    }
    default:
      return t;
  }
}

// ---------------------------------------------------------------------------
// Partitioning an integer variable by the atoms that mention it.

struct Interval {
  std::optional<std::int64_t> lo;
  std::optional<std::int64_t> hi;

  bool contains(std::int64_t v) const { return (!lo || v >= *lo) && (!hi || v <= *hi); }
  std::int64_t representative() const { return lo ? *lo : (hi ? *hi : 0); }

  std::string label(const std::string& var) const {
    if (lo && hi && *lo == *hi) return var + "=" + std::to_string(*lo);
    if (lo && hi) return var + "∈[" + std::to_string(*lo) + "," + std::to_string(*hi) + "]";
    if (lo) return var + "≥" + std::to_string(*lo);
    if (hi) return var + "≤" + std::to_string(*hi);
    return var + "∈ℤ";
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

namespace detail {

inline void cut_points(const Predicate& p, const std::string& var, std::set<std::int64_t>& cuts) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::And:
    case K::Or:
    case K::Not:
      for (const auto& q : p.operands()) cut_points(q, var, cuts);
      return;
    case K::Cmp:
    case K::Binding: {
      Term l = p.lhs();
      Term r = p.rhs();
      CmpOp op = p.kind() == K::Cmp ? p.op() : CmpOp::Eq;
      if (!(l.is_var() && l.name == var) && r.is_var() && r.name == var) {
        std::swap(l, r);
        op = mirror(op);
      }
      if (!(l.is_var() && l.name == var) || !r.is_int()) return;
      const std::int64_t c = r.value;
      switch (op) {
        case CmpOp::Lt:
        case CmpOp::Ge: cuts.insert(c); break;
        case CmpOp::Le:
        case CmpOp::Gt: cuts.insert(c + 1); break;
        case CmpOp::Eq: cuts.insert(c); cuts.insert(c + 1); break;
      }
      return;
    }
    default:
      return;
  }
}

}  // namespace detail

// Maximal sub-intervals of `domain` on which every predicate keeps one truth
// value (three-valued: predicates depending on other variables count as
// "unknown" consistently).
inline std::vector<Interval> partition(const std::vector<Predicate>& preds, const std::string& var,
                                       const Interval& domain, const Universe& u) {
  std::set<std::int64_t> cuts;
  for (const auto& p : preds) detail::cut_points(p, var, cuts);
  std::vector<Interval> pieces;
  std::optional<std::int64_t> lo = domain.lo;
  for (auto c : cuts) {
    if (domain.lo && c <= *domain.lo) continue;
    if (domain.hi && c > *domain.hi) break;
    pieces.push_back(Interval{lo, c - 1});
    lo = c;
  }
  pieces.push_back(Interval{lo, domain.hi});

  auto signature = [&](const Interval& iv) {
    Bindings a{{var, Term::integer(iv.representative())}};
    std::vector<int> sig;
    for (const auto& p : preds) {
      auto v = evaluate(p, a, u);
      sig.push_back(v ? (*v ? 1 : 0) : 2);
    }
    return sig;
  };

  std::vector<Interval> merged;
  std::vector<int> last;
  for (const auto& iv : pieces) {
    auto sig = signature(iv);
    if (!merged.empty() && sig == last) {
      merged.back().hi = iv.hi;
    } else {
      merged.push_back(iv);
      last = std::move(sig);
    }
  }
  return merged;
}

}  // namespace flowlock
