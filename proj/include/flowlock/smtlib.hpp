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

// SMT-LIB v2.6 rendering of a solver query, for cross-checking against an
// external solver. Output is a pure function of (expr, universe).

#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flowlock/predicate.hpp"
#include "flowlock/solver.hpp"

namespace flowlock {

namespace detail {

inline std::string smt_symbol(std::string_view name) {
  static const std::set<std::string_view> kReserved = {
      "Int", "Bool", "Real", "String", "Array", "true", "false", "and", "or", "not", "let",
      "forall", "exists", "ite", "assert", "distinct", "par", "as", "_", "!", "Concrete"};
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0])) && !kReserved.contains(name);
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') simple = false;
  }
  if (simple) return std::string(name);
  std::string out = "|";
  for (char c : name) {
    if (c != '|' && c != '\\') out += c;
  }
  return out + "|";
}

inline std::string smt_term(const Term& t) {
  if (t.is_int()) return t.value < 0 ? "(- " + std::to_string(-t.value) + ")" : std::to_string(t.value);
  return smt_symbol(t.name);
}

inline std::string smt_pred(const Predicate& p) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::True: return "true";
    case K::False: return "false";
    case K::And:
    case K::Or: {
      std::string out = p.kind() == K::And ? "(and" : "(or";
      for (const auto& q : p.operands()) out += " " + smt_pred(q);
      return out + ")";
    }
    case K::Not: return "(not " + smt_pred(p.operands().front()) + ")";
    case K::Cmp: {
      std::string_view op = p.op() == CmpOp::Eq ? "=" : to_string(p.op());
      return "(" + std::string(op) + " " + smt_term(p.lhs()) + " " + smt_term(p.rhs()) + ")";
    }
    case K::Binding: return "(= " + smt_term(p.lhs()) + " " + smt_term(p.rhs()) + ")";
    case K::Relation: {
      std::string out = "(" + smt_symbol(p.name());
      for (const auto& t : p.args()) out += " " + smt_term(t);
      return out + ")";
    }
  }
  return "true";
}

inline void relation_names(const Predicate& p, std::set<std::string>& out) {
  if (p.kind() == Predicate::Kind::Relation) out.insert(p.name());
  for (const auto& q : p.operands()) relation_names(q, out);
}

}  // namespace detail

inline std::string emit_smtlib(const Predicate& expr, const Universe& u) {
  std::string out = "(set-logic ALL)\n";

  std::set<std::string> syms = u.symbols();
  {
    std::vector<std::string> extra;
    collect_symbols(expr, extra);
    syms.insert(extra.begin(), extra.end());
  }
  auto doms = Solver(u).domains(expr);
  bool need_sort = !syms.empty();
  for (const auto& [v, d] : doms) need_sort = need_sort || d == Domain::Concrete;
  std::set<std::string> used_relations;
  detail::relation_names(expr, used_relations);
  need_sort = need_sort || !u.relations().empty();

  bool empty_sort = false;
  if (need_sort) {
    if (syms.empty()) {
      // An empty sort is not expressible; keep the script well-formed and unsat.
      empty_sort = true;
      out += "(declare-datatype Concrete ((|#none|)))\n";
    } else {
      out += "(declare-datatype Concrete (";
      bool first = true;
      for (const auto& s : syms) {
        if (!first) out += " ";
        first = false;
        out += "(" + detail::smt_symbol(s) + ")";
      }
      out += "))\n";
    }
  }

  for (const auto& v : variables_of(expr)) {
    out += "(declare-const " + detail::smt_symbol(v) + (doms[v] == Domain::Int ? " Int" : " Concrete") + ")\n";
  }

  for (const auto& [name, rel] : u.relations()) {
    const std::string fn = detail::smt_symbol(name);
    out += "(declare-fun " + fn + " (";
    for (std::size_t i = 0; i < rel.arity; ++i) out += i ? " Concrete" : "Concrete";
    out += ") Bool)\n";
    std::vector<std::string> params;
    for (std::size_t i = 0; i < rel.arity; ++i) params.push_back(std::string(1, static_cast<char>('x' + i % 3)) + (i >= 3 ? std::to_string(i) : ""));
    std::string app = "(" + fn;
    for (const auto& x : params) app += " " + x;
    app += ")";
    if (rel.arity == 0) {
      out += "(assert " + std::string(rel.tuples.empty() ? "(not " + fn + ")" : fn) + ")\n";
      continue;
    }
    std::string known = "false";
    if (!rel.tuples.empty()) {
      known = "(or";
      for (const auto& tup : rel.tuples) {
        known += " (and";
        for (std::size_t i = 0; i < tup.size(); ++i) known += " (= " + params[i] + " " + detail::smt_symbol(tup[i]) + ")";
        known += ")";
      }
      known += ")";
    }
    out += "(assert (forall (";
    for (std::size_t i = 0; i < params.size(); ++i) out += (i ? " (" : "(") + params[i] + " Concrete)";
    out += ")\n  (let ((r (not " + known + ")))\n    (=> r (= " + app + " false)))))\n";
    for (const auto& tup : rel.tuples) {
      out += "(assert (" + fn;
      for (const auto& s : tup) out += " " + detail::smt_symbol(s);
      out += "))\n";
    }
  }

  if (empty_sort && std::any_of(doms.begin(), doms.end(), [](const auto& kv) { return kv.second == Domain::Concrete; })) {
    out += "(assert false)\n";
  }
  out += "(assert " + detail::smt_pred(expr) + ")\n";
  out += "(check-sat)\n";
  return out;
}

}  // namespace flowlock
