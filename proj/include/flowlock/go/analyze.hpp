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

// End-to-end analysis of one Go source file.

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flowlock/engine.hpp"
#include "flowlock/go/typing.hpp"

namespace flowlock::go {

struct AnalysisOptions {
  std::size_t max_steps = 500;
  bool record_trace = true;
};

struct CaseReport {
  std::string label;  // empty when the program needed no case split
  Verdict verdict;
  std::vector<TraceEntry> trace;
  std::size_t steps = 0;
};

struct Analysis {
  std::vector<CaseReport> cases;
  std::vector<std::string> warnings;
  Definitions defs;
  std::map<std::string, Type> anonymous;
  std::size_t iterations = 0;
};

// Channels are identified by element type only; two makes of the same
// element type cannot be told apart.
inline std::vector<std::string> channel_warnings(const GoProgram& prog) {
  std::map<std::string, std::vector<int>> sites;
  detail::Visitor v;
  v.on_expr = [&](const Expr& e) {
    if (e.kind == Expr::Kind::Call && e.x->kind == Expr::Kind::Ident && e.x->text == "make" && !e.args.empty() &&
        e.args.front()->type && e.args.front()->type->kind == GoType::Kind::Chan) {
      sites[concrete_name(e.args.front()->type->elem)].push_back(e.line);
    }
  };
  for (const auto& g : prog.source->globals) v.stmt(g);
  for (const auto& fn : prog.source->functions) v.block(fn.body);
  std::vector<std::string> out;
  for (const auto& [elem, lines] : sites) {
    if (lines.size() < 2) continue;
    std::string at;
    for (std::size_t i = 0; i < lines.size(); ++i) at += (i ? ", " : "") + std::to_string(lines[i]);
    out.push_back(std::to_string(lines.size()) + " channels of element type " + elem + " (lines " + at +
                  ") are indistinguishable; channel identity is not tracked");
  }
  return out;
}

inline Universe universe_for(const GoProgram& prog, const Definitions& defs) {
  Universe u;
  for (const auto& [name, d] : defs) u.add_symbols(collect_concrete(d));
  std::set<std::vector<std::string>> pairs;
  for (const auto& [sub, super] : prog.subtypes) pairs.insert({sub, super});
  u.register_relation("inherit", pairs, 2);
  return u;
}

// Unsupported features yield a single Unsupported case; syntax errors and
// unresolvable channels propagate as FlowError.
inline Analysis analyze(std::string_view source, const AnalysisOptions& opts = {}) {
  Analysis a;
  try {
    GoProgram prog = parse_program(source);
    a.warnings = channel_warnings(prog);
    TypingInfo info;
    a.defs = compute_m(prog, &info);
    a.anonymous = std::move(info.anonymous);
    a.iterations = info.iterations;
    if (!a.defs.contains("main")) {
      a.cases.push_back(CaseReport{"", Verdict::no_deadlock(), {}, 0});
      return a;
    }
    Universe u = universe_for(prog, a.defs);
    EngineOptions eo;
    eo.max_steps = opts.max_steps;
    eo.record_trace = opts.record_trace;
    for (auto& c : reduce_cases({Type::start(Type::ref("main"))}, a.defs, u, eo, info.domains)) {
      a.cases.push_back(CaseReport{c.label, c.outcome.verdict, std::move(c.outcome.trace), c.outcome.steps});
    }
  } catch (const FlowError& e) {
    if (e.code() != ErrorCode::Unsupported) throw;
    a.cases.clear();
    a.cases.push_back(CaseReport{"", Verdict::unsupported(e.detail()), {}, 0});
  }
  return a;
}

}  // namespace flowlock::go
