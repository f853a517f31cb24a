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

// Shared helpers for the test suites: locations, random generators and the
// brute-force pairing oracle.

#pragma once

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <sys/wait.h>
#include <utility>
#include <vector>

#include "flowlock.hpp"

namespace flowlock::testing {

inline std::filesystem::path source_dir() { return FLOWLOCK_SOURCE_DIR; }
inline std::filesystem::path cli_path() { return FLOWLOCK_CLI; }

inline std::string slurp(const std::filesystem::path& p) {
  auto s = read_file(p);
  if (!s) throw std::runtime_error("cannot read " + p.string());
  return *s;
}

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the command through the shell, capturing stdout.
inline RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline RunResult run_cli(const std::string& args) { return run(cli_path().string() + " " + args + " 2>/dev/null"); }

// ---- pairing oracle ---------------------------------------------------------
//
// A channel action is (yield?, type). A state is deadlock-free iff some
// sequence of rendezvous empties every instance. A rendezvous pairs the
// heads of two different instances, or a yield immediately followed by the
// matching receive in the same instance.

using Action = std::pair<bool, char>;  // true = yield
using Instance = std::vector<Action>;

inline bool oracle_deadlock(const std::vector<Instance>& initial) {
  std::map<std::vector<Instance>, bool> memo;  // state -> can finish
  std::function<bool(const std::vector<Instance>&)> finish = [&](const std::vector<Instance>& st) -> bool {
    bool empty = true;
    for (const auto& i : st) empty = empty && i.empty();
    if (empty) return true;
    if (auto it = memo.find(st); it != memo.end()) return it->second;
    bool ok = false;
    for (std::size_t i = 0; i < st.size() && !ok; ++i) {
      if (st[i].empty() || !st[i][0].first) continue;
      const char t = st[i][0].second;
      for (std::size_t j = 0; j < st.size() && !ok; ++j) {
        if (i == j || st[j].empty() || st[j][0] != Action{false, t}) continue;
        auto next = st;
        next[i].erase(next[i].begin());
        next[j].erase(next[j].begin());
        ok = finish(next);
      }
      if (!ok && st[i].size() >= 2 && st[i][1] == Action{false, t}) {
        auto next = st;
        next[i].erase(next[i].begin(), next[i].begin() + 2);
        ok = finish(next);
      }
    }
    memo[st] = ok;
    return ok;
  };
  return !finish(initial);
}

inline Type instance_type(const Instance& inst) {
  std::vector<FlowItem> flow;
  for (const auto& [y, t] : inst) {
    Type c = Type::concrete(std::string(1, t));
    flow.push_back(y ? FlowItem::yield(c) : FlowItem::receive(c));
  }
  return Type::corins(std::move(flow));
}

// Engine verdict on the same state; the first instance plays main.
inline bool engine_deadlock(const std::vector<Instance>& st, std::size_t max_steps = 500) {
  std::vector<Type> initial;
  for (const auto& i : st) initial.push_back(instance_type(i));
  Universe u({"A", "B", "C"});
  EngineOptions o;
  o.max_steps = max_steps;
  o.record_trace = false;
  return reduce(initial, {}, u, o).verdict.kind == Verdict::Kind::Deadlock;
}

// ≤ 4 instances, ≤ 3 actions each, ≤ 3 types.
inline std::vector<Instance> random_state(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = pick(1, 4);
  const int types = pick(1, 3);
  std::vector<Instance> st(static_cast<std::size_t>(n));
  for (auto& inst : st) {
    const int len = pick(0, 3);
    for (int k = 0; k < len; ++k) inst.push_back({pick(0, 1) == 1, static_cast<char>('A' + pick(0, types - 1))});
  }
  return st;
}

inline std::string show(const std::vector<Instance>& st) {
  std::string out;
  for (const auto& i : st) out += (out.empty() ? "" : ", ") + to_string(instance_type(i));
  return out;
}

// ---- random terms -----------------------------------------------------------

inline Term random_term(std::mt19937& rng) {
  static const char* vars[] = {"x", "y", "n"};
  switch (rng() % 3) {
    case 0: return Term::var(vars[rng() % 3]);
    case 1: return Term::integer(static_cast<std::int64_t>(rng() % 7) - 2);
    default: return Term::integer(static_cast<std::int64_t>(rng() % 4));
  }
}

inline Predicate random_predicate(std::mt19937& rng, int depth) {
  static const CmpOp ops[] = {CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ge, CmpOp::Gt};
  if (depth <= 0 || rng() % 3 == 0) {
    if (rng() % 8 == 0) return rng() % 2 ? Predicate::truth() : Predicate::falsity();
    return Predicate::cmp(Term::var(rng() % 2 ? "x" : "y"), ops[rng() % 5], random_term(rng));
  }
  switch (rng() % 3) {
    case 0: return Predicate::conj(random_predicate(rng, depth - 1), random_predicate(rng, depth - 1));
    case 1: return Predicate::disj(random_predicate(rng, depth - 1), random_predicate(rng, depth - 1));
    default: return Predicate::negate(random_predicate(rng, depth - 1));
  }
}

// Ground (variable-free) types over a few concrete names.
inline Type random_ground_type(std::mt19937& rng, int depth) {
  static const char* names[] = {"Int", "String", "Bool"};
  if (depth <= 0 || rng() % 3 == 0) return Type::concrete(names[rng() % 3]);
  switch (rng() % 4) {
    case 0: return Type::power(random_ground_type(rng, depth - 1), Term::integer(static_cast<std::int64_t>(1 + rng() % 3)));
    case 1: return Type::tuple({random_ground_type(rng, depth - 1), random_ground_type(rng, depth - 1)});
    case 2: return Type::seq({random_ground_type(rng, depth - 1), random_ground_type(rng, depth - 1)});
    default: return Type::corins({FlowItem::yield(random_ground_type(rng, depth - 1))});
  }
}

// General types for printer/parser round trips.
inline Type random_type(std::mt19937& rng, int depth) {
  static const char* names[] = {"Int", "String", "Error"};
  static const char* tvars[] = {"a", "b"};
  if (depth <= 0) {
    switch (rng() % 3) {
      case 0: return Type::concrete(names[rng() % 3]);
      case 1: return Type::variable(tvars[rng() % 2]);
      default: return Type::zero();
    }
  }
  auto flow = [&](int d) {
    std::vector<FlowItem> f;
    const int len = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < len; ++k) {
      Type p = random_type(rng, d);
      while (detail::contains_union(p)) p = Type::concrete(names[rng() % 3]);
      f.push_back(rng() % 2 ? FlowItem::yield(p) : FlowItem::receive(p));
    }
    return f;
  };
  switch (rng() % 8) {
    case 0: return Type::seq({random_type(rng, depth - 1), random_type(rng, depth - 1)});
    case 1: return Type::tuple({random_type(rng, depth - 1), random_type(rng, depth - 1)});
    case 2: return Type::union_of({random_type(rng, depth - 1), random_type(rng, depth - 1)});
    case 3: return Type::constrained(random_type(rng, depth - 1), random_predicate(rng, 1));
    case 4: return Type::power(random_type(rng, depth - 1), rng() % 2 ? Term::var("n") : Term::integer(2));
    case 5: return Type::cordef(flow(depth - 1));
    case 6: return Type::corins(flow(depth - 1));
    default: return Type::start(Type::ref("worker"), rng() % 2 ? Bindings{} : Bindings{{"v", Term::integer(2)}});
  }
}

}  // namespace flowlock::testing
