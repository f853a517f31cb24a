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

// The reduction machine ⊚. One step fires the first applicable rule:
//
//   StartEval   an unevaluated Start entry becomes an instance
//   InlineEval  an Inline head is replaced by the callee's flow
//   RemoveVoid  a !0 / ?0 item is erased
//   Resume      pending τ goes to the first other instance whose head ?s
//               matches (the yielder itself only as a last resort)
//   External    otherwise τ is appended to E
//   MainExit    main has finished, nothing is pending and no yield can be
//               received: stop and discard the remaining goroutines
//   ResumeCo    a head ?I receives a whole live instance
//   YieldCo /   scan instances in order; a Start/instance head is spawned at
//   Yield       the end of the list, a value head is yielded if some head can
//               receive it; failing that, the first value head is yielded
//   CoToExt     no yielding heads: stop with [!E; !S]
//
// Exhausted instances leave the list as soon as they appear. A non-empty E at
// termination is always a deadlock: an executable has no caller to take it.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flowlock/error.hpp"
#include "flowlock/predicate.hpp"
#include "flowlock/solver.hpp"
#include "flowlock/type.hpp"

namespace flowlock {

enum class Rule : std::uint8_t {
  RemoveVoid,
  Yield,
  YieldCo,
  CoToExt,
  Resume,
  External,
  ResumeCo,
  StartEval,
  InlineEval,
  MainExit,
};

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::RemoveVoid: return "RemoveVoid";
    case Rule::Yield: return "Yield";
    case Rule::YieldCo: return "YieldCo";
    case Rule::CoToExt: return "CoToExt";
    case Rule::Resume: return "Resume";
    case Rule::External: return "External";
    case Rule::ResumeCo: return "ResumeCo";
    case Rule::StartEval: return "StartEval";
    case Rule::InlineEval: return "InlineEval";
    case Rule::MainExit: return "MainExit";
  }
  return "?";
}

struct TraceEntry {
  std::size_t step = 0;
  Rule rule = Rule::Yield;
  std::string before;
  std::string after;

  std::string render() const {
    return "step " + std::to_string(step) + " [" + std::string(to_string(rule)) + "] " + after;
  }
};

struct Verdict {
  enum class Kind : std::uint8_t { NoDeadlock, Deadlock, Inconclusive, Unsupported };

  Kind kind = Kind::NoDeadlock;
  Type residual;
  std::vector<Type> externals;
  std::string reason;
  std::string case_label;

  static Verdict no_deadlock() { return Verdict{}; }
  static Verdict deadlock(Type residual, std::vector<Type> externals) {
    Verdict v;
    v.kind = Kind::Deadlock;
    v.residual = std::move(residual);
    v.externals = std::move(externals);
    return v;
  }
  static Verdict inconclusive(std::size_t cap) {
    Verdict v;
    v.kind = Kind::Inconclusive;
    v.reason = "step cap of " + std::to_string(cap) + " reached";
    return v;
  }
  static Verdict unsupported(std::string reason) {
    Verdict v;
    v.kind = Kind::Unsupported;
    v.reason = std::move(reason);
    return v;
  }
};

inline std::string_view to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::NoDeadlock: return "NoDeadlock";
    case Verdict::Kind::Deadlock: return "Deadlock";
    case Verdict::Kind::Inconclusive: return "Inconclusive";
    case Verdict::Kind::Unsupported: return "Unsupported";
  }
  return "?";
}

inline std::vector<FlowItem> distribute_externals(const std::vector<Type>& e) {
  std::vector<FlowItem> out;
  for (const auto& t : e) {
    for (auto& w : distribute(Dir::Yield, t)) out.push_back(std::move(w));
  }
  return out;
}

// Terminal result of reduction: residual Zero is deadlock freedom.
inline Verdict classify(const Type& residual, const std::vector<Type>& externals) {
  if (residual.is_zero() && externals.empty()) return Verdict::no_deadlock();
  return Verdict::deadlock(residual.is_zero() ? Type::corins(distribute_externals(externals)) : residual, externals);
}

using Definitions = std::map<std::string, Type>;

// ---------------------------------------------------------------------------
// Start / Inline evaluation

struct Alternative {
  std::vector<FlowItem> flow;
  Predicate condition;
};

namespace detail {

inline const Type& resolve_def(const Type& def, const Definitions& defs) {
  if (def.is(Type::Kind::Ref)) {
    auto it = defs.find(def.name());
    if (it == defs.end()) throw FlowError(ErrorCode::UnknownDefinition, "no definition named " + def.name());
    return it->second;
  }
  return def;
}

inline std::vector<FlowItem> definition_flow(const Type& d) {
  if (d.is(Type::Kind::CorDef) || d.is(Type::Kind::CorIns)) return {d.flow().begin(), d.flow().end()};
  if (d.is_zero()) return {};
  throw FlowError(ErrorCode::NotAnInstance, "Start/Inline of a non-coroutine type " + to_string(d));
}

inline void expand_items(const std::vector<FlowItem>& flow, const Universe& u, std::vector<Alternative>& alts);

// A chosen union branch (or any payload) turned into instance items. A
// definition fragment as payload stands for its items in place.
inline void expand_payload(Dir dir, const Type& payload, const Universe& u, std::vector<Alternative>& alts) {
  if (payload.is(Type::Kind::CorDef)) {
    expand_items({payload.flow().begin(), payload.flow().end()}, u, alts);
    return;
  }
  if (payload.is(Type::Kind::Union)) {
    std::vector<Alternative> out;
    for (const auto& br : payload.items()) {
      Predicate cond = br.is(Type::Kind::Constrained) ? br.pred() : Predicate::truth();
      Type body = br.is(Type::Kind::Constrained) ? br.base() : br;
      for (const auto& a : alts) {
        Predicate c = detail::fold_ground(Predicate::conj(a.condition, cond), &u);
        if (c.is_false()) continue;
        if (!c.is_true() && !Solver(u).satisfiable(c)) continue;
        std::vector<Alternative> one{Alternative{a.flow, c}};
        expand_payload(dir, body, u, one);
        out.insert(out.end(), one.begin(), one.end());
      }
    }
    alts = std::move(out);
    return;
  }
  Type t = reduce_constrained(payload, &u);
  for (auto& a : alts) {
    for (auto& w : distribute(dir, t)) a.flow.push_back(std::move(w));
  }
}

inline void expand_items(const std::vector<FlowItem>& flow, const Universe& u, std::vector<Alternative>& alts) {
  for (const auto& w : flow) expand_payload(w.dir, w.payload, u, alts);
}

}  // namespace detail

// Instantiates a definition under argument bindings. Every union is resolved:
// one alternative per satisfiable combination of branches, each paired with
// the condition selecting it.
inline std::vector<Alternative> instantiate(const Type& def, const Bindings& args, const Definitions& defs,
                                            const Universe& u, const Bindings& globals = {}) {
  Bindings b = globals;
  for (const auto& [k, v] : args) b[k] = v;
  Type d = substitute(detail::resolve_def(def, defs), b);
  std::vector<Alternative> alts{Alternative{{}, Predicate::truth()}};
  detail::expand_items(detail::definition_flow(d), u, alts);
  if (alts.empty()) {
    throw FlowError(ErrorCode::NoSatisfiableBranch, "no branch of " + to_string(def) + " is satisfiable");
  }
  // A branch whose condition holds outright wins over undecided ones.
  for (const auto& a : alts) {
    if (a.condition.is_true()) return {a};
  }
  return alts;
}

// Start as a function: the instance when branches are decided, otherwise all
// guarded alternatives.
inline std::vector<std::pair<Type, Predicate>> start(const Type& def, const Bindings& args, const Definitions& defs,
                                                     const Universe& u) {
  std::vector<std::pair<Type, Predicate>> out;
  for (auto& a : instantiate(def, args, defs, u)) out.emplace_back(Type::corins(std::move(a.flow)), a.condition);
  return out;
}

enum class InlinePosition : std::uint8_t { Here, AtEnd };

// Splices an instantiated definition into `target`: in place of its first
// Inline item, or after all items (deferred calls).
inline Type inline_into(const Type& target, const Type& def, const Bindings& args, InlinePosition pos,
                        const Definitions& defs, const Universe& u) {
  if (!target.is(Type::Kind::CorIns)) throw FlowError(ErrorCode::NotAnInstance, "inline target is not an instance");
  auto alts = instantiate(def, args, defs, u);
  if (alts.size() != 1) {
    throw FlowError(ErrorCode::NoSatisfiableBranch, "inlined definition has undecided branches");
  }
  std::vector<FlowItem> flow(target.flow().begin(), target.flow().end());
  auto& items = alts.front().flow;
  if (pos == InlinePosition::AtEnd) {
    flow.insert(flow.end(), items.begin(), items.end());
  } else {
    auto it = std::find_if(flow.begin(), flow.end(), [](const FlowItem& w) { return w.payload.is(Type::Kind::Inline); });
    if (it == flow.end()) {
      flow.insert(flow.end(), items.begin(), items.end());
    } else {
      it = flow.erase(it);
      flow.insert(it, items.begin(), items.end());
    }
  }
  return Type::corins(std::move(flow));
}

// ---------------------------------------------------------------------------
// Reduction

struct EngineOptions {
  std::size_t max_steps = 500;
  Bindings globals;  // fixed values for otherwise free condition variables
  bool record_trace = true;
};

struct Outcome {
  Verdict verdict;
  std::vector<TraceEntry> trace;
  std::size_t steps = 0;
  // Non-empty when a Start met branches it could not decide; the verdict is
  // then meaningless and the caller must split on these conditions.
  std::vector<Predicate> unresolved;
};

class Engine {
 public:
  Engine(const Definitions& defs, const Universe& u, EngineOptions opts = {})
      : defs_(defs), u_(u), opts_(std::move(opts)) {}

  // `initial` holds Start applications and/or instances; the first is main.
  Outcome reduce(const std::vector<Type>& initial) {
    State s;
    for (const auto& t : initial) s.live.push_back(make_entry(t, s.next_id++));
    if (!s.live.empty()) s.main_id = s.live.front().id;
    s.main_done = s.live.empty();
    prune(s);

    Outcome out;
    for (;;) {
      if (s.steps >= opts_.max_steps) {
        out.verdict = Verdict::inconclusive(opts_.max_steps);
        break;
      }
      std::string before = opts_.record_trace ? render(s) : std::string{};
      std::optional<Rule> rule;
      std::optional<Type> residual;
      try {
        rule = step(s, residual, out.unresolved);
      } catch (const Unresolved&) {
        break;
      }
      ++s.steps;
      if (residual) {
        if (opts_.record_trace) {
          out.trace.push_back(TraceEntry{s.steps, *rule, before, "(0, 0) ⊢ " + to_string(*residual)});
        }
        out.verdict = classify(*residual, s.externals);
        break;
      }
      prune(s);
      if (opts_.record_trace) out.trace.push_back(TraceEntry{s.steps, *rule, before, render(s)});
    }
    out.steps = s.steps;
    return out;
  }

 private:
  struct Entry {
    std::size_t id = 0;
    std::optional<Type> start;  // unevaluated Start application
    std::vector<FlowItem> flow;
    Predicate constraint;
  };

  struct State {
    Type pending;
    std::vector<Type> externals;
    std::vector<Entry> live;
    std::size_t main_id = 0;
    bool main_done = false;
    std::optional<std::size_t> yielder;
    std::size_t next_id = 0;
    std::size_t steps = 0;
  };

  struct Unresolved {};

  static Entry make_entry(const Type& t, std::size_t id) {
    Entry e;
    e.id = id;
    if (t.is(Type::Kind::Start)) {
      e.start = t;
    } else {
      set_instance(e, t);
    }
    return e;
  }

  static void set_instance(Entry& e, const Type& t) {
    e.start.reset();
    if (t.is_zero()) {
      e.flow.clear();
      e.constraint = Predicate::truth();
    } else if (t.is(Type::Kind::Constrained) && t.base().is(Type::Kind::CorIns)) {
      e.flow.assign(t.base().flow().begin(), t.base().flow().end());
      e.constraint = t.pred();
    } else if (t.is(Type::Kind::CorIns)) {
      e.flow.assign(t.flow().begin(), t.flow().end());
      e.constraint = Predicate::truth();
    } else {
      throw FlowError(ErrorCode::NotAnInstance, "live entry is not an instance: " + to_string(t));
    }
  }

  static Type as_type(const Entry& e) {
    if (e.start) return *e.start;
    Type i = Type::corins(e.flow);
    return e.constraint.is_true() ? i : Type::constrained(i, e.constraint);
  }

  static std::string render(const State& s) {
    std::string out = "(" + to_string(s.pending) + ", " + to_string(Type::seq(s.externals)) + ") ⊢ ⊚⟨";
    bool first = true;
    for (const auto& e : s.live) {
      if (!first) out += ", ";
      first = false;
      out += to_string(as_type(e));
    }
    return out + "⟩";
  }

  void prune(State& s) const {
    std::erase_if(s.live, [&](const Entry& e) {
      if (e.start || !e.flow.empty()) return false;
      if (e.id == s.main_id) s.main_done = true;
      return true;
    });
  }

  static bool is_spawn(const FlowItem& w) {
    return w.dir == Dir::Yield &&
           (w.payload.is(Type::Kind::Start) || w.payload.is(Type::Kind::CorIns) || w.payload.is(Type::Kind::CorDef));
  }

  static bool is_value_yield(const FlowItem& w) { return w.dir == Dir::Yield && !is_spawn(w) && !w.payload.is_application(); }

  static Type guarded(const Type& t, const Predicate& p) { return p.is_true() ? t : Type::constrained(t, p); }

  std::vector<FlowItem> spawn_flow(const Type& app, std::vector<Predicate>& unresolved) const {
    std::vector<Alternative> alts;
    if (app.is(Type::Kind::CorIns)) return {app.flow().begin(), app.flow().end()};
    if (app.is(Type::Kind::CorDef)) {
      alts = instantiate(app, {}, defs_, u_, opts_.globals);
    } else {
      alts = instantiate(app.def(), app.args(), defs_, u_, opts_.globals);
    }
    if (alts.size() != 1) {
      for (const auto& a : alts) unresolved.push_back(a.condition);
      throw Unresolved{};
    }
    return std::move(alts.front().flow);
  }

  std::optional<ConditionSet> receives(const Entry& e, const Type& pending) const {
    if (e.start || e.flow.empty()) return std::nullopt;
    const FlowItem& h = e.flow.front();
    if (h.dir != Dir::Receive) return std::nullopt;
    return match(pending, guarded(h.payload, e.constraint), u_);
  }

  void resume(Entry& e, const ConditionSet& b) const {
    std::vector<FlowItem> rest(e.flow.begin() + 1, e.flow.end());
    Type t = Type::constrained(Type::corins(std::move(rest)), Predicate::conj(e.constraint, b.as_predicate()));
    set_instance(e, reduce_constrained(t, &u_));
  }

  // Index of the instance that would receive `t` yielded by entry `from`.
  std::optional<std::pair<std::size_t, ConditionSet>> receiver(const State& s, const Type& t,
                                                                std::optional<std::size_t> from) const {
    std::optional<std::size_t> self;
    for (std::size_t j = 0; j < s.live.size(); ++j) {
      if (from && s.live[j].id == *from) {
        self = j;
        continue;
      }
      if (auto b = receives(s.live[j], t)) return std::make_pair(j, *b);
    }
    if (self) {
      if (auto b = receives(s.live[*self], t)) return std::make_pair(*self, *b);
    }
    return std::nullopt;
  }

  // Whether the value head of entry k can be received by some head once it
  // has been yielded.
  bool demanded(const State& s, std::size_t k) const {
    const Entry& e = s.live[k];
    Type t = reduce_constrained(guarded(e.flow.front().payload, e.constraint), &u_);
    State probe;
    probe.live = s.live;
    probe.live[k].flow.erase(probe.live[k].flow.begin());
    return receiver(probe, t, e.id).has_value();
  }

  std::optional<Rule> step(State& s, std::optional<Type>& residual, std::vector<Predicate>& unresolved) const {
    // StartEval
    for (auto& e : s.live) {
      if (!e.start) continue;
      auto flow = spawn_flow(*e.start, unresolved);
      e.start.reset();
      e.flow = std::move(flow);
      e.constraint = Predicate::truth();
      return Rule::StartEval;
    }
    // InlineEval
    for (auto& e : s.live) {
      if (e.flow.empty() || !e.flow.front().payload.is(Type::Kind::Inline)) continue;
      const Type app = e.flow.front().payload;
      auto alts = instantiate(app.def(), app.args(), defs_, u_, opts_.globals);
      if (alts.size() != 1) {
        for (const auto& a : alts) unresolved.push_back(a.condition);
        throw Unresolved{};
      }
      e.flow.erase(e.flow.begin());
      e.flow.insert(e.flow.begin(), alts.front().flow.begin(), alts.front().flow.end());
      return Rule::InlineEval;
    }
    // RemoveVoid
    for (auto& e : s.live) {
      auto it = std::find_if(e.flow.begin(), e.flow.end(), [](const FlowItem& w) { return w.payload.is_zero(); });
      if (it == e.flow.end()) continue;
      e.flow.erase(it);
      return Rule::RemoveVoid;
    }
    // Resume / External
    if (!s.pending.is_zero()) {
      auto r = receiver(s, s.pending, s.yielder);
      s.yielder.reset();
      if (r) {
        resume(s.live[r->first], r->second);
        s.pending = Type::zero();
        return Rule::Resume;
      }
      s.externals.push_back(s.pending);
      s.pending = Type::zero();
      return Rule::External;
    }

    std::optional<std::size_t> first_spawn_or_demanded;
    std::optional<std::size_t> first_value;
    for (std::size_t k = 0; k < s.live.size() && !first_spawn_or_demanded; ++k) {
      const Entry& e = s.live[k];
      if (e.flow.empty()) continue;
      const FlowItem& h = e.flow.front();
      if (is_spawn(h)) {
        first_spawn_or_demanded = k;
      } else if (is_value_yield(h)) {
        if (!first_value) first_value = k;
        if (demanded(s, k)) first_spawn_or_demanded = k;
      }
    }

    // MainExit
    if (s.main_done && !any_demanded(s)) {
      residual = main_exit_residual(s);
      return Rule::MainExit;
    }

    // ResumeCo
    for (std::size_t k = 0; k < s.live.size(); ++k) {
      Entry& e = s.live[k];
      if (e.flow.empty() || e.flow.front().dir != Dir::Receive) continue;
      const Type& pat = e.flow.front().payload;
      const Type& core = pat.is(Type::Kind::Constrained) ? pat.base() : pat;
      if (!core.is(Type::Kind::CorIns)) continue;
      for (std::size_t j = 0; j < s.live.size(); ++j) {
        if (j == k || s.live[j].start) continue;
        if (auto b = match(as_type(s.live[j]), guarded(pat, e.constraint), u_)) {
          resume(e, *b);
          if (s.live[j].id == s.main_id) s.main_done = true;
          s.live.erase(s.live.begin() + static_cast<std::ptrdiff_t>(j));
          return Rule::ResumeCo;
        }
      }
      break;
    }

    // YieldCo / Yield
    std::optional<std::size_t> k = first_spawn_or_demanded ? first_spawn_or_demanded : first_value;
    if (k) {
      Entry& e = s.live[*k];
      FlowItem h = e.flow.front();
      e.flow.erase(e.flow.begin());
      if (is_spawn(h)) {
        auto flow = spawn_flow(h.payload, unresolved);
        Entry n;
        n.id = s.next_id++;
        n.flow = std::move(flow);
        s.live.push_back(std::move(n));
        return Rule::YieldCo;
      }
      s.pending = reduce_constrained(guarded(h.payload, e.constraint), &u_);
      s.yielder = e.id;
      return Rule::Yield;
    }

    // CoToExt
    std::vector<FlowItem> items = distribute_externals(s.externals);
    for (const auto& e : s.live) items.push_back(FlowItem::yield(as_type(e)));
    residual = items.empty() ? Type::zero() : Type::corins(std::move(items));
    return Rule::CoToExt;
  }

  bool any_demanded(const State& s) const {
    for (std::size_t k = 0; k < s.live.size(); ++k) {
      const Entry& e = s.live[k];
      if (!e.flow.empty() && is_value_yield(e.flow.front()) && demanded(s, k)) return true;
    }
    return false;
  }

  // Goroutines still blocked on a channel when main returns; ones about to
  // spawn are simply killed.
  static Type main_exit_residual(const State& s) {
    if (!s.externals.empty()) return Type::corins(distribute_externals(s.externals));
    std::vector<FlowItem> items;
    for (const auto& e : s.live) {
      if (e.start || e.flow.empty() || is_spawn(e.flow.front())) continue;
      items.push_back(FlowItem::yield(as_type(e)));
    }
    return items.empty() ? Type::zero() : Type::corins(std::move(items));
  }

  const Definitions& defs_;
  const Universe& u_;
  EngineOptions opts_;
};

inline Outcome reduce(const std::vector<Type>& initial, const Definitions& defs, const Universe& u,
                      EngineOptions opts = {}) {
  return Engine(defs, u, std::move(opts)).reduce(initial);
}

// ---------------------------------------------------------------------------
// Case splitting on undecided conditions

struct CaseResult {
  std::string label;
  Bindings globals;
  Outcome outcome;
};

// Integer domains known for condition variables (e.g. from rand.Intn);
// unlisted integer variables range over all integers.
using VariableDomains = std::map<std::string, Interval>;

namespace detail {

inline void split(const std::vector<Type>& initial, const Definitions& defs, const Universe& u,
                  const EngineOptions& opts, const VariableDomains& domains, const std::string& label,
                  std::size_t depth, std::vector<CaseResult>& out) {
  Outcome o = reduce(initial, defs, u, opts);
  if (o.unresolved.empty()) {
    out.push_back(CaseResult{label, opts.globals, std::move(o)});
    return;
  }
  std::vector<std::string> vars;
  for (const auto& p : o.unresolved) collect_variables(p, vars);
  if (vars.empty() || depth > 16) {
    throw FlowError(ErrorCode::NoSatisfiableBranch, "branch conditions cannot be split into cases");
  }
  const std::string& var = vars.front();
  auto doms = Solver(u).domains(Predicate::disj(o.unresolved));
  auto join = [&](const std::string& piece) { return label.empty() ? piece : label + ", " + piece; };
  if (doms[var] == Domain::Concrete) {
    for (const auto& sym : u.symbols()) {
      EngineOptions next = opts;
      next.globals[var] = Term::sym(sym);
      split(initial, defs, u, next, domains, join(var + "=" + sym), depth + 1, out);
    }
    return;
  }
  auto it = domains.find(var);
  Interval dom = it == domains.end() ? Interval{} : it->second;
  for (const auto& iv : partition(o.unresolved, var, dom, u)) {
    EngineOptions next = opts;
    next.globals[var] = Term::integer(iv.representative());
    split(initial, defs, u, next, domains, join(iv.label(var)), depth + 1, out);
  }
}

}  // namespace detail

// One reduction per case of the undecided branch conditions, in ascending
// order of the split variables.
inline std::vector<CaseResult> reduce_cases(const std::vector<Type>& initial, const Definitions& defs,
                                            const Universe& u, const EngineOptions& opts,
                                            const VariableDomains& domains = {}) {
  std::vector<CaseResult> out;
  detail::split(initial, defs, u, opts, domains, "", 0, out);
  for (auto& c : out) c.outcome.verdict.case_label = c.label;
  return out;
}

}  // namespace flowlock
