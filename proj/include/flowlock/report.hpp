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

// Reports for the command-line tool: text and JSON rendering, exit codes,
// and the corpus runner. JSON objects use std::map storage, so keys are
// always emitted sorted.

#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowlock/go/analyze.hpp"

namespace flowlock {

struct CaseVerdict {
  std::string label;
  std::string verdict;    // NoDeadlock | Deadlock | Inconclusive | Unsupported
  std::string residual;   // printed residual type; "0" when nothing is left
  std::string externals;  // printed pending external yields; empty when none
  std::string reason;     // feature name or cap message; empty otherwise
  std::vector<std::string> trace;
  bool operator==(const CaseVerdict&) const = default;
};

struct Report {
  std::string file;
  std::vector<CaseVerdict> verdicts;
  std::vector<std::string> warnings;
  std::size_t steps = 0;  // summed over cases
  double elapsed_ms = 0;
  bool has_trace = false;
  bool operator==(const Report&) const = default;
};

namespace exit_code {
inline constexpr int kNoDeadlock = 0;
inline constexpr int kDeadlock = 1;
inline constexpr int kUnsupported = 2;
inline constexpr int kError = 3;
}  // namespace exit_code

inline std::string print_externals(const std::vector<Type>& es) {
  std::string out;
  for (std::size_t i = 0; i < es.size(); ++i) out += (i ? "; " : "") + ("!" + to_string(es[i]));
  return es.empty() ? out : "[" + out + "]";
}

inline CaseVerdict case_verdict(const go::CaseReport& c, bool with_trace) {
  CaseVerdict v;
  v.label = c.label;
  v.verdict = std::string(to_string(c.verdict.kind));
  v.residual = c.verdict.kind == Verdict::Kind::Deadlock ? to_string(c.verdict.residual) : "0";
  v.externals = print_externals(c.verdict.externals);
  v.reason = c.verdict.reason;
  if (with_trace) {
    for (const auto& t : c.trace) v.trace.push_back(t.render());
  }
  return v;
}

// Throws FlowError for syntax errors and unresolved channels; Unsupported
// features come back as a single Unsupported case.
inline Report analyze_source(const std::string& file, std::string_view source, std::size_t max_steps,
                             bool with_trace) {
  auto t0 = std::chrono::steady_clock::now();
  go::AnalysisOptions opts;
  opts.max_steps = max_steps;
  opts.record_trace = with_trace;
  go::Analysis a = go::analyze(source, opts);
  Report r;
  r.file = file;
  r.warnings = a.warnings;
  r.has_trace = with_trace;
  for (const auto& c : a.cases) {
    r.verdicts.push_back(case_verdict(c, with_trace));
    r.steps += c.steps;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

// Pure function of the verdict set. A definite Deadlock outranks an
// Inconclusive sibling case; Unsupported is never mixed with other verdicts.
inline int exit_code_for(const std::vector<CaseVerdict>& vs) {
  auto any = [&](std::string_view k) {
    return std::any_of(vs.begin(), vs.end(), [&](const CaseVerdict& v) { return v.verdict == k; });
  };
  if (any("Unsupported")) return exit_code::kUnsupported;
  if (any("Deadlock")) return exit_code::kDeadlock;
  if (any("Inconclusive") || vs.empty()) return exit_code::kError;
  return exit_code::kNoDeadlock;
}

// Aggregate verdict of a file, following the exit-code precedence.
inline std::string overall_verdict(const std::vector<CaseVerdict>& vs) {
  switch (exit_code_for(vs)) {
    case exit_code::kNoDeadlock: return "NoDeadlock";
    case exit_code::kDeadlock: return "Deadlock";
    case exit_code::kUnsupported: return "Unsupported";
    default: return "Inconclusive";
  }
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["file"] = r.file;
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    nlohmann::json e;
    e["case"] = v.label;
    e["verdict"] = v.verdict;
    e["residual"] = v.residual;
    e["externals"] = v.externals;
    e["reason"] = v.reason;
    if (r.has_trace) e["trace"] = v.trace;
    j["verdicts"].push_back(std::move(e));
  }
  j["warnings"] = r.warnings;
  j["steps"] = r.steps;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

// Inverse of to_json; throws nlohmann::json::exception on schema violations.
inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.file = j.at("file").get<std::string>();
  for (const auto& e : j.at("verdicts")) {
    CaseVerdict v;
    v.label = e.at("case").get<std::string>();
    v.verdict = e.at("verdict").get<std::string>();
    v.residual = e.at("residual").get<std::string>();
    v.externals = e.at("externals").get<std::string>();
    v.reason = e.at("reason").get<std::string>();
    if (e.contains("trace")) {
      v.trace = e.at("trace").get<std::vector<std::string>>();
      r.has_trace = true;
    }
    r.verdicts.push_back(std::move(v));
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.steps = j.at("steps").get<std::size_t>();
  r.elapsed_ms = j.at("elapsed_ms").get<double>();
  return r;
}

inline std::string to_text(const Report& r) {
  std::string out = r.file + "\n";
  for (const auto& v : r.verdicts) {
    out += "  ";
    if (!v.label.empty()) out += "case " + v.label + ": ";
    out += v.verdict;
    if (v.verdict == "Deadlock") {
      out += "  residual " + v.residual;
      if (!v.externals.empty()) out += "  externals " + v.externals;
    }
    if (!v.reason.empty()) out += "  (" + v.reason + ")";
    out += "\n";
    for (const auto& line : v.trace) out += "    " + line + "\n";
  }
  for (const auto& w : r.warnings) out += "  warning: " + w + "\n";
  std::ostringstream ms;
  ms.precision(3);
  ms << std::fixed << r.elapsed_ms;
  out += "  steps " + std::to_string(r.steps) + ", " + ms.str() + " ms\n";
  return out;
}

// ---- corpus -----------------------------------------------------------------

struct CorpusEntry {
  std::filesystem::path path;
  std::string expected;  // from the directory name
  std::string source;    // "P<n> <name>" or "real-world <project>#<issue>"
};

struct CorpusRow {
  CorpusEntry entry;
  std::string actual;
  std::string note;  // header mismatch or error text
  double elapsed_ms = 0;
  bool match = false;
};

struct CorpusSummary {
  std::vector<CorpusRow> rows;
  std::size_t matched = 0;
  double elapsed_ms = 0;
};

inline std::optional<std::string> expected_for_dir(const std::string& dir) {
  if (dir == "nodeadlock") return "NoDeadlock";
  if (dir == "deadlock") return "Deadlock";
  if (dir == "unsupported") return "Unsupported";
  return std::nullopt;
}

// Value of a "// Key: value" header line, if present before the package clause.
inline std::optional<std::string> header_field(std::string_view src, std::string_view key) {
  std::istringstream in{std::string(src)};
  const std::string prefix = "// " + std::string(key) + ":";
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("package", 0) == 0) break;
    if (line.rfind(prefix, 0) == 0) {
      std::string v = line.substr(prefix.size());
      v.erase(0, v.find_first_not_of(' '));
      return v;
    }
  }
  return std::nullopt;
}

// Entries sorted by path; files in unrecognised directories are ignored.
inline std::vector<CorpusEntry> discover_corpus(const std::filesystem::path& dir) {
  std::vector<CorpusEntry> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return out;
  for (const auto& sub : std::filesystem::directory_iterator(dir, ec)) {
    if (!sub.is_directory()) continue;
    auto expected = expected_for_dir(sub.path().filename().string());
    if (!expected) continue;
    for (const auto& f : std::filesystem::directory_iterator(sub.path(), ec)) {
      if (f.path().extension() != ".go") continue;
      out.push_back(CorpusEntry{f.path(), *expected, ""});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return out;
}

inline CorpusRow run_entry(CorpusEntry e, std::size_t max_steps) {
  CorpusRow row;
  auto src = read_file(e.path);
  if (!src) {
    row.entry = std::move(e);
    row.actual = "Error";
    row.note = "cannot read file";
    return row;
  }
  e.source = header_field(*src, "Pattern").value_or(header_field(*src, "Source").value_or(""));
  try {
    Report r = analyze_source(e.path.string(), *src, max_steps, false);
    row.actual = overall_verdict(r.verdicts);
    row.elapsed_ms = r.elapsed_ms;
  } catch (const std::exception& ex) {
    row.actual = "Error";
    row.note = ex.what();
  }
  auto declared = header_field(*src, "Expected");
  if (declared && *declared != e.expected) row.note = "header declares " + *declared;
  row.match = row.actual == e.expected && row.note.empty();
  row.entry = std::move(e);
  return row;
}

// Entries are analysed concurrently; rows keep path order.
inline CorpusSummary run_corpus(const std::filesystem::path& dir, std::size_t max_steps = 500) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::future<CorpusRow>> jobs;
  for (auto& e : discover_corpus(dir)) jobs.push_back(std::async(std::launch::async, run_entry, e, max_steps));
  CorpusSummary s;
  for (auto& j : jobs) {
    s.rows.push_back(j.get());
    if (s.rows.back().match) ++s.matched;
  }
  s.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

inline int corpus_exit_code(const CorpusSummary& s) {
  if (s.rows.empty()) return exit_code::kError;
  return s.matched == s.rows.size() ? 0 : 1;
}

inline std::string corpus_table(const CorpusSummary& s, const std::filesystem::path& root) {
  std::size_t w = 4;
  for (const auto& r : s.rows) w = std::max(w, std::filesystem::relative(r.entry.path, root).string().size());
  auto pad = [](std::string x, std::size_t n) { return x.size() < n ? x + std::string(n - x.size(), ' ') : x; };
  std::string out = pad("file", w) + "  " + pad("expected", 12) + pad("actual", 14) + "ok\n";
  for (const auto& r : s.rows) {
    out += pad(std::filesystem::relative(r.entry.path, root).string(), w) + "  " + pad(r.entry.expected, 12) +
           pad(r.actual, 14) + (r.match ? "yes" : "NO");
    if (!r.note.empty()) out += "  " + r.note;
    out += "\n";
  }
  std::ostringstream ms;
  ms.precision(1);
  ms << std::fixed << s.elapsed_ms;
  out += std::to_string(s.matched) + "/" + std::to_string(s.rows.size()) + " match (" + ms.str() + " ms)\n";
  return out;
}

}  // namespace flowlock
