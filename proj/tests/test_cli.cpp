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

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace flowlock {
namespace {

using testing::run_cli;
using testing::source_dir;

std::string corpus_file(const std::string& rel) { return (source_dir() / "corpus" / rel).string(); }

std::filesystem::path fresh_dir(const std::string& tag) {
  auto d = std::filesystem::temp_directory_path() / ("flowlock_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

TEST(ExitCode, PureFunctionOfVerdicts) {
  auto v = [](std::string k) {
    CaseVerdict c;
    c.verdict = std::move(k);
    return c;
  };
  EXPECT_EQ(exit_code_for({v("NoDeadlock")}), 0);
  EXPECT_EQ(exit_code_for({v("NoDeadlock"), v("Deadlock")}), 1);
  EXPECT_EQ(exit_code_for({v("Unsupported")}), 2);
  EXPECT_EQ(exit_code_for({v("Inconclusive"), v("NoDeadlock")}), 3);
  EXPECT_EQ(exit_code_for({v("Inconclusive"), v("Deadlock")}), 1);
  EXPECT_EQ(exit_code_for({}), 3);
  // Order of cases never matters.
  std::vector<CaseVerdict> vs{v("NoDeadlock"), v("Inconclusive"), v("Deadlock"), v("NoDeadlock")};
  std::mt19937 rng(1);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(vs.begin(), vs.end(), rng);
    EXPECT_EQ(exit_code_for(vs), 1);
  }
}

TEST(Report, JsonRoundTrip) {
  for (const char* rel : {"samples/conditional.go", "samples/moby4395.go", "samples/unsupported/select.go",
                          "samples/out_of_order2.go"}) {
    auto src = testing::slurp(source_dir() / rel);
    for (bool trace : {false, true}) {
      Report r = analyze_source(rel, src, 500, trace);
      nlohmann::json j = to_json(r);
      Report back = report_from_json(nlohmann::json::parse(j.dump()));
      EXPECT_EQ(back, r) << rel;
      EXPECT_EQ(to_json(back).dump(), j.dump());
    }
  }
}

TEST(Report, JsonKeysSorted) {
  Report r = analyze_source("x.go", testing::slurp(source_dir() / "samples/conditional.go"), 500, true);
  std::string s = to_json(r).dump();
  EXPECT_LT(s.find("\"elapsed_ms\""), s.find("\"file\""));
  EXPECT_LT(s.find("\"file\""), s.find("\"steps\""));
  EXPECT_LT(s.find("\"steps\""), s.find("\"verdicts\""));
  EXPECT_LT(s.find("\"verdicts\""), s.find("\"warnings\""));
  EXPECT_LT(s.find("\"case\""), s.find("\"externals\""));
}

TEST(Report, SchemaViolationThrows) {
  EXPECT_THROW((void)report_from_json(nlohmann::json::parse(R"({"file": "a"})")), nlohmann::json::exception);
}

TEST(Report, HeaderFields) {
  std::string src = "// Pattern: P3 defer2\n// Expected: NoDeadlock\npackage main\n// Expected: Deadlock\n";
  EXPECT_EQ(header_field(src, "Pattern"), "P3 defer2");
  EXPECT_EQ(header_field(src, "Expected"), "NoDeadlock");
  EXPECT_EQ(header_field(src, "Source"), std::nullopt);
}

TEST(Cli, AnalyzeExitCodes) {
  EXPECT_EQ(run_cli("analyze " + corpus_file("nodeadlock/p01_basic.go")).code, 0);
  EXPECT_EQ(run_cli("analyze " + corpus_file("deadlock/p16_out_of_order.go")).code, 1);
  EXPECT_EQ(run_cli("analyze " + (source_dir() / "samples/unsupported/select.go").string()).code, 2);
  EXPECT_EQ(run_cli("analyze /nonexistent/file.go").code, 3);
  EXPECT_EQ(run_cli("analyze " + corpus_file("nodeadlock/p01_basic.go") + " --format yaml").code, 3);
}

TEST(Cli, SyntaxErrorExitsThree) {
  auto d = fresh_dir("syntax");
  std::ofstream(d / "bad.go") << "package main\nfunc main() {\n";
  EXPECT_EQ(run_cli("analyze " + (d / "bad.go").string()).code, 3);
  std::filesystem::remove_all(d);
}

TEST(Cli, InconclusiveExitsThree) {
  auto d = fresh_dir("cap");
  std::ofstream(d / "spin.go") << "package main\nfunc main() {\nch := make(chan int)\n"
                                  "for i := 0; i < 40; i++ {\nch <- 1\n}\n}\n";
  EXPECT_EQ(run_cli("analyze " + (d / "spin.go").string()).code, 1);
  EXPECT_EQ(run_cli("analyze --max-steps 5 " + (d / "spin.go").string()).code, 3);
  std::filesystem::remove_all(d);
}

TEST(Cli, JsonOutputParses) {
  auto r = run_cli("analyze --format json " + corpus_file("deadlock/p16_out_of_order.go"));
  ASSERT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  Report rep = report_from_json(j);
  ASSERT_EQ(rep.verdicts.size(), 1u);
  EXPECT_EQ(rep.verdicts[0].verdict, "Deadlock");
  EXPECT_EQ(rep.verdicts[0].residual, "[!String]");
}

TEST(Cli, TraceOfMoby4395) {
  auto r = run_cli("analyze --trace " + corpus_file("nodeadlock/moby4395.go"));
  ASSERT_EQ(r.code, 0);
  std::vector<std::string> rules;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    auto a = line.find('[');
    auto b = line.find(']');
    if (line.find("step ") != std::string::npos && a != std::string::npos) rules.push_back(line.substr(a + 1, b - a - 1));
  }
  EXPECT_EQ(rules, (std::vector<std::string>{"StartEval", "InlineEval", "YieldCo", "Yield", "Resume", "MainExit"}));
}

TEST(Cli, UnsupportedNamesFeature) {
  for (const auto& [file, feature] : std::vector<std::pair<std::string, std::string>>{
           {"select.go", "select"}, {"close.go", "close"}, {"buffered.go", "buffered channel"}}) {
    auto r = run_cli("analyze " + (source_dir() / "samples/unsupported" / file).string());
    EXPECT_EQ(r.code, 2) << file;
    EXPECT_NE(r.out.find(feature), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("NoDeadlock"), std::string::npos) << r.out;
  }
}

TEST(Corpus, BundledCorpusMatches) {
  auto s = run_corpus(source_dir() / "corpus");
  EXPECT_EQ(s.rows.size(), 21u);
  EXPECT_EQ(s.matched, 21u);
  for (const auto& r : s.rows) EXPECT_TRUE(r.match) << r.entry.path << " " << r.actual << " " << r.note;
  EXPECT_EQ(run_cli("corpus " + (source_dir() / "corpus").string()).code, 0);
}

TEST(Corpus, RowsOrderedByPath) {
  auto s = run_corpus(source_dir() / "corpus");
  for (std::size_t i = 1; i < s.rows.size(); ++i) EXPECT_LT(s.rows[i - 1].entry.path, s.rows[i].entry.path);
}

TEST(Corpus, EveryEntryNamesItsSource) {
  for (const auto& r : run_corpus(source_dir() / "corpus").rows) EXPECT_FALSE(r.entry.source.empty()) << r.entry.path;
}

TEST(Corpus, TamperedExpectationDetected) {
  auto d = fresh_dir("tamper");
  std::filesystem::copy(source_dir() / "corpus", d, std::filesystem::copy_options::recursive);
  std::filesystem::rename(d / "nodeadlock/p01_basic.go", d / "deadlock/p01_basic.go");
  auto s = run_corpus(d);
  EXPECT_EQ(s.rows.size(), 21u);
  EXPECT_EQ(s.matched, 20u);
  EXPECT_NE(corpus_exit_code(s), 0);
  auto r = run_cli("corpus " + d.string());
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("20/21 match"), std::string::npos) << r.out;
  std::filesystem::remove_all(d);
}

TEST(Corpus, EmptyOrMissingDirectory) {
  auto d = fresh_dir("empty");
  auto s = run_corpus(d);
  EXPECT_TRUE(s.rows.empty());
  EXPECT_EQ(corpus_exit_code(s), 3);
  auto r = run_cli("corpus " + d.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("0/0"), std::string::npos);
  EXPECT_EQ(run_cli("corpus /nonexistent/corpus").code, 3);
  std::filesystem::remove_all(d);
}

}  // namespace
}  // namespace flowlock
