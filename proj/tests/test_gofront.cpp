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

#include "support.hpp"

namespace flowlock::go {
namespace {

using testing::slurp;
using testing::source_dir;

std::map<std::string, std::string> m_of(std::string_view src) {
  std::map<std::string, std::string> out;
  for (const auto& [name, def] : compute_m(parse_program(src))) out[name] = to_string(def);
  return out;
}

std::string main_of(std::string_view body, std::string_view extra = "") {
  std::string src = "package main\n\nimport (\n\t\"fmt\"\n\t\"math/rand\"\n\t\"time\"\n)\n\n" + std::string(extra) +
                    "\nfunc main() {\n" + std::string(body) + "\n}\n";
  auto m = m_of(src);
  return m.contains("main") ? m.at("main") : "";
}

std::string unsupported_reason(std::string_view src) {
  try {
    (void)parse_program(src);
  } catch (const FlowError& e) {
    if (e.code() == ErrorCode::Unsupported) return e.detail();
    return "other error: " + std::string(e.what());
  }
  return "";
}

// ---- lexer ------------------------------------------------------------------

TEST(Lexer, InsertsSemicolons) {
  auto toks = tokenize("x := 1\ny++\nreturn\n}");
  std::vector<std::string> texts;
  for (const auto& t : toks) texts.push_back(t.text);
  EXPECT_EQ(texts, (std::vector<std::string>{"x", ":=", "1", ";", "y", "++", ";", "return", ";", "}", ";", ""}));
}

TEST(Lexer, LiteralsAndComments) {
  auto toks = tokenize("a := `raw\nstring` // c\nb := 'x' /* block */ + 0x1F");
  EXPECT_EQ(toks[2].kind, Tok::String);
  EXPECT_EQ(toks[2].line, 1);
  EXPECT_EQ(toks[4].line, 3);
  EXPECT_EQ(toks[6].kind, Tok::Char);
  EXPECT_EQ(toks[8].kind, Tok::Int);
}

TEST(Lexer, UnterminatedStringIsSyntaxError) {
  try {
    (void)tokenize("x := \"abc\n");
    FAIL() << "no error";
  } catch (const FlowError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
  }
}

// ---- parser -----------------------------------------------------------------

std::vector<std::filesystem::path> go_files() {
  std::vector<std::filesystem::path> out;
  for (const char* d : {"samples", "corpus"}) {
    for (const auto& e : std::filesystem::recursive_directory_iterator(source_dir() / d)) {
      if (e.path().extension() == ".go" && e.path().parent_path().filename() != "unsupported") out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Parser, PrintParseRoundTripOnAllFiles) {
  auto files = go_files();
  ASSERT_GE(files.size(), 25u);
  for (const auto& f : files) {
    SourceFile a = parse(slurp(f));
    const std::string printed = print_go(a);
    SourceFile b = parse(printed);
    EXPECT_EQ(dump(b), dump(a)) << f;
    EXPECT_EQ(print_go(b), printed) << f;
  }
}

TEST(Parser, Structure) {
  SourceFile f = parse("package main\nimport \"fmt\"\ntype T struct { a int; B }\nvar c = make(chan int)\n"
                       "func f(x int, ys ...string) (int, error) { return 0, nil }\nfunc main() { fmt.Println(1) }\n");
  EXPECT_EQ(f.package_name, "main");
  EXPECT_EQ(f.imports, std::vector<std::string>{"fmt"});
  ASSERT_EQ(f.types.size(), 1u);
  EXPECT_EQ(f.types[0].type->fields.size(), 2u);
  ASSERT_EQ(f.functions.size(), 2u);
  EXPECT_TRUE(f.functions[0].params[1].variadic);
  EXPECT_EQ(f.functions[0].results.size(), 2u);
}

TEST(Parser, SyntaxErrorsCarryLine) {
  try {
    (void)parse("package main\nfunc main() {\n  x := \n}\n");
    FAIL() << "no error";
  } catch (const FlowError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(Parser, AnonymousLiteralsOnOneLineGetDistinctNames) {
  auto prog = parse_program("package main\nfunc main() {\n  ch := make(chan int)\n"
                            "  go func() { ch <- 1 }(); go func() { ch <- 2 }()\n  <-ch\n  <-ch\n}\n");
  EXPECT_TRUE(prog.functions.contains("anon@4"));
  EXPECT_TRUE(prog.functions.contains("anon@4_2"));
}

struct Gate {
  const char* snippet;
  const char* feature;
};

TEST(Parser, UnsupportedFeaturesAreNamed) {
  const Gate gates[] = {
      {"select {}", "select"},
      {"ch := make(chan int)\nclose(ch)", "close"},
      {"ch := make(chan int, 3)\nch <- 1", "buffered channel"},
      {"x := 1\nswitch x {\ncase 1:\n}", "switch"},
      {"var ch chan<- int\n_ = ch", "directional channel"},
      {"for i := 0; i < 3; i++ {\ngo func() {}()\n}", "goroutine started inside a for loop"},
      {"var mu sync.Mutex\nmu.Lock()", "sync"},
      {"goto end\nend:", "goto"},
  };
  for (const auto& g : gates) {
    std::string src = std::string("package main\nfunc main() {\n") + g.snippet + "\n}\n";
    std::string why = unsupported_reason(src);
    EXPECT_NE(why.find(g.feature), std::string::npos) << g.snippet << " gave '" << why << "'";
    EXPECT_NE(why.find("line"), std::string::npos) << why;
  }
  EXPECT_NE(unsupported_reason("package main\ntype T struct{}\nfunc (t T) m() {}\nfunc main() {}\n").find("method"),
            std::string::npos);
  EXPECT_NE(unsupported_reason("package main\nfunc f[T any](x T) {}\nfunc main() {}\n").find("type parameter"),
            std::string::npos);
}

TEST(Parser, UnbufferedExplicitZeroAccepted) {
  EXPECT_EQ(unsupported_reason("package main\nfunc main() {\nch := make(chan int, 0)\n_ = ch\n}\n"), "");
}

// ---- typing -----------------------------------------------------------------

TEST(Typing, ReferenceListings) {
  auto moby = m_of(slurp(source_dir() / "samples/moby4395.go"));
  EXPECT_EQ(moby.at("main"), "corDef[Inline(run); ?Error]");
  EXPECT_EQ(moby.at("run"), "corDef[Start(corDef[!Error])]");

  auto ooo = m_of(slurp(source_dir() / "samples/out_of_order.go"));
  EXPECT_EQ(ooo.at("main"), "corDef[Start(work); !String; !Int]");
  EXPECT_EQ(ooo.at("work"), "corDef[?Int; ?String]");

  auto cond = m_of(slurp(source_dir() / "samples/go_conditional.go"));
  EXPECT_EQ(cond.at("main"), "corDef[Start(s){v ↦ 2}; ?Int; ?Bool]");
  EXPECT_EQ(cond.at("s"), "corDef[!(Int / v < 10 | Bool / !(v < 10)); !Bool]");

  auto all = m_of(slurp(source_dir() / "samples/all_features.go"));
  EXPECT_EQ(all.at("main"), "corDef[Start(corDef[!Int]); ?Int]");
}

TEST(Typing, SendAndReceive) {
  EXPECT_EQ(main_of("ch := make(chan string)\ngo func() { ch <- \"x\" }()\nfmt.Println(<-ch)"),
            "corDef[Start(corDef[!String]); ?String]");
}

TEST(Typing, ElementNames) {
  EXPECT_EQ(main_of("a := make(chan *T)\nb := make(chan []int)\nc := make(chan chan bool)\n"
                    "<-a\n<-b\n<-c",
                    "type T struct{}"),
            "corDef[?T; ?SliceOfInt; ?ChanOfBool]");
}

TEST(Typing, MembershipFixedPoint) {
  auto m = m_of("package main\nfunc leaf(c chan int) { c <- 1 }\nfunc mid(c chan int) { leaf(c) }\n"
                "func pure(x int) int { return x + 1 }\nfunc main() {\nc := make(chan int)\ngo mid(c)\n"
                "_ = pure(2)\n<-c\n}\n");
  EXPECT_TRUE(m.contains("leaf"));
  EXPECT_TRUE(m.contains("mid"));
  EXPECT_FALSE(m.contains("pure"));
  EXPECT_EQ(m.at("mid"), "corDef[Inline(leaf)]");
  EXPECT_EQ(m.at("main"), "corDef[Start(mid); ?Int]");
}

TEST(Typing, FixedPointIterationsCounted) {
  TypingInfo info;
  (void)compute_m(parse_program("package main\nfunc a(c chan int) { c <- 1 }\nfunc b(c chan int) { a(c) }\n"
                                "func main() { c := make(chan int); go b(c); <-c }\n"),
                  &info);
  EXPECT_EQ(info.iterations, 3u);  // {} -> {a, main} -> {a, b, main} -> stable
}

TEST(Typing, DeferRunsLifo) {
  EXPECT_EQ(main_of("ch := make(chan int)\ns := make(chan string)\ndefer func() { ch <- 1 }()\n"
                    "defer func() { s <- \"a\" }()\n<-ch"),
            "corDef[?Int; !String; !Int]");
}

TEST(Typing, IfBecomesGuardedUnion) {
  EXPECT_EQ(main_of("ch := make(chan int)\ns := make(chan string)\nx := rand.Intn(4)\n"
                    "if x > 1 {\nch <- 1\n} else {\ns <- \"a\"\n}"),
            "corDef[!(Int / x > 1 | String / !(x > 1))]");
  EXPECT_EQ(main_of("ch := make(chan int)\nx := rand.Intn(4)\nif x > 1 {\nch <- 1\n}"),
            "corDef[!(Int / x > 1 | 0 / !(x > 1))]");
}

TEST(Typing, MixedDirectionArmsBecomeDefinitions) {
  EXPECT_EQ(main_of("ch := make(chan int)\nx := rand.Intn(4)\nif x > 1 {\nch <- 1\n} else {\n<-ch\n}"),
            "corDef[!(corDef[!Int] / x > 1 | corDef[?Int] / !(x > 1))]");
}

TEST(Typing, ConstantConditionKeepsTakenArm) {
  EXPECT_EQ(main_of("ch := make(chan int)\nn := 3\nif n > 1 {\nch <- 1\n} else {\n<-ch\n}"), "corDef[!Int]");
}

TEST(Typing, RandomRangeRecorded) {
  TypingInfo info;
  (void)compute_m(parse_program(slurp(source_dir() / "samples/conditional.go")), &info);
  ASSERT_TRUE(info.domains.contains("weekday"));
  EXPECT_EQ(info.domains.at("weekday"), (Interval{1, 7}));
}

TEST(Typing, ConstantLoopsUnroll) {
  EXPECT_EQ(main_of("ch := make(chan int)\nfor i := 0; i < 3; i++ {\n<-ch\n}"), "corDef[?Int; ?Int; ?Int]");
}

TEST(Typing, ChannelFreeLoopsSkipped) {
  EXPECT_EQ(main_of("ch := make(chan int)\nt := 0\nfor i := 0; i < 100000; i++ {\nt += i\n}\n<-ch"),
            "corDef[?Int]");
}

TEST(Typing, UnboundedLoopsWithChannelsUnsupported) {
  auto a = analyze("package main\nfunc main() {\nch := make(chan int)\nfor {\n<-ch\n}\n}\n");
  ASSERT_EQ(a.cases.size(), 1u);
  EXPECT_EQ(a.cases[0].verdict.kind, Verdict::Kind::Unsupported);
  auto b = analyze("package main\nfunc main() {\nch := make(chan int)\nfor v := range ch {\n_ = v\n}\n}\n");
  EXPECT_EQ(b.cases[0].verdict.kind, Verdict::Kind::Unsupported);
}

TEST(Typing, TimeAfterIsATimeSender) {
  EXPECT_EQ(main_of("<-time.After(time.Second)"), "corDef[Start(corDef[!Time]); ?Time]");
}

TEST(Typing, ReturnedChannelKeepsElementType) {
  auto m = m_of(slurp(source_dir() / "corpus/deadlock/p17_return_channel.go"));
  EXPECT_EQ(m.at("producer"), "corDef[Start(corDef[!Int])]");
  EXPECT_EQ(m.at("main"), "corDef[Inline(producer); ?Int; ?Int]");
}

TEST(Typing, EmbeddedStructsFeedInherit) {
  auto prog = parse_program("package main\ntype User struct{}\ntype Student struct { User }\nfunc main() {}\n");
  ASSERT_EQ(prog.subtypes.size(), 1u);
  EXPECT_EQ(prog.subtypes[0], (std::pair<std::string, std::string>{"Student", "User"}));
}

TEST(Typing, NoMainIsAnError) {
  try {
    (void)parse_program("package main\nfunc f() {}\n");
    FAIL() << "no error";
  } catch (const FlowError& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownDefinition);
  }
}

TEST(Typing, SameTypedChannelsWarn) {
  auto a = analyze(slurp(source_dir() / "samples/out_of_order2.go"));
  ASSERT_EQ(a.warnings.size(), 1u);
  EXPECT_NE(a.warnings[0].find("element type Int"), std::string::npos);
}

// ---- end to end -------------------------------------------------------------

TEST(Analyze, ProgramsWithoutChannelsAreSafe) {
  auto a = analyze("package main\nimport \"fmt\"\nfunc main() { fmt.Println(1) }\n");
  ASSERT_EQ(a.cases.size(), 1u);
  EXPECT_EQ(a.cases[0].verdict.kind, Verdict::Kind::NoDeadlock);
}

TEST(Analyze, ConditionalCases) {
  auto a = analyze(slurp(source_dir() / "samples/conditional.go"));
  std::vector<std::pair<std::string, Verdict::Kind>> got;
  for (const auto& c : a.cases) got.emplace_back(c.label, c.verdict.kind);
  using K = Verdict::Kind;
  EXPECT_EQ(got, (std::vector<std::pair<std::string, K>>{{"weekday∈[1,2]", K::Deadlock},
                                                          {"weekday=3", K::NoDeadlock},
                                                          {"weekday∈[4,5]", K::Deadlock},
                                                          {"weekday∈[6,7]", K::NoDeadlock}}));
}

TEST(Analyze, OpaqueConditionsSplitTwoWays) {
  auto a = analyze("package main\nfunc ok() bool { return true }\nfunc main() {\nch := make(chan int)\n"
                   "go func() { ch <- 1 }()\nif ok() {\n<-ch\n}\n}\n");
  ASSERT_EQ(a.cases.size(), 2u);
  int deadlocks = 0;
  for (const auto& c : a.cases) deadlocks += c.verdict.kind == Verdict::Kind::Deadlock;
  EXPECT_EQ(deadlocks, 1);
}

}  // namespace
}  // namespace flowlock::go
