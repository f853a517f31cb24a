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

// flowlock: static deadlock detection for a Go subset.
//
//   flowlock analyze <file> [--format text|json] [--trace] [--max-steps N]
//   flowlock corpus <dir>
//
// Exit codes: 0 no deadlock in any case, 1 deadlock in some case,
// 2 unsupported feature, 3 inconclusive, I/O or internal error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flowlock.hpp"

namespace {

int run_analyze(const std::string& path, const std::string& format, bool trace, std::size_t max_steps) {
  auto src = flowlock::read_file(path);
  if (!src) {
    std::cerr << "flowlock: cannot read " << path << "\n";
    return flowlock::exit_code::kError;
  }
  flowlock::Report r;
  try {
    r = flowlock::analyze_source(path, *src, max_steps, trace);
  } catch (const std::exception& e) {
    std::cerr << "flowlock: " << path << ": " << e.what() << "\n";
    return flowlock::exit_code::kError;
  }
  if (format == "json") {
    std::cout << flowlock::to_json(r).dump(2) << "\n";
  } else {
    std::cout << flowlock::to_text(r);
  }
  return flowlock::exit_code_for(r.verdicts);
}

int run_corpus(const std::string& dir, std::size_t max_steps) {
  auto s = flowlock::run_corpus(dir, max_steps);
  if (s.rows.empty()) {
    std::cerr << "flowlock: no corpus entries under " << dir << " (expected <dir>/<verdict>/<name>.go)\n";
    std::cout << "0/0 match\n";
    return flowlock::exit_code::kError;
  }
  std::cout << flowlock::corpus_table(s, dir);
  return flowlock::corpus_exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static deadlock detection for Go programs"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "text";
  bool trace = false;
  std::size_t max_steps = 500;
  auto* analyze = app.add_subcommand("analyze", "Analyze one Go source file");
  analyze->add_option("file", file, "Go source file")->required();
  analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  analyze->add_flag("--trace", trace, "Print the reduction trace of every case");
  analyze->add_option("--max-steps", max_steps, "Reduction step cap")->check(CLI::PositiveNumber);

  std::string dir;
  auto* corpus = app.add_subcommand("corpus", "Check a corpus laid out as <dir>/<verdict>/<name>.go");
  corpus->add_option("dir", dir, "Corpus root")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : flowlock::exit_code::kError;
  }
  if (analyze->parsed()) return run_analyze(file, format, trace, max_steps);
  return run_corpus(dir, max_steps);
}
