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

// Go tokenizer with automatic semicolon insertion.

#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "flowlock/error.hpp"

namespace flowlock::go {

enum class Tok : std::uint8_t {
  Eof,
  Ident,
  Int,
  Float,
  Imag,
  Char,
  String,
  Keyword,
  Op,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  int line = 0;

  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool is_op(std::string_view t) const { return is(Tok::Op, t); }
  bool is_kw(std::string_view t) const { return is(Tok::Keyword, t); }
};

inline bool is_keyword(std::string_view s) {
  static constexpr std::array<std::string_view, 25> kKeywords = {
      "break",  "case",   "chan",   "const", "continue", "default", "defer",  "else",   "fallthrough",
      "for",    "func",   "go",     "goto",  "if",       "import",  "interface", "map", "package",
      "range",  "return", "select", "struct", "switch",  "type",    "var"};
  for (auto k : kKeywords) {
    if (k == s) return true;
  }
  return false;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      bool newline = skip_space_and_comments();
      if (newline && needs_semicolon(out)) out.push_back(Token{Tok::Op, ";", prev_line_});
      if (pos_ >= src_.size()) {
        if (needs_semicolon(out)) out.push_back(Token{Tok::Op, ";", line_});
        out.push_back(Token{Tok::Eof, "", line_});
        return out;
      }
      out.push_back(next());
      prev_line_ = line_;
    }
  }

 private:
  static bool needs_semicolon(const std::vector<Token>& out) {
    if (out.empty()) return false;
    const Token& t = out.back();
    switch (t.kind) {
      case Tok::Ident:
      case Tok::Int:
      case Tok::Float:
      case Tok::Imag:
      case Tok::Char:
      case Tok::String:
        return true;
      case Tok::Keyword:
        return t.text == "break" || t.text == "continue" || t.text == "fallthrough" || t.text == "return";
      case Tok::Op:
        return t.text == "++" || t.text == "--" || t.text == ")" || t.text == "]" || t.text == "}";
      default:
        return false;
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FlowError(ErrorCode::SyntaxError, "line " + std::to_string(line_) + ": " + what);
  }

  // Returns true when a newline (or a comment spanning lines) was crossed.
  bool skip_space_and_comments() {
    bool newline = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        newline = true;
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (src_.substr(pos_, 2) == "/*") {
        auto end = src_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        for (auto i = pos_; i < end; ++i) {
          if (src_[i] == '\n') {
            newline = true;
            ++line_;
          }
        }
        pos_ = end + 2;
      } else {
        break;
      }
    }
    return newline;
  }

  Token next() {
    Token t;
    t.line = line_;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
      std::size_t j = pos_;
      while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_' ||
                                 static_cast<unsigned char>(src_[j]) >= 0x80)) {
        ++j;
      }
      t.text = std::string(src_.substr(pos_, j - pos_));
      t.kind = is_keyword(t.text) ? Tok::Keyword : Tok::Ident;
      pos_ = j;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return number();
    }
    if (c == '"') return quoted('"', Tok::String);
    if (c == '\'') return quoted('\'', Tok::Char);
    if (c == '`') {
      auto end = src_.find('`', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated raw string");
      t.kind = Tok::String;
      t.text = std::string(src_.substr(pos_, end - pos_ + 1));
      for (auto i = pos_; i < end; ++i) {
        if (src_[i] == '\n') ++line_;
      }
      pos_ = end + 1;
      return t;
    }
    static constexpr std::array<std::string_view, 48> kOps = {
        "<<=", ">>=", "&^=", "...", "&&", "||", "<-", "++", "--", "==", "!=", "<=", ">=", ":=", "+=", "-=",
        "*=",  "/=",  "%=",  "&=",  "|=", "^=", "<<", ">>", "&^", "+",  "-",  "*",  "/",  "%",  "&",  "|",
        "^",   "<",   ">",   "=",   "!",  "(",  ")",  "[",  "]",  "{",  "}",  ",",  ";",  ".",  ":",  "~"};
    for (auto op : kOps) {
      if (src_.substr(pos_, op.size()) == op) {
        t.kind = Tok::Op;
        t.text = std::string(op);
        pos_ += op.size();
        return t;
      }
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Token number() {
    Token t;
    t.line = line_;
    std::size_t j = pos_;
    bool is_float = false;
    if (src_.substr(j, 2) == "0x" || src_.substr(j, 2) == "0X" || src_.substr(j, 2) == "0b" ||
        src_.substr(j, 2) == "0B" || src_.substr(j, 2) == "0o" || src_.substr(j, 2) == "0O") {
      j += 2;
      while (j < src_.size() && (std::isxdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
    } else {
      while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
      if (j < src_.size() && src_[j] == '.') {
        is_float = true;
        ++j;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      }
      if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
        is_float = true;
        ++j;
        if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      }
    }
    t.kind = is_float ? Tok::Float : Tok::Int;
    if (j < src_.size() && src_[j] == 'i') {
      t.kind = Tok::Imag;
      ++j;
    }
    t.text = std::string(src_.substr(pos_, j - pos_));
    pos_ = j;
    return t;
  }

  Token quoted(char q, Tok kind) {
    Token t;
    t.line = line_;
    t.kind = kind;
    std::size_t j = pos_ + 1;
    while (j < src_.size() && src_[j] != q) {
      if (src_[j] == '\n') fail("newline in literal");
      if (src_[j] == '\\') ++j;
      ++j;
    }
    if (j >= src_.size()) fail("unterminated literal");
    t.text = std::string(src_.substr(pos_, j - pos_ + 1));
    pos_ = j + 1;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int prev_line_ = 1;
};

inline std::vector<Token> tokenize(std::string_view src) { return Lexer(src).tokenize(); }

}  // namespace flowlock::go
