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

// Reader for the textual term syntax produced by to_string(Type) and
// to_string(Predicate). parse_type(to_string(t)) == t for every canonical t.
//
//   type   := item ('/' pred)?
//   item   := atom ('^' (INT | ident))*
//   atom   := '0' | Upper | lower | '<' items? '>' | '(' type (('|' | ',') type)* ')'
//           | '[' flow ']' | 'corDef' '[' flow ']'
//           | ('Start' | 'Inline') '(' (type | ident) ')' ('{' binding,* '}')?
//   flow   := (('!' | '?')? type) separated by ';'
//   pred   := conj ('||' conj)*       conj := unary ('&&' unary)*
//   unary  := '!' unary | '(' pred ')' | true | false | rel '(' terms ')'
//           | term (op term | '↦' term)
//
// Uppercase identifiers are Concrete symbols, lowercase ones are variables.
// Inside Start/Inline a bare identifier names a definition.

#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "flowlock/error.hpp"
#include "flowlock/predicate.hpp"
#include "flowlock/type.hpp"

namespace flowlock {

namespace detail {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::int64_t value = 0;
  std::size_t offset = 0;
};

class TermLexer {
 public:
  explicit TermLexer(std::string_view src) : src_(src) { tokenize(); }

  const Token& peek(std::size_t k = 0) const {
    return pos_ + k < tokens_.size() ? tokens_[pos_ + k] : tokens_.back();
  }
  Token next() { return pos_ < tokens_.size() - 1 ? tokens_[pos_++] : tokens_.back(); }
  bool accept(std::string_view punct) {
    if (peek().kind == Token::Kind::Punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at(std::string_view punct) const { return peek().kind == Token::Kind::Punct && peek().text == punct; }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string near = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw FlowError(ErrorCode::SyntaxError, what + " at offset " + std::to_string(t.offset) + " near " + near);
  }

 private:
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@';
  }

  void tokenize() {
    static constexpr std::string_view kTwo[] = {"<=", ">=", "==", "!=", "&&", "||", "->"};
    static constexpr std::string_view kMapsTo = "\xE2\x86\xA6";  // ↦
    std::size_t i = 0;
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      t.offset = i;
      if (ident_start(c)) {
        std::size_t j = i;
        while (j < src_.size() && ident_char(src_[j])) ++j;
        t.kind = Token::Kind::Ident;
        t.text = std::string(src_.substr(i, j - i));
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && i + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i + 1])) &&
                  !value_precedes())) {
        std::size_t j = i + 1;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        t.kind = Token::Kind::Int;
        t.text = std::string(src_.substr(i, j - i));
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (ec != std::errc{}) {
          throw FlowError(ErrorCode::SyntaxError, "integer out of range at offset " + std::to_string(i));
        }
        i = j;
      } else if (src_.substr(i, kMapsTo.size()) == kMapsTo) {
        t.kind = Token::Kind::Punct;
        t.text = "↦";
        i += kMapsTo.size();
      } else {
        t.kind = Token::Kind::Punct;
        bool two = false;
        for (auto op : kTwo) {
          if (src_.substr(i, 2) == op) {
            t.text = op == "->" ? "↦" : std::string(op);
            i += 2;
            two = true;
            break;
          }
        }
        if (!two) {
          static constexpr std::string_view kOne = "<>()[]{},;|/^!?";
          if (kOne.find(c) == std::string_view::npos) {
            throw FlowError(ErrorCode::SyntaxError,
                            std::string("unexpected character '") + c + "' at offset " + std::to_string(i));
          }
          t.text = std::string(1, c);
          ++i;
        }
      }
      tokens_.push_back(std::move(t));
    }
    Token end;
    end.offset = src_.size();
    tokens_.push_back(end);
  }

  // A '-' directly after a value is never a sign; the term syntax has no
  // subtraction, so this only guards against odd spacing.
  bool value_precedes() const {
    if (tokens_.empty()) return false;
    const auto& b = tokens_.back();
    return b.kind == Token::Kind::Int || b.kind == Token::Kind::Ident || b.text == ")";
  }

  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline bool is_upper_ident(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

class TermParser {
 public:
  explicit TermParser(std::string_view src) : lex_(src) {}

  Type whole_type() {
    Type t = type();
    if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input");
    return t;
  }

  Predicate whole_predicate() {
    Predicate p = pred();
    if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input");
    return p;
  }

 private:
  Type type() {
    Type t = item();
    if (lex_.accept("/")) return Type::constrained(std::move(t), pred());
    return t;
  }

  Type item() {
    Type t = atom();
    while (lex_.accept("^")) {
      const Token tok = lex_.next();
      if (tok.kind == Token::Kind::Int) {
        t = Type::power(std::move(t), Term::integer(tok.value));
      } else if (tok.kind == Token::Kind::Ident && !is_upper_ident(tok.text)) {
        t = Type::power(std::move(t), Term::var(tok.text));
      } else {
        lex_.fail("expected sequence length");
      }
    }
    return t;
  }

  Type atom() {
    const Token& tok = lex_.peek();
    if (tok.kind == Token::Kind::Int) {
      if (tok.value != 0) lex_.fail("only 0 is a type literal");
      lex_.next();
      return Type::zero();
    }
    if (tok.kind == Token::Kind::Ident) {
      std::string name = lex_.next().text;
      if (name == "corDef") {
        lex_.expect("[");
        return Type::cordef(flow());
      }
      if (name == "Start" || name == "Inline") {
        lex_.expect("(");
        Type def;
        if (lex_.peek().kind == Token::Kind::Ident && lex_.peek(1).text == ")" &&
            lex_.peek().text != "corDef") {
          def = Type::ref(lex_.next().text);
        } else {
          def = type();
        }
        lex_.expect(")");
        Bindings args;
        if (lex_.accept("{")) {
          if (!lex_.accept("}")) {
            do {
              Token var = lex_.next();
              if (var.kind != Token::Kind::Ident) lex_.fail("expected parameter name");
              lex_.expect("↦");
              args[var.text] = term();
            } while (lex_.accept(","));
            lex_.expect("}");
          }
        }
        return name == "Start" ? Type::start(std::move(def), std::move(args))
                               : Type::inline_app(std::move(def), std::move(args));
      }
      return is_upper_ident(name) ? Type::concrete(std::move(name)) : Type::variable(std::move(name));
    }
    if (lex_.accept("<")) {
      std::vector<Type> items;
      if (!lex_.accept(">")) {
        do {
          items.push_back(item());
        } while (lex_.accept(","));
        lex_.expect(">");
      }
      return Type::seq(std::move(items));
    }
    if (lex_.accept("(")) {
      std::vector<Type> parts{type()};
      if (lex_.at("|")) {
        while (lex_.accept("|")) parts.push_back(type());
        lex_.expect(")");
        return Type::union_of(std::move(parts));
      }
      if (lex_.at(",")) {
        while (lex_.accept(",")) parts.push_back(type());
        lex_.expect(")");
        return Type::tuple(std::move(parts));
      }
      lex_.expect(")");
      return parts.front();
    }
    if (lex_.accept("[")) return Type::corins(flow());
    lex_.fail("expected a type");
  }

  // After the opening '['.
  std::vector<FlowItem> flow() {
    std::vector<FlowItem> items;
    if (lex_.accept("]")) return items;
    do {
      Dir dir = Dir::Yield;
      if (lex_.accept("?")) {
        dir = Dir::Receive;
      } else if (!lex_.accept("!")) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Ident || (t.text != "Start" && t.text != "Inline")) {
          lex_.fail("expected '!' or '?'");
        }
      }
      items.push_back(FlowItem{dir, type()});
    } while (lex_.accept(";"));
    lex_.expect("]");
    return items;
  }

  Term term() {
    Token t = lex_.next();
    if (t.kind == Token::Kind::Int) return Term::integer(t.value);
    if (t.kind == Token::Kind::Ident) return is_upper_ident(t.text) ? Term::sym(t.text) : Term::var(t.text);
    lex_.fail("expected a term");
  }

  Predicate pred() {
    std::vector<Predicate> parts{conj()};
    while (lex_.accept("||")) parts.push_back(conj());
    return parts.size() == 1 ? parts.front() : Predicate::disj(std::move(parts));
  }

  Predicate conj() {
    std::vector<Predicate> parts{unary()};
    while (lex_.accept("&&")) parts.push_back(unary());
    return parts.size() == 1 ? parts.front() : Predicate::conj(std::move(parts));
  }

  Predicate unary() {
    if (lex_.accept("!")) return Predicate::negate(unary());
    if (lex_.accept("(")) {
      Predicate p = pred();
      lex_.expect(")");
      return p;
    }
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident && t.text == "true") {
      lex_.next();
      return Predicate::truth();
    }
    if (t.kind == Token::Kind::Ident && t.text == "false") {
      lex_.next();
      return Predicate::falsity();
    }
    if (t.kind == Token::Kind::Ident && !is_upper_ident(t.text) && lex_.peek(1).text == "(") {
      std::string name = lex_.next().text;
      lex_.expect("(");
      std::vector<Term> args;
      if (!lex_.accept(")")) {
        do {
          args.push_back(term());
        } while (lex_.accept(","));
        lex_.expect(")");
      }
      return Predicate::relation(std::move(name), std::move(args));
    }
    Term lhs = term();
    if (lex_.accept("↦")) {
      if (!lhs.is_var()) lex_.fail("binding target must be a variable");
      return Predicate::binding(lhs.name, term());
    }
    if (lex_.accept("!=")) return Predicate::negate(Predicate::cmp(lhs, CmpOp::Eq, term()));
    static constexpr std::pair<std::string_view, CmpOp> kOps[] = {
        {"<=", CmpOp::Le}, {">=", CmpOp::Ge}, {"==", CmpOp::Eq}, {"<", CmpOp::Lt}, {">", CmpOp::Gt}};
    for (auto [text, op] : kOps) {
      if (lex_.accept(text)) return Predicate::cmp(lhs, op, term());
    }
    lex_.fail("expected a comparison");
  }

  TermLexer lex_;
};

}  // namespace detail

inline Type parse_type(std::string_view src) { return detail::TermParser(src).whole_type(); }

inline Predicate parse_predicate(std::string_view src) { return detail::TermParser(src).whole_predicate(); }

}  // namespace flowlock
