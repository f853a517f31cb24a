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

TEST(TypeConstruction, SequencesFlattenAndDropZero) {
  Type a = Type::concrete("A");
  Type b = Type::concrete("B");
  EXPECT_EQ(Type::seq({a, Type::zero(), Type::seq({b, a})}), Type::seq({a, b, a}));
  EXPECT_EQ(Type::seq({Type::zero()}), Type::zero());
  EXPECT_EQ(Type::seq({a}), a);
}

TEST(TypeConstruction, IntegerPowerUnrolls) {
  Type i = Type::concrete("Int");
  EXPECT_EQ(Type::power(i, Term::integer(3)), Type::seq({i, i, i}));
  EXPECT_EQ(Type::power(i, Term::integer(0)), Type::zero());
  EXPECT_TRUE(Type::power(i, Term::var("n")).is(Type::Kind::Power));
}

TEST(TypeConstruction, IllegalPowersThrow) {
  Type i = Type::concrete("Int");
  EXPECT_THROW((void)Type::power(i, Term::integer(-1)), FlowError);
  EXPECT_THROW((void)Type::power(i, Term::sym("A")), FlowError);
}

TEST(TypeConstruction, InstanceRejectsUnion) {
  Type u = Type::union_of({Type::concrete("A"), Type::concrete("B")});
  EXPECT_THROW((void)Type::corins({FlowItem::yield(u)}), FlowError);
  EXPECT_NO_THROW((void)Type::cordef({FlowItem::yield(u)}));
}

TEST(TypeConstruction, FlowDistributesSequencePayloads) {
  Type t = Type::corins({FlowItem::yield(Type::seq({Type::concrete("A"), Type::concrete("B")}))});
  ASSERT_EQ(t.flow().size(), 2u);
  EXPECT_EQ(to_string(t), "[!A; !B]");
}

TEST(TypeConstruction, NestedConstraintsMerge) {
  Predicate p = parse_predicate("x > 0");
  Predicate q = parse_predicate("x < 5");
  Type t = Type::constrained(Type::constrained(Type::concrete("A"), p), q);
  ASSERT_TRUE(t.is(Type::Kind::Constrained));
  EXPECT_TRUE(t.base().is(Type::Kind::Concrete));
  EXPECT_EQ(t.pred(), Predicate::conj(p, q));
}

TEST(HeadTail, SplitsInstance) {
  Type i = parse_type("[!A; ?B; !C]");
  EXPECT_EQ(head(i).dir, Dir::Yield);
  EXPECT_EQ(head(i).payload, Type::concrete("A"));
  EXPECT_EQ(to_string(tail(i)), "[?B; !C]");
}

TEST(HeadTail, Errors) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const FlowError& e) {
      return e.code();
    }
    return ErrorCode::Unsupported;
  };
  EXPECT_EQ(code([] { (void)head(parse_type("corDef[!A]")); }), ErrorCode::HeadOfDefinition);
  EXPECT_EQ(code([] { (void)head(Type::corins({})); }), ErrorCode::EmptyInstance);
  EXPECT_EQ(code([] { (void)tail(Type::concrete("A")); }), ErrorCode::NotAnInstance);
}

TEST(FirstNone, ReturnsSplit) {
  std::vector<int> xs{1, 4, 6, 3};
  auto r = first(xs, [](int x) { return x % 2 == 0; });
  ASSERT_TRUE(r.found);
  EXPECT_EQ(*r.found, 4);
  EXPECT_EQ(r.before, std::vector<int>{1});
  EXPECT_EQ(r.after, (std::vector<int>{6, 3}));
  EXPECT_TRUE(none(xs, [](int x) { return x > 10; }));
  EXPECT_FALSE(first(xs, [](int x) { return x > 10; }).found);
}

TEST(Substitution, ReplacesTypeVariablesAndExponents) {
  Type t = parse_type("<a, Int^n>");
  Type s = substitute(t, Bindings{{"a", Term::sym("String")}, {"n", Term::integer(2)}});
  EXPECT_EQ(to_string(s), "<String, Int, Int>");
}

TEST(Substitution, IntegerForTypeVariableThrows) {
  EXPECT_THROW((void)substitute(parse_type("a"), Bindings{{"a", Term::integer(3)}}), FlowError);
}

TEST(Substitution, ApplicationArgumentsShadow) {
  Type t = Type::start(parse_type("corDef[!(Int / v < 10)]"), Bindings{{"v", Term::var("w")}});
  Type s = substitute(t, Bindings{{"v", Term::integer(99)}, {"w", Term::integer(2)}});
  EXPECT_EQ(to_string(s), "Start(corDef[!Int / v < 10]){v ↦ 2}");
}

TEST(Printer, CanonicalForms) {
  EXPECT_EQ(to_string(Type::zero()), "0");
  EXPECT_EQ(to_string(parse_type("corDef[Start(corDef[!Int]); ?Int]")), "corDef[Start(corDef[!Int]); ?Int]");
  EXPECT_EQ(to_string(parse_type("(A | B)")), "(A | B)");
  EXPECT_EQ(to_string(parse_type("Start(s){v ↦ 2}")), "Start(s){v ↦ 2}");
  EXPECT_EQ(to_string(parse_type("Int^n / n > 0")), "Int^n / n > 0");
}

TEST(Parser, RejectsGarbage) {
  EXPECT_THROW((void)parse_type("[!A; "), FlowError);
  EXPECT_THROW((void)parse_type("corDef[!A]]"), FlowError);
  EXPECT_THROW((void)parse_predicate("x <"), FlowError);
}

TEST(RoundTrip, RandomTypes) {
  std::mt19937 rng(20260417);
  for (int i = 0; i < 2000; ++i) {
    Type t = testing::random_type(rng, 3);
    const std::string printed = to_string(t);
    Type back = parse_type(printed);
    ASSERT_EQ(back, t) << printed << " reparsed as " << to_string(back);
    ASSERT_EQ(to_string(back), printed);
  }
}

TEST(RoundTrip, RandomPredicates) {
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Predicate p = testing::random_predicate(rng, 4);
    const std::string printed = to_string(p);
    ASSERT_EQ(parse_predicate(printed), p) << printed;
  }
}

TEST(Flatten, Idempotent) {
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    Type t = testing::random_type(rng, 3);
    EXPECT_EQ(flatten(flatten(t)), flatten(t));
  }
}

TEST(Concretes, Collected) {
  auto cs = collect_concrete(parse_type("corDef[!Int; ?(String / x == Bool)]"));
  EXPECT_TRUE(cs.contains("Int"));
  EXPECT_TRUE(cs.contains("String"));
  EXPECT_TRUE(cs.contains("Bool"));
}

}  // namespace
}  // namespace flowlock
