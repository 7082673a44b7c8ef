#include <doctest.h>

#include "ltlcc/ltl.hpp"

using namespace ltlcc;

TEST_CASE("parse/print round trip") {
  for (const char* text : {
           "F (a & F b)",
           "F (a & F (b & F (c & F d)))",
           "F (a & F d) | F (b & (!c U d))",
           "a -> b -> c",
           "a U b U c",
           "!a U b",
           "G !c & F a",
           "true U b",
           "X (a | false)",
       }) {
    FormulaPtr f = parse_ltl(text);
    CHECK(formulas_equal(f, parse_ltl(print_ltl(f))));
  }
}

TEST_CASE("precedence and associativity") {
  // -> is lowest and right-associative.
  FormulaPtr f = parse_ltl("a -> b -> c");
  REQUIRE(f->kind == FormulaKind::Implies);
  CHECK(f->rhs->kind == FormulaKind::Implies);

  // U binds tighter than & and associates right.
  f = parse_ltl("a U b U c & d");
  REQUIRE(f->kind == FormulaKind::And);
  CHECK(f->lhs->kind == FormulaKind::Until);
  CHECK(f->lhs->rhs->kind == FormulaKind::Until);

  // Unary binds tightest: !a U b == (!a) U b.
  f = parse_ltl("!a U b");
  REQUIRE(f->kind == FormulaKind::Until);
  CHECK(f->lhs->kind == FormulaKind::Not);

  // & over |.
  f = parse_ltl("a | b & c");
  REQUIRE(f->kind == FormulaKind::Or);
  CHECK(f->rhs->kind == FormulaKind::And);
}

TEST_CASE("comments and whitespace") {
  FormulaPtr f = parse_ltl("# goal\nF (a & # inline\n F b)\n");
  CHECK(formulas_equal(f, parse_ltl("F (a & F b)")));
}

TEST_CASE("parse errors carry a byte offset") {
  CHECK_THROWS_AS(parse_ltl(""), ltl_parse_error);
  CHECK_THROWS_AS(parse_ltl("(a & b"), ltl_parse_error);
  CHECK_THROWS_AS(parse_ltl("a &"), ltl_parse_error);
  CHECK_THROWS_AS(parse_ltl("a b"), ltl_parse_error);
  try {
    parse_ltl("a & $");
  } catch (const ltl_parse_error& e) {
    CHECK(e.offset == 4);
  }
}

TEST_CASE("expand_derived rewrites F, G, ->, |") {
  CHECK(formulas_equal(expand_derived(parse_ltl("F p")), parse_ltl("true U p")));
  CHECK(formulas_equal(expand_derived(parse_ltl("G p")), parse_ltl("!(true U !p)")));
  CHECK(formulas_equal(expand_derived(parse_ltl("p -> q")), parse_ltl("!(!!p & !q)")));
  CHECK(formulas_equal(expand_derived(parse_ltl("p | q")), parse_ltl("!(!p & !q)")));
  // Idempotent, and double negation is preserved.
  FormulaPtr once = expand_derived(parse_ltl("F (a & F b) | G !c"));
  CHECK(formulas_equal(once, expand_derived(once)));
  CHECK(formulas_equal(expand_derived(parse_ltl("!!a")), parse_ltl("!!a")));
}

TEST_CASE("atomic_props is sorted and deduplicated") {
  CHECK(atomic_props(parse_ltl("F (a & F d) | F (b & (!c U d))")) ==
        std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(atomic_props(parse_ltl("true")).empty());
}
