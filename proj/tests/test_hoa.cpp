#include <doctest.h>

#include "helpers.hpp"
#include "ltlcc/hoa.hpp"

using namespace ltlcc;

TEST_CASE("parse the shipped fixtures") {
  Tgba p1 = parse_hoa(slurp(fixture_path("phi1.hoa")));
  CHECK(p1.num_states == 3);
  CHECK(p1.initial == 0);
  CHECK(p1.num_acc_sets == 1);
  CHECK(p1.ap_list == std::vector<std::string>{"a", "b"});
  CHECK(p1.edges.size() == 5);

  Tgba p2 = parse_hoa(slurp(fixture_path("phi2.hoa")));
  CHECK(p2.num_states == 5);
  CHECK(p2.ap_list.size() == 4);

  Tgba p3 = parse_hoa(slurp(fixture_path("phi3.hoa")));
  CHECK(p3.num_states == 5);
  CHECK(p3.edges.size() == 16);
}

TEST_CASE("emit/parse round trip preserves structure") {
  Tgba a = parse_hoa(slurp(fixture_path("phi3.hoa")));
  Tgba b = parse_hoa(emit_hoa(a));
  CHECK(b.num_states == a.num_states);
  CHECK(b.initial == a.initial);
  CHECK(b.num_acc_sets == a.num_acc_sets);
  CHECK(b.ap_list == a.ap_list);
  REQUIRE(b.edges.size() == a.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    CHECK(b.edges[i].src == a.edges[i].src);
    CHECK(b.edges[i].dst == a.edges[i].dst);
    CHECK(b.edges[i].acc == a.edges[i].acc);
    for (Symbol s = 0; s <= a.full_symbol_mask(); ++s) {
      CHECK(guard_eval(b.edges[i].guard, s) == guard_eval(a.edges[i].guard, s));
    }
  }
}

TEST_CASE("unsupported features are refused by name") {
  std::string base =
      "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Inf(0)\n--BODY--\n";
  CHECK_THROWS_AS(parse_hoa(base + "State: 0 {0}\n[t] 0\n--END--\n"), hoa_unsupported_error);
  CHECK_THROWS_AS(parse_hoa(base + "State: 0\n[t] 0&1\n--END--\n"), hoa_unsupported_error);
  CHECK_THROWS_AS(parse_hoa(base + "State: 0\n0\n--END--\n"), hoa_unsupported_error);
  CHECK_THROWS_AS(
      parse_hoa("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Fin(0)\n--BODY--\n"
                "State: 0\n[t] 0\n--END--\n"),
      hoa_unsupported_error);
}

TEST_CASE("malformed input reports the line") {
  std::string text =
      "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Inf(0)\n--BODY--\n"
      "State: 0\n[5] 0\n--END--\n";
  try {
    parse_hoa(text);
    FAIL("expected hoa_parse_error");
  } catch (const hoa_parse_error& e) {
    CHECK(e.line == 8);
  }
  CHECK_THROWS_AS(parse_hoa("HOA: v1\n"), hoa_parse_error);
}
