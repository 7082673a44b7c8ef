#include <doctest.h>

#include <algorithm>

#include "ltlcc/automata.hpp"

using namespace ltlcc;

namespace {

// Hand-built automaton for "reach a then b, then loop": the running example
// used across the automata tests.
Tgba chain_ab() {
  Tgba a;
  a.ap_list = {"a", "b"};
  a.num_states = 3;
  a.initial = 0;
  a.num_acc_sets = 1;
  GuardPtr pa = Guard::mk_ap(0), pb = Guard::mk_ap(1);
  a.edges.push_back({0, pa, 1, 0});
  a.edges.push_back({0, Guard::mk_not(pa), 0, 0});
  a.edges.push_back({1, pb, 2, 0});
  a.edges.push_back({1, Guard::mk_not(pb), 1, 0});
  a.edges.push_back({2, Guard::mk_true(), 2, 1});
  return a;
}

constexpr Symbol kA = 1, kB = 2, kNone = 0;

}  // namespace

TEST_CASE("guard evaluation") {
  GuardPtr g = Guard::mk_and(Guard::mk_ap(0), Guard::mk_not(Guard::mk_ap(1)));
  CHECK(guard_eval(g, kA));
  CHECK_FALSE(guard_eval(g, kA | kB));
  CHECK_FALSE(guard_eval(g, kNone));
  CHECK(guard_eval(Guard::mk_or(Guard::mk_false(), Guard::mk_true()), kNone));
}

TEST_CASE("validate_ldba accepts the deterministic chain") {
  Tgba a = chain_ab();
  Ldba l = validate_ldba(a, {true, true, true}, {});
  CHECK(l.in_qd == std::vector<bool>{true, true, true});
  CHECK(l.eps_edges.empty());
}

TEST_CASE("validate_ldba rejects each limit-determinism violation") {
  // Accepting edge outside QD.
  {
    Tgba a = chain_ab();
    CHECK_THROWS_AS(validate_ldba(a, {true, true, false}, {}), automaton_error);
  }
  // Symbol-consuming QN -> QD crossing.
  {
    Tgba a = chain_ab();
    // q0 in QN but its a-edge enters QD.
    CHECK_THROWS_AS(validate_ldba(a, {false, true, true}, {}), automaton_error);
  }
  // Nondeterminism: two edges enabled on the same symbol.
  {
    Tgba a = chain_ab();
    a.edges.push_back({0, Guard::mk_ap(0), 0, 0});
    CHECK_THROWS_AS(validate_ldba(a, {true, true, true}, {}), automaton_error);
  }
  // Missing successor on some symbol.
  {
    Tgba a = chain_ab();
    a.edges.erase(a.edges.begin() + 1);  // q0 loses its !a loop
    CHECK_THROWS_AS(validate_ldba(a, {true, true, true}, {}), automaton_error);
  }
}

TEST_CASE("accepts_lasso on the chain") {
  Ldba l = validate_ldba(chain_ab(), {true, true, true}, {});
  // a then b, then anything forever.
  CHECK(accepts_lasso(l, {{kA, kB}, {kNone}}));
  CHECK(accepts_lasso(l, {{}, {kA, kB}}));
  // a never followed by b.
  CHECK_FALSE(accepts_lasso(l, {{kA}, {kA}}));
  CHECK_FALSE(accepts_lasso(l, {{}, {kNone}}));
  // b before a does not count.
  CHECK_FALSE(accepts_lasso(l, {{kB}, {kNone}}));
  CHECK(accepts_lasso(l, {{kB, kA}, {kB}}));
}

TEST_CASE("accepts_lasso resolves eps-edges") {
  // QN state 0 with a true self-loop, eps jump into an accepting QD loop.
  Tgba a;
  a.ap_list = {"a"};
  a.num_states = 2;
  a.initial = 0;
  a.num_acc_sets = 1;
  a.edges.push_back({0, Guard::mk_true(), 0, 0});
  a.edges.push_back({1, Guard::mk_ap(0), 1, 1});
  a.edges.push_back({1, Guard::mk_not(Guard::mk_ap(0)), 1, 0});
  Ldba l = validate_ldba(a, {false, true}, {{0, 1}});
  CHECK(accepts_lasso(l, {{}, {1}}));
  CHECK_FALSE(accepts_lasso(l, {{}, {0}}));
  CHECK(accepts_lasso(l, {{0, 0}, {1, 0}}));
}

TEST_CASE("out_props and out_edges") {
  Tgba a = chain_ab();
  std::vector<int> e0 = out_edges(a, 0);
  CHECK(e0 == std::vector<int>{0, 1});
  std::vector<Symbol> p2 = out_props(a, 2);
  CHECK(p2.size() == 4);  // true guard: every symbol of 2^{a,b}
  std::vector<Symbol> p0 = out_props(a, 0);
  CHECK(std::count(p0.begin(), p0.end(), kA) == 1);
}
