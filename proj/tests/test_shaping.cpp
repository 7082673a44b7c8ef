#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ltlcc/hoa.hpp"
#include "ltlcc/shaping.hpp"
#include "ltlcc/translate.hpp"

using namespace ltlcc;

namespace {

Ldba ldba_of(const std::string& hoa_fixture) {
  Tgba aut = parse_hoa(slurp(fixture_path(hoa_fixture)));
  return validate_ldba(aut, std::vector<bool>(aut.num_states, true), {});
}

int find_edge(const Tgba& a, int src, Symbol sigma) { return edge_on_symbol(a, src, sigma); }

}  // namespace

TEST_CASE("annotation of the reach-then-reach chain") {
  AnnotatedLdba ann = annotate(ldba_of("phi1.hoa"));
  REQUIRE(ann.b_maps.size() == 1);
  const Tgba& a = ann.aut();
  // Progress edges are annotated; self-waits are not.
  CHECK(ann.b_maps[0][find_edge(a, 0, 1)]);        // q0 --a--> q1
  CHECK_FALSE(ann.b_maps[0][find_edge(a, 0, 0)]);  // q0 waits
  CHECK(ann.b_maps[0][find_edge(a, 1, 2)]);        // q1 --b--> q2
  CHECK_FALSE(ann.b_maps[0][find_edge(a, 1, 0)]);
  CHECK(ann.b_maps[0][find_edge(a, 2, 0)]);        // accepting self-loop
  CHECK(ann.trap == std::vector<bool>{false, false, false});
}

TEST_CASE("brute-force oracle agrees on all fixtures") {
  for (const char* fx : {"phi1.hoa", "phi2.hoa", "phi3.hoa"}) {
    AnnotatedLdba fast = annotate(ldba_of(fx));
    AnnotatedLdba slow = brute_force_annotation(ldba_of(fx));
    CHECK(fast.b_maps == slow.b_maps);
    CHECK(fast.trap == slow.trap);
  }
}

TEST_CASE("standalone until has a genuine trap") {
  AnnotatedLdba ann = annotate(translate_fragment(parse_ltl("!c U b")));
  int traps = 0;
  for (int q = 0; q < ann.aut().num_states; ++q) traps += ann.is_trap(q);
  CHECK(traps == 1);
  AnnotatedLdba slow = brute_force_annotation(ann.ldba);
  CHECK(ann.b_maps == slow.b_maps);
  CHECK(ann.trap == slow.trap);
}

TEST_CASE("visit vector update and round reset") {
  // Two acceptance sets: q0 --F_1--> q1, then an F_2 self-loop on q1.
  Tgba a;
  a.ap_list = {"a"};
  a.num_states = 2;
  a.initial = 0;
  a.num_acc_sets = 2;
  a.edges.push_back({0, Guard::mk_true(), 1, 1});  // F_1
  a.edges.push_back({1, Guard::mk_true(), 1, 2});  // F_2
  AnnotatedLdba ann = annotate(validate_ldba(a, {true, true}, {}));

  VisitVector v(2);
  CHECK_FALSE(update_visits(v, 0, ann));
  CHECK(v.slots == std::vector<bool>{false, true});
  CHECK(update_visits(v, 1, ann));  // second set cleared: round complete
  CHECK(v.slots == std::vector<bool>{true, true});

  // b respects the visit vector: an already-visited set contributes nothing.
  // The self-loop lies only in F_2 and cannot lead back to F_1.
  VisitVector w(2);
  w.slots = {true, false};
  CHECK_FALSE(b_value(ann, w, 1));
  w.slots = {false, true};
  CHECK(b_value(ann, w, 1));
}

TEST_CASE("progress sets") {
  AnnotatedLdba p1 = annotate(ldba_of("phi1.hoa"));
  VisitVector v(1);
  CHECK(progress_set(p1, v, 0) == std::vector<int>{0});  // {a}
  CHECK(progress_set(p1, v, 1) == std::vector<int>{1});  // {b}

  AnnotatedLdba p3 = annotate(ldba_of("phi3.hoa"));
  CHECK(progress_set(p3, VisitVector(1), 0) == std::vector<int>{0, 1});  // {a, b}
}

TEST_CASE("shaped reward regimes") {
  AnnotatedLdba ann = annotate(ldba_of("phi1.hoa"));
  RewardParams params;
  params.r_d = -5.0;
  validate_reward_params(params);

  auto dist = [](const std::vector<int>&) { return 2.5; };
  // Annotated edge fires: r_g.
  CHECK(shaped_reward(ann, VisitVector(1), 0, /*sigma=*/1, params, dist) == params.r_g);
  // Non-progress step: r_n * d.
  CHECK(shaped_reward(ann, VisitVector(1), 0, /*sigma=*/0, params, dist) ==
        doctest::Approx(params.r_n * 2.5).epsilon(1e-12));

  // A trap state collects r_d; take the guarded-until automaton.
  AnnotatedLdba until = annotate(translate_fragment(parse_ltl("!c U b")));
  int trap_q = -1;
  for (int q = 0; q < until.aut().num_states; ++q) {
    if (until.is_trap(q)) trap_q = q;
  }
  REQUIRE(trap_q >= 0);
  CHECK(shaped_reward(until, VisitVector(1), trap_q, 0, params, dist) == params.r_d);
}

TEST_CASE("reward parameter validation") {
  RewardParams good;  // r_g=50, r_n=-0.1, r_d=-10
  CHECK_THROWS_AS(validate_reward_params(good, true), std::invalid_argument);  // 50/100 < 10/10
  CHECK_NOTHROW(validate_reward_params(good, false));
  good.r_g = 100.0;
  CHECK_NOTHROW(validate_reward_params(good, true));

  RewardParams bad;
  bad.r_n = 0.1;
  CHECK_THROWS_AS(validate_reward_params(bad, false), std::invalid_argument);
  bad = RewardParams{};
  bad.r_d = -0.05;  // |r_d| < |r_n|
  CHECK_THROWS_AS(validate_reward_params(bad, false), std::invalid_argument);
}

TEST_CASE("edge_on_symbol demands determinism") {
  Tgba a;
  a.ap_list = {"a"};
  a.num_states = 1;
  a.num_acc_sets = 1;
  a.edges.push_back({0, Guard::mk_ap(0), 0, 1});
  CHECK_THROWS_AS(edge_on_symbol(a, 0, 0), automaton_error);  // no successor
  a.edges.push_back({0, Guard::mk_true(), 0, 0});
  CHECK_THROWS_AS(edge_on_symbol(a, 0, 1), automaton_error);  // two successors
  CHECK(edge_on_symbol(a, 0, 0) == 1);
}

TEST_CASE("annotation dump is versioned JSON") {
  std::string j = annotation_to_json(annotate(ldba_of("phi1.hoa")));
  CHECK(j.find("\"schema_version\"") != std::string::npos);
  CHECK(j.find("\"b_maps\"") != std::string::npos);
  CHECK(j.find("\"traps\"") != std::string::npos);
}
