#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ltlcc/hoa.hpp"
#include "ltlcc/product.hpp"
#include "ltlcc/translate.hpp"

using namespace ltlcc;

namespace {

ProductEnv phi1_env(int max_steps = 200) {
  Tgba aut = parse_hoa(slurp(fixture_path("phi1.hoa")));
  AnnotatedLdba ann = annotate(validate_ldba(aut, std::vector<bool>(aut.num_states, true), {}));
  Workspace ws = workspace_from_json(slurp(config_path("workspaces/example1.workspace.json")));
  RewardParams params;
  params.r_d = -5.0;
  return ProductEnv(std::move(ann), std::move(ws), params, max_steps);
}

}  // namespace

TEST_CASE("automaton advances on the label of the current state") {
  ProductEnv env = phi1_env();
  // Start inside region a at q0: the a-edge fires and pays r_g.
  ProductState ps = env.reset_at({-3.0, -3.0, 0.0}, 0);
  StepOutcome out = env.step(ps, {0.0, 0.0});
  CHECK(out.next.q == 1);
  CHECK(out.reward == env.reward_params().r_g);
  CHECK(out.terminated == EpisodeEvent::running);
  CHECK(out.next.steps == 1);

  // Outside both regions at q0: wait, earning the shaped distance penalty.
  ps = env.reset_at({0.0, 0.0, 0.0}, 0);
  out = env.step(ps, {0.0, 0.0});
  CHECK(out.next.q == 0);
  double d = std::hypot(2.0, 2.0);  // to region a's corner
  CHECK(out.reward == doctest::Approx(env.reward_params().r_n * d).epsilon(1e-12));
}

TEST_CASE("acceptance round ends the episode with the goal reward") {
  ProductEnv env = phi1_env();
  // q2's accepting self-loop clears the only visit slot: round complete.
  ProductState ps = env.reset_at({0.0, 0.0, 0.0}, 2);
  StepOutcome out = env.step(ps, {0.0, 0.0});
  CHECK(out.terminated == EpisodeEvent::accepted_round);
  CHECK(out.reward == env.reward_params().r_g);
  CHECK(out.next.v.slots == std::vector<bool>{true});  // reset, never all-zero
}

TEST_CASE("step limit terminates without a terminal flagging event") {
  ProductEnv env = phi1_env(2);
  ProductState ps = env.reset_at({0.0, 0.0, 0.0}, 0);
  StepOutcome out = env.step(ps, {0.0, 0.0});
  CHECK(out.terminated == EpisodeEvent::running);
  out = env.step(out.next, {0.0, 0.0});
  CHECK(out.terminated == EpisodeEvent::step_limit);
}

TEST_CASE("trap entry terminates with the trap event") {
  // Avoid c until b: entering c first kills the run.
  AnnotatedLdba ann = annotate(translate_fragment(parse_ltl("!c U b")));
  Workspace ws;
  ws.regions.push_back({"b", 2, 3.5, 2, 3.5});
  ws.regions.push_back({"c", -3.5, -2, -3.5, -2});
  RewardParams params;
  params.r_d = -5.0;
  ProductEnv env(std::move(ann), std::move(ws), params, 200);

  ProductState ps = env.reset_at({-3.0, -3.0, 0.0}, env.annotated().aut().initial);
  StepOutcome out = env.step(ps, {0.0, 0.0});
  CHECK(out.terminated == EpisodeEvent::trap);
  // One more step from inside the trap collects r_d.
  CHECK(env.step(out.next, {0.0, 0.0}).reward == params.r_d);
}

TEST_CASE("random reset modes") {
  ProductEnv env = phi1_env();
  std::mt19937_64 rng(42);
  for (int i = 0; i < 50; ++i) {
    ProductState ps = env.reset(rng, QInitMode::fixed_q0);
    CHECK(ps.q == 0);
    CHECK(ps.v.slots == std::vector<bool>{true});
    CHECK(ps.s.x >= -5.0);
    CHECK(ps.s.x <= 5.0);
  }
  bool saw_nonzero = false;
  for (int i = 0; i < 50; ++i) {
    ProductState ps = env.reset(rng, QInitMode::random_q);
    saw_nonzero = saw_nonzero || ps.q != 0;
    CHECK_FALSE(env.annotated().is_trap(ps.q));
  }
  CHECK(saw_nonzero);

  // Identical seeds give identical draws.
  std::mt19937_64 r1(7), r2(7);
  ProductState a = env.reset(r1, QInitMode::random_q);
  ProductState b = env.reset(r2, QInitMode::random_q);
  CHECK(a.s.x == b.s.x);
  CHECK(a.s.theta == b.s.theta);
  CHECK(a.q == b.q);
}

TEST_CASE("epsilon jumps move to an annotated state without consuming time") {
  // Hand-built LDBA: QN state 0 (true self-loop), eps to QD state 1 whose
  // self-loop is accepting.
  Tgba a;
  a.ap_list = {"a"};
  a.num_states = 2;
  a.initial = 0;
  a.num_acc_sets = 1;
  a.edges.push_back({0, Guard::mk_true(), 0, 0});
  a.edges.push_back({1, Guard::mk_true(), 1, 1});
  Ldba ldba = validate_ldba(a, {false, true}, {{0, 1}});

  AnnotatedLdba ann;
  ann.ldba = ldba;
  ann.b_maps = {{false, true}};
  ann.can_reach = {{false, true}};
  ann.trap = {false, false};

  Workspace ws;
  ws.regions.push_back({"a", 2, 3.5, 2, 3.5});
  ProductEnv env(std::move(ann), std::move(ws), RewardParams{}, 200);

  ProductState ps = env.reset_at({0, 0, 0}, 0);
  CHECK(env.epsilon_options(ps) == std::vector<int>{1});
  auto jumped = env.apply_epsilon(ps);
  REQUIRE(jumped.has_value());
  CHECK(jumped->q == 1);
  CHECK(jumped->steps == ps.steps);
  CHECK(jumped->s.x == ps.s.x);
  CHECK_FALSE(env.apply_epsilon(*jumped).has_value());
}

TEST_CASE("trajectory log format") {
  ProductEnv env = phi1_env();
  ProductState ps = env.reset_at({0.0, 0.0, 0.0}, 0);
  StepOutcome out = env.step(ps, {1.0, 0.0});
  TrajectoryLog log;
  log.record(ps, out);
  CHECK(log.csv().rfind("step,x,y,theta,q,reward,V_bits,event\n", 0) == 0);
  CHECK(log.csv().find("running") != std::string::npos);
}
