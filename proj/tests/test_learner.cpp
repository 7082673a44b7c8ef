#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ltlcc/harness.hpp"
#include "ltlcc/hoa.hpp"
#include "ltlcc/learner.hpp"

using namespace ltlcc;

namespace {

ProductEnv tiny_env(int max_steps = 50) {
  Tgba aut = parse_hoa(slurp(fixture_path("phi1.hoa")));
  AnnotatedLdba ann = annotate(validate_ldba(aut, std::vector<bool>(aut.num_states, true), {}));
  Workspace ws = workspace_from_json(slurp(config_path("workspaces/example1.workspace.json")));
  RewardParams params;
  params.r_d = -5.0;
  return ProductEnv(std::move(ann), std::move(ws), params, max_steps);
}

}  // namespace

TEST_CASE("network construction and forward pass") {
  std::mt19937_64 rng(1);
  Mlp net = make_mlp({3, 8, 2}, true, rng);
  CHECK(net.num_layers() == 2);
  CHECK(net.weights[0].rows() == 8);
  CHECK(net.weights[0].cols() == 3);
  Eigen::VectorXd y = mlp_forward(net, Eigen::VectorXd::Zero(3));
  REQUIRE(y.size() == 2);
  CHECK(std::abs(y(0)) <= 1.0);  // tanh output, zero bias init -> exactly 0
  CHECK(y(0) == 0.0);

  CHECK_THROWS_AS(make_mlp({3}, false, rng), learner_error);
}

TEST_CASE("gradient check against central differences") {
  std::mt19937_64 rng(7);
  Mlp net = make_mlp({4, 6, 5, 1}, false, rng);
  Eigen::VectorXd x(4);
  for (int i = 0; i < 4; ++i) x(i) = gaussian(rng);
  double target = 0.3;

  auto loss = [&](const Mlp& n) {
    double q = mlp_forward(n, x)(0);
    return (q - target) * (q - target);
  };

  ForwardCache cache;
  double q = mlp_forward(net, x, &cache)(0);
  Gradients grads = Gradients::zeros_like(net);
  Eigen::VectorXd d_out(1);
  d_out(0) = 2.0 * (q - target);
  Eigen::VectorXd d_in = mlp_backward(net, cache, d_out, grads);

  const double h = 1e-6;
  for (int l = 0; l < net.num_layers(); ++l) {
    for (int i = 0; i < std::min<int>(3, net.weights[l].rows()); ++i) {
      Mlp plus = net, minus = net;
      plus.weights[l](i, 0) += h;
      minus.weights[l](i, 0) -= h;
      double fd = (loss(plus) - loss(minus)) / (2 * h);
      CHECK(grads.d_weights[l](i, 0) ==
            doctest::Approx(fd).epsilon(1e-4).scale(std::max(1.0, std::abs(fd))));
    }
  }
  // Input sensitivity too (feeds the deterministic policy gradient).
  Eigen::VectorXd xp = x, xm = x;
  xp(1) += h;
  xm(1) -= h;
  Mlp same = net;
  double fd_in = ((mlp_forward(same, xp)(0) - target) * (mlp_forward(same, xp)(0) - target) -
                  (mlp_forward(same, xm)(0) - target) * (mlp_forward(same, xm)(0) - target)) /
                 (2 * h);
  CHECK(d_in(1) == doctest::Approx(fd_in).epsilon(1e-4));
}

TEST_CASE("adam descends a toy regression") {
  std::mt19937_64 rng(3);
  Mlp net = make_mlp({2, 16, 1}, false, rng);
  AdamState opt = AdamState::zeros_like(net);
  auto batch_loss = [&]() {
    double total = 0;
    for (double x0 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      Eigen::VectorXd x(2);
      x << x0, 1.0;
      double err = mlp_forward(net, x)(0) - (2 * x0 - 0.3);
      total += err * err;
    }
    return total / 5;
  };
  double before = batch_loss();
  for (int it = 0; it < 400; ++it) {
    Gradients grads = Gradients::zeros_like(net);
    for (double x0 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      Eigen::VectorXd x(2);
      x << x0, 1.0;
      ForwardCache cache;
      double err = mlp_forward(net, x, &cache)(0) - (2 * x0 - 0.3);
      Eigen::VectorXd d(1);
      d(0) = 2.0 * err / 5;
      mlp_backward(net, cache, d, grads);
    }
    opt.step(net, grads, 1e-2, -1.0);
  }
  CHECK(batch_loss() < before * 0.01);
}

TEST_CASE("soft update blends parameters") {
  std::mt19937_64 rng(5);
  Mlp online = make_mlp({2, 3, 1}, false, rng);
  Mlp target = make_mlp({2, 3, 1}, false, rng);
  double w_t = target.weights[0](0, 0), w_o = online.weights[0](0, 0);
  soft_update(target, online, 0.25);
  CHECK(target.weights[0](0, 0) == doctest::Approx(0.25 * w_o + 0.75 * w_t).epsilon(1e-15));
  Mlp other = make_mlp({2, 4, 1}, false, rng);
  CHECK_THROWS_AS(soft_update(other, online, 0.1), learner_error);
}

TEST_CASE("replay buffer ring semantics") {
  ReplayBuffer buf(3);
  CHECK_THROWS_AS(ReplayBuffer(0), learner_error);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(buf.sample(rng), learner_error);
  for (int i = 0; i < 5; ++i) {
    Transition t;
    t.r = i;
    t.s = Eigen::VectorXd::Zero(1);
    t.s_next = t.s;
    buf.push(t);
  }
  CHECK(buf.size() == 3);
  for (int i = 0; i < 20; ++i) {
    double r = buf.sample(rng).r;
    CHECK(r >= 2.0);  // 0 and 1 were overwritten
    CHECK(r <= 4.0);
  }
}

TEST_CASE("state encoding") {
  ProductEnv env = tiny_env();
  ProductState ps = env.reset_at({2.5, -5.0, 0.5}, 1);
  Eigen::VectorXd f = encode_state(ps, 3, env.workspace().bounds);
  REQUIRE(f.size() == 4 + 3 + 1);
  CHECK(f(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f(1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f(2) == doctest::Approx(std::sin(0.5)).epsilon(1e-12));
  CHECK(f(3) == doctest::Approx(std::cos(0.5)).epsilon(1e-12));
  CHECK(f(4) == 0.0);
  CHECK(f(5) == 1.0);  // one-hot q
  CHECK(f(7) == 1.0);  // visit slot
}

TEST_CASE("action selection clips into the control box") {
  std::mt19937_64 rng(11);
  Mlp actor = make_mlp({8, 8, 2}, true, rng);
  Eigen::VectorXd f = Eigen::VectorXd::Constant(8, 0.3);
  for (int i = 0; i < 100; ++i) {
    CarAction a = act(actor, f, 5.0, rng);
    CHECK(a.v >= -1.0);
    CHECK(a.v <= 1.0);
    CHECK(a.phi >= -1.0);
    CHECK(a.phi <= 1.0);
  }
  CarAction quiet1 = act(actor, f, 0.0, rng);
  CarAction quiet2 = act(actor, f, 0.0, rng);
  CHECK(quiet1.v == quiet2.v);  // noise-free action is deterministic
}

TEST_CASE("checkpoint JSON round trip is bitwise") {
  std::mt19937_64 rng(13);
  Mlp net = make_mlp({5, 7, 2}, true, rng);
  Mlp back = checkpoint_from_json(checkpoint_to_json(net));
  CHECK(back.sizes == net.sizes);
  CHECK(back.tanh_output == net.tanh_output);
  for (int l = 0; l < net.num_layers(); ++l) {
    CHECK(back.weights[l] == net.weights[l]);
    CHECK(back.biases[l] == net.biases[l]);
  }
  CHECK_THROWS_AS(checkpoint_from_json("{\"schema_version\": 99}"), learner_error);
}

TEST_CASE("short training run is reproducible and records episodes") {
  ProductEnv env = tiny_env();
  LearnerConfig cfg;
  cfg.hidden = {16, 16};
  cfg.warmup_steps = 64;
  cfg.batch_size = 16;
  cfg.seed = 9;
  TrainResult r1 = train(env, cfg, 600, QInitMode::random_q);
  TrainResult r2 = train(env, cfg, 600, QInitMode::random_q);
  CHECK_FALSE(r1.metrics.empty());
  CHECK(metrics_to_csv(r1.metrics) == metrics_to_csv(r2.metrics));
  CHECK(checkpoint_to_json(r1.actor) == checkpoint_to_json(r2.actor));

  // Degenerate zero-step run still yields a usable (untrained) actor.
  TrainResult r0 = train(env, cfg, 0, QInitMode::fixed_q0);
  CHECK(r0.metrics.empty());
  CHECK(r0.actor.num_layers() == 3);
}

TEST_CASE("learner config validation") {
  LearnerConfig bad;
  bad.discount = 1.0;
  CHECK_THROWS_AS(validate_learner_config(bad), learner_error);
  bad = LearnerConfig{};
  bad.tau = 0.0;
  CHECK_THROWS_AS(validate_learner_config(bad), learner_error);
  bad = LearnerConfig{};
  bad.batch_size = 0;
  CHECK_THROWS_AS(validate_learner_config(bad), learner_error);
}
