#include "ltlcc/learner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace ltlcc {

Mlp make_mlp(const std::vector<int>& sizes, bool tanh_output, std::mt19937_64& rng) {
  if (sizes.size() < 2) throw learner_error("network needs at least input and output layers");
  Mlp net;
  net.sizes = sizes;
  net.tanh_output = tanh_output;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    double bound = 1.0 / std::sqrt(static_cast<double>(sizes[l]));
    Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
    for (int i = 0; i < w.rows(); ++i) {
      for (int j = 0; j < w.cols(); ++j) {
        w(i, j) = (2.0 * uniform01(rng) - 1.0) * bound;
      }
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(sizes[l + 1]));
  }
  return net;
}

Eigen::VectorXd mlp_forward(const Mlp& net, const Eigen::VectorXd& x, ForwardCache* cache) {
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(x);
  }
  Eigen::VectorXd h = x;
  for (int l = 0; l < net.num_layers(); ++l) {
    h = net.weights[l] * h + net.biases[l];
    bool last = l + 1 == net.num_layers();
    if (!last || net.tanh_output) h = h.array().tanh();
    if (cache) cache->activations.push_back(h);
  }
  return h;
}

Gradients Gradients::zeros_like(const Mlp& net) {
  Gradients g;
  for (int l = 0; l < net.num_layers(); ++l) {
    g.d_weights.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.d_biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return g;
}

void Gradients::scale(double s) {
  for (auto& w : d_weights) w *= s;
  for (auto& b : d_biases) b *= s;
}

Eigen::VectorXd mlp_backward(const Mlp& net, const ForwardCache& cache,
                             const Eigen::VectorXd& d_output, Gradients& grads) {
  const int L = net.num_layers();
  Eigen::VectorXd delta = d_output;
  for (int l = L - 1; l >= 0; --l) {
    bool activated = l + 1 < L || net.tanh_output;
    if (activated) {
      // activations store tanh outputs; tanh' = 1 - tanh^2
      const Eigen::VectorXd& a = cache.activations[l + 1];
      delta = delta.cwiseProduct((1.0 - a.array().square()).matrix());
    }
    grads.d_weights[l].noalias() += delta * cache.activations[l].transpose();
    grads.d_biases[l] += delta;
    delta = net.weights[l].transpose() * delta;
  }
  return delta;  // sensitivity w.r.t. the input
}

AdamState AdamState::zeros_like(const Mlp& net) {
  AdamState s;
  for (int l = 0; l < net.num_layers(); ++l) {
    s.m_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    s.v_w.push_back(s.m_w.back());
    s.m_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    s.v_b.push_back(s.m_b.back());
  }
  return s;
}

void AdamState::step(Mlp& net, const Gradients& grads, double rate, double direction) {
  ++t;
  double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (int l = 0; l < net.num_layers(); ++l) {
    m_w[l] = beta1 * m_w[l] + (1.0 - beta1) * grads.d_weights[l];
    v_w[l] = beta2 * v_w[l].array() + (1.0 - beta2) * grads.d_weights[l].array().square();
    net.weights[l].array() += direction * rate * (m_w[l].array() / c1) /
                              ((v_w[l].array() / c2).sqrt() + eps);
    m_b[l] = beta1 * m_b[l] + (1.0 - beta1) * grads.d_biases[l];
    v_b[l] = beta2 * v_b[l].array() + (1.0 - beta2) * grads.d_biases[l].array().square();
    net.biases[l].array() += direction * rate * (m_b[l].array() / c1) /
                             ((v_b[l].array() / c2).sqrt() + eps);
  }
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
  if (target.sizes != online.sizes || target.tanh_output != online.tanh_output) {
    throw learner_error("soft_update: architecture mismatch");
  }
  for (int l = 0; l < target.num_layers(); ++l) {
    target.weights[l] = tau * online.weights[l] + (1.0 - tau) * target.weights[l];
    target.biases[l] = tau * online.biases[l] + (1.0 - tau) * target.biases[l];
  }
}

void assert_finite(const Mlp& net, const char* where) {
  for (int l = 0; l < net.num_layers(); ++l) {
    if (!net.weights[l].allFinite() || !net.biases[l].allFinite()) {
      throw learner_error(std::string("non-finite parameters after ") + where);
    }
  }
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw learner_error("replay buffer capacity must be positive");
  ring_.resize(capacity_);
}

void ReplayBuffer::push(Transition t) {
  ring_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

const Transition& ReplayBuffer::sample(std::mt19937_64& rng) const {
  if (size_ == 0) throw learner_error("sampling from an empty replay buffer");
  std::size_t idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(size_));
  if (idx >= size_) idx = size_ - 1;
  return ring_[idx];
}

void validate_learner_config(const LearnerConfig& cfg) {
  if (cfg.discount <= 0.0 || cfg.discount >= 1.0) throw learner_error("discount must be in (0,1)");
  if (cfg.actor_rate <= 0.0 || cfg.critic_rate <= 0.0) throw learner_error("rates must be positive");
  if (cfg.tau <= 0.0 || cfg.tau > 1.0) throw learner_error("tau must be in (0,1]");
  if (cfg.batch_size <= 0) throw learner_error("batch size must be positive");
  if (cfg.noise_scale < 0.0) throw learner_error("noise scale must be nonnegative");
  if (cfg.n_step < 1) throw learner_error("n_step must be at least 1");
}

Eigen::VectorXd encode_state(const ProductState& ps, int n_states, const Bounds& bounds) {
  double cx = 0.5 * (bounds.x_lo + bounds.x_hi);
  double cy = 0.5 * (bounds.y_lo + bounds.y_hi);
  double hx = 0.5 * (bounds.x_hi - bounds.x_lo);
  double hy = 0.5 * (bounds.y_hi - bounds.y_lo);
  int m = static_cast<int>(ps.v.slots.size());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(4 + n_states + m);
  f(0) = (ps.s.x - cx) / hx;
  f(1) = (ps.s.y - cy) / hy;
  f(2) = std::sin(ps.s.theta);
  f(3) = std::cos(ps.s.theta);
  f(4 + ps.q) = 1.0;
  for (int i = 0; i < m; ++i) f(4 + n_states + i) = ps.v[i] ? 1.0 : 0.0;
  return f;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller; u1 pushed away from 0 to keep the log finite.
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

CarAction act(const Mlp& actor, const Eigen::VectorXd& features, double noise_scale,
              std::mt19937_64& rng) {
  Eigen::VectorXd out = mlp_forward(actor, features);
  CarAction a;
  a.v = out(0);
  a.phi = out(1);
  if (noise_scale > 0.0) {
    a.v += noise_scale * gaussian(rng);
    a.phi += noise_scale * gaussian(rng);
  }
  a.v = std::clamp(a.v, -1.0, 1.0);
  a.phi = std::clamp(a.phi, -1.0, 1.0);
  return a;
}

namespace {

Eigen::VectorXd critic_input(const Eigen::VectorXd& s, const Eigen::Vector2d& a) {
  Eigen::VectorXd in(s.size() + 2);
  in << s, a;
  return in;
}

}  // namespace

double critic_update(Mlp& critic, const Mlp& target_actor, const Mlp& target_critic,
                     const std::vector<const Transition*>& batch, double discount, double rate,
                     AdamState& opt) {
  if (batch.empty()) throw learner_error("critic_update: empty batch");
  Gradients grads = Gradients::zeros_like(critic);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Transition* tr : batch) {
    double y = tr->r;
    if (!tr->terminal) {
      Eigen::VectorXd a_next = mlp_forward(target_actor, tr->s_next);
      y += std::pow(discount, tr->steps) *
           mlp_forward(target_critic, critic_input(tr->s_next, a_next))(0);
    }
    ForwardCache cache;
    double q = mlp_forward(critic, critic_input(tr->s, tr->a), &cache)(0);
    double err = q - y;
    loss += err * err * inv_n;
    Eigen::VectorXd d_out(1);
    d_out(0) = 2.0 * err * inv_n;
    mlp_backward(critic, cache, d_out, grads);
  }
  if (!std::isfinite(loss)) throw learner_error("non-finite critic loss");
  opt.step(critic, grads, rate, -1.0);
  assert_finite(critic, "critic update");
  return loss;
}

double actor_update(Mlp& actor, const Mlp& critic, const std::vector<const Transition*>& batch,
                    double rate, AdamState& opt) {
  if (batch.empty()) throw learner_error("actor_update: empty batch");
  Gradients grads = Gradients::zeros_like(actor);
  double objective = 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Transition* tr : batch) {
    ForwardCache actor_cache;
    Eigen::VectorXd a = mlp_forward(actor, tr->s, &actor_cache);
    ForwardCache critic_cache;
    double q = mlp_forward(critic, critic_input(tr->s, a), &critic_cache)(0);
    objective += q * inv_n;

    Gradients scratch = Gradients::zeros_like(critic);
    Eigen::VectorXd d_out(1);
    d_out(0) = inv_n;
    Eigen::VectorXd d_input = mlp_backward(critic, critic_cache, d_out, scratch);
    // Only the action slice of the critic input flows back into the actor.
    Eigen::VectorXd d_action = d_input.tail(a.size());
    mlp_backward(actor, actor_cache, d_action, grads);
  }
  if (!std::isfinite(objective)) throw learner_error("non-finite actor objective");
  opt.step(actor, grads, rate, +1.0);
  assert_finite(actor, "actor update");
  return objective;
}

TrainResult train(const ProductEnv& env, const LearnerConfig& cfg, long total_steps,
                  QInitMode mode) {
  validate_learner_config(cfg);
  std::mt19937_64 rng(cfg.seed);

  const int n_states = env.num_automaton_states();
  const int feat_dim = 4 + n_states + env.num_acc_sets();
  std::vector<int> actor_sizes{feat_dim};
  std::vector<int> critic_sizes{feat_dim + 2};
  for (int h : cfg.hidden) {
    actor_sizes.push_back(h);
    critic_sizes.push_back(h);
  }
  actor_sizes.push_back(2);
  critic_sizes.push_back(1);

  TrainResult result;
  result.actor = make_mlp(actor_sizes, /*tanh_output=*/true, rng);
  result.critic = make_mlp(critic_sizes, /*tanh_output=*/false, rng);
  Mlp target_actor = result.actor;
  Mlp target_critic = result.critic;
  AdamState actor_opt = AdamState::zeros_like(result.actor);
  AdamState critic_opt = AdamState::zeros_like(result.critic);
  ReplayBuffer buffer(cfg.buffer_capacity);

  // Ornstein-Uhlenbeck exploration noise. Temporally correlated excursions
  // matter here: the car cannot turn in place (theta-dot scales with v), so
  // uncorrelated per-step noise averages to zero displacement and lets the
  // policy settle into "parked" local optima.
  const double ou_theta = 0.15;
  Eigen::Vector2d ou = Eigen::Vector2d::Zero();

  // Transitions waiting to mature into n-step returns (oldest first).
  struct Pending {
    Transition tr;
    double disc;  // discount weight for the next accumulated reward
  };
  std::vector<Pending> pending;

  long step = 0, episode = 0;
  while (step < total_steps) {
    ProductState ps = env.reset(rng, mode);
    ou.setZero();
    pending.clear();
    double ep_return = 0.0;
    int ep_len = 0;
    int eps_used = 0;
    bool accepted = false;
    EpisodeEvent ended = EpisodeEvent::running;

    while (ended == EpisodeEvent::running && step < total_steps) {
      if (auto jumped = env.apply_epsilon(ps)) {
        ps = *jumped;
        ++eps_used;
      }
      double frac = static_cast<double>(step) / static_cast<double>(std::max<long>(total_steps, 1));
      double sigma = cfg.noise_scale * (1.0 - frac);  // linear decay
      ou(0) += ou_theta * (0.0 - ou(0)) + sigma * gaussian(rng);
      ou(1) += ou_theta * (0.0 - ou(1)) + sigma * gaussian(rng);
      Eigen::VectorXd feat = encode_state(ps, n_states, env.workspace().bounds);
      CarAction a = act(result.actor, feat, 0.0, rng);
      a.v = std::clamp(a.v + ou(0), -1.0, 1.0);
      a.phi = std::clamp(a.phi + ou(1), -1.0, 1.0);
      StepOutcome out = env.step(ps, a);
      ++step;
      ++ep_len;
      ep_return += out.reward;
      if (out.terminated == EpisodeEvent::accepted_round) accepted = true;

      Pending p;
      p.tr.s = feat;
      p.tr.a = Eigen::Vector2d(a.v, a.phi);
      p.tr.r = 0.0;
      p.tr.steps = 0;
      p.disc = 1.0;
      pending.push_back(std::move(p));
      for (Pending& q : pending) {
        q.tr.r += q.disc * out.reward;
        q.disc *= cfg.discount;
        ++q.tr.steps;
      }

      bool true_terminal = out.terminated == EpisodeEvent::trap ||
                           out.terminated == EpisodeEvent::accepted_round;
      bool episode_over = out.terminated != EpisodeEvent::running || step >= total_steps;
      Eigen::VectorXd next_feat = encode_state(out.next, n_states, env.workspace().bounds);
      while (!pending.empty() &&
             (pending.front().tr.steps >= cfg.n_step || episode_over)) {
        Transition tr = std::move(pending.front().tr);
        pending.erase(pending.begin());
        tr.s_next = next_feat;
        tr.terminal = true_terminal;
        buffer.push(std::move(tr));
      }

      if (static_cast<long>(buffer.size()) >= cfg.warmup_steps &&
          static_cast<int>(buffer.size()) >= cfg.batch_size) {
        std::vector<const Transition*> batch;
        batch.reserve(cfg.batch_size);
        for (int i = 0; i < cfg.batch_size; ++i) batch.push_back(&buffer.sample(rng));
        critic_update(result.critic, target_actor, target_critic, batch, cfg.discount,
                      cfg.critic_rate, critic_opt);
        actor_update(result.actor, result.critic, batch, cfg.actor_rate, actor_opt);
        soft_update(target_actor, result.actor, cfg.tau);
        soft_update(target_critic, result.critic, cfg.tau);
      }

      ps = out.next;
      ended = out.terminated;
    }

    EpisodeMetric m;
    m.step = step;
    m.episode = episode++;
    m.ret = ep_return;
    m.normalized_return = ep_len > 0 ? ep_return / ep_len : 0.0;
    m.accepted = accepted;
    m.epsilon_used = eps_used;
    result.metrics.push_back(m);
  }
  return result;
}

std::string metrics_to_csv(const std::vector<EpisodeMetric>& metrics) {
  std::string out = "step,episode,return,normalized_return,accepted,epsilon_used\n";
  char buf[160];
  for (const EpisodeMetric& m : metrics) {
    std::snprintf(buf, sizeof(buf), "%ld,%ld,%.17g,%.17g,%d,%d\n", m.step, m.episode, m.ret,
                  m.normalized_return, m.accepted ? 1 : 0, m.epsilon_used);
    out += buf;
  }
  return out;
}

std::string checkpoint_to_json(const Mlp& net) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["sizes"] = net.sizes;
  j["tanh_output"] = net.tanh_output;
  j["weights"] = nlohmann::json::array();
  j["biases"] = nlohmann::json::array();
  for (int l = 0; l < net.num_layers(); ++l) {
    nlohmann::json wj = nlohmann::json::array();
    for (int i = 0; i < net.weights[l].rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < net.weights[l].cols(); ++c) row.push_back(net.weights[l](i, c));
      wj.push_back(row);
    }
    j["weights"].push_back(wj);
    nlohmann::json bj = nlohmann::json::array();
    for (int i = 0; i < net.biases[l].size(); ++i) bj.push_back(net.biases[l](i));
    j["biases"].push_back(bj);
  }
  return j.dump(1) + "\n";
}

Mlp checkpoint_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("schema_version", 0) != 1) throw learner_error("unknown checkpoint schema version");
  Mlp net;
  net.sizes = j.at("sizes").get<std::vector<int>>();
  net.tanh_output = j.at("tanh_output").get<bool>();
  for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
    const auto& wj = j.at("weights").at(l);
    Eigen::MatrixXd w(net.sizes[l + 1], net.sizes[l]);
    for (int i = 0; i < w.rows(); ++i) {
      for (int c = 0; c < w.cols(); ++c) w(i, c) = wj.at(i).at(c).get<double>();
    }
    net.weights.push_back(std::move(w));
    const auto& bj = j.at("biases").at(l);
    Eigen::VectorXd b(net.sizes[l + 1]);
    for (int i = 0; i < b.size(); ++i) b(i) = bj.at(i).get<double>();
    net.biases.push_back(std::move(b));
  }
  return net;
}

}  // namespace ltlcc
