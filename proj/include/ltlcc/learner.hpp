#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ltlcc/product.hpp"

namespace ltlcc {

class learner_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/* Fully-connected network with tanh hidden layers. The output layer is tanh
 * (actor, bounded actions) or identity (critic). */
struct Mlp {
  std::vector<int> sizes;  // sizes.front() inputs, sizes.back() outputs
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  bool tanh_output = false;

  int num_layers() const { return static_cast<int>(weights.size()); }
};

Mlp make_mlp(const std::vector<int>& sizes, bool tanh_output, std::mt19937_64& rng);

struct ForwardCache {
  std::vector<Eigen::VectorXd> activations;  // activations[0] is the input
};

Eigen::VectorXd mlp_forward(const Mlp& net, const Eigen::VectorXd& x,
                            ForwardCache* cache = nullptr);

/* Parameter gradients, same shapes as the network. */
struct Gradients {
  std::vector<Eigen::MatrixXd> d_weights;
  std::vector<Eigen::VectorXd> d_biases;

  static Gradients zeros_like(const Mlp& net);
  void scale(double s);
};

/* Reverse pass: accumulates parameter gradients for the given output
 * sensitivity and returns the input sensitivity (needed for the
 * deterministic policy gradient through the critic's action input). */
Eigen::VectorXd mlp_backward(const Mlp& net, const ForwardCache& cache,
                             const Eigen::VectorXd& d_output, Gradients& grads);

/* Adam state for one network. step(direction=-1) descends, (+1) ascends. */
struct AdamState {
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  long t = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  static AdamState zeros_like(const Mlp& net);
  void step(Mlp& net, const Gradients& grads, double rate, double direction);
};

void soft_update(Mlp& target, const Mlp& online, double tau);
void assert_finite(const Mlp& net, const char* where);

struct Transition {
  Eigen::VectorXd s;
  Eigen::Vector2d a;
  double r = 0.0;          // discounted n-step return from s
  Eigen::VectorXd s_next;  // state `steps` env steps after s
  int steps = 1;           // bootstrap horizon; target discounts by gamma^steps
  bool terminal = false;   // true terminal (trap or accepted round), not time-outs
};

/* Fixed-capacity ring with uniform sampling. */
class ReplayBuffer {
public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(Transition t);
  std::size_t size() const { return size_; }
  const Transition& sample(std::mt19937_64& rng) const;

private:
  std::vector<Transition> ring_;
  std::size_t capacity_, head_ = 0, size_ = 0;
};

struct LearnerConfig {
  double discount = 0.99;
  double actor_rate = 1e-4;
  double critic_rate = 1e-3;
  double tau = 0.005;
  int batch_size = 64;
  std::size_t buffer_capacity = 100000;
  double noise_scale = 0.2;   // OU exploration sigma, decayed linearly to 0
  int warmup_steps = 1000;    // env steps before updates begin
  int n_step = 5;             // multi-step return horizon for critic targets
  std::vector<int> hidden = {64, 64};
  std::uint64_t seed = 0;
};

void validate_learner_config(const LearnerConfig& cfg);

/* Feature vector [x, y normalized by the box half-widths, sin/cos theta],
 * one-hot automaton state, V bits. Dimension 4 + |Q| + m. */
Eigen::VectorXd encode_state(const ProductState& ps, int n_states, const Bounds& bounds);

/* Deterministic uniform/gaussian draws built directly on the engine output,
 * so results do not depend on the standard library's distribution code. */
double uniform01(std::mt19937_64& rng);
double gaussian(std::mt19937_64& rng);

CarAction act(const Mlp& actor, const Eigen::VectorXd& features, double noise_scale,
              std::mt19937_64& rng);

/* One critic gradient step on the mean squared Bellman error with target
 * networks; stored actions score the critic, terminal transitions drop the
 * bootstrap. Returns the batch loss. */
double critic_update(Mlp& critic, const Mlp& target_actor, const Mlp& target_critic,
                     const std::vector<const Transition*>& batch, double discount, double rate,
                     AdamState& opt);

/* One ascent step on mean Q(s, pi(s)), chaining the critic's action gradient
 * into the actor. Returns the batch objective. */
double actor_update(Mlp& actor, const Mlp& critic, const std::vector<const Transition*>& batch,
                    double rate, AdamState& opt);

struct EpisodeMetric {
  long step = 0;       // global env step at episode end
  long episode = 0;
  double ret = 0.0;
  double normalized_return = 0.0;  // return / episode length
  bool accepted = false;
  int epsilon_used = 0;
};

struct TrainResult {
  Mlp actor;
  Mlp critic;
  std::vector<EpisodeMetric> metrics;
};

/* Full training loop (Alg.-2 shape): episodic resets in the requested q-init
 * mode, exploration noise, replay, critic/actor updates, soft target
 * updates. Bitwise deterministic for a fixed config and seed. */
TrainResult train(const ProductEnv& env, const LearnerConfig& cfg, long total_steps,
                  QInitMode mode);

std::string metrics_to_csv(const std::vector<EpisodeMetric>& metrics);

/* Versioned JSON checkpoint (layer sizes + parameters, full precision). */
std::string checkpoint_to_json(const Mlp& actor);
Mlp checkpoint_from_json(const std::string& text);

}  // namespace ltlcc
