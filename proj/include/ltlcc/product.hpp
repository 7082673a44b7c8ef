#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ltlcc/env.hpp"
#include "ltlcc/shaping.hpp"

namespace ltlcc {

enum class EpisodeEvent { running, trap, accepted_round, step_limit };

const char* episode_event_name(EpisodeEvent e);

struct ProductState {
  CarState s;
  int q = 0;
  VisitVector v;
  int steps = 0;
};

struct StepOutcome {
  ProductState next;
  double reward = 0.0;
  EpisodeEvent terminated = EpisodeEvent::running;
  int edge_taken = -1;
};

enum class QInitMode { fixed_q0, random_q };

/* Episodic composition of the labeled car MDP with an annotated LDBA.
 * Immutable after construction; each episode's ProductState belongs to one
 * executor, so concurrent episodes over the same env are fine. */
class ProductEnv {
public:
  ProductEnv(AnnotatedLdba annotated, Workspace workspace, RewardParams params,
             int max_episode_steps);

  /* Fresh episode: s0 uniform over the workspace box (theta over [-pi,pi]),
   * V all ones, q0 fixed or sampled uniformly over non-trap states. */
  ProductState reset(std::mt19937_64& rng, QInitMode mode) const;

  ProductState reset_at(const CarState& s0, int q) const;

  /* One product step. The automaton moves on the label of the *current*
   * state: q' = delta(q, L(s)). The reward is evaluated against V before
   * the visit update. */
  StepOutcome step(const ProductState& ps, const CarAction& a) const;

  /* QD states reachable from ps.q by one eps-edge. */
  std::vector<int> epsilon_options(const ProductState& ps) const;

  /* Deterministic eps rule: jump (s unchanged) to the first eps-successor
   * with an outgoing edge annotated under the current V; nullopt when no
   * such jump exists. */
  std::optional<ProductState> apply_epsilon(const ProductState& ps) const;

  const AnnotatedLdba& annotated() const { return annotated_; }
  const Workspace& workspace() const { return workspace_; }
  const RewardParams& reward_params() const { return params_; }
  int max_episode_steps() const { return max_steps_; }
  int num_automaton_states() const { return annotated_.aut().num_states; }
  int num_acc_sets() const { return annotated_.num_sets(); }

  Symbol label_of(const CarState& s) const;
  double distance_to_progress(const CarState& s, const std::vector<int>& aps) const;

private:
  AnnotatedLdba annotated_;
  Workspace workspace_;
  RewardParams params_;
  int max_steps_;
  std::vector<int> non_trap_states_;
};

/* CSV trajectory log: step,x,y,theta,q,reward,V_bits,event. */
class TrajectoryLog {
public:
  TrajectoryLog();
  void record(const ProductState& before, const StepOutcome& out);
  const std::string& csv() const { return csv_; }

private:
  std::string csv_;
};

}  // namespace ltlcc
