#pragma once

#include <map>
#include <string>
#include <vector>

#include "ltlcc/gridworld.hpp"
#include "ltlcc/learner.hpp"

namespace ltlcc {

class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/* One experiment: a formula (or a prebuilt HOA file), a workspace, reward and
 * learner settings, and a frozen evaluation protocol. */
struct ExperimentConfig {
  std::string name;
  std::string formula;    // exactly one of formula / hoa_path is set
  std::string hoa_path;
  std::string workspace_path;
  RewardParams reward;
  bool enforce_reward_ratio = true;
  LearnerConfig learner;
  long training_steps = 0;
  int max_episode_steps = 200;
  int baseline_max_episode_steps = 0;  // fixed-q0 override; 0: same as above
  std::string q_init = "both";  // "random-q" | "fixed-q0" | "both"
  int eval_count = 30;
  std::uint64_t eval_seed = 1;
  int eval_max_steps = 0;             // 0: use max_episode_steps
  std::vector<CarState> eval_starts;  // explicit list overrides count/seed
};

/* Parses and validates a config; relative paths resolve against base_dir and
 * referenced files must exist. Throws config_error. */
ExperimentConfig config_from_json(const std::string& text, const std::string& base_dir);

/* Pipeline front half: formula/HOA -> validated LDBA -> annotation ->
 * workspace -> product environment. Errors surface prefixed with the failing
 * stage name. */
ProductEnv build_product_env(const ExperimentConfig& cfg);

/* Start states for evaluation: either the config's explicit list or
 * eval_count draws frozen by eval_seed (uniform over the box, theta over
 * [-pi, pi)). */
std::vector<CarState> evaluation_starts(const ExperimentConfig& cfg, const Bounds& bounds);

/* Fraction of noise-free greedy rollouts from q0 that complete an acceptance
 * round within max_steps without trapping. */
double success_rate(const Mlp& actor, const ProductEnv& env, const std::vector<CarState>& starts,
                    int max_steps);

struct ModeResult {
  TrainResult training;
  double success = 0.0;
  std::string trajectory_csv;  // one greedy evaluation rollout, for audit
};

struct ExperimentReport {
  std::map<std::string, ModeResult> modes;  // keyed "random-q" / "fixed-q0"
  std::string report_json;                  // versioned summary
};

/* Full protocol: build the pipeline, train each requested q-init mode,
 * evaluate on the frozen starts, and assemble the report. */
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/* Plot-ready CSV: step, moving average of the per-episode normalized return
 * over `window` episodes; the window is recorded in a comment header. */
std::string export_plot_data(const std::vector<EpisodeMetric>& metrics, int window);

}  // namespace ltlcc
