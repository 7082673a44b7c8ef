#include "ltlcc/harness.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ltlcc/hoa.hpp"
#include "ltlcc/translate.hpp"

namespace ltlcc {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.value("schema_version", 0) != 1) throw config_error("unknown config schema version");

  ExperimentConfig cfg;
  cfg.name = j.value("name", "experiment");
  cfg.formula = j.value("formula", "");
  cfg.hoa_path = j.value("hoa", "");
  if (cfg.formula.empty() == cfg.hoa_path.empty()) {
    throw config_error("config needs exactly one of 'formula' or 'hoa'");
  }
  if (!j.contains("workspace")) throw config_error("config needs a 'workspace' path");
  cfg.workspace_path = resolve(j.at("workspace").get<std::string>(), base_dir);
  if (!cfg.hoa_path.empty()) cfg.hoa_path = resolve(cfg.hoa_path, base_dir);
  if (!std::filesystem::exists(cfg.workspace_path)) {
    throw config_error("workspace file not found: " + cfg.workspace_path);
  }
  if (!cfg.hoa_path.empty() && !std::filesystem::exists(cfg.hoa_path)) {
    throw config_error("HOA file not found: " + cfg.hoa_path);
  }

  if (j.contains("reward")) {
    const auto& r = j.at("reward");
    cfg.reward.r_g = r.value("r_g", cfg.reward.r_g);
    cfg.reward.r_n = r.value("r_n", cfg.reward.r_n);
    cfg.reward.r_d = r.value("r_d", cfg.reward.r_d);
    cfg.reward.d_max = r.value("d_max", cfg.reward.d_max);
    cfg.enforce_reward_ratio = r.value("enforce_ratio", true);
  }
  try {
    validate_reward_params(cfg.reward, cfg.enforce_reward_ratio);
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("reward parameters: ") + e.what());
  }

  if (j.contains("learner")) {
    const auto& l = j.at("learner");
    cfg.learner.discount = l.value("discount", cfg.learner.discount);
    cfg.learner.actor_rate = l.value("actor_rate", cfg.learner.actor_rate);
    cfg.learner.critic_rate = l.value("critic_rate", cfg.learner.critic_rate);
    cfg.learner.tau = l.value("tau", cfg.learner.tau);
    cfg.learner.batch_size = l.value("batch_size", cfg.learner.batch_size);
    cfg.learner.buffer_capacity = l.value("buffer_capacity", cfg.learner.buffer_capacity);
    cfg.learner.noise_scale = l.value("noise_scale", cfg.learner.noise_scale);
    cfg.learner.warmup_steps = l.value("warmup_steps", cfg.learner.warmup_steps);
    cfg.learner.n_step = l.value("n_step", cfg.learner.n_step);
    cfg.learner.hidden = l.value("hidden", cfg.learner.hidden);
    cfg.learner.seed = l.value("seed", cfg.learner.seed);
  }
  try {
    validate_learner_config(cfg.learner);
  } catch (const learner_error& e) {
    throw config_error(std::string("learner parameters: ") + e.what());
  }

  cfg.training_steps = j.value("training_steps", 0L);
  cfg.max_episode_steps = j.value("max_episode_steps", 200);
  cfg.baseline_max_episode_steps = j.value("baseline_max_episode_steps", 0);
  if (cfg.baseline_max_episode_steps < 0) {
    throw config_error("baseline_max_episode_steps must be nonnegative");
  }
  cfg.q_init = j.value("q_init", std::string("both"));
  if (cfg.q_init != "random-q" && cfg.q_init != "fixed-q0" && cfg.q_init != "both") {
    throw config_error("q_init must be one of random-q, fixed-q0, both");
  }
  if (cfg.training_steps < 0) throw config_error("training_steps must be nonnegative");
  if (cfg.max_episode_steps <= 0) throw config_error("max_episode_steps must be positive");

  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    cfg.eval_count = e.value("count", cfg.eval_count);
    cfg.eval_seed = e.value("seed", cfg.eval_seed);
    cfg.eval_max_steps = e.value("max_steps", 0);
    for (const auto& sj : e.value("starts", nlohmann::json::array())) {
      CarState s;
      s.x = sj.at(0).get<double>();
      s.y = sj.at(1).get<double>();
      s.theta = sj.at(2).get<double>();
      cfg.eval_starts.push_back(s);
    }
  }
  if (cfg.eval_starts.empty() && cfg.eval_count <= 0) {
    throw config_error("evaluation needs starts or a positive count");
  }
  return cfg;
}

ProductEnv build_product_env(const ExperimentConfig& cfg) {
  Ldba ldba;
  try {
    if (!cfg.formula.empty()) {
      ldba = translate_fragment(parse_ltl(cfg.formula));
    } else {
      Tgba aut = parse_hoa(read_file(cfg.hoa_path));
      ldba = validate_ldba(aut, std::vector<bool>(aut.num_states, true), {});
    }
  } catch (const std::exception& e) {
    throw config_error(std::string("automaton stage: ") + e.what());
  }

  AnnotatedLdba annotated;
  try {
    annotated = annotate(ldba);
  } catch (const std::exception& e) {
    throw config_error(std::string("annotation stage: ") + e.what());
  }

  Workspace ws;
  try {
    ws = workspace_from_json(read_file(cfg.workspace_path));
  } catch (const std::exception& e) {
    throw config_error(std::string("workspace stage: ") + e.what());
  }

  try {
    return ProductEnv(std::move(annotated), std::move(ws), cfg.reward, cfg.max_episode_steps);
  } catch (const std::exception& e) {
    throw config_error(std::string("product stage: ") + e.what());
  }
}

std::vector<CarState> evaluation_starts(const ExperimentConfig& cfg, const Bounds& bounds) {
  if (!cfg.eval_starts.empty()) return cfg.eval_starts;
  constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 rng(cfg.eval_seed);
  std::vector<CarState> starts;
  for (int i = 0; i < cfg.eval_count; ++i) {
    CarState s;
    s.x = bounds.x_lo + uniform01(rng) * (bounds.x_hi - bounds.x_lo);
    s.y = bounds.y_lo + uniform01(rng) * (bounds.y_hi - bounds.y_lo);
    s.theta = -kPi + uniform01(rng) * 2.0 * kPi;
    starts.push_back(s);
  }
  return starts;
}

double success_rate(const Mlp& actor, const ProductEnv& env, const std::vector<CarState>& starts,
                    int max_steps) {
  if (starts.empty()) throw config_error("evaluation start list is empty");
  std::mt19937_64 rng(0);  // noise is off; never consulted
  int n_states = env.num_automaton_states();
  int successes = 0;
  for (const CarState& s0 : starts) {
    ProductState ps = env.reset_at(s0, env.annotated().aut().initial);
    for (int t = 0; t < max_steps; ++t) {
      if (auto jumped = env.apply_epsilon(ps)) ps = *jumped;
      Eigen::VectorXd feat = encode_state(ps, n_states, env.workspace().bounds);
      CarAction a = act(actor, feat, 0.0, rng);
      StepOutcome out = env.step(ps, a);
      if (out.terminated == EpisodeEvent::accepted_round) {
        ++successes;
        break;
      }
      if (out.terminated == EpisodeEvent::trap) break;
      ps = out.next;
    }
  }
  return static_cast<double>(successes) / static_cast<double>(starts.size());
}

namespace {

std::string evaluation_trajectory(const Mlp& actor, const ProductEnv& env, const CarState& s0,
                                  int max_steps) {
  std::mt19937_64 rng(0);
  int n_states = env.num_automaton_states();
  TrajectoryLog log;
  ProductState ps = env.reset_at(s0, env.annotated().aut().initial);
  for (int t = 0; t < max_steps; ++t) {
    if (auto jumped = env.apply_epsilon(ps)) ps = *jumped;
    Eigen::VectorXd feat = encode_state(ps, n_states, env.workspace().bounds);
    StepOutcome out = env.step(ps, act(actor, feat, 0.0, rng));
    log.record(ps, out);
    if (out.terminated != EpisodeEvent::running) break;
    ps = out.next;
  }
  return log.csv();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ProductEnv env = build_product_env(cfg);
  std::vector<CarState> starts = evaluation_starts(cfg, env.workspace().bounds);
  int eval_steps = cfg.eval_max_steps > 0 ? cfg.eval_max_steps : cfg.max_episode_steps;

  std::vector<std::pair<std::string, QInitMode>> modes;
  if (cfg.q_init == "random-q" || cfg.q_init == "both") {
    modes.emplace_back("random-q", QInitMode::random_q);
  }
  if (cfg.q_init == "fixed-q0" || cfg.q_init == "both") {
    modes.emplace_back("fixed-q0", QInitMode::fixed_q0);
  }

  ExperimentReport report;
  nlohmann::json j;
  j["schema_version"] = 1;
  j["name"] = cfg.name;
  j["training_steps"] = cfg.training_steps;
  j["eval"] = {{"count", static_cast<int>(starts.size())},
               {"seed", cfg.eval_seed},
               {"max_steps", eval_steps}};
  j["modes"] = nlohmann::json::object();
  // The baseline mode may train on a longer episode clock; evaluation always
  // uses the shared env and horizon.
  std::optional<ProductEnv> baseline_env;
  if (cfg.baseline_max_episode_steps > 0 &&
      cfg.baseline_max_episode_steps != cfg.max_episode_steps) {
    ExperimentConfig bcfg = cfg;
    bcfg.max_episode_steps = cfg.baseline_max_episode_steps;
    baseline_env.emplace(build_product_env(bcfg));
  }

  for (const auto& [label, mode] : modes) {
    const ProductEnv& train_env =
        (mode == QInitMode::fixed_q0 && baseline_env) ? *baseline_env : env;
    ModeResult res;
    res.training = train(train_env, cfg.learner, cfg.training_steps, mode);
    res.success = success_rate(res.training.actor, env, starts, eval_steps);
    res.trajectory_csv = evaluation_trajectory(res.training.actor, env, starts.front(), eval_steps);
    j["modes"][label] = {{"success_rate", res.success},
                         {"episodes", static_cast<long>(res.training.metrics.size())}};
    report.modes.emplace(label, std::move(res));
  }
  report.report_json = j.dump(2) + "\n";
  return report;
}

std::string export_plot_data(const std::vector<EpisodeMetric>& metrics, int window) {
  if (window < 1) throw config_error("smoothing window must be at least 1");
  std::string out = "# smoothing_window=" + std::to_string(window) + "\n";
  out += "step,smoothed_normalized_return\n";
  double running = 0.0;
  std::vector<double> buf;
  char line[64];
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    buf.push_back(metrics[i].normalized_return);
    running += buf.back();
    if (buf.size() > static_cast<std::size_t>(window)) {
      running -= buf[buf.size() - window - 1];
    }
    double n = std::min<std::size_t>(buf.size(), window);
    std::snprintf(line, sizeof(line), "%ld,%.17g\n", metrics[i].step, running / n);
    out += line;
  }
  return out;
}

}  // namespace ltlcc
