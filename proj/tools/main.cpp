#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ltlcc/harness.hpp"
#include "ltlcc/hoa.hpp"
#include "ltlcc/translate.hpp"

namespace {

using namespace ltlcc;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

Ldba ldba_from_hoa_file(const std::string& path) {
  Tgba aut = parse_hoa(read_file(path));
  return validate_ldba(aut, std::vector<bool>(aut.num_states, true), {});
}

std::vector<EpisodeMetric> metrics_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "step,episode,return,normalized_return,accepted,epsilon_used") {
    throw std::invalid_argument("unrecognized metrics CSV header");
  }
  std::vector<EpisodeMetric> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpisodeMetric m;
    int accepted = 0;
    if (std::sscanf(line.c_str(), "%ld,%ld,%lg,%lg,%d,%d", &m.step, &m.episode, &m.ret,
                    &m.normalized_return, &accepted, &m.epsilon_used) != 6) {
      throw std::invalid_argument("malformed metrics CSV row: " + line);
    }
    m.accepted = accepted != 0;
    out.push_back(m);
  }
  return out;
}

int cmd_translate(const std::string& formula, const std::string& out_path) {
  Ldba ldba = translate_fragment(parse_ltl(formula));
  write_output(out_path, emit_hoa(ldba.aut));
  return 0;
}

int cmd_annotate(const std::string& hoa_path, const std::string& out_path) {
  write_output(out_path, annotation_to_json(annotate(ldba_from_hoa_file(hoa_path))));
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& mode, long seed_override,
              long steps_override, const std::string& out_dir) {
  std::string base = std::filesystem::path(config_path).parent_path().string();
  ExperimentConfig cfg = config_from_json(read_file(config_path), base);
  if (!mode.empty()) cfg.q_init = mode;
  if (seed_override >= 0) cfg.learner.seed = static_cast<std::uint64_t>(seed_override);
  if (steps_override >= 0) cfg.training_steps = steps_override;

  ExperimentReport report = run_experiment(cfg);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& [label, res] : report.modes) {
    std::string stem = cfg.name + "." + label;
    write_output((dir / (stem + ".metrics.csv")).string(), metrics_to_csv(res.training.metrics));
    write_output((dir / (stem + ".actor.json")).string(), checkpoint_to_json(res.training.actor));
    write_output((dir / (stem + ".trajectory.csv")).string(), res.trajectory_csv);
  }
  write_output((dir / (cfg.name + ".report.json")).string(), report.report_json);
  std::cout << report.report_json;
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& config_path) {
  std::string base = std::filesystem::path(config_path).parent_path().string();
  ExperimentConfig cfg = config_from_json(read_file(config_path), base);
  Mlp actor = checkpoint_from_json(read_file(checkpoint_path));
  ProductEnv env = build_product_env(cfg);
  std::vector<CarState> starts = evaluation_starts(cfg, env.workspace().bounds);
  int eval_steps = cfg.eval_max_steps > 0 ? cfg.eval_max_steps : cfg.max_episode_steps;
  double rate = success_rate(actor, env, starts, eval_steps);
  std::cout << "{\n  \"schema_version\": 1,\n  \"success_rate\": " << rate
            << ",\n  \"starts\": " << starts.size() << "\n}\n";
  return 0;
}

int cmd_oracle(const std::string& grid_path, const std::string& hoa_path, double gamma, double tol,
               const RewardParams& params) {
  Gridworld gw = gridworld_from_json(read_file(grid_path));
  AnnotatedLdba annotated = annotate(ldba_from_hoa_file(hoa_path));
  OracleResult res = tabular_oracle(gw, annotated, params, gamma, tol);
  std::vector<bool> truth = bfs_satisfiable(gw, annotated);
  bool match = res.satisfied == truth;

  std::ostringstream out;
  out << "{\n  \"schema_version\": 1,\n  \"iterations\": " << res.iterations
      << ",\n  \"matches_reachability\": " << (match ? "true" : "false")
      << ",\n  \"satisfied\": [";
  for (std::size_t i = 0; i < res.satisfied.size(); ++i) {
    out << (i ? "," : "") << (res.satisfied[i] ? 1 : 0);
  }
  out << "]\n}\n";
  std::cout << out.str();
  return match ? 0 : 2;
}

int cmd_plot_data(const std::string& metrics_path, int window, const std::string& out_path) {
  write_output(out_path, export_plot_data(metrics_from_csv(read_file(metrics_path)), window));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTL-shaped reinforcement learning toolkit"};
  app.require_subcommand(1);

  std::string formula, hoa_path, out_path, config_path, mode, checkpoint_path, grid_path;
  std::string metrics_path, out_dir = ".";
  long seed_override = -1, steps_override = -1;
  int window = 20;
  double gamma = 0.99, tol = 1e-9;
  RewardParams oracle_params;

  auto* translate = app.add_subcommand("translate", "compile an LTL formula to HOA");
  translate->add_option("formula", formula)->required();
  translate->add_option("-o,--output", out_path);

  auto* annotate_cmd = app.add_subcommand("annotate", "annotate an HOA automaton");
  annotate_cmd->add_option("hoa", hoa_path)->required()->check(CLI::ExistingFile);
  annotate_cmd->add_option("-o,--output", out_path);

  auto* train_cmd = app.add_subcommand("train", "run a training experiment");
  train_cmd->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--mode", mode)->check(CLI::IsMember({"random-q", "fixed-q0", "both"}));
  train_cmd->add_option("--seed", seed_override);
  train_cmd->add_option("--steps", steps_override);
  train_cmd->add_option("--out-dir", out_dir);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved actor");
  eval_cmd->add_option("checkpoint", checkpoint_path)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  auto* oracle_cmd = app.add_subcommand("oracle", "tabular gridworld oracle");
  oracle_cmd->add_option("grid", grid_path)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("hoa", hoa_path)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--gamma", gamma);
  oracle_cmd->add_option("--tol", tol);
  oracle_cmd->add_option("--r_g", oracle_params.r_g);
  oracle_cmd->add_option("--r_n", oracle_params.r_n);
  oracle_cmd->add_option("--r_d", oracle_params.r_d);
  oracle_cmd->add_option("--d_max", oracle_params.d_max);

  auto* plot_cmd = app.add_subcommand("plot-data", "smooth a metrics CSV for plotting");
  plot_cmd->add_option("metrics", metrics_path)->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("-w,--window", window);
  plot_cmd->add_option("-o,--output", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*translate) return cmd_translate(formula, out_path);
    if (*annotate_cmd) return cmd_annotate(hoa_path, out_path);
    if (*train_cmd) return cmd_train(config_path, mode, seed_override, steps_override, out_dir);
    if (*eval_cmd) return cmd_eval(checkpoint_path, config_path);
    if (*oracle_cmd) return cmd_oracle(grid_path, hoa_path, gamma, tol, oracle_params);
    if (*plot_cmd) return cmd_plot_data(metrics_path, window, out_path);
  } catch (const ltl_parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fragment_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hoa_parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hoa_unsupported_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const automaton_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const gridworld_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
