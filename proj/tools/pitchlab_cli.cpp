// pitchlab command-line interface. Talks to the core exclusively through
// the C API in pitchlab.h.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "pitchlab.h"

namespace {

struct ConfigHandle {
  pl_config* cfg = nullptr;
  ~ConfigHandle() { pl_config_destroy(cfg); }
};

[[noreturn]] void die(const std::string& where) {
  std::cerr << "pitchlab: " << where << ": " << pl_last_error() << "\n";
  std::exit(1);
}

void check(pl_status st, const std::string& where) {
  if (st != PL_OK) die(where);
}

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { pl_string_free(s); }
};

ConfigHandle load_config(const std::string& path) {
  ConfigHandle h;
  if (path.empty()) {
    check(pl_config_create_default(&h.cfg), "config");
  } else {
    check(pl_config_load(path.c_str(), &h.cfg), "config " + path);
  }
  check(pl_config_apply_env(h.cfg, nullptr), "environment overrides");
  return h;
}

void print_progress(const pl_train_progress* p, void*) {
  if (p->update % 10 != 0 && p->steps_done < p->total_steps) return;
  std::fprintf(stderr, "  update %4d  steps %9" PRId64 "/%" PRId64 "  return %8.3f  entropy %6.3f\n",
               p->update, p->steps_done, p->total_steps, p->mean_return, p->entropy);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pitchlab: multi-fidelity 2D robot-soccer RL workbench"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "Config file (JSON)")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Train one sub-policy with PPO");
  std::string tr_policy, tr_scenario, tr_fidelity, tr_out = ".", tr_name;
  std::int64_t tr_steps = 0;
  std::uint64_t tr_seed = 0;
  bool tr_quiet = false;
  train->add_option("--policy", tr_policy, "MID_FIELD|BALL_DUEL|NEAR_GOAL|POSITIONING")
      ->required();
  train->add_option("--scenario", tr_scenario, "Training scenario (default: policy's own)");
  train->add_option("--fidelity", tr_fidelity, "LOW|HIGH (default: scenario's own)");
  train->add_option("--steps", tr_steps, "Total environment steps (default: config)");
  train->add_option("--seed", tr_seed, "Training seed")->capture_default_str();
  train->add_option("--out", tr_out, "Output directory")->capture_default_str();
  train->add_option("--name", tr_name, "Weights file stem (default: policy name)");
  train->add_flag("--quiet", tr_quiet, "Suppress progress output");

  // eval
  auto* eval = app.add_subcommand("eval", "Run an evaluation experiment");
  std::string ev_experiment, ev_weights, ev_out, ev_opponents;
  int ev_episodes = 200;
  std::uint64_t ev_seed = 0;
  eval->add_option("--experiment", ev_experiment,
                   "DECOMPOSITION_1V2|FIDELITY_NEARGOAL|ACTIONSPACE_DRIBBLE|ACTIONSPACE_WALKTIME")
      ->required();
  eval->add_option("--weights", ev_weights, "Directory with .plw weight files")->required();
  eval->add_option("--episodes", ev_episodes, "Episodes per condition")->capture_default_str();
  eval->add_option("--seed", ev_seed, "Experiment seed")->capture_default_str();
  eval->add_option("--opponents", ev_opponents, "GOALIE|GOALIE_DEFENDER (fidelity experiment)");
  eval->add_option("--out", ev_out, "Directory for the JSON report");

  // replay
  auto* replay = app.add_subcommand("replay", "Export one experiment episode as a JSON-lines trace");
  std::string rp_experiment, rp_condition, rp_weights, rp_out, rp_opponents;
  int rp_episode = 0;
  std::uint64_t rp_seed = 0;
  replay->add_option("--experiment", rp_experiment, "Experiment name")->required();
  replay->add_option("--condition", rp_condition, "Condition name from the report")->required();
  replay->add_option("--episode", rp_episode, "Episode index")->capture_default_str();
  replay->add_option("--seed", rp_seed, "Experiment seed")->capture_default_str();
  replay->add_option("--weights", rp_weights, "Directory with .plw weight files")->required();
  replay->add_option("--opponents", rp_opponents, "GOALIE|GOALIE_DEFENDER (fidelity experiment)");
  replay->add_option("--out", rp_out, "Trace output path")->required();

  // selftest
  auto* selftest = app.add_subcommand("selftest", "Determinism and throughput self-checks");
  bool st_layouts = false;
  selftest->add_flag("--print-layouts", st_layouts, "Also print observation/action layouts");

  // print-layouts
  auto* layouts = app.add_subcommand("print-layouts", "Observation/action layout documentation");
  bool pl_json = false;
  layouts->add_flag("--json", pl_json, "Emit JSON");

  CLI11_PARSE(app, argc, argv);

  if (*train) {
    ConfigHandle cfg = load_config(config_path);
    std::filesystem::create_directories(tr_out);
    const std::string stem = tr_name.empty() ? tr_policy : tr_name;
    const std::string weights = (std::filesystem::path(tr_out) / (stem + ".plw")).string();
    const std::string curve = (std::filesystem::path(tr_out) / (stem + "_curve.csv")).string();
    double goal_rate = 0.0;
    check(pl_train(cfg.cfg, tr_policy.c_str(),
                   tr_scenario.empty() ? nullptr : tr_scenario.c_str(),
                   tr_fidelity.empty() ? nullptr : tr_fidelity.c_str(), tr_steps, tr_seed,
                   weights.c_str(), curve.c_str(), tr_quiet ? nullptr : print_progress, nullptr,
                   &goal_rate),
          "train");
    std::cout << "weights: " << weights << "\ncurve:   " << curve
              << "\ngoal rate (last 100 episodes): " << goal_rate << "\n";
    return 0;
  }

  if (*eval) {
    ConfigHandle cfg = load_config(config_path);
    OwnedString report, table;
    check(pl_experiment_run(cfg.cfg, ev_experiment.c_str(), ev_episodes, ev_seed,
                            ev_weights.c_str(),
                            ev_opponents.empty() ? nullptr : ev_opponents.c_str(), &report.s,
                            &table.s),
          "eval");
    std::cout << table.s;
    if (!ev_out.empty()) {
      std::filesystem::create_directories(ev_out);
      const std::string path =
          (std::filesystem::path(ev_out) / ("report_" + ev_experiment + ".json")).string();
      std::ofstream out(path);
      out << report.s;
      std::cout << "report: " << path << "\n";
    }
    return 0;
  }

  if (*replay) {
    ConfigHandle cfg = load_config(config_path);
    check(pl_replay_episode(cfg.cfg, rp_experiment.c_str(), rp_condition.c_str(), rp_episode,
                            rp_seed, rp_weights.c_str(),
                            rp_opponents.empty() ? nullptr : rp_opponents.c_str(),
                            rp_out.c_str()),
          "replay");
    std::cout << "trace: " << rp_out << "\n";
    return 0;
  }

  if (*selftest) {
    ConfigHandle cfg = load_config(config_path);
    if (st_layouts) {
      OwnedString text;
      check(pl_layouts(0, &text.s), "layouts");
      std::cout << text.s;
    }
    OwnedString summary;
    const pl_status st = pl_selftest(cfg.cfg, &summary.s);
    if (summary.s) std::cout << summary.s;
    if (st != PL_OK) die("selftest");
    return 0;
  }

  if (*layouts) {
    OwnedString text;
    check(pl_layouts(pl_json ? 1 : 0, &text.s), "layouts");
    std::cout << text.s;
    return 0;
  }

  return 0;
}
