#include "pitchlab.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "pitchlab/config.hpp"
#include "pitchlab/env.hpp"
#include "pitchlab/eval.hpp"
#include "pitchlab/ppo.hpp"
#include "pitchlab/selftest.hpp"

using namespace pitchlab;

namespace {

thread_local std::string g_last_error;

pl_status fail(pl_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
pl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    return fail(PL_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PL_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(PL_ERR_RUNTIME, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<Fidelity> parse_fidelity(const char* fidelity) {
  if (!fidelity) return std::nullopt;
  return fidelity_from_string(fidelity);
}

struct FidelityWeights {
  ActorCritic low;
  ActorCritic high;
  std::map<std::string, std::string> hashes;
};

FidelityWeights load_fidelity_weights(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string low_path = (fs::path(dir) / "NEAR_GOAL_LOW.plw").string();
  const std::string high_path = (fs::path(dir) / "NEAR_GOAL_HIGH.plw").string();
  FidelityWeights w{load_weights_for(PolicyName::NEAR_GOAL, low_path),
                    load_weights_for(PolicyName::NEAR_GOAL, high_path),
                    {}};
  w.hashes["NEAR_GOAL_LOW"] = sha256_file(low_path);
  w.hashes["NEAR_GOAL_HIGH"] = sha256_file(high_path);
  return w;
}

bool parse_with_defender(const char* opponents) {
  if (!opponents || std::string(opponents) == "GOALIE") return false;
  if (std::string(opponents) == "GOALIE_DEFENDER") return true;
  throw std::invalid_argument("opponents must be GOALIE or GOALIE_DEFENDER");
}

std::map<std::string, std::string> actionspace_hashes(const PolicySet& set, bool need_mid) {
  std::map<std::string, std::string> hashes;
  const auto add = [&](PolicyName p) {
    const auto& src = set.sources[static_cast<std::size_t>(p)];
    if (!src.empty()) hashes[to_string(p)] = sha256_file(src);
  };
  add(PolicyName::BALL_DUEL);
  if (need_mid) add(PolicyName::MID_FIELD);
  return hashes;
}

EvalReport run_named_experiment(const Config& cfg, ExperimentName exp, int episodes,
                                uint64_t seed, const std::string& weights_dir,
                                const char* opponents) {
  switch (exp) {
    case ExperimentName::DECOMPOSITION_1V2: {
      const PolicySet set = PolicySet::from_dir(weights_dir);
      return run_decomposition(cfg, set, episodes, seed);
    }
    case ExperimentName::FIDELITY_NEARGOAL: {
      FidelityWeights w = load_fidelity_weights(weights_dir);
      return run_fidelity(cfg, w.low, w.high, parse_with_defender(opponents), episodes, seed,
                          w.hashes);
    }
    case ExperimentName::ACTIONSPACE_DRIBBLE: {
      const PolicySet set = PolicySet::from_dir(weights_dir, /*missing_ok=*/true);
      const ActorCritic* duel = set.get(PolicyName::BALL_DUEL);
      const ActorCritic* mid = set.get(PolicyName::MID_FIELD);
      if (!duel || !mid)
        throw std::runtime_error("ACTIONSPACE_DRIBBLE needs BALL_DUEL.plw and MID_FIELD.plw");
      return run_actionspace_dribble(cfg, *duel, *mid, episodes, seed,
                                     actionspace_hashes(set, true));
    }
    case ExperimentName::ACTIONSPACE_WALKTIME: {
      const PolicySet set = PolicySet::from_dir(weights_dir, /*missing_ok=*/true);
      const ActorCritic* duel = set.get(PolicyName::BALL_DUEL);
      if (!duel) throw std::runtime_error("ACTIONSPACE_WALKTIME needs BALL_DUEL.plw");
      return run_actionspace_walktime(cfg, *duel, episodes, seed,
                                      actionspace_hashes(set, false));
    }
  }
  throw std::invalid_argument("bad experiment");
}

}  // namespace

extern "C" {

struct pl_config {
  Config cfg;
};

struct pl_env {
  TrainingEnv env;
};

const char* pl_version(void) { return "pitchlab 1.0.0"; }

const char* pl_last_error(void) { return g_last_error.c_str(); }

void pl_string_free(char* s) { std::free(s); }

pl_status pl_config_create_default(pl_config** out) {
  if (!out) return fail(PL_ERR_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    *out = new pl_config{default_config()};
    return PL_OK;
  });
}

pl_status pl_config_load(const char* path, pl_config** out) {
  if (!path || !out) return fail(PL_ERR_INVALID_ARGUMENT, "path/out is null");
  return guarded([&] {
    *out = new pl_config{config_load(path)};
    return PL_OK;
  });
}

pl_status pl_config_loads(const char* json_text, pl_config** out) {
  if (!json_text || !out) return fail(PL_ERR_INVALID_ARGUMENT, "json_text/out is null");
  return guarded([&] {
    *out = new pl_config{config_from_json_text(json_text)};
    return PL_OK;
  });
}

void pl_config_destroy(pl_config* cfg) { delete cfg; }

pl_status pl_config_set(pl_config* cfg, const char* dotted_key, const char* json_value) {
  if (!cfg || !dotted_key || !json_value)
    return fail(PL_ERR_INVALID_ARGUMENT, "cfg/key/value is null");
  return guarded([&] {
    config_set(cfg->cfg, dotted_key, json_value);
    return PL_OK;
  });
}

pl_status pl_config_apply_env(pl_config* cfg, const char* prefix) {
  if (!cfg) return fail(PL_ERR_INVALID_ARGUMENT, "cfg is null");
  return guarded([&] {
    config_apply_env_overrides(cfg->cfg, prefix ? prefix : "PITCHLAB_");
    return PL_OK;
  });
}

pl_status pl_config_dump(const pl_config* cfg, char** json_out) {
  if (!cfg || !json_out) return fail(PL_ERR_INVALID_ARGUMENT, "cfg/json_out is null");
  return guarded([&] {
    *json_out = dup_string(config_dump(cfg->cfg));
    return PL_OK;
  });
}

pl_status pl_env_create(const pl_config* cfg, const char* policy, const char* scenario,
                        const char* fidelity, uint64_t seed, pl_env** out) {
  if (!cfg || !policy || !out) return fail(PL_ERR_INVALID_ARGUMENT, "cfg/policy/out is null");
  return guarded([&] {
    const PolicyName p = policy_from_string(policy);
    const ScenarioName s = scenario ? scenario_from_string(scenario) : default_scenario(p);
    *out = new pl_env{TrainingEnv(cfg->cfg, p, s, parse_fidelity(fidelity), seed)};
    return PL_OK;
  });
}

void pl_env_destroy(pl_env* env) { delete env; }

int pl_env_obs_dim(const pl_env* env) { return env ? env->env.obs_dim() : 0; }

int pl_env_act_dim(const pl_env* env) { return env ? env->env.act_dim() : 0; }

pl_status pl_env_reset(pl_env* env, double* obs_out) {
  if (!env || !obs_out) return fail(PL_ERR_INVALID_ARGUMENT, "env/obs_out is null");
  return guarded([&] {
    const auto& obs = env->env.reset();
    std::memcpy(obs_out, obs.data(), obs.size() * sizeof(double));
    return PL_OK;
  });
}

pl_status pl_env_step(pl_env* env, const double* action, double* obs_out, double* reward_out,
                      int* done_out, const char** terminal_out) {
  if (!env || !action || !obs_out || !reward_out || !done_out)
    return fail(PL_ERR_INVALID_ARGUMENT, "required argument is null");
  return guarded([&] {
    const auto r = env->env.step({action, static_cast<std::size_t>(env->env.act_dim())});
    std::memcpy(obs_out, r.obs->data(), r.obs->size() * sizeof(double));
    *reward_out = r.reward;
    *done_out = r.done ? 1 : 0;
    if (terminal_out) *terminal_out = to_string(r.terminal);
    return PL_OK;
  });
}

pl_status pl_train(const pl_config* cfg, const char* policy, const char* scenario,
                   const char* fidelity, int64_t total_steps, uint64_t seed,
                   const char* weights_out_path, const char* curve_csv_path,
                   pl_progress_fn progress, void* user, double* final_goal_rate_out) {
  if (!cfg || !policy || !weights_out_path)
    return fail(PL_ERR_INVALID_ARGUMENT, "cfg/policy/weights_out_path is null");
  return guarded([&] {
    const PolicyName p = policy_from_string(policy);
    const ScenarioName s = scenario ? scenario_from_string(scenario) : default_scenario(p);
    Config run_cfg = cfg->cfg;
    if (total_steps > 0) run_cfg.train.total_steps = total_steps;
    run_cfg.train.seed = seed;

    ProgressFn fn;
    if (progress) {
      fn = [progress, user](const TrainProgress& tp) {
        pl_train_progress out{tp.update, tp.steps_done, tp.total_steps, tp.mean_return,
                              tp.entropy};
        progress(&out, user);
      };
    }
    TrainResult result = train_policy(run_cfg, p, s, parse_fidelity(fidelity), fn);
    save_weights(result.net, p, weights_out_path);
    if (curve_csv_path) write_curve_csv(result.curve, curve_csv_path);
    if (final_goal_rate_out) *final_goal_rate_out = recent_goal_rate(result.episodes, 100);
    return PL_OK;
  });
}

pl_status pl_experiment_run(const pl_config* cfg, const char* experiment, int episodes,
                            uint64_t seed, const char* weights_dir, const char* opponents,
                            char** report_json_out, char** table_out) {
  if (!cfg || !experiment || !weights_dir)
    return fail(PL_ERR_INVALID_ARGUMENT, "cfg/experiment/weights_dir is null");
  return guarded([&] {
    const ExperimentName exp = experiment_from_string(experiment);
    const EvalReport report =
        run_named_experiment(cfg->cfg, exp, episodes, seed, weights_dir, opponents);
    if (report_json_out) *report_json_out = dup_string(report.to_json());
    if (table_out) *table_out = dup_string(report.table());
    return PL_OK;
  });
}

pl_status pl_replay_episode(const pl_config* cfg, const char* experiment, const char* condition,
                            int episode_index, uint64_t seed, const char* weights_dir,
                            const char* opponents, const char* trace_out_path) {
  if (!cfg || !experiment || !condition || !weights_dir || !trace_out_path)
    return fail(PL_ERR_INVALID_ARGUMENT, "required argument is null");
  return guarded([&] {
    const ExperimentName exp = experiment_from_string(experiment);
    const std::string cond(condition);
    const std::uint64_t ep_seed = experiment_episode_seed(exp, cond, seed, episode_index);

    std::ofstream out(trace_out_path);
    if (!out) throw std::runtime_error(std::string("cannot write trace: ") + trace_out_path);
    TraceWriter trace(out);

    switch (exp) {
      case ExperimentName::DECOMPOSITION_1V2: {
        const PolicySet set = PolicySet::from_dir(weights_dir);
        PolicyMask mask = kAllPoliciesEnabled;
        if (cond == "no_mid_field") mask[0] = false;
        else if (cond == "no_ball_duel") mask[1] = false;
        else if (cond == "no_near_goal") mask[2] = false;
        else if (cond != "full_suite") throw std::invalid_argument("unknown condition " + cond);
        decomposition_episode(cfg->cfg, set, mask, ep_seed, &trace);
        break;
      }
      case ExperimentName::FIDELITY_NEARGOAL: {
        FidelityWeights w = load_fidelity_weights(weights_dir);
        const ActorCritic* net = nullptr;
        Fidelity fid = Fidelity::LOW;
        if (cond == "train_LOW_eval_LOW") { net = &w.low; fid = Fidelity::LOW; }
        else if (cond == "train_LOW_eval_HIGH") { net = &w.low; fid = Fidelity::HIGH; }
        else if (cond == "train_HIGH_eval_LOW") { net = &w.high; fid = Fidelity::LOW; }
        else if (cond == "train_HIGH_eval_HIGH") { net = &w.high; fid = Fidelity::HIGH; }
        else throw std::invalid_argument("unknown condition " + cond);
        fidelity_episode(cfg->cfg, *net, fid, parse_with_defender(opponents), ep_seed, &trace);
        break;
      }
      case ExperimentName::ACTIONSPACE_DRIBBLE: {
        const PolicySet set = PolicySet::from_dir(weights_dir, true);
        const PolicyName p = cond == "walk_at_relative_speed" ? PolicyName::BALL_DUEL
                            : cond == "walk_to_point"         ? PolicyName::MID_FIELD
                            : throw std::invalid_argument("unknown condition " + cond);
        const ActorCritic* net = set.get(p);
        if (!net) throw std::runtime_error("missing weights for " + std::string(to_string(p)));
        dribble_episode(cfg->cfg, *net, p, ep_seed, &trace);
        break;
      }
      case ExperimentName::ACTIONSPACE_WALKTIME: {
        if (cond == "walk_to_point") {
          walktime_episode(cfg->cfg, nullptr, ep_seed, &trace);
        } else if (cond == "walk_at_relative_speed") {
          const PolicySet set = PolicySet::from_dir(weights_dir, true);
          const ActorCritic* net = set.get(PolicyName::BALL_DUEL);
          if (!net) throw std::runtime_error("missing weights for BALL_DUEL");
          walktime_episode(cfg->cfg, net, ep_seed, &trace);
        } else {
          throw std::invalid_argument("unknown condition " + cond);
        }
        break;
      }
    }
    return PL_OK;
  });
}

pl_status pl_selftest(const pl_config* cfg, char** summary_json_out) {
  if (!cfg) return fail(PL_ERR_INVALID_ARGUMENT, "cfg is null");
  return guarded([&]() -> pl_status {
    const SelftestResult res = run_selftest(cfg->cfg);
    if (summary_json_out) *summary_json_out = dup_string(res.summary_json);
    if (!res.passed) return fail(PL_ERR_RUNTIME, "selftest failed; see summary");
    return PL_OK;
  });
}

pl_status pl_layouts(int as_json, char** out) {
  if (!out) return fail(PL_ERR_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    *out = dup_string(describe_layouts(as_json != 0));
    return PL_OK;
  });
}

}  // extern "C"
