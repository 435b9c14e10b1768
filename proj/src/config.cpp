#include "pitchlab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

extern char** environ;

namespace pitchlab {

using nlohmann::json;

const char* to_string(Fidelity f) { return f == Fidelity::LOW ? "LOW" : "HIGH"; }

Fidelity fidelity_from_string(const std::string& s) {
  if (s == "LOW") return Fidelity::LOW;
  if (s == "HIGH") return Fidelity::HIGH;
  throw ConfigError("unknown fidelity: " + s);
}

FidelityProfile FidelityProfile::low() { return FidelityProfile{}; }

FidelityProfile FidelityProfile::high() {
  FidelityProfile p;
  p.name = "HIGH";
  p.actuation_lag_tau = 0.3;
  p.velocity_noise_std = 0.03;
  p.kick_angle_noise_std = 0.15;
  p.kick_speed_noise_frac = 0.2;
  p.fall_prob_per_step_at_max_speed = 0.002;
  p.obs_ball_noise_std = 0.05;
  p.contact_restitution = 0.5;
  return p;
}

Config default_config() { return Config{}; }

namespace {

// Strict object reader that reports the dotted path of any offending key.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("expected object at " + path_);
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    auto it = j_.find(key);
    if (it == j_.end()) throw ConfigError("missing key " + join(key));
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError("wrong type at " + join(key));
    }
  }

  Reader child(const char* key) {
    seen_.push_back(key);
    auto it = j_.find(key);
    if (it == j_.end()) throw ConfigError("missing key " + join(key));
    return Reader(*it, join(key));
  }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const auto& k : seen_)
        if (k == it.key()) known = true;
      if (!known) throw ConfigError("unknown key " + join(it.key().c_str()));
    }
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

json field_to_json(const FieldGeometry& f) {
  return {{"length", f.length},
          {"width", f.width},
          {"goal_width", f.goal_width},
          {"goal_box_depth", f.goal_box_depth},
          {"goal_box_width", f.goal_box_width},
          {"robot_half_length", f.robot_half_length},
          {"robot_half_width", f.robot_half_width},
          {"ball_radius", f.ball_radius}};
}

FieldGeometry field_from(Reader r) {
  FieldGeometry f;
  r.get("length", f.length);
  r.get("width", f.width);
  r.get("goal_width", f.goal_width);
  r.get("goal_box_depth", f.goal_box_depth);
  r.get("goal_box_width", f.goal_box_width);
  r.get("robot_half_length", f.robot_half_length);
  r.get("robot_half_width", f.robot_half_width);
  r.get("ball_radius", f.ball_radius);
  r.reject_unknown();
  return f;
}

json sim_to_json(const SimParams& s) {
  return {{"dt", s.dt},
          {"max_linear_speed", s.max_linear_speed},
          {"max_angular_speed", s.max_angular_speed},
          {"ball_friction_decel", s.ball_friction_decel},
          {"kick_speed", s.kick_speed},
          {"kick_range", s.kick_range},
          {"kick_half_angle", s.kick_half_angle},
          {"fall_recovery_time", s.fall_recovery_time}};
}

SimParams sim_from(Reader r) {
  SimParams s;
  r.get("dt", s.dt);
  r.get("max_linear_speed", s.max_linear_speed);
  r.get("max_angular_speed", s.max_angular_speed);
  r.get("ball_friction_decel", s.ball_friction_decel);
  r.get("kick_speed", s.kick_speed);
  r.get("kick_range", s.kick_range);
  r.get("kick_half_angle", s.kick_half_angle);
  r.get("fall_recovery_time", s.fall_recovery_time);
  r.reject_unknown();
  return s;
}

json profile_to_json(const FidelityProfile& p) {
  return {{"name", p.name},
          {"actuation_lag_tau", p.actuation_lag_tau},
          {"velocity_noise_std", p.velocity_noise_std},
          {"kick_angle_noise_std", p.kick_angle_noise_std},
          {"kick_speed_noise_frac", p.kick_speed_noise_frac},
          {"fall_prob_per_step_at_max_speed", p.fall_prob_per_step_at_max_speed},
          {"obs_ball_noise_std", p.obs_ball_noise_std},
          {"contact_restitution", p.contact_restitution}};
}

FidelityProfile profile_from(Reader r) {
  FidelityProfile p;
  r.get("name", p.name);
  r.get("actuation_lag_tau", p.actuation_lag_tau);
  r.get("velocity_noise_std", p.velocity_noise_std);
  r.get("kick_angle_noise_std", p.kick_angle_noise_std);
  r.get("kick_speed_noise_frac", p.kick_speed_noise_frac);
  r.get("fall_prob_per_step_at_max_speed", p.fall_prob_per_step_at_max_speed);
  r.get("obs_ball_noise_std", p.obs_ball_noise_std);
  r.get("contact_restitution", p.contact_restitution);
  r.reject_unknown();
  return p;
}

json skills_to_json(const SkillsConfig& s) {
  return {{"arrival_radius", s.arrival_radius},
          {"obstacle_inflation", s.obstacle_inflation},
          {"align_tolerance", s.align_tolerance},
          {"approach_factor", s.approach_factor},
          {"turn_gain", s.turn_gain}};
}

SkillsConfig skills_from(Reader r) {
  SkillsConfig s;
  r.get("arrival_radius", s.arrival_radius);
  r.get("obstacle_inflation", s.obstacle_inflation);
  r.get("align_tolerance", s.align_tolerance);
  r.get("approach_factor", s.approach_factor);
  r.get("turn_gain", s.turn_gain);
  r.reject_unknown();
  return s;
}

json reward_to_json(const RewardConfig& c) {
  return {{"w_to_ball", c.w_to_ball},
          {"w_ball_to_goal", c.w_ball_to_goal},
          {"r_goal", c.r_goal},
          {"r_oob", c.r_oob},
          {"w_to_strategy", c.w_to_strategy},
          {"r_ball_in_view_per_step", c.r_ball_in_view_per_step},
          {"w_opponent_proximity", c.w_opponent_proximity},
          {"r_ball_far_from_goal", c.r_ball_far_from_goal},
          {"far_from_goal_radius", c.far_from_goal_radius},
          {"episode_timeout", c.episode_timeout}};
}

RewardConfig reward_from(Reader r) {
  RewardConfig c;
  r.get("w_to_ball", c.w_to_ball);
  r.get("w_ball_to_goal", c.w_ball_to_goal);
  r.get("r_goal", c.r_goal);
  r.get("r_oob", c.r_oob);
  r.get("w_to_strategy", c.w_to_strategy);
  r.get("r_ball_in_view_per_step", c.r_ball_in_view_per_step);
  r.get("w_opponent_proximity", c.w_opponent_proximity);
  r.get("r_ball_far_from_goal", c.r_ball_far_from_goal);
  r.get("far_from_goal_radius", c.far_from_goal_radius);
  r.get("episode_timeout", c.episode_timeout);
  r.reject_unknown();
  return c;
}

json selector_to_json(const SelectorConfig& c) {
  return {{"ball_duel_opponent_radius", c.ball_duel_opponent_radius},
          {"near_goal_margin", c.near_goal_margin},
          {"near_ball_radius", c.near_ball_radius},
          {"hysteresis_ticks", c.hysteresis_ticks}};
}

SelectorConfig selector_from(Reader r) {
  SelectorConfig c;
  r.get("ball_duel_opponent_radius", c.ball_duel_opponent_radius);
  r.get("near_goal_margin", c.near_goal_margin);
  r.get("near_ball_radius", c.near_ball_radius);
  r.get("hysteresis_ticks", c.hysteresis_ticks);
  r.reject_unknown();
  return c;
}

json train_to_json(const TrainConfig& t) {
  return {{"gamma", t.gamma},
          {"gae_lambda", t.gae_lambda},
          {"clip_epsilon", t.clip_epsilon},
          {"epochs_per_update", t.epochs_per_update},
          {"minibatch_size", t.minibatch_size},
          {"rollout_horizon", t.rollout_horizon},
          {"n_envs", t.n_envs},
          {"learning_rate", t.learning_rate},
          {"entropy_coef", t.entropy_coef},
          {"value_coef", t.value_coef},
          {"total_steps", t.total_steps},
          {"seed", t.seed},
          {"hidden_size", t.hidden_size},
          {"log_std_init", t.log_std_init},
          {"log_std_final", t.log_std_final}};
}

TrainConfig train_from(Reader r) {
  TrainConfig t;
  r.get("gamma", t.gamma);
  r.get("gae_lambda", t.gae_lambda);
  r.get("clip_epsilon", t.clip_epsilon);
  r.get("epochs_per_update", t.epochs_per_update);
  r.get("minibatch_size", t.minibatch_size);
  r.get("rollout_horizon", t.rollout_horizon);
  r.get("n_envs", t.n_envs);
  r.get("learning_rate", t.learning_rate);
  r.get("entropy_coef", t.entropy_coef);
  r.get("value_coef", t.value_coef);
  r.get("total_steps", t.total_steps);
  r.get("seed", t.seed);
  r.get("hidden_size", t.hidden_size);
  r.get("log_std_init", t.log_std_init);
  r.get("log_std_final", t.log_std_final);
  r.reject_unknown();
  return t;
}

json config_to_json(const Config& cfg) {
  json j;
  j["version"] = cfg.version;
  j["seed"] = cfg.seed;
  j["field"] = field_to_json(cfg.field);
  j["sim"] = sim_to_json(cfg.sim);
  j["fidelity"] = {{"low", profile_to_json(cfg.fidelity_low)},
                   {"high", profile_to_json(cfg.fidelity_high)}};
  j["skills"] = skills_to_json(cfg.skills);
  j["reward"] = reward_to_json(cfg.reward);
  j["selector"] = selector_to_json(cfg.selector);
  j["train"] = train_to_json(cfg.train);
  return j;
}

Config config_from_json(const json& j) {
  Reader r(j, "");
  Config cfg;
  r.get("version", cfg.version);
  if (cfg.version != 1) throw ConfigError("unsupported config version at version");
  r.get("seed", cfg.seed);
  cfg.field = field_from(r.child("field"));
  cfg.sim = sim_from(r.child("sim"));
  {
    Reader fid = r.child("fidelity");
    cfg.fidelity_low = profile_from(fid.child("low"));
    cfg.fidelity_high = profile_from(fid.child("high"));
    fid.reject_unknown();
  }
  cfg.skills = skills_from(r.child("skills"));
  cfg.reward = reward_from(r.child("reward"));
  cfg.selector = selector_from(r.child("selector"));
  cfg.train = train_from(r.child("train"));
  r.reject_unknown();
  config_validate(cfg);
  return cfg;
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError("invalid value at " + key + ": " + why);
}

}  // namespace

void config_validate(const Config& cfg) {
  const auto& f = cfg.field;
  require(f.length > 0, "field.length", "must be positive");
  require(f.width > 0, "field.width", "must be positive");
  require(f.goal_width > 0, "field.goal_width", "must be positive");
  require(f.goal_box_depth > 0, "field.goal_box_depth", "must be positive");
  require(f.goal_box_width > 0, "field.goal_box_width", "must be positive");
  require(f.robot_half_length > 0, "field.robot_half_length", "must be positive");
  require(f.robot_half_width > 0, "field.robot_half_width", "must be positive");
  require(f.ball_radius > 0, "field.ball_radius", "must be positive");
  require(f.goal_width < f.width, "field.goal_width", "must be smaller than field width");
  require(f.goal_box_width < f.width, "field.goal_box_width", "must be smaller than field width");

  const auto& s = cfg.sim;
  require(s.dt > 0, "sim.dt", "must be positive");
  require(s.max_linear_speed > 0, "sim.max_linear_speed", "must be positive");
  require(s.max_angular_speed > 0, "sim.max_angular_speed", "must be positive");
  require(s.ball_friction_decel >= 0, "sim.ball_friction_decel", "must be nonnegative");
  require(s.kick_speed > 0, "sim.kick_speed", "must be positive");
  require(s.kick_range > f.robot_half_length, "sim.kick_range",
          "must exceed field.robot_half_length");
  require(s.kick_half_angle > 0, "sim.kick_half_angle", "must be positive");
  require(s.fall_recovery_time >= 0, "sim.fall_recovery_time", "must be nonnegative");

  auto check_profile = [](const FidelityProfile& p, const std::string& prefix) {
    require(p.actuation_lag_tau >= 0, prefix + ".actuation_lag_tau", "must be nonnegative");
    require(p.velocity_noise_std >= 0, prefix + ".velocity_noise_std", "must be nonnegative");
    require(p.kick_angle_noise_std >= 0, prefix + ".kick_angle_noise_std", "must be nonnegative");
    require(p.kick_speed_noise_frac >= 0, prefix + ".kick_speed_noise_frac", "must be nonnegative");
    require(p.fall_prob_per_step_at_max_speed >= 0 && p.fall_prob_per_step_at_max_speed <= 1,
            prefix + ".fall_prob_per_step_at_max_speed", "must be a probability");
    require(p.obs_ball_noise_std >= 0, prefix + ".obs_ball_noise_std", "must be nonnegative");
    require(p.contact_restitution >= 0 && p.contact_restitution <= 1,
            prefix + ".contact_restitution", "must be in [0, 1]");
  };
  check_profile(cfg.fidelity_low, "fidelity.low");
  check_profile(cfg.fidelity_high, "fidelity.high");
  const auto& lo = cfg.fidelity_low;
  require(lo.actuation_lag_tau == 0 && lo.velocity_noise_std == 0 &&
              lo.kick_angle_noise_std == 0 && lo.kick_speed_noise_frac == 0 &&
              lo.fall_prob_per_step_at_max_speed == 0 && lo.obs_ball_noise_std == 0,
          "fidelity.low", "noise, lag, and fall parameters must all be zero");

  const auto& k = cfg.skills;
  require(k.arrival_radius > 0, "skills.arrival_radius", "must be positive");
  require(k.obstacle_inflation >= 0, "skills.obstacle_inflation", "must be nonnegative");
  require(k.align_tolerance > 0, "skills.align_tolerance", "must be positive");
  require(k.approach_factor > 0 && k.approach_factor <= 1, "skills.approach_factor",
          "must be in (0, 1]");
  require(k.turn_gain > 0, "skills.turn_gain", "must be positive");

  const auto& w = cfg.reward;
  require(w.r_goal > 0, "reward.r_goal", "must be positive");
  require(w.r_oob <= 0, "reward.r_oob", "must be nonpositive");
  require(w.w_opponent_proximity <= 0, "reward.w_opponent_proximity", "must be nonpositive");
  require(w.r_ball_far_from_goal <= 0, "reward.r_ball_far_from_goal", "must be nonpositive");
  require(w.far_from_goal_radius > 0, "reward.far_from_goal_radius", "must be positive");
  require(w.episode_timeout > 0, "reward.episode_timeout", "must be positive");

  const auto& sel = cfg.selector;
  require(sel.ball_duel_opponent_radius > 0, "selector.ball_duel_opponent_radius",
          "must be positive");
  require(sel.near_ball_radius > 0, "selector.near_ball_radius", "must be positive");
  require(sel.near_goal_margin >= 0, "selector.near_goal_margin", "must be nonnegative");
  require(sel.hysteresis_ticks >= 0, "selector.hysteresis_ticks", "must be nonnegative");

  const auto& t = cfg.train;
  require(t.gamma > 0 && t.gamma <= 1, "train.gamma", "must be in (0, 1]");
  require(t.gae_lambda >= 0 && t.gae_lambda <= 1, "train.gae_lambda", "must be in [0, 1]");
  require(t.clip_epsilon > 0 && t.clip_epsilon < 1, "train.clip_epsilon", "must be in (0, 1)");
  require(t.epochs_per_update > 0, "train.epochs_per_update", "must be positive");
  require(t.minibatch_size > 0, "train.minibatch_size", "must be positive");
  require(t.rollout_horizon > 0, "train.rollout_horizon", "must be positive");
  require(t.n_envs > 0, "train.n_envs", "must be positive");
  require(t.learning_rate > 0, "train.learning_rate", "must be positive");
  require(t.entropy_coef >= 0, "train.entropy_coef", "must be nonnegative");
  require(t.value_coef >= 0, "train.value_coef", "must be nonnegative");
  require(t.total_steps >= 0, "train.total_steps", "must be nonnegative");
  require(t.hidden_size > 0, "train.hidden_size", "must be positive");
}

Config config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

Config config_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_dump(const Config& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

void config_set(Config& cfg, const std::string& dotted_key, const std::string& json_value) {
  json j = config_to_json(cfg);
  std::string pointer = "/";
  for (char c : dotted_key) pointer += (c == '.') ? '/' : c;
  json::json_pointer ptr(pointer);
  if (!j.contains(ptr)) throw ConfigError("unknown key " + dotted_key);
  json value;
  try {
    value = json::parse(json_value);
  } catch (const json::parse_error&) {
    value = json_value;  // plain strings may be given unquoted
  }
  j[ptr] = value;
  cfg = config_from_json(j);
}

void config_apply_env_overrides(Config& cfg, const std::string& prefix) {
  for (char** env = environ; *env != nullptr; ++env) {
    const std::string entry(*env);
    if (entry.rfind(prefix, 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(prefix.size(), eq - prefix.size());
    const std::string value = entry.substr(eq + 1);
    std::string key;
    for (std::size_t i = 0; i < name.size(); ++i) {
      if (name[i] == '_' && i + 1 < name.size() && name[i + 1] == '_') {
        key += '.';
        ++i;
      } else {
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
      }
    }
    config_set(cfg, key, value);
  }
}

}  // namespace pitchlab
