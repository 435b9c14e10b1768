#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pitchlab/geometry.hpp"

namespace pitchlab {

enum class Fidelity { LOW, HIGH };

const char* to_string(Fidelity f);
Fidelity fidelity_from_string(const std::string& s);

// Parameter bundle separating the low-fidelity kinematic profile from the
// high-fidelity stand-in (actuation lag, noise, falls).
struct FidelityProfile {
  std::string name = "LOW";
  double actuation_lag_tau = 0.0;        // s, first-order velocity lag
  double velocity_noise_std = 0.0;       // m/s per step
  double kick_angle_noise_std = 0.0;     // rad
  double kick_speed_noise_frac = 0.0;    // unitless
  double fall_prob_per_step_at_max_speed = 0.0;
  double obs_ball_noise_std = 0.0;       // m
  double contact_restitution = 0.5;      // unitless

  static FidelityProfile low();
  static FidelityProfile high();

  bool operator==(const FidelityProfile&) const = default;
};

struct SimParams {
  double dt = 0.05;                 // s, control tick
  double max_linear_speed = 0.30;   // m/s
  double max_angular_speed = 1.5;   // rad/s
  double ball_friction_decel = 0.4; // m/s^2
  double kick_speed = 2.5;          // m/s
  double kick_range = 0.25;         // m from the robot front face
  double kick_half_angle = 0.5;     // rad
  double fall_recovery_time = 3.0;  // s

  bool operator==(const SimParams&) const = default;
};

// Resolved per-simulator-instance configuration.
struct SimConfig {
  SimParams params;
  FieldGeometry field;
  std::uint64_t seed = 0;
  FidelityProfile fidelity = FidelityProfile::low();
};

struct SkillsConfig {
  double arrival_radius = 0.10;     // m, walk_to_point deceleration radius
  double obstacle_inflation = 0.25; // m added around robot footprints
  double align_tolerance = 0.15;    // rad, heading gate for kicking
  double approach_factor = 0.8;     // kick approach point, fraction of kick_range
  double turn_gain = 2.0;           // rad/s per rad of heading error

  bool operator==(const SkillsConfig&) const = default;
};

struct RewardConfig {
  double w_to_ball = 0.5;            // 1/m
  double w_ball_to_goal = 1.0;       // 1/m
  double r_goal = 10.0;
  double r_oob = -5.0;
  double w_to_strategy = 1.0;        // 1/m
  double r_ball_in_view_per_step = 0.01;
  double w_opponent_proximity = -0.05;  // per step when an opponent is close
  double r_ball_far_from_goal = -5.0;   // per step beyond the radius below
  double far_from_goal_radius = 2.5;    // m
  double episode_timeout = 60.0;        // s

  bool operator==(const RewardConfig&) const = default;
};

struct SelectorConfig {
  double ball_duel_opponent_radius = 0.5;  // m
  double near_goal_margin = 0.0;           // m, expands the goal-box trigger
  double near_ball_radius = 1.0;           // m, NEAR_GOAL self-to-ball gate
  int hysteresis_ticks = 5;

  bool operator==(const SelectorConfig&) const = default;
};

struct TrainConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  int epochs_per_update = 4;
  int minibatch_size = 256;
  int rollout_horizon = 128;  // steps per env per update
  int n_envs = 16;
  double learning_rate = 3e-4;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  std::int64_t total_steps = 1000000;
  std::uint64_t seed = 0;
  int hidden_size = 64;
  double log_std_init = -0.5;
  double log_std_final = -1.6;  // exploration anneals linearly to this

  bool operator==(const TrainConfig&) const = default;
};

// The whole workbench configuration, as stored in the config file.
struct Config {
  int version = 1;
  FieldGeometry field;
  SimParams sim;
  std::uint64_t seed = 0;
  FidelityProfile fidelity_low = FidelityProfile::low();
  FidelityProfile fidelity_high = FidelityProfile::high();
  SkillsConfig skills;
  RewardConfig reward;
  SelectorConfig selector;
  TrainConfig train;

  const FidelityProfile& profile(Fidelity f) const {
    return f == Fidelity::LOW ? fidelity_low : fidelity_high;
  }

  SimConfig sim_config(Fidelity f, std::uint64_t sim_seed) const {
    return SimConfig{sim, field, sim_seed, profile(f)};
  }

  bool operator==(const Config&) const = default;
};

// Raised by config parsing/validation; message carries the offending key path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

Config default_config();
Config config_from_json_text(const std::string& text);
Config config_load(const std::string& path);
std::string config_dump(const Config& cfg);  // pretty JSON, round-trips exactly
void config_validate(const Config& cfg);     // throws ConfigError naming the key

// Applies PITCHLAB_-style environment overrides: a variable named
// <prefix>SECTION__KEY (e.g. PITCHLAB_SIM__DT=0.1) replaces config key
// "section.key". Values parse as JSON scalars.
void config_apply_env_overrides(Config& cfg, const std::string& prefix = "PITCHLAB_");

// Sets a single key by dotted path ("sim.dt"), value given as JSON text.
void config_set(Config& cfg, const std::string& dotted_key, const std::string& json_value);

}  // namespace pitchlab
