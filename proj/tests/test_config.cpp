#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "pitchlab/config.hpp"

using namespace pitchlab;

TEST_CASE("default config validates and round-trips") {
  const Config cfg = default_config();
  config_validate(cfg);
  const std::string text = config_dump(cfg);
  const Config back = config_from_json_text(text);
  CHECK(back == cfg);
  CHECK(config_dump(back) == text);
}

TEST_CASE("negative dt rejected naming the key") {
  Config cfg = default_config();
  std::string text = config_dump(cfg);
  CHECK_THROWS_WITH_AS(config_set(cfg, "sim.dt", "-0.01"),
                       doctest::Contains("sim.dt"), ConfigError);
}

TEST_CASE("unknown keys rejected") {
  Config cfg = default_config();
  CHECK_THROWS_AS(config_set(cfg, "sim.dtt", "0.05"), ConfigError);
  std::string text = config_dump(cfg);
  text.insert(text.find("\"dt\""), "\"bogus\": 1, ");
  CHECK_THROWS_WITH_AS(config_from_json_text(text), doctest::Contains("bogus"), ConfigError);
}

TEST_CASE("config_set updates nested values") {
  Config cfg = default_config();
  config_set(cfg, "reward.r_goal", "25");
  CHECK(cfg.reward.r_goal == doctest::Approx(25.0));
  config_set(cfg, "fidelity.high.obs_ball_noise_std", "0.08");
  CHECK(cfg.fidelity_high.obs_ball_noise_std == doctest::Approx(0.08));
}

TEST_CASE("low fidelity profile must stay noiseless") {
  Config cfg = default_config();
  CHECK_THROWS_WITH_AS(config_set(cfg, "fidelity.low.velocity_noise_std", "0.05"),
                       doctest::Contains("fidelity.low"), ConfigError);
}

TEST_CASE("environment overrides") {
  ::setenv("PITCHLAB_SIM__DT", "0.1", 1);
  ::setenv("PITCHLAB_TRAIN__N_ENVS", "4", 1);
  ::setenv("PITCHLAB_FIDELITY__HIGH__ACTUATION_LAG_TAU", "0.5", 1);
  Config cfg = default_config();
  config_apply_env_overrides(cfg);
  CHECK(cfg.sim.dt == doctest::Approx(0.1));
  CHECK(cfg.train.n_envs == 4);
  CHECK(cfg.fidelity_high.actuation_lag_tau == doctest::Approx(0.5));
  ::unsetenv("PITCHLAB_SIM__DT");
  ::unsetenv("PITCHLAB_TRAIN__N_ENVS");
  ::unsetenv("PITCHLAB_FIDELITY__HIGH__ACTUATION_LAG_TAU");

  // A bad override value reports its key.
  ::setenv("PITCHLAB_SIM__DT", "-1", 1);
  Config cfg2 = default_config();
  CHECK_THROWS_WITH_AS(config_apply_env_overrides(cfg2), doctest::Contains("sim.dt"),
                       ConfigError);
  ::unsetenv("PITCHLAB_SIM__DT");
}

TEST_CASE("kick range must exceed the robot half length") {
  Config cfg = default_config();
  CHECK_THROWS_WITH_AS(config_set(cfg, "sim.kick_range", "0.1"),
                       doctest::Contains("kick_range"), ConfigError);
}
