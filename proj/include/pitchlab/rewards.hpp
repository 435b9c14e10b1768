#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pitchlab/policy_io.hpp"
#include "pitchlab/simulator.hpp"

namespace pitchlab {

enum class TerminalKind { RUNNING, GOAL, OUT_OF_BOUNDS, TIMEOUT };

const char* to_string(TerminalKind k);

struct UnknownPolicy : std::runtime_error {
  UnknownPolicy() : std::runtime_error("unknown policy name") {}
};

// Per-step reward for one controlled robot, from two consecutive world
// states one tick apart. Distance-delta shaping terms are positive when the
// distance shrank.
double reward(PolicyName policy, const WorldState& prev, const WorldState& now,
              const std::vector<SimEvent>& events, const Config& cfg, int agent_id,
              std::optional<Vec2> strategy_position = std::nullopt);

// Episode termination. Goal has priority over out-of-bounds; timeout when
// elapsed reaches reward.episode_timeout.
TerminalKind is_terminal(const WorldState& world, const std::vector<SimEvent>& events,
                         double elapsed, const Config& cfg);

enum class ScenarioName {
  BALL_DUEL_2V0,
  MIDFIELD_1V0,
  NEARGOAL_1V0,
  POSITIONING,
  TOY_REACH_1V0,
};

const char* to_string(ScenarioName s);
ScenarioName scenario_from_string(const std::string& s);

// Default scenario for each trainable policy.
ScenarioName default_scenario(PolicyName p);
PolicyName scenario_policy(ScenarioName s);
Fidelity scenario_fidelity(ScenarioName s);

// A training scenario instance: spawn regions, scripted robots, strategy
// position script, and episode termination tweaks. One instance serves one
// environment; per-episode state is reset in spawn().
class Scenario {
 public:
  Scenario(ScenarioName name, const Config& cfg);

  ScenarioName name() const { return name_; }
  int agent_id() const { return 0; }  // the learning robot is always id 0

  // Samples a fresh episode start, deterministic under the rng stream.
  WorldState spawn(Rng& rng);

  // Fills commands for scripted (non-learning) robots; the agent slot is
  // left untouched.
  void scripted_commands(const WorldState& world, std::vector<SkillCommand>& commands);

  // Strategy position for POSITIONING; nullopt elsewhere.
  std::optional<Vec2> strategy_position(const WorldState& world, double elapsed);

  // Episode timeout override (seconds); reward.episode_timeout otherwise.
  std::optional<double> timeout_override() const;

  // Extra scenario-specific terminal condition (toy reach task).
  bool scenario_terminal(const WorldState& world, const Config& cfg) const;

  // Field override for the toy task (a shrunken pitch).
  std::optional<FieldGeometry> field_override() const;

 private:
  ScenarioName name_;
  Config cfg_;
  // POSITIONING script state
  Vec2 strategy_point_;
  double strategy_next_resample_ = 0.0;
  std::array<Vec2, 2> patrol_targets_{};
  Rng script_rng_{0};
};

// Builds the config actually used by a scenario (field override applied).
Config scenario_config(ScenarioName name, const Config& base);

}  // namespace pitchlab
