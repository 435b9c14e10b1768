#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pitchlab/simulator.hpp"
#include "pitchlab/skills.hpp"

namespace pitchlab {

enum class PolicyName { MID_FIELD, BALL_DUEL, NEAR_GOAL, POSITIONING };

const char* to_string(PolicyName p);
PolicyName policy_from_string(const std::string& s);
inline constexpr std::array<PolicyName, 4> kAllPolicies = {
    PolicyName::MID_FIELD, PolicyName::BALL_DUEL, PolicyName::NEAR_GOAL, PolicyName::POSITIONING};

enum class SkillBinding { KICK_ANGLE, VELOCITY, VELOCITY_WITH_STAND };

struct PolicySpec {
  PolicyName name;
  int obs_dim;
  int act_dim;
  SkillBinding binding;
  double delta_theta_clip = 0.2;  // rad per tick, MID_FIELD only

  static PolicySpec of(PolicyName name);
};

struct MissingStrategyPosition : std::runtime_error {
  MissingStrategyPosition() : std::runtime_error("POSITIONING requires a strategy position") {}
};

// One named slice of an observation vector, for layout documentation.
struct LayoutEntry {
  std::string name;
  int offset;
  int size;
  std::string description;
};

std::vector<LayoutEntry> observation_layout(PolicyName p);

// Human/machine-readable layout documentation for all policies (the
// `print-layouts` surface). JSON when as_json, otherwise a text table.
std::string describe_layouts(bool as_json);

// Builds the observation vector for one robot. Ball entries come from
// sim.observe_ball (noisy under HIGH) when a simulator is supplied;
// history entries are egocentric transforms of the recorded ball history.
// Positions are normalized by the field half-length.
std::vector<double> build_observation(const PolicySpec& spec, const WorldState& world,
                                      int robot_id, std::optional<Vec2> strategy_position,
                                      const Config& cfg, Simulator* sim = nullptr);

// Global position of the teammate closest to the opponent goal center
// (lowest id on ties; the observer itself when it has no teammates).
Vec2 closest_teammate_to_goal(const WorldState& world, int observer_id, const Config& cfg);

// Decodes raw policy outputs in [-1,1]^act_dim into skill commands.
// MID_FIELD accumulates a persistent desired kick angle, moved by at most
// delta_theta_clip per tick; reset() re-anchors it at episode start.
class ActionDecoder {
 public:
  explicit ActionDecoder(PolicySpec spec) : spec_(spec) {}

  // Re-anchors MID_FIELD's desired kick angle to the ball->opponent-goal
  // bearing of the given world.
  void reset(const WorldState& world, int robot_id, const Config& cfg);

  SkillCommand decode(std::span<const double> raw, const Pose2D& robot_pose, const Config& cfg);

  double desired_kick_angle() const { return desired_kick_angle_; }
  const PolicySpec& spec() const { return spec_; }

 private:
  PolicySpec spec_;
  double desired_kick_angle_ = 0.0;
};

}  // namespace pitchlab
