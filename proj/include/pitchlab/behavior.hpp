#pragma once

#include <map>
#include <memory>
#include <optional>

#include "pitchlab/mlp.hpp"
#include "pitchlab/policy_io.hpp"

namespace pitchlab {

enum class SelectorRule {
  TEAMMATE_CLOSER,     // -> POSITIONING
  NEAR_GOAL_BOX,       // -> NEAR_GOAL
  OPPONENT_NEAR_BALL,  // -> BALL_DUEL
  DEFAULT_MID_FIELD,   // -> MID_FIELD
  NONE_AVAILABLE,      // every applicable policy ablated
};

const char* to_string(SelectorRule r);

struct SelectorDecision {
  std::optional<PolicyName> chosen;  // nullopt only under ablation fall-through
  SelectorRule rule_fired = SelectorRule::DEFAULT_MID_FIELD;
  // Inputs snapshot (estimated ball, true robot poses).
  double self_ball_dist = 0.0;
  double nearest_teammate_ball_dist = 0.0;  // +inf without upright teammates
  double nearest_opponent_ball_dist = 0.0;  // +inf without opponents
  bool ball_in_opposing_box = false;
};

// Which policies are available; indexed by MID_FIELD, BALL_DUEL, NEAR_GOAL,
// POSITIONING in that order.
using PolicyMask = std::array<bool, 4>;
inline constexpr PolicyMask kAllPoliciesEnabled{true, true, true, true};

bool mask_enabled(const PolicyMask& mask, PolicyName p);

// Stateless rule table, priority order: (1) POSITIONING when an upright
// teammate is strictly closer to the (estimated) ball; (2) NEAR_GOAL when the
// ball is in the opposing goal box (+ margin) and self is near it;
// (3) BALL_DUEL when an opponent is within the duel radius of the ball;
// (4) MID_FIELD. Ablated policies fall through to the next rule.
SelectorDecision select_raw(const WorldState& world, int self_id, const SelectorConfig& sel,
                            const FieldGeometry& field, Vec2 ball_estimate,
                            const PolicyMask& enabled = kAllPoliciesEnabled);

// Hysteresis wrapper: a switch away from the committed policy only lands
// after the same winner persists hysteresis_ticks consecutive ticks.
class Selector {
 public:
  Selector(SelectorConfig sel, FieldGeometry field) : sel_(sel), field_(field) {}

  SelectorDecision select(const WorldState& world, int self_id, Vec2 ball_estimate,
                          const PolicyMask& enabled = kAllPoliciesEnabled);
  void reset();

 private:
  struct State {
    bool initialized = false;
    std::optional<PolicyName> committed;
    SelectorRule committed_rule = SelectorRule::DEFAULT_MID_FIELD;
    std::optional<PolicyName> pending;
    int pending_ticks = 0;
  };
  SelectorConfig sel_;
  FieldGeometry field_;
  std::map<int, State> states_;
};

// Manually defined goalie: holds the ball-goal line clamped to its goal box
// and clears toward midfield when it can kick. The weakened flag disables
// clearing entirely.
SkillCommand scripted_goalie(const WorldState& world, int goalie_id, const Config& cfg,
                             bool weakened);

// Defender: holds the point 0.5 m ball-side of the midpoint between ball and
// own goal; kicks clear unless weakened.
SkillCommand scripted_defender(const WorldState& world, int defender_id, const Config& cfg,
                               bool weakened);

// The four trained sub-policies (entries may be absent under ablation).
struct PolicySet {
  std::array<std::optional<ActorCritic>, 4> nets;
  std::array<std::string, 4> sources;  // file paths, empty when unset

  void set(PolicyName p, ActorCritic net, std::string source = {});
  const ActorCritic* get(PolicyName p) const;
  bool has_all() const;

  // Loads <POLICY>.plw files from a directory; missing_ok skips absences.
  static PolicySet from_dir(const std::string& dir, bool missing_ok = false);
};

// Deployment-side decision module for the controlled robots of one team:
// select -> build_observation -> deterministic mean action -> decode.
class TeamRuntime {
 public:
  TeamRuntime(const Config& cfg, const PolicySet& policies, Team team,
              PolicyMask enabled = kAllPoliciesEnabled,
              std::optional<SelectorConfig> selector_override = std::nullopt);

  // Re-anchors per-robot decoder state; call at episode start.
  void begin_episode(const WorldState& world);

  struct RobotDecision {
    int robot_id;
    SelectorDecision decision;
  };

  // Fills commands for this team's upright robots (other slots untouched);
  // returns one decision per controlled upright robot.
  std::vector<RobotDecision> tick(const WorldState& world, Simulator& sim,
                                  std::vector<SkillCommand>& commands);

 private:
  Config cfg_;
  PolicySet policies_;
  Team team_;
  PolicyMask enabled_;
  Selector selector_;
  std::map<int, std::array<std::unique_ptr<ActionDecoder>, 4>> decoders_;

  ActionDecoder& decoder(int robot_id, PolicyName p);
};

}  // namespace pitchlab
