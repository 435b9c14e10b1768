#pragma once

#include <variant>

#include "pitchlab/config.hpp"
#include "pitchlab/world.hpp"

namespace pitchlab {

// Egocentric velocity request; the simulator clamps to configured maxima.
struct WalkAtVelocity {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  bool operator==(const WalkAtVelocity&) const = default;
};

struct WalkToPoint {
  Vec2 target;          // global
  double face = 0.0;    // desired heading, global
  bool operator==(const WalkToPoint&) const = default;
};

struct WalkAndKick {
  double kick_angle = 0.0;  // desired ball direction, global
  bool operator==(const WalkAndKick&) const = default;
};

struct Stand {
  bool operator==(const Stand&) const = default;
};

using SkillCommand = std::variant<Stand, WalkAtVelocity, WalkToPoint, WalkAndKick>;

// True iff the ball is within kick_range of the robot's front face and
// within +-kick_half_angle of its heading.
bool can_kick(const WorldState& world, int robot_id, const Config& cfg);

// (0, 1) when the robot can kick, (1, 0) otherwise.
std::array<double, 2> can_kick_one_hot(const WorldState& world, int robot_id, const Config& cfg);

// Velocity command toward a target with a single-obstacle tangent detour
// around the nearest blocking robot. Full speed outside the arrival radius,
// proportional deceleration inside it.
WalkAtVelocity walk_to_point(const WorldState& world, int robot_id, Vec2 target, double face,
                             const Config& cfg);

// Per-tick resolution of the walk-and-kick skill.
struct WalkAndKickPlan {
  bool kick_now = false;       // all gates passed; kick this tick
  double kick_angle = 0.0;
  WalkAtVelocity move;         // motion command when not kicking
};

WalkAndKickPlan plan_walk_and_kick(const WorldState& world, int robot_id, double kick_angle,
                                   const Config& cfg);

// The point approach_factor * kick_range behind the ball, opposite the kick
// direction.
Vec2 kick_approach_point(Vec2 ball, double kick_angle, const Config& cfg);

}  // namespace pitchlab
