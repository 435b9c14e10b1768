#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pitchlab/geometry.hpp"

namespace pitchlab {

struct RobotState {
  Pose2D pose;
  Vec2 velocity;        // global frame, m/s
  double omega = 0.0;   // rad/s
  bool upright = true;
  Team team = Team::HOME;
  int id = 0;
  int recovery_ticks_left = 0;  // > 0 while fallen

  bool operator==(const RobotState&) const = default;
};

// Ball with a 3-deep position history (oldest first). Before warm-up the
// history is padded with the spawn position.
struct BallState {
  Vec2 position;
  Vec2 velocity;
  std::array<Vec2, 3> history{};

  void reset_history() { history = {position, position, position}; }

  void push_history(Vec2 p) {
    history[0] = history[1];
    history[1] = history[2];
    history[2] = p;
  }

  bool operator==(const BallState&) const = default;
};

struct WorldState {
  std::vector<RobotState> robots;
  BallState ball;
  std::int64_t tick = 0;
  double dt = 0.05;

  const RobotState& robot(int id) const {
    for (const auto& r : robots)
      if (r.id == id) return r;
    throw std::out_of_range("no robot with id " + std::to_string(id));
  }

  RobotState& robot(int id) {
    return const_cast<RobotState&>(static_cast<const WorldState*>(this)->robot(id));
  }

  bool has_robot(int id) const {
    for (const auto& r : robots)
      if (r.id == id) return true;
    return false;
  }

  std::vector<int> team_ids(Team t) const {
    std::vector<int> ids;
    for (const auto& r : robots)
      if (r.team == t) ids.push_back(r.id);
    return ids;
  }

  bool operator==(const WorldState&) const = default;
};

}  // namespace pitchlab
