#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pitchlab/config.hpp"
#include "pitchlab/rng.hpp"
#include "pitchlab/skills.hpp"
#include "pitchlab/world.hpp"

namespace pitchlab {

enum class SimEventKind { GOAL_HOME, GOAL_AWAY, OUT_OF_BOUNDS, FALL, KICK_EXECUTED };

const char* to_string(SimEventKind k);

struct SimEvent {
  SimEventKind kind;
  std::int64_t tick = 0;
  int robot_id = -1;  // kicker / fallen robot, -1 when not applicable
  std::unordered_map<std::string, double> detail;
};

bool has_event(const std::vector<SimEvent>& events, SimEventKind kind);

struct KickOutOfRange : std::runtime_error {
  explicit KickOutOfRange(int robot_id)
      : std::runtime_error("robot " + std::to_string(robot_id) + " cannot kick from here") {}
};

// Deterministic-under-seed stepped simulation of robots and ball. A single
// instance is not shareable mid-step; run many instances in parallel instead.
//
// Randomness is split into named substreams per robot (dynamics), per robot
// (observation), and one for the ball, so adding an agent or observing more
// often never perturbs anyone else's draws.
class Simulator {
 public:
  Simulator(const Config& cfg, Fidelity fidelity, std::uint64_t seed);

  // Advances the world one tick. commands[i] belongs to world.robots[i];
  // missing trailing commands and commands to fallen robots are ignored.
  // Non-finite commands are rejected (treated as Stand) and counted.
  void step(WorldState& world, std::span<const SkillCommand> commands,
            std::vector<SimEvent>& events);

  // Sets the ball in motion along desired_angle at kick speed, noisy under
  // HIGH. Throws KickOutOfRange unless can_kick holds for the kicker.
  SimEvent resolve_kick(WorldState& world, int kicker_id, double desired_angle);

  // One fall draw for the given robot at its current speed.
  bool check_fall(const RobotState& robot);

  // Egocentric ball position with isotropic observation noise (exact in LOW).
  Vec2 observe_ball(const WorldState& world, int observer_id);

  const Config& config() const { return cfg_; }
  Fidelity fidelity() const { return fidelity_; }
  const FidelityProfile& profile() const { return profile_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t rejected_commands() const { return rejected_commands_; }

  // Builds a world with history/tick initialized for this simulator's dt.
  WorldState make_world(std::vector<RobotState> robots, Vec2 ball_position) const;

 private:
  Rng& robot_stream(int id);
  Rng& obs_stream(int id);

  void integrate_robot(RobotState& r, const WalkAtVelocity& desired_ego, bool has_command,
                       std::vector<SimEvent>& events, std::int64_t tick);
  void resolve_collisions(WorldState& world);
  void detect_ball_events(const WorldState& world, Vec2 ball_before, bool kicked_this_step,
                          std::vector<SimEvent>& events);

  Config cfg_;
  Fidelity fidelity_;
  FidelityProfile profile_;
  std::uint64_t seed_;
  std::unordered_map<int, Rng> robot_streams_;
  std::unordered_map<int, Rng> obs_streams_;
  Rng ball_stream_;
  std::int64_t rejected_commands_ = 0;
  bool warned_nonfinite_ = false;
};

}  // namespace pitchlab
