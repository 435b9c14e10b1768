#pragma once

#include <memory>
#include <optional>

#include "pitchlab/rewards.hpp"

namespace pitchlab {

// Single-agent stepped environment binding one sub-policy to its training
// scenario. Each instance owns an independent simulator; instances are safe
// to run in parallel.
class TrainingEnv {
 public:
  TrainingEnv(const Config& cfg, PolicyName policy, ScenarioName scenario,
              std::optional<Fidelity> fidelity_override, std::uint64_t seed);

  int obs_dim() const { return spec_.obs_dim; }
  int act_dim() const { return spec_.act_dim; }
  PolicyName policy() const { return spec_.name; }
  ScenarioName scenario() const { return scenario_.name(); }
  Fidelity fidelity() const { return fidelity_; }

  const std::vector<double>& reset();

  struct StepResult {
    const std::vector<double>* obs;  // next observation (post-reset on done)
    double reward;
    bool done;
    TerminalKind terminal;  // RUNNING while the episode continues
  };

  // Raw action in [-1,1]^act_dim (clipped on entry).
  StepResult step(std::span<const double> raw_action);

  const WorldState& world() const { return world_; }
  const Config& config() const { return cfg_; }
  double elapsed() const { return elapsed_; }

 private:
  void rebuild_episode();
  void build_obs();

  Config cfg_;  // scenario-adjusted (field/timeout overrides applied)
  PolicySpec spec_;
  Scenario scenario_;
  Fidelity fidelity_;
  std::uint64_t seed_;
  std::uint64_t episode_index_ = 0;

  std::unique_ptr<Simulator> sim_;
  WorldState world_;
  WorldState prev_world_;
  ActionDecoder decoder_;
  double elapsed_ = 0.0;
  std::vector<double> obs_;
  std::vector<SkillCommand> commands_;
  std::vector<SimEvent> events_;
  std::optional<Vec2> strategy_;
};

}  // namespace pitchlab
