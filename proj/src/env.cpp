#include "pitchlab/env.hpp"

namespace pitchlab {

TrainingEnv::TrainingEnv(const Config& cfg, PolicyName policy, ScenarioName scenario,
                         std::optional<Fidelity> fidelity_override, std::uint64_t seed)
    : cfg_(scenario_config(scenario, cfg)),
      spec_(PolicySpec::of(policy)),
      scenario_(scenario, cfg),
      fidelity_(fidelity_override.value_or(scenario_fidelity(scenario))),
      seed_(seed),
      decoder_(spec_) {}

void TrainingEnv::rebuild_episode() {
  // Fresh simulator and spawn per episode, each on its own derived stream.
  Rng spawn_rng = Rng::stream(seed_, Rng::tag("spawn", episode_index_));
  const std::uint64_t sim_seed =
      Rng::stream(seed_, Rng::tag("simseed", episode_index_)).next_u64();
  sim_ = std::make_unique<Simulator>(cfg_, fidelity_, sim_seed);
  world_ = scenario_.spawn(spawn_rng);
  elapsed_ = 0.0;
  strategy_ = scenario_.strategy_position(world_, 0.0);
  decoder_.reset(world_, scenario_.agent_id(), cfg_);
  ++episode_index_;
}

void TrainingEnv::build_obs() {
  obs_ = build_observation(spec_, world_, scenario_.agent_id(), strategy_, cfg_, sim_.get());
}

const std::vector<double>& TrainingEnv::reset() {
  rebuild_episode();
  build_obs();
  return obs_;
}

TrainingEnv::StepResult TrainingEnv::step(std::span<const double> raw_action) {
  const int agent = scenario_.agent_id();
  const std::optional<Vec2> active_strategy = strategy_;

  scenario_.scripted_commands(world_, commands_);
  commands_[agent] = decoder_.decode(raw_action, world_.robot(agent).pose, cfg_);

  prev_world_ = world_;
  sim_->step(world_, commands_, events_);
  elapsed_ += cfg_.sim.dt;

  const double r = reward(spec_.name, prev_world_, world_, events_, cfg_, agent, active_strategy);
  strategy_ = scenario_.strategy_position(world_, elapsed_);

  TerminalKind term = is_terminal(world_, events_, elapsed_, cfg_);
  if (term == TerminalKind::RUNNING && scenario_.scenario_terminal(world_, cfg_))
    term = TerminalKind::GOAL;  // toy reach task: arrival is the success terminal

  const bool done = term != TerminalKind::RUNNING;
  if (done) rebuild_episode();
  build_obs();
  return {&obs_, r, done, term};
}

}  // namespace pitchlab
