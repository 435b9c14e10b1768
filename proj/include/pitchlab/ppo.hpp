#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pitchlab/env.hpp"
#include "pitchlab/mlp.hpp"

namespace pitchlab {

// Generalized advantage estimation. values carries one bootstrap entry
// beyond the rewards (size T+1); dones[t] marks a terminal at step t.
// Throws std::invalid_argument on length mismatch.
struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};
GaeResult gae(const std::vector<double>& rewards, const std::vector<double>& values,
              const std::vector<std::uint8_t>& dones, double gamma, double lambda);

// Flattened rollout experience. Advantages are expected normalized (mean 0,
// std 1) before entering ppo_update.
struct RolloutBatch {
  int obs_dim = 0;
  int act_dim = 0;
  std::size_t size = 0;
  std::vector<double> obs;       // size * obs_dim
  std::vector<double> actions;   // size * act_dim (pre-clip samples)
  std::vector<double> log_probs; // size
  std::vector<double> advantages;
  std::vector<double> returns;
};

struct PpoStats {
  double total_loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
};

// Clipped-surrogate PPO loss over the given sample indices; accumulates
// parameter gradients into grad when non-null. Pure in (params, batch).
PpoStats ppo_loss(const ActorCritic& net, const RolloutBatch& batch,
                  const std::vector<std::size_t>& indices, const TrainConfig& cfg,
                  std::vector<double>* grad);

class Adam {
 public:
  explicit Adam(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(std::vector<double>& params, const std::vector<double>& grad, double lr);

 private:
  std::vector<double> m_, v_;
  double beta1_, beta2_, eps_;
  int t_ = 0;
};

// One PPO update: normalizes advantages in place, then runs
// epochs_per_update passes of shuffled minibatch gradient steps.
// Throws std::runtime_error with diagnostics on a non-finite loss.
PpoStats ppo_update(ActorCritic& net, RolloutBatch& batch, const TrainConfig& cfg, Adam& adam,
                    Rng& shuffle_rng);

struct TrainProgress {
  int update = 0;
  std::int64_t steps_done = 0;
  std::int64_t total_steps = 0;
  double mean_return = 0.0;  // episodes finished during this update; NaN if none
  double entropy = 0.0;
};

struct CurveRow {
  int update;
  std::int64_t steps;
  double mean_return;
  double entropy;
};

struct EpisodeRecord {
  double undiscounted_return;
  TerminalKind terminal;
};

struct TrainResult {
  ActorCritic net;
  std::vector<CurveRow> curve;
  std::vector<EpisodeRecord> episodes;  // in completion order
};

using ProgressFn = std::function<void(const TrainProgress&)>;

// Trains one sub-policy with PPO over vectorized scenario environments.
// Fully deterministic for a fixed config (per-env and per-purpose RNG
// streams; no wall-clock anywhere).
TrainResult train_policy(const Config& cfg, PolicyName policy, ScenarioName scenario,
                         std::optional<Fidelity> fidelity_override,
                         const ProgressFn& progress = nullptr);

// Fraction of the last `window` episodes that ended in a goal.
double recent_goal_rate(const std::vector<EpisodeRecord>& episodes, std::size_t window);

void write_curve_csv(const std::vector<CurveRow>& curve, const std::string& path);

}  // namespace pitchlab
