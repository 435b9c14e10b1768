#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pitchlab/behavior.hpp"
#include "pitchlab/replay.hpp"
#include "pitchlab/rewards.hpp"

namespace pitchlab {

struct BootstrapCi {
  double mean;
  double lo;
  double hi;
};

// Seeded percentile bootstrap over resampled means of a binary outcome
// vector. Throws std::invalid_argument on an empty vector.
BootstrapCi bootstrap_ci(const std::vector<std::uint8_t>& successes, int resamples = 10000,
                         double level = 0.95, std::uint64_t seed = 0);

enum class ExperimentName {
  DECOMPOSITION_1V2,
  FIDELITY_NEARGOAL,
  ACTIONSPACE_DRIBBLE,
  ACTIONSPACE_WALKTIME,
};

const char* to_string(ExperimentName e);
ExperimentName experiment_from_string(const std::string& s);

struct EpisodeOutcome {
  bool success = false;
  double time_to_success = 0.0;  // seconds; meaningful only on success
  TerminalKind terminal = TerminalKind::RUNNING;
};

// Seed an experiment batch uses for one episode; exposed so a replay can
// re-run exactly the episode the report counted.
std::uint64_t experiment_episode_seed(ExperimentName e, const std::string& condition,
                                      std::uint64_t seed, int episode_index);

struct ConditionResult {
  std::string name;
  int episodes = 0;
  int successes = 0;
  double success_rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double mean_time_to_success = 0.0;  // NaN when no successes
  std::vector<std::uint8_t> outcomes;
  std::vector<double> success_times;
};

struct EvalReport {
  std::string experiment;
  std::uint64_t seed = 0;
  int episodes_per_condition = 0;
  std::vector<ConditionResult> conditions;
  std::map<std::string, std::string> weight_hashes;
  std::string config_json;  // full config snapshot for provenance

  const ConditionResult& condition(const std::string& name) const;
  std::string to_json() const;
  std::string table() const;
};

// SHA-256 of a file's bytes, lowercase hex.
std::string sha256_file(const std::string& path);

// --- Single-episode runners (also the replay export surface) ---

// 1 vs 2 scoring: selector-driven attacker with ball possession against a
// weakened defender and goalie, HIGH fidelity.
EpisodeOutcome decomposition_episode(const Config& cfg, const PolicySet& policies,
                                     const PolicyMask& enabled, std::uint64_t episode_seed,
                                     TraceWriter* trace = nullptr);

// Near-goal scoring from inside the goal box against a weakened goalie
// (optionally plus defender), with the NEAR_GOAL net driving directly.
EpisodeOutcome fidelity_episode(const Config& cfg, const ActorCritic& near_goal,
                                Fidelity eval_fidelity, bool with_defender,
                                std::uint64_t episode_seed, TraceWriter* trace = nullptr);

// Dribble past a weakened defender with control. Success: ball passes
// 0.5 m beyond the defender's starting line while the agent is within
// 1.5 m of it. Failure: 60 s timeout, or ball farther than 1.5 m from the
// agent for 5 consecutive seconds, or any episode-ending event first.
EpisodeOutcome dribble_episode(const Config& cfg, const ActorCritic& net, PolicyName policy,
                               std::uint64_t episode_seed, TraceWriter* trace = nullptr);

// Timed 4 m traversal (start offset by the 0.25 m arrival radius, so every
// run covers at least 4 m of ground). ball_duel == nullptr runs the raw
// walk-to-point skill; otherwise the velocity policy walks to a phantom
// ball placed at the target.
EpisodeOutcome walktime_episode(const Config& cfg, const ActorCritic* ball_duel,
                                std::uint64_t episode_seed, TraceWriter* trace = nullptr);

// --- Experiment batches (episodes run in parallel, reduced by index) ---

EvalReport run_decomposition(const Config& cfg, const PolicySet& policies, int episodes,
                             std::uint64_t seed);

EvalReport run_fidelity(const Config& cfg, const ActorCritic& low_trained,
                        const ActorCritic& high_trained, bool with_defender, int episodes,
                        std::uint64_t seed,
                        std::map<std::string, std::string> weight_hashes = {});

EvalReport run_actionspace_dribble(const Config& cfg, const ActorCritic& ball_duel,
                                   const ActorCritic& mid_field, int episodes,
                                   std::uint64_t seed,
                                   std::map<std::string, std::string> weight_hashes = {});

EvalReport run_actionspace_walktime(const Config& cfg, const ActorCritic& ball_duel,
                                    int episodes, std::uint64_t seed,
                                    std::map<std::string, std::string> weight_hashes = {});

}  // namespace pitchlab
