#include "pitchlab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <atomic>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <openssl/evp.h>

#include "pitchlab/rewards.hpp"

namespace pitchlab {

using nlohmann::json;

BootstrapCi bootstrap_ci(const std::vector<std::uint8_t>& successes, int resamples, double level,
                         std::uint64_t seed) {
  if (successes.empty()) throw std::invalid_argument("bootstrap_ci: empty outcome vector");
  if (resamples < 1) throw std::invalid_argument("bootstrap_ci: resamples must be >= 1");
  const std::size_t n = successes.size();

  double sum = 0.0;
  for (auto s : successes) sum += s ? 1.0 : 0.0;
  const double sample_mean = sum / static_cast<double>(n);

  Rng rng = Rng::stream(seed, Rng::tag("bootstrap"));
  std::vector<double> means(resamples);
  for (int r = 0; r < resamples; ++r) {
    double k = 0.0;
    for (std::size_t i = 0; i < n; ++i) k += successes[rng.uniform_int(n)] ? 1.0 : 0.0;
    means[r] = k / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  const auto idx = [&](double q) {
    const auto i = static_cast<std::size_t>(std::floor(q * resamples));
    return std::min(i, static_cast<std::size_t>(resamples - 1));
  };
  return {sample_mean, means[idx(alpha)], means[idx(1.0 - alpha)]};
}

const char* to_string(ExperimentName e) {
  switch (e) {
    case ExperimentName::DECOMPOSITION_1V2: return "DECOMPOSITION_1V2";
    case ExperimentName::FIDELITY_NEARGOAL: return "FIDELITY_NEARGOAL";
    case ExperimentName::ACTIONSPACE_DRIBBLE: return "ACTIONSPACE_DRIBBLE";
    case ExperimentName::ACTIONSPACE_WALKTIME: return "ACTIONSPACE_WALKTIME";
  }
  return "?";
}

ExperimentName experiment_from_string(const std::string& s) {
  for (ExperimentName e :
       {ExperimentName::DECOMPOSITION_1V2, ExperimentName::FIDELITY_NEARGOAL,
        ExperimentName::ACTIONSPACE_DRIBBLE, ExperimentName::ACTIONSPACE_WALKTIME})
    if (s == to_string(e)) return e;
  throw std::invalid_argument("unknown experiment: " + s);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed for " + path);
  std::string hex(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i)
    std::snprintf(hex.data() + 2 * i, 3, "%02x", digest[i]);
  return hex;
}

namespace {

int eval_thread_count() {
  if (const char* env = std::getenv("PITCHLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Index-parallel episode runner; results land by index so scheduling never
// shows in the report.
template <typename Fn>
std::vector<EpisodeOutcome> run_episodes(int episodes, const Fn& fn) {
  std::vector<EpisodeOutcome> out(episodes);
  const int threads = std::min(eval_thread_count(), episodes);
  if (threads <= 1) {
    for (int i = 0; i < episodes; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < episodes; i = next.fetch_add(1)) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

ConditionResult summarize(const std::string& name, const std::vector<EpisodeOutcome>& outcomes,
                          std::uint64_t seed) {
  ConditionResult c;
  c.name = name;
  c.episodes = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes) {
    c.outcomes.push_back(o.success ? 1 : 0);
    if (o.success) {
      ++c.successes;
      c.success_times.push_back(o.time_to_success);
    }
  }
  const BootstrapCi ci = bootstrap_ci(c.outcomes, 10000, 0.95, seed);
  c.success_rate = ci.mean;
  c.ci_lo = ci.lo;
  c.ci_hi = ci.hi;
  if (c.success_times.empty()) {
    c.mean_time_to_success = std::numeric_limits<double>::quiet_NaN();
  } else {
    double s = 0.0;
    for (double t : c.success_times) s += t;
    c.mean_time_to_success = s / static_cast<double>(c.success_times.size());
  }
  return c;
}

std::uint64_t episode_seed_for(std::uint64_t seed, const std::string& condition, int index) {
  return Rng::stream(seed, Rng::tag(condition, static_cast<std::uint64_t>(index))).next_u64();
}

RobotState spawn_robot(int id, Team team, Vec2 pos, double theta) {
  RobotState r;
  r.id = id;
  r.team = team;
  r.pose = {pos.x, pos.y, theta};
  return r;
}

double bearing(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  return std::atan2(d.y, d.x);
}

struct EpisodeLoop {
  Simulator sim;
  WorldState world;
  std::vector<SkillCommand> commands;
  std::vector<SimEvent> events;
  double elapsed = 0.0;

  EpisodeLoop(const Config& cfg, Fidelity fid, std::uint64_t sim_seed,
              std::vector<RobotState> robots, Vec2 ball)
      : sim(cfg, fid, sim_seed) {
    world = sim.make_world(std::move(robots), ball);
    commands.assign(world.robots.size(), Stand{});
  }

  void step() {
    sim.step(world, commands, events);
    elapsed += sim.config().sim.dt;
  }
};

}  // namespace

std::uint64_t experiment_episode_seed(ExperimentName e, const std::string& condition,
                                      std::uint64_t seed, int episode_index) {
  switch (e) {
    case ExperimentName::DECOMPOSITION_1V2:
      return episode_seed_for(seed, condition, episode_index);
    case ExperimentName::FIDELITY_NEARGOAL:
      return episode_seed_for(seed, "fidelity_ep", episode_index);
    case ExperimentName::ACTIONSPACE_DRIBBLE:
      return episode_seed_for(seed, "dribble_ep", episode_index);
    case ExperimentName::ACTIONSPACE_WALKTIME:
      return episode_seed_for(seed, "walktime_ep", episode_index);
  }
  throw std::invalid_argument("bad experiment");
}

const ConditionResult& EvalReport::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw std::out_of_range("no condition named " + name);
}

std::string EvalReport::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["episodes_per_condition"] = episodes_per_condition;
  j["conditions"] = json::array();
  for (const auto& c : conditions) {
    json jc;
    jc["name"] = c.name;
    jc["episodes"] = c.episodes;
    jc["successes"] = c.successes;
    jc["success_rate"] = c.success_rate;
    jc["ci95_lo"] = c.ci_lo;
    jc["ci95_hi"] = c.ci_hi;
    if (std::isfinite(c.mean_time_to_success))
      jc["mean_time_to_success_s"] = c.mean_time_to_success;
    else
      jc["mean_time_to_success_s"] = nullptr;
    std::string bits(c.outcomes.size(), '0');
    for (std::size_t i = 0; i < c.outcomes.size(); ++i) bits[i] = c.outcomes[i] ? '1' : '0';
    jc["outcomes"] = bits;
    j["conditions"].push_back(jc);
  }
  j["weight_hashes"] = weight_hashes;
  j["config"] = json::parse(config_json);
  return j.dump(2) + "\n";
}

std::string EvalReport::table() const {
  std::ostringstream os;
  os << "experiment: " << experiment << "  (seed " << seed << ", "
     << episodes_per_condition << " episodes/condition)\n";
  os << "  condition                      success        95% CI        mean time\n";
  for (const auto& c : conditions) {
    char line[160];
    if (std::isfinite(c.mean_time_to_success)) {
      std::snprintf(line, sizeof(line), "  %-28s %4d/%-4d   [%.3f, %.3f]   %7.2f s\n",
                    c.name.c_str(), c.successes, c.episodes, c.ci_lo, c.ci_hi,
                    c.mean_time_to_success);
    } else {
      std::snprintf(line, sizeof(line), "  %-28s %4d/%-4d   [%.3f, %.3f]         - \n",
                    c.name.c_str(), c.successes, c.episodes, c.ci_lo, c.ci_hi);
    }
    os << line;
  }
  return os.str();
}

EpisodeOutcome decomposition_episode(const Config& cfg, const PolicySet& policies,
                                     const PolicyMask& enabled, std::uint64_t episode_seed,
                                     TraceWriter* trace) {
  Rng rng = Rng::stream(episode_seed, Rng::tag("spawn"));
  const Vec2 goal = cfg.field.opponent_goal_center(Team::HOME);

  const Vec2 attacker_pos{rng.uniform(-0.5, 1.0), rng.uniform(-1.5, 1.5)};
  const double theta = bearing(attacker_pos, goal);
  const Vec2 ball = attacker_pos + unit_from_angle(theta) * 0.25;

  const Vec2 mid = (ball + goal) * 0.5;
  const Vec2 defender_pos = mid + (ball - mid).normalized() * 0.5;
  const Vec2 goalie_pos{cfg.field.half_length() - 0.3,
                        std::clamp(ball.y * 0.3, -0.5, 0.5)};

  EpisodeLoop ep(cfg, Fidelity::HIGH, Rng::stream(episode_seed, Rng::tag("sim")).next_u64(),
                 {spawn_robot(0, Team::HOME, attacker_pos, theta),
                  spawn_robot(1, Team::AWAY, defender_pos, bearing(defender_pos, ball)),
                  spawn_robot(2, Team::AWAY, goalie_pos, bearing(goalie_pos, ball))},
                 ball);

  TeamRuntime runtime(cfg, policies, Team::HOME, enabled);
  runtime.begin_episode(ep.world);

  const double timeout = cfg.reward.episode_timeout;
  while (true) {
    auto decisions = runtime.tick(ep.world, ep.sim, ep.commands);
    ep.commands[1] = scripted_defender(ep.world, 1, cfg, /*weakened=*/true);
    ep.commands[2] = scripted_goalie(ep.world, 2, cfg, /*weakened=*/true);
    ep.step();
    if (trace) trace->write_tick(ep.world, ep.events, decisions);

    if (has_event(ep.events, SimEventKind::GOAL_HOME))
      return {true, ep.elapsed, TerminalKind::GOAL};
    const TerminalKind term = is_terminal(ep.world, ep.events, ep.elapsed, cfg);
    if (term != TerminalKind::RUNNING) return {false, ep.elapsed, term};
    if (ep.elapsed >= timeout) return {false, ep.elapsed, TerminalKind::TIMEOUT};
  }
}

EpisodeOutcome fidelity_episode(const Config& cfg, const ActorCritic& near_goal,
                                Fidelity eval_fidelity, bool with_defender,
                                std::uint64_t episode_seed, TraceWriter* trace) {
  Rng rng = Rng::stream(episode_seed, Rng::tag("spawn"));
  const Rect box = cfg.field.opposing_goal_box(Team::HOME);
  const Vec2 goal = cfg.field.opponent_goal_center(Team::HOME);

  const Vec2 ball{rng.uniform(box.lo.x + 0.10, box.hi.x - 0.15),
                  rng.uniform(box.lo.y + 0.10, box.hi.y - 0.10)};
  const Vec2 to_goal = (goal - ball).normalized();
  const Vec2 attacker_pos = ball - to_goal * 0.28;
  const Vec2 goalie_pos = box.clamp(ball + to_goal * 0.5);

  std::vector<RobotState> robots{
      spawn_robot(0, Team::HOME, attacker_pos, bearing(attacker_pos, ball)),
      spawn_robot(1, Team::AWAY, goalie_pos, bearing(goalie_pos, ball))};
  if (with_defender) {
    const Vec2 defender_pos{box.lo.x - 0.3, std::clamp(ball.y, -1.5, 1.5)};
    robots.push_back(spawn_robot(2, Team::AWAY, defender_pos, bearing(defender_pos, ball)));
  }

  EpisodeLoop ep(cfg, eval_fidelity, Rng::stream(episode_seed, Rng::tag("sim")).next_u64(),
                 std::move(robots), ball);

  const PolicySpec spec = PolicySpec::of(PolicyName::NEAR_GOAL);
  ActionDecoder decoder(spec);
  decoder.reset(ep.world, 0, cfg);
  std::vector<double> mean(spec.act_dim);

  while (true) {
    if (ep.world.robot(0).upright) {
      const std::vector<double> obs =
          build_observation(spec, ep.world, 0, std::nullopt, cfg, &ep.sim);
      near_goal.actor_mean(obs, mean);
      for (double& m : mean) m = std::clamp(m, -1.0, 1.0);
      ep.commands[0] = decoder.decode(mean, ep.world.robot(0).pose, cfg);
    } else {
      ep.commands[0] = Stand{};
    }
    ep.commands[1] = scripted_goalie(ep.world, 1, cfg, /*weakened=*/true);
    if (with_defender) ep.commands[2] = scripted_defender(ep.world, 2, cfg, /*weakened=*/true);
    ep.step();
    if (trace) trace->write_tick(ep.world, ep.events, {});

    if (has_event(ep.events, SimEventKind::GOAL_HOME))
      return {true, ep.elapsed, TerminalKind::GOAL};
    const TerminalKind term = is_terminal(ep.world, ep.events, ep.elapsed, cfg);
    if (term != TerminalKind::RUNNING) return {false, ep.elapsed, term};
  }
}

EpisodeOutcome dribble_episode(const Config& cfg, const ActorCritic& net, PolicyName policy,
                               std::uint64_t episode_seed, TraceWriter* trace) {
  Rng rng = Rng::stream(episode_seed, Rng::tag("spawn"));
  const Vec2 goal = cfg.field.opponent_goal_center(Team::HOME);

  const Vec2 attacker_pos{-1.2, rng.uniform(-1.0, 1.0)};
  const Vec2 ball = attacker_pos + Vec2{0.25, 0.0};
  const Vec2 mid = (ball + goal) * 0.5;
  const Vec2 defender_pos = mid + (ball - mid).normalized() * 0.5;
  const double defender_line = defender_pos.x;

  EpisodeLoop ep(cfg, Fidelity::LOW, Rng::stream(episode_seed, Rng::tag("sim")).next_u64(),
                 {spawn_robot(0, Team::HOME, attacker_pos, 0.0),
                  spawn_robot(1, Team::AWAY, defender_pos, bearing(defender_pos, ball))},
                 ball);

  const PolicySpec spec = PolicySpec::of(policy);
  ActionDecoder decoder(spec);
  decoder.reset(ep.world, 0, cfg);
  std::vector<double> mean(spec.act_dim);

  double control_lost_for = 0.0;
  const double dt = cfg.sim.dt;
  while (true) {
    const std::vector<double> obs =
        build_observation(spec, ep.world, 0, std::nullopt, cfg, &ep.sim);
    net.actor_mean(obs, mean);
    for (double& m : mean) m = std::clamp(m, -1.0, 1.0);
    ep.commands[0] = decoder.decode(mean, ep.world.robot(0).pose, cfg);
    ep.commands[1] = scripted_defender(ep.world, 1, cfg, /*weakened=*/true);
    ep.step();
    if (trace) trace->write_tick(ep.world, ep.events, {});

    const double agent_ball =
        (ep.world.robot(0).pose.position() - ep.world.ball.position).norm();
    if (ep.world.ball.position.x > defender_line + 0.5 && agent_ball <= 1.5)
      return {true, ep.elapsed, TerminalKind::RUNNING};

    control_lost_for = agent_ball > 1.5 ? control_lost_for + dt : 0.0;
    if (control_lost_for >= 5.0) return {false, ep.elapsed, TerminalKind::TIMEOUT};

    const TerminalKind term = is_terminal(ep.world, ep.events, ep.elapsed, cfg);
    if (term != TerminalKind::RUNNING) return {false, ep.elapsed, term};
  }
}

EpisodeOutcome walktime_episode(const Config& cfg, const ActorCritic* ball_duel,
                                std::uint64_t episode_seed, TraceWriter* trace) {
  Rng rng = Rng::stream(episode_seed, Rng::tag("spawn"));
  const Rect inner{{-cfg.field.half_length() + 0.25, -cfg.field.half_width() + 0.25},
                   {cfg.field.half_length() - 0.25, cfg.field.half_width() - 0.25}};

  // 4 m of ground to cover: start 4.25 m out, arrive within 0.25 m.
  const double kTravel = 4.25;
  Vec2 start{-3.9, 0.0};
  Vec2 target;
  for (int tries = 0;; ++tries) {
    start.y = rng.uniform(-2.2, 2.2);
    const double ang = rng.uniform(-0.5, 0.5);
    target = start + unit_from_angle(ang) * kTravel;
    if (inner.contains(target)) break;
    if (tries > 64) {
      target = start + Vec2{kTravel, 0.0};
      break;
    }
  }
  const Vec2 parked_ball{-4.25, start.y >= 0.0 ? -2.75 : 2.75};

  EpisodeLoop ep(cfg, Fidelity::LOW, Rng::stream(episode_seed, Rng::tag("sim")).next_u64(),
                 {spawn_robot(0, Team::HOME, start, rng.uniform(-M_PI, M_PI))},
                 parked_ball);

  const PolicySpec spec = PolicySpec::of(PolicyName::BALL_DUEL);
  ActionDecoder decoder(spec);
  std::vector<double> mean(spec.act_dim);

  while (true) {
    if (ball_duel) {
      // Phantom ball at the target: the velocity policy's attractor.
      WorldState phantom = ep.world;
      phantom.ball.position = target;
      phantom.ball.velocity = {};
      phantom.ball.history = {target, target, target};
      const std::vector<double> obs =
          build_observation(spec, phantom, 0, std::nullopt, cfg, nullptr);
      ball_duel->actor_mean(obs, mean);
      for (double& m : mean) m = std::clamp(m, -1.0, 1.0);
      ep.commands[0] = decoder.decode(mean, ep.world.robot(0).pose, cfg);
    } else {
      ep.commands[0] = WalkToPoint{target, bearing(ep.world.robot(0).pose.position(), target)};
    }
    ep.step();
    if (trace) trace->write_tick(ep.world, ep.events, {});

    if ((ep.world.robot(0).pose.position() - target).norm() <= 0.25)
      return {true, ep.elapsed, TerminalKind::RUNNING};
    if (ep.elapsed >= cfg.reward.episode_timeout)
      return {false, ep.elapsed, TerminalKind::TIMEOUT};
  }
}

EvalReport run_decomposition(const Config& cfg, const PolicySet& policies, int episodes,
                             std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (!policies.has_all())
    throw std::runtime_error("decomposition experiment requires all four policy weights");

  EvalReport report;
  report.experiment = to_string(ExperimentName::DECOMPOSITION_1V2);
  report.seed = seed;
  report.episodes_per_condition = episodes;
  report.config_json = config_dump(cfg);
  for (PolicyName p : kAllPolicies) {
    const auto& src = policies.sources[static_cast<std::size_t>(p)];
    if (!src.empty()) report.weight_hashes[to_string(p)] = sha256_file(src);
  }

  struct Cond {
    const char* name;
    PolicyMask mask;
  };
  const Cond conds[] = {
      {"full_suite", {true, true, true, true}},
      {"no_mid_field", {false, true, true, true}},
      {"no_near_goal", {true, true, false, true}},
      {"no_ball_duel", {true, false, true, true}},
  };
  for (const auto& c : conds) {
    auto outcomes = run_episodes(episodes, [&](int i) {
      return decomposition_episode(
          cfg, policies, c.mask,
          experiment_episode_seed(ExperimentName::DECOMPOSITION_1V2, c.name, seed, i));
    });
    report.conditions.push_back(summarize(c.name, outcomes, seed));
  }
  return report;
}

EvalReport run_fidelity(const Config& cfg, const ActorCritic& low_trained,
                        const ActorCritic& high_trained, bool with_defender, int episodes,
                        std::uint64_t seed, std::map<std::string, std::string> weight_hashes) {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  EvalReport report;
  report.experiment = to_string(ExperimentName::FIDELITY_NEARGOAL);
  report.seed = seed;
  report.episodes_per_condition = episodes;
  report.config_json = config_dump(cfg);
  report.weight_hashes = std::move(weight_hashes);

  struct Cond {
    const char* name;
    const ActorCritic* net;
    Fidelity eval_fid;
  };
  const Cond conds[] = {
      {"train_LOW_eval_LOW", &low_trained, Fidelity::LOW},
      {"train_HIGH_eval_LOW", &high_trained, Fidelity::LOW},
      {"train_LOW_eval_HIGH", &low_trained, Fidelity::HIGH},
      {"train_HIGH_eval_HIGH", &high_trained, Fidelity::HIGH},
  };
  for (const auto& c : conds) {
    auto outcomes = run_episodes(episodes, [&](int i) {
      // Same episode stream across conditions: matched opponents and spawns.
      return fidelity_episode(
          cfg, *c.net, c.eval_fid, with_defender,
          experiment_episode_seed(ExperimentName::FIDELITY_NEARGOAL, c.name, seed, i));
    });
    report.conditions.push_back(summarize(c.name, outcomes, seed));
  }
  return report;
}

EvalReport run_actionspace_dribble(const Config& cfg, const ActorCritic& ball_duel,
                                   const ActorCritic& mid_field, int episodes,
                                   std::uint64_t seed,
                                   std::map<std::string, std::string> weight_hashes) {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  EvalReport report;
  report.experiment = to_string(ExperimentName::ACTIONSPACE_DRIBBLE);
  report.seed = seed;
  report.episodes_per_condition = episodes;
  report.config_json = config_dump(cfg);
  report.weight_hashes = std::move(weight_hashes);

  auto velocity = run_episodes(episodes, [&](int i) {
    return dribble_episode(
        cfg, ball_duel, PolicyName::BALL_DUEL,
        experiment_episode_seed(ExperimentName::ACTIONSPACE_DRIBBLE, "", seed, i));
  });
  report.conditions.push_back(summarize("walk_at_relative_speed", velocity, seed));

  auto point = run_episodes(episodes, [&](int i) {
    return dribble_episode(
        cfg, mid_field, PolicyName::MID_FIELD,
        experiment_episode_seed(ExperimentName::ACTIONSPACE_DRIBBLE, "", seed, i));
  });
  report.conditions.push_back(summarize("walk_to_point", point, seed));
  return report;
}

EvalReport run_actionspace_walktime(const Config& cfg, const ActorCritic& ball_duel,
                                    int episodes, std::uint64_t seed,
                                    std::map<std::string, std::string> weight_hashes) {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  EvalReport report;
  report.experiment = to_string(ExperimentName::ACTIONSPACE_WALKTIME);
  report.seed = seed;
  report.episodes_per_condition = episodes;
  report.config_json = config_dump(cfg);
  report.weight_hashes = std::move(weight_hashes);

  auto point = run_episodes(episodes, [&](int i) {
    return walktime_episode(
        cfg, nullptr, experiment_episode_seed(ExperimentName::ACTIONSPACE_WALKTIME, "", seed, i));
  });
  report.conditions.push_back(summarize("walk_to_point", point, seed));

  auto velocity = run_episodes(episodes, [&](int i) {
    return walktime_episode(
        cfg, &ball_duel,
        experiment_episode_seed(ExperimentName::ACTIONSPACE_WALKTIME, "", seed, i));
  });
  report.conditions.push_back(summarize("walk_at_relative_speed", velocity, seed));
  return report;
}

}  // namespace pitchlab
