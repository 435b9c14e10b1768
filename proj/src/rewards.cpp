#include "pitchlab/rewards.hpp"

#include <algorithm>
#include <cmath>

namespace pitchlab {

const char* to_string(TerminalKind k) {
  switch (k) {
    case TerminalKind::RUNNING: return "RUNNING";
    case TerminalKind::GOAL: return "GOAL";
    case TerminalKind::OUT_OF_BOUNDS: return "OUT_OF_BOUNDS";
    case TerminalKind::TIMEOUT: return "TIMEOUT";
  }
  return "?";
}

const char* to_string(ScenarioName s) {
  switch (s) {
    case ScenarioName::BALL_DUEL_2V0: return "BALL_DUEL_2V0";
    case ScenarioName::MIDFIELD_1V0: return "MIDFIELD_1V0";
    case ScenarioName::NEARGOAL_1V0: return "NEARGOAL_1V0";
    case ScenarioName::POSITIONING: return "POSITIONING";
    case ScenarioName::TOY_REACH_1V0: return "TOY_REACH_1V0";
  }
  return "?";
}

ScenarioName scenario_from_string(const std::string& s) {
  for (ScenarioName n : {ScenarioName::BALL_DUEL_2V0, ScenarioName::MIDFIELD_1V0,
                         ScenarioName::NEARGOAL_1V0, ScenarioName::POSITIONING,
                         ScenarioName::TOY_REACH_1V0})
    if (s == to_string(n)) return n;
  throw std::invalid_argument("unknown scenario: " + s);
}

ScenarioName default_scenario(PolicyName p) {
  switch (p) {
    case PolicyName::MID_FIELD: return ScenarioName::MIDFIELD_1V0;
    case PolicyName::BALL_DUEL: return ScenarioName::BALL_DUEL_2V0;
    case PolicyName::NEAR_GOAL: return ScenarioName::NEARGOAL_1V0;
    case PolicyName::POSITIONING: return ScenarioName::POSITIONING;
  }
  throw UnknownPolicy();
}

PolicyName scenario_policy(ScenarioName s) {
  switch (s) {
    case ScenarioName::BALL_DUEL_2V0: return PolicyName::BALL_DUEL;
    case ScenarioName::MIDFIELD_1V0: return PolicyName::MID_FIELD;
    case ScenarioName::NEARGOAL_1V0: return PolicyName::NEAR_GOAL;
    case ScenarioName::POSITIONING: return PolicyName::POSITIONING;
    case ScenarioName::TOY_REACH_1V0: return PolicyName::BALL_DUEL;
  }
  throw std::invalid_argument("bad scenario");
}

Fidelity scenario_fidelity(ScenarioName s) {
  // Near-goal trains in the high-fidelity profile; everything else in LOW.
  return s == ScenarioName::NEARGOAL_1V0 ? Fidelity::HIGH : Fidelity::LOW;
}

namespace {

double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

bool goal_for(Team team, const std::vector<SimEvent>& events) {
  return has_event(events, team == Team::HOME ? SimEventKind::GOAL_HOME
                                              : SimEventKind::GOAL_AWAY);
}

}  // namespace

double reward(PolicyName policy, const WorldState& prev, const WorldState& now,
              const std::vector<SimEvent>& events, const Config& cfg, int agent_id,
              std::optional<Vec2> strategy_position) {
  const RewardConfig& rw = cfg.reward;
  const RobotState& agent = now.robot(agent_id);
  const RobotState& agent_prev = prev.robot(agent_id);
  const Vec2 goal = cfg.field.opponent_goal_center(agent.team);
  const bool scored = goal_for(agent.team, events);

  const double d_ball_goal_prev = dist(prev.ball.position, goal);
  const double d_ball_goal_now = dist(now.ball.position, goal);
  const double ball_to_goal = d_ball_goal_prev - d_ball_goal_now;

  switch (policy) {
    case PolicyName::BALL_DUEL: {
      const double to_ball = dist(agent_prev.pose.position(), prev.ball.position) -
                             dist(agent.pose.position(), now.ball.position);
      return rw.w_to_ball * to_ball + rw.w_ball_to_goal * ball_to_goal +
             (scored ? rw.r_goal : 0.0);
    }
    case PolicyName::MID_FIELD: {
      double r = rw.w_ball_to_goal * ball_to_goal + (scored ? rw.r_goal : 0.0);
      if (has_event(events, SimEventKind::OUT_OF_BOUNDS)) r += rw.r_oob;
      return r;
    }
    case PolicyName::NEAR_GOAL: {
      double r = rw.w_ball_to_goal * ball_to_goal + (scored ? rw.r_goal : 0.0);
      if (d_ball_goal_now > rw.far_from_goal_radius) r += rw.r_ball_far_from_goal;
      return r;
    }
    case PolicyName::POSITIONING: {
      if (!strategy_position) throw MissingStrategyPosition();
      const double to_strategy = dist(agent_prev.pose.position(), *strategy_position) -
                                 dist(agent.pose.position(), *strategy_position);
      double r = rw.w_to_strategy * to_strategy;
      const Vec2 ego_ball = to_egocentric(agent.pose, now.ball.position);
      if (std::abs(std::atan2(ego_ball.y, ego_ball.x)) <= 1.0) r += rw.r_ball_in_view_per_step;
      for (const auto& other : now.robots) {
        if (other.team != agent.team &&
            dist(other.pose.position(), agent.pose.position()) < 0.5) {
          r += rw.w_opponent_proximity;
          break;
        }
      }
      return r;
    }
  }
  throw UnknownPolicy();
}

TerminalKind is_terminal(const WorldState& /*world*/, const std::vector<SimEvent>& events,
                         double elapsed, const Config& cfg) {
  if (has_event(events, SimEventKind::GOAL_HOME) || has_event(events, SimEventKind::GOAL_AWAY))
    return TerminalKind::GOAL;
  if (has_event(events, SimEventKind::OUT_OF_BOUNDS)) return TerminalKind::OUT_OF_BOUNDS;
  if (elapsed >= cfg.reward.episode_timeout) return TerminalKind::TIMEOUT;
  return TerminalKind::RUNNING;
}

namespace {

FieldGeometry toy_field() {
  FieldGeometry f;
  f.length = 4.0;
  f.width = 3.0;
  f.goal_width = 1.0;
  f.goal_box_depth = 0.8;
  f.goal_box_width = 1.8;
  return f;
}

RobotState make_robot(int id, Team team, Vec2 pos, double theta) {
  RobotState r;
  r.id = id;
  r.team = team;
  r.pose = {pos.x, pos.y, theta};
  return r;
}

Vec2 sample_in(Rng& rng, double x0, double x1, double y0, double y1) {
  return {rng.uniform(x0, x1), rng.uniform(y0, y1)};
}

Vec2 sample_apart(Rng& rng, double x0, double x1, double y0, double y1,
                  const std::vector<Vec2>& others, double min_dist) {
  Vec2 p = sample_in(rng, x0, x1, y0, y1);
  for (int tries = 0; tries < 32; ++tries) {
    bool ok = true;
    for (Vec2 o : others)
      if ((p - o).norm() < min_dist) ok = false;
    if (ok) break;
    p = sample_in(rng, x0, x1, y0, y1);
  }
  return p;
}

}  // namespace

Config scenario_config(ScenarioName name, const Config& base) {
  Config cfg = base;
  if (name == ScenarioName::TOY_REACH_1V0) {
    cfg.field = toy_field();
    cfg.reward.episode_timeout = 15.0;
  }
  return cfg;
}

Scenario::Scenario(ScenarioName name, const Config& cfg)
    : name_(name), cfg_(scenario_config(name, cfg)) {}

std::optional<double> Scenario::timeout_override() const {
  if (name_ == ScenarioName::TOY_REACH_1V0) return 15.0;
  return std::nullopt;
}

std::optional<FieldGeometry> Scenario::field_override() const {
  if (name_ == ScenarioName::TOY_REACH_1V0) return toy_field();
  return std::nullopt;
}

bool Scenario::scenario_terminal(const WorldState& world, const Config& /*cfg*/) const {
  if (name_ != ScenarioName::TOY_REACH_1V0) return false;
  return dist(world.robot(0).pose.position(), world.ball.position) <= 0.35;
}

WorldState Scenario::spawn(Rng& rng) {
  const FieldGeometry& f = cfg_.field;
  std::vector<RobotState> robots;
  Vec2 ball;

  switch (name_) {
    case ScenarioName::BALL_DUEL_2V0: {
      const Vec2 agent = sample_in(rng, -3.5, 0.5, -2.3, 2.3);
      const double theta = rng.uniform(-M_PI, M_PI);
      const Vec2 mate = sample_apart(rng, -3.5, 0.5, -2.3, 2.3, {agent}, 0.8);
      robots.push_back(make_robot(0, Team::HOME, agent, theta));
      robots.push_back(make_robot(1, Team::HOME, mate, rng.uniform(-M_PI, M_PI)));
      ball = sample_apart(rng, -2.5, 2.5, -2.3, 2.3, {agent, mate}, 0.4);
      break;
    }
    case ScenarioName::MIDFIELD_1V0: {
      const Vec2 agent = sample_in(rng, -3.5, 0.5, -2.3, 2.3);
      robots.push_back(make_robot(0, Team::HOME, agent, rng.uniform(-M_PI, M_PI)));
      ball = sample_apart(rng, -2.5, 2.5, -2.3, 2.3, {agent}, 0.4);
      break;
    }
    case ScenarioName::NEARGOAL_1V0: {
      const Rect box = f.opposing_goal_box(Team::HOME);
      ball = sample_in(rng, box.lo.x + 0.10, box.hi.x - 0.15, box.lo.y + 0.10, box.hi.y - 0.10);
      const double ang = rng.uniform(-M_PI, M_PI);
      const double d = rng.uniform(0.35, 0.9);
      Vec2 agent = ball + unit_from_angle(ang) * d;
      agent.x = std::clamp(agent.x, -f.half_length() + 0.3, f.half_length() - 0.25);
      agent.y = std::clamp(agent.y, -f.half_width() + 0.3, f.half_width() - 0.3);
      const Vec2 to_ball = ball - agent;
      robots.push_back(make_robot(0, Team::HOME, agent, std::atan2(to_ball.y, to_ball.x)));
      break;
    }
    case ScenarioName::POSITIONING: {
      const Vec2 agent = sample_in(rng, -4.0, -0.5, -2.3, 2.3);
      robots.push_back(make_robot(0, Team::HOME, agent, rng.uniform(-M_PI, M_PI)));
      for (int i = 0; i < 2; ++i) {
        const Vec2 p = sample_apart(rng, -3.0, 3.0, -2.3, 2.3, {agent}, 0.8);
        robots.push_back(make_robot(1 + i, Team::AWAY, p, rng.uniform(-M_PI, M_PI)));
        patrol_targets_[i] = sample_in(rng, -3.0, 3.0, -2.3, 2.3);
      }
      ball = sample_apart(rng, -3.0, 3.0, -2.3, 2.3, {agent}, 0.4);
      strategy_point_ = sample_in(rng, -3.5, 3.5, -2.5, 2.5);
      strategy_next_resample_ = 5.0;
      script_rng_ = Rng(rng.next_u64());
      break;
    }
    case ScenarioName::TOY_REACH_1V0: {
      const Vec2 agent = sample_in(rng, -1.5, 0.0, -1.2, 1.2);
      robots.push_back(make_robot(0, Team::HOME, agent, rng.uniform(-M_PI, M_PI)));
      ball = sample_apart(rng, -1.5, 1.5, -1.2, 1.2, {agent}, 0.5);
      break;
    }
  }

  WorldState w;
  w.robots = std::move(robots);
  w.ball.position = ball;
  w.ball.reset_history();
  w.dt = cfg_.sim.dt;
  return w;
}

void Scenario::scripted_commands(const WorldState& world, std::vector<SkillCommand>& commands) {
  commands.assign(world.robots.size(), Stand{});
  if (name_ == ScenarioName::POSITIONING) {
    for (int i = 0; i < 2; ++i) {
      const std::size_t idx = 1 + i;
      if (idx >= world.robots.size()) break;
      const RobotState& r = world.robots[idx];
      if ((r.pose.position() - patrol_targets_[i]).norm() < 0.2) {
        patrol_targets_[i] = sample_in(script_rng_, -3.0, 3.0, -2.3, 2.3);
      }
      const Vec2 to_t = patrol_targets_[i] - r.pose.position();
      commands[idx] = WalkToPoint{patrol_targets_[i], std::atan2(to_t.y, to_t.x)};
    }
  }
}

std::optional<Vec2> Scenario::strategy_position(const WorldState& /*world*/, double elapsed) {
  if (name_ != ScenarioName::POSITIONING) return std::nullopt;
  if (elapsed >= strategy_next_resample_) {
    strategy_point_ = sample_in(script_rng_, -3.5, 3.5, -2.5, 2.5);
    strategy_next_resample_ += 5.0;
  }
  return strategy_point_;
}

}  // namespace pitchlab
