#include "pitchlab/behavior.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

namespace pitchlab {

const char* to_string(SelectorRule r) {
  switch (r) {
    case SelectorRule::TEAMMATE_CLOSER: return "TEAMMATE_CLOSER";
    case SelectorRule::NEAR_GOAL_BOX: return "NEAR_GOAL_BOX";
    case SelectorRule::OPPONENT_NEAR_BALL: return "OPPONENT_NEAR_BALL";
    case SelectorRule::DEFAULT_MID_FIELD: return "DEFAULT_MID_FIELD";
    case SelectorRule::NONE_AVAILABLE: return "NONE_AVAILABLE";
  }
  return "?";
}

bool mask_enabled(const PolicyMask& mask, PolicyName p) {
  return mask[static_cast<std::size_t>(p)];
}

SelectorDecision select_raw(const WorldState& world, int self_id, const SelectorConfig& sel,
                            const FieldGeometry& field, Vec2 ball_estimate,
                            const PolicyMask& enabled) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const RobotState& self = world.robot(self_id);

  SelectorDecision d;
  d.self_ball_dist = (self.pose.position() - ball_estimate).norm();
  d.nearest_teammate_ball_dist = kInf;
  d.nearest_opponent_ball_dist = kInf;
  for (const auto& r : world.robots) {
    if (r.id == self_id) continue;
    const double dist = (r.pose.position() - ball_estimate).norm();
    if (r.team == self.team) {
      if (r.upright) d.nearest_teammate_ball_dist = std::min(d.nearest_teammate_ball_dist, dist);
    } else {
      d.nearest_opponent_ball_dist = std::min(d.nearest_opponent_ball_dist, dist);
    }
  }

  Rect box = field.opposing_goal_box(self.team);
  box.lo.x -= sel.near_goal_margin;
  box.lo.y -= sel.near_goal_margin;
  box.hi.x += sel.near_goal_margin;
  box.hi.y += sel.near_goal_margin;
  d.ball_in_opposing_box = box.contains(ball_estimate);

  if (d.nearest_teammate_ball_dist < d.self_ball_dist &&
      mask_enabled(enabled, PolicyName::POSITIONING)) {
    d.chosen = PolicyName::POSITIONING;
    d.rule_fired = SelectorRule::TEAMMATE_CLOSER;
    return d;
  }
  if (d.ball_in_opposing_box && d.self_ball_dist <= sel.near_ball_radius &&
      mask_enabled(enabled, PolicyName::NEAR_GOAL)) {
    d.chosen = PolicyName::NEAR_GOAL;
    d.rule_fired = SelectorRule::NEAR_GOAL_BOX;
    return d;
  }
  if (d.nearest_opponent_ball_dist <= sel.ball_duel_opponent_radius &&
      mask_enabled(enabled, PolicyName::BALL_DUEL)) {
    d.chosen = PolicyName::BALL_DUEL;
    d.rule_fired = SelectorRule::OPPONENT_NEAR_BALL;
    return d;
  }
  if (mask_enabled(enabled, PolicyName::MID_FIELD)) {
    d.chosen = PolicyName::MID_FIELD;
    d.rule_fired = SelectorRule::DEFAULT_MID_FIELD;
    return d;
  }
  d.chosen = std::nullopt;
  d.rule_fired = SelectorRule::NONE_AVAILABLE;
  return d;
}

SelectorDecision Selector::select(const WorldState& world, int self_id, Vec2 ball_estimate,
                                  const PolicyMask& enabled) {
  SelectorDecision raw = select_raw(world, self_id, sel_, field_, ball_estimate, enabled);
  State& st = states_[self_id];
  if (!st.initialized) {
    st.initialized = true;
    st.committed = raw.chosen;
    st.committed_rule = raw.rule_fired;
    st.pending.reset();
    st.pending_ticks = 0;
  } else if (raw.chosen == st.committed) {
    st.pending.reset();
    st.pending_ticks = 0;
  } else {
    if (st.pending == raw.chosen) {
      ++st.pending_ticks;
    } else {
      st.pending = raw.chosen;
      st.pending_ticks = 1;
    }
    if (st.pending_ticks >= std::max(1, sel_.hysteresis_ticks)) {
      st.committed = raw.chosen;
      st.committed_rule = raw.rule_fired;
      st.pending.reset();
      st.pending_ticks = 0;
    }
  }
  SelectorDecision out = raw;
  out.chosen = st.committed;
  out.rule_fired = st.committed_rule;
  return out;
}

void Selector::reset() { states_.clear(); }

namespace {

double bearing(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  return std::atan2(d.y, d.x);
}

// Clear toward the field center.
SkillCommand clear_kick(const WorldState& world) {
  return WalkAndKick{bearing(world.ball.position, Vec2{0.0, 0.0})};
}

}  // namespace

SkillCommand scripted_goalie(const WorldState& world, int goalie_id, const Config& cfg,
                             bool weakened) {
  const RobotState& self = world.robot(goalie_id);
  if (!weakened && can_kick(world, goalie_id, cfg)) return clear_kick(world);

  const Vec2 ball = world.ball.position;
  const Vec2 goal = cfg.field.goal_center(self.team);
  const Rect box = cfg.field.goal_box(self.team);
  const double front_x = self.team == Team::HOME ? box.hi.x : box.lo.x;
  // Team::HOME defends -x; its box front is the higher x edge.

  Vec2 target;
  const Vec2 dir = ball - goal;
  const double denom = dir.x;
  const bool ball_beyond_front =
      (self.team == Team::HOME) ? ball.x <= front_x : ball.x >= front_x;
  if (ball_beyond_front || std::abs(denom) < 1e-9) {
    // Ball already inside the box depth: hold 0.4 m goal-side of the ball.
    target = ball + (goal - ball).normalized() * 0.4;
  } else {
    const double t = (front_x - goal.x) / denom;
    target = goal + dir * t;
  }
  target = box.clamp(target);
  return WalkToPoint{target, bearing(self.pose.position(), ball)};
}

SkillCommand scripted_defender(const WorldState& world, int defender_id, const Config& cfg,
                               bool weakened) {
  const RobotState& self = world.robot(defender_id);
  if (!weakened && can_kick(world, defender_id, cfg)) return clear_kick(world);

  const Vec2 ball = world.ball.position;
  const Vec2 goal = cfg.field.goal_center(self.team);
  const Vec2 mid = (ball + goal) * 0.5;
  const Vec2 target = mid + (ball - mid).normalized() * 0.5;
  return WalkToPoint{target, bearing(self.pose.position(), ball)};
}

void PolicySet::set(PolicyName p, ActorCritic net, std::string source) {
  nets[static_cast<std::size_t>(p)] = std::move(net);
  sources[static_cast<std::size_t>(p)] = std::move(source);
}

const ActorCritic* PolicySet::get(PolicyName p) const {
  const auto& slot = nets[static_cast<std::size_t>(p)];
  return slot ? &*slot : nullptr;
}

bool PolicySet::has_all() const {
  for (const auto& n : nets)
    if (!n) return false;
  return true;
}

PolicySet PolicySet::from_dir(const std::string& dir, bool missing_ok) {
  PolicySet set;
  for (PolicyName p : kAllPolicies) {
    const std::string path = (std::filesystem::path(dir) / (std::string(to_string(p)) + ".plw"))
                                 .string();
    if (!std::filesystem::exists(path)) {
      if (missing_ok) continue;
      throw std::runtime_error("missing weights file: " + path);
    }
    set.set(p, load_weights_for(p, path), path);
  }
  return set;
}

TeamRuntime::TeamRuntime(const Config& cfg, const PolicySet& policies, Team team,
                         PolicyMask enabled, std::optional<SelectorConfig> selector_override)
    : cfg_(cfg),
      policies_(policies),
      team_(team),
      enabled_(enabled),
      selector_(selector_override.value_or(cfg.selector), cfg.field) {
  // A missing policy can never be selected.
  for (PolicyName p : kAllPolicies)
    if (!policies_.get(p)) enabled_[static_cast<std::size_t>(p)] = false;
}

ActionDecoder& TeamRuntime::decoder(int robot_id, PolicyName p) {
  auto& slot = decoders_[robot_id][static_cast<std::size_t>(p)];
  if (!slot) slot = std::make_unique<ActionDecoder>(PolicySpec::of(p));
  return *slot;
}

void TeamRuntime::begin_episode(const WorldState& world) {
  selector_.reset();
  decoders_.clear();
  for (const auto& r : world.robots) {
    if (r.team != team_) continue;
    for (PolicyName p : kAllPolicies)
      if (policies_.get(p)) decoder(r.id, p).reset(world, r.id, cfg_);
  }
}

std::vector<TeamRuntime::RobotDecision> TeamRuntime::tick(const WorldState& world, Simulator& sim,
                                                          std::vector<SkillCommand>& commands) {
  commands.resize(world.robots.size(), Stand{});
  std::vector<RobotDecision> log;

  for (std::size_t i = 0; i < world.robots.size(); ++i) {
    const RobotState& r = world.robots[i];
    if (r.team != team_ || !r.upright) continue;

    const Vec2 ego_ball = sim.observe_ball(world, r.id);
    const Vec2 ball_estimate = from_egocentric(r.pose, ego_ball);
    const SelectorDecision decision = selector_.select(world, r.id, ball_estimate, enabled_);
    log.push_back({r.id, decision});

    if (!decision.chosen) {
      commands[i] = Stand{};
      continue;
    }
    const PolicyName p = *decision.chosen;
    const ActorCritic* net = policies_.get(p);
    const PolicySpec spec = PolicySpec::of(p);

    // Deployment strategy position: support point halfway between the ball
    // estimate and our own goal.
    std::optional<Vec2> strategy;
    if (p == PolicyName::POSITIONING)
      strategy = (ball_estimate + cfg_.field.goal_center(team_)) * 0.5;

    const std::vector<double> obs =
        build_observation(spec, world, r.id, strategy, cfg_, &sim);
    std::vector<double> mean(spec.act_dim);
    net->actor_mean(obs, mean);
    for (double& m : mean) m = std::clamp(m, -1.0, 1.0);
    commands[i] = decoder(r.id, p).decode(mean, r.pose, cfg_);
  }
  return log;
}

}  // namespace pitchlab
