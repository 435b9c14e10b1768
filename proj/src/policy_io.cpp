#include "pitchlab/policy_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace pitchlab {

const char* to_string(PolicyName p) {
  switch (p) {
    case PolicyName::MID_FIELD: return "MID_FIELD";
    case PolicyName::BALL_DUEL: return "BALL_DUEL";
    case PolicyName::NEAR_GOAL: return "NEAR_GOAL";
    case PolicyName::POSITIONING: return "POSITIONING";
  }
  return "?";
}

PolicyName policy_from_string(const std::string& s) {
  for (PolicyName p : kAllPolicies)
    if (s == to_string(p)) return p;
  throw std::invalid_argument("unknown policy: " + s);
}

PolicySpec PolicySpec::of(PolicyName name) {
  switch (name) {
    case PolicyName::MID_FIELD:
      return {name, 24, 1, SkillBinding::KICK_ANGLE, 0.2};
    case PolicyName::BALL_DUEL:
      return {name, 24, 3, SkillBinding::VELOCITY, 0.2};
    case PolicyName::NEAR_GOAL:
      return {name, 12, 3, SkillBinding::VELOCITY, 0.2};
    case PolicyName::POSITIONING:
      return {name, 26, 4, SkillBinding::VELOCITY_WITH_STAND, 0.2};
  }
  throw std::invalid_argument("bad policy");
}

namespace {

constexpr const char* kBallDesc = "egocentric ball position (observed; noisy under HIGH)";
constexpr const char* kCanKickDesc = "can-kick one-hot: (1,0)=no, (0,1)=yes";
constexpr const char* kGoalCenterDesc = "egocentric opponent goal center";
constexpr const char* kPostsDesc =
    "egocentric goalposts: opponent +y, opponent -y, own +y, own -y";
constexpr const char* kOppPostsDesc = "egocentric opponent goalposts: +y then -y";
constexpr const char* kSidesDesc =
    "signed distances to boundary lines: opponent goal line, own goal line, "
    "attacking-left side, attacking-right side";
constexpr const char* kHistoryDesc =
    "egocentric last 3 ball positions, oldest first (newest equals current true position)";
constexpr const char* kStrategyDesc = "egocentric strategy position";
constexpr const char* kDefendersDesc =
    "egocentric opponent positions, id order, 2 slots padded with (-2,-2)";

}  // namespace

std::vector<LayoutEntry> observation_layout(PolicyName p) {
  std::vector<LayoutEntry> out;
  int off = 0;
  auto add = [&](const char* name, int size, const char* desc) {
    out.push_back({name, off, size, desc});
    off += size;
  };
  switch (p) {
    case PolicyName::MID_FIELD:
      add("ball", 2, kBallDesc);
      add("can_kick", 2, kCanKickDesc);
      add("goal_center", 2, kGoalCenterDesc);
      add("goalposts", 8, kPostsDesc);
      add("field_sides", 4, kSidesDesc);
      add("ball_history", 6, kHistoryDesc);
      break;
    case PolicyName::BALL_DUEL:
      add("ball", 2, kBallDesc);
      add("can_kick", 2, kCanKickDesc);
      add("closest_teammate_to_goal", 2, "egocentric teammate closest to opponent goal");
      add("goalposts", 8, kPostsDesc);
      add("field_sides", 4, kSidesDesc);
      add("ball_history", 6, kHistoryDesc);
      break;
    case PolicyName::NEAR_GOAL:
      add("ball", 2, kBallDesc);
      add("opponent_goalposts", 4, kOppPostsDesc);
      add("ball_history", 6, kHistoryDesc);
      break;
    case PolicyName::POSITIONING:
      add("ball", 2, kBallDesc);
      add("strategy_position", 2, kStrategyDesc);
      add("defenders", 4, kDefendersDesc);
      add("goalposts", 8, kPostsDesc);
      add("field_sides", 4, kSidesDesc);
      add("ball_history", 6, kHistoryDesc);
      break;
  }
  return out;
}

std::string describe_layouts(bool as_json) {
  if (as_json) {
    nlohmann::json j;
    j["normalization"] = "positions divided by field half-length";
    j["action_clip"] = "raw actions clipped to [-1, 1]";
    for (PolicyName p : kAllPolicies) {
      const PolicySpec spec = PolicySpec::of(p);
      nlohmann::json jp;
      jp["obs_dim"] = spec.obs_dim;
      jp["act_dim"] = spec.act_dim;
      switch (spec.binding) {
        case SkillBinding::KICK_ANGLE:
          jp["action"] = "raw[0]*delta_theta_clip added to persistent desired kick angle "
                         "(walk-and-kick skill)";
          jp["delta_theta_clip"] = spec.delta_theta_clip;
          break;
        case SkillBinding::VELOCITY:
          jp["action"] = "egocentric velocity: raw[0]*vmax, raw[1]*vmax, raw[2]*omega_max";
          break;
        case SkillBinding::VELOCITY_WITH_STAND:
          jp["action"] = "egocentric velocity as BALL_DUEL; raw[3] > 0 forces Stand";
          break;
      }
      for (const auto& e : observation_layout(p)) {
        jp["observation"].push_back(
            {{"name", e.name}, {"offset", e.offset}, {"size", e.size}, {"doc", e.description}});
      }
      j["policies"][to_string(p)] = jp;
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "Observation/action layouts (positions normalized by field half-length)\n";
  for (PolicyName p : kAllPolicies) {
    const PolicySpec spec = PolicySpec::of(p);
    os << "\n" << to_string(p) << "  obs_dim=" << spec.obs_dim << "  act_dim=" << spec.act_dim
       << "\n";
    for (const auto& e : observation_layout(p)) {
      os << "  [" << e.offset << ".." << e.offset + e.size - 1 << "]  " << e.name << ": "
         << e.description << "\n";
    }
  }
  return os.str();
}

Vec2 closest_teammate_to_goal(const WorldState& world, int observer_id, const Config& cfg) {
  const RobotState& self = world.robot(observer_id);
  const Vec2 goal = cfg.field.opponent_goal_center(self.team);
  const RobotState* best = nullptr;
  double best_dist = 0.0;
  for (const auto& r : world.robots) {
    if (r.id == observer_id || r.team != self.team) continue;
    const double d = (r.pose.position() - goal).norm();
    if (!best || d < best_dist || (d == best_dist && r.id < best->id)) {
      best = &r;
      best_dist = d;
    }
  }
  return best ? best->pose.position() : self.pose.position();
}

std::vector<double> build_observation(const PolicySpec& spec, const WorldState& world,
                                      int robot_id, std::optional<Vec2> strategy_position,
                                      const Config& cfg, Simulator* sim) {
  const RobotState& self = world.robot(robot_id);
  if (spec.name == PolicyName::POSITIONING && !strategy_position)
    throw MissingStrategyPosition();

  const double norm = 1.0 / cfg.field.half_length();
  std::vector<double> obs;
  obs.reserve(spec.obs_dim);

  auto push_point = [&](Vec2 ego) {
    obs.push_back(ego.x * norm);
    obs.push_back(ego.y * norm);
  };
  auto push_global = [&](Vec2 global) { push_point(to_egocentric(self.pose, global)); };

  // Ball: observed (noisy under HIGH) when a simulator is available.
  const Vec2 ego_ball =
      sim ? sim->observe_ball(world, robot_id) : to_egocentric(self.pose, world.ball.position);

  auto push_posts = [&] {
    for (Vec2 post : cfg.field.goalposts(self.team)) push_global(post);
  };
  auto push_sides = [&] {
    const double s = attack_sign(self.team);
    const double hl = cfg.field.half_length();
    const double hw = cfg.field.half_width();
    obs.push_back((hl - s * self.pose.x) * norm);  // to opponent goal line
    obs.push_back((hl + s * self.pose.x) * norm);  // to own goal line
    obs.push_back((hw - s * self.pose.y) * norm);  // to attacking-left side line
    obs.push_back((hw + s * self.pose.y) * norm);  // to attacking-right side line
  };
  auto push_history = [&] {
    for (Vec2 p : world.ball.history) push_global(p);
  };

  switch (spec.name) {
    case PolicyName::MID_FIELD:
      push_point(ego_ball);
      for (double v : can_kick_one_hot(world, robot_id, cfg)) obs.push_back(v);
      push_global(cfg.field.opponent_goal_center(self.team));
      push_posts();
      push_sides();
      push_history();
      break;
    case PolicyName::BALL_DUEL:
      push_point(ego_ball);
      for (double v : can_kick_one_hot(world, robot_id, cfg)) obs.push_back(v);
      push_global(closest_teammate_to_goal(world, robot_id, cfg));
      push_posts();
      push_sides();
      push_history();
      break;
    case PolicyName::NEAR_GOAL: {
      push_point(ego_ball);
      const auto posts = cfg.field.goalposts(self.team);
      push_global(posts[0]);
      push_global(posts[1]);
      push_history();
      break;
    }
    case PolicyName::POSITIONING: {
      push_point(ego_ball);
      push_global(*strategy_position);
      int slots = 0;
      std::vector<const RobotState*> opponents;
      for (const auto& r : world.robots)
        if (r.team != self.team) opponents.push_back(&r);
      std::sort(opponents.begin(), opponents.end(),
                [](const RobotState* a, const RobotState* b) { return a->id < b->id; });
      for (const RobotState* r : opponents) {
        if (slots == 2) break;
        push_global(r->pose.position());
        ++slots;
      }
      for (; slots < 2; ++slots) {
        obs.push_back(-2.0);
        obs.push_back(-2.0);
      }
      push_posts();
      push_sides();
      push_history();
      break;
    }
  }

  return obs;
}

void ActionDecoder::reset(const WorldState& world, int robot_id, const Config& cfg) {
  const RobotState& self = world.robot(robot_id);
  const Vec2 to_goal = cfg.field.opponent_goal_center(self.team) - world.ball.position;
  desired_kick_angle_ = std::atan2(to_goal.y, to_goal.x);
}

SkillCommand ActionDecoder::decode(std::span<const double> raw, const Pose2D& /*robot_pose*/,
                                   const Config& cfg) {
  std::array<double, 4> a{};
  for (int i = 0; i < spec_.act_dim && i < static_cast<int>(raw.size()); ++i)
    a[i] = std::clamp(raw[i], -1.0, 1.0);

  switch (spec_.binding) {
    case SkillBinding::KICK_ANGLE:
      desired_kick_angle_ = wrap_angle(desired_kick_angle_ + a[0] * spec_.delta_theta_clip);
      return WalkAndKick{desired_kick_angle_};
    case SkillBinding::VELOCITY_WITH_STAND:
      if (a[3] > 0.0) return Stand{};
      [[fallthrough]];
    case SkillBinding::VELOCITY:
      return WalkAtVelocity{a[0] * cfg.sim.max_linear_speed, a[1] * cfg.sim.max_linear_speed,
                            a[2] * cfg.sim.max_angular_speed};
  }
  return Stand{};
}

}  // namespace pitchlab
