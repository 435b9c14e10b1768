#include "pitchlab/skills.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace pitchlab {

namespace {

double footprint_circumradius(const FieldGeometry& f) {
  return std::hypot(f.robot_half_length, f.robot_half_width);
}

// Distance from point p to segment [a, b].
double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

struct Obstacle {
  Vec2 center;
  double radius;
  double along;  // distance from the walker, for nearest-first ordering
};

// Steering direction around a blocking disk: the tangent on the side the
// target naturally passes.
Vec2 tangent_direction(Vec2 pos, Vec2 target, const Obstacle& ob) {
  const Vec2 to_ob = ob.center - pos;
  const double d = to_ob.norm();
  if (d <= ob.radius) {
    // Inside the inflated disk; blend radially outward with progress
    // toward the target.
    const Vec2 out = (pos - ob.center).normalized();
    return (out + (target - pos).normalized() * 0.5).normalized();
  }
  const double beta = std::atan2(to_ob.y, to_ob.x);
  const double alpha = std::asin(std::min(1.0, ob.radius / d));
  const double side = to_ob.cross(target - pos) >= 0.0 ? 1.0 : -1.0;
  return unit_from_angle(beta + side * alpha);
}

WalkAtVelocity drive(const RobotState& self, Vec2 global_dir, double speed, double face,
                     const Config& cfg) {
  const Vec2 v_global = global_dir.normalized() * speed;
  const Vec2 v_ego = to_egocentric(Pose2D{0, 0, self.pose.theta}, v_global);
  const double err = wrap_angle(face - self.pose.theta);
  const double omega =
      std::clamp(cfg.skills.turn_gain * err, -cfg.sim.max_angular_speed, cfg.sim.max_angular_speed);
  return {v_ego.x, v_ego.y, omega};
}

}  // namespace

bool can_kick(const WorldState& world, int robot_id, const Config& cfg) {
  const RobotState& self = world.robot(robot_id);
  if (!self.upright) return false;
  const Vec2 ego = to_egocentric(self.pose, world.ball.position);
  const double reach = ego.norm() - cfg.field.robot_half_length;
  if (reach > cfg.sim.kick_range) return false;
  const double bearing = std::atan2(ego.y, ego.x);
  return std::abs(bearing) <= cfg.sim.kick_half_angle;
}

std::array<double, 2> can_kick_one_hot(const WorldState& world, int robot_id, const Config& cfg) {
  return can_kick(world, robot_id, cfg) ? std::array<double, 2>{0.0, 1.0}
                                        : std::array<double, 2>{1.0, 0.0};
}

WalkAtVelocity walk_to_point(const WorldState& world, int robot_id, Vec2 target, double face,
                             const Config& cfg) {
  const RobotState& self = world.robot(robot_id);
  const Vec2 pos = self.pose.position();
  const Vec2 to_target = target - pos;
  const double dist = to_target.norm();

  const double err = wrap_angle(face - self.pose.theta);
  const double omega =
      std::clamp(cfg.skills.turn_gain * err, -cfg.sim.max_angular_speed, cfg.sim.max_angular_speed);
  if (dist < 1e-9) return {0.0, 0.0, omega};

  // Nearest robot whose inflated footprint blocks the straight segment.
  const double block_radius = footprint_circumradius(cfg.field) + cfg.skills.obstacle_inflation;
  std::optional<Obstacle> blocker;
  for (const auto& other : world.robots) {
    if (other.id == robot_id) continue;
    const Vec2 c = other.pose.position();
    const double along = (c - pos).norm();
    if (along >= dist) continue;  // at or beyond the target
    if (segment_distance(c, pos, target) >= block_radius) continue;
    if (!blocker || along < blocker->along) blocker = Obstacle{c, block_radius, along};
  }

  const double speed =
      cfg.sim.max_linear_speed * std::min(1.0, dist / cfg.skills.arrival_radius);
  if (blocker) {
    return drive(self, tangent_direction(pos, target, *blocker), cfg.sim.max_linear_speed, face,
                 cfg);
  }
  return drive(self, to_target, speed, face, cfg);
}

Vec2 kick_approach_point(Vec2 ball, double kick_angle, const Config& cfg) {
  return ball - unit_from_angle(kick_angle) * (cfg.skills.approach_factor * cfg.sim.kick_range);
}

WalkAndKickPlan plan_walk_and_kick(const WorldState& world, int robot_id, double kick_angle,
                                   const Config& cfg) {
  kick_angle = wrap_angle(kick_angle);
  const RobotState& self = world.robot(robot_id);
  WalkAndKickPlan plan;
  plan.kick_angle = kick_angle;

  const bool aligned = std::abs(wrap_angle(kick_angle - self.pose.theta)) <= cfg.skills.align_tolerance;
  if (aligned && can_kick(world, robot_id, cfg)) {
    plan.kick_now = true;
    return plan;
  }

  const Vec2 approach = kick_approach_point(world.ball.position, kick_angle, cfg);
  const Vec2 pos = self.pose.position();

  // Keep the final approach from shoving the ball backward: when the ball
  // sits between the robot and the approach point, detour around it.
  const Vec2 ball = world.ball.position;
  const double ball_clearance =
      cfg.field.ball_radius + footprint_circumradius(cfg.field) + 0.05;
  const double seg_dist = segment_distance(ball, pos, approach);
  const bool ball_in_the_way = seg_dist < ball_clearance &&
                               (pos - ball).norm() > (approach - ball).norm() + 0.05;
  if (ball_in_the_way) {
    const Obstacle ob{ball, ball_clearance, (ball - pos).norm()};
    plan.move = drive(self, tangent_direction(pos, approach, ob), cfg.sim.max_linear_speed,
                      kick_angle, cfg);
    return plan;
  }

  plan.move = walk_to_point(world, robot_id, approach, kick_angle, cfg);
  return plan;
}

}  // namespace pitchlab
