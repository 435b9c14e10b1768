#include "pitchlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace pitchlab {

namespace {

bool finite(double v) { return std::isfinite(v); }

bool command_is_finite(const SkillCommand& cmd) {
  if (const auto* v = std::get_if<WalkAtVelocity>(&cmd))
    return finite(v->vx) && finite(v->vy) && finite(v->omega);
  if (const auto* w = std::get_if<WalkToPoint>(&cmd))
    return finite(w->target.x) && finite(w->target.y) && finite(w->face);
  if (const auto* k = std::get_if<WalkAndKick>(&cmd)) return finite(k->kick_angle);
  return true;
}

struct Obb {
  Vec2 center;
  Vec2 axis_x;  // unit heading
  Vec2 axis_y;  // unit lateral
  double ex;    // half length along heading
  double ey;    // half width

  static Obb of(const RobotState& r, const FieldGeometry& f) {
    const Vec2 ax = unit_from_angle(r.pose.theta);
    return {r.pose.position(), ax, {-ax.y, ax.x}, f.robot_half_length, f.robot_half_width};
  }

  double projected_radius(Vec2 axis) const {
    return ex * std::abs(axis_x.dot(axis)) + ey * std::abs(axis_y.dot(axis));
  }
};

// Minimum translation vector pushing b away from a; zero when separated.
Vec2 obb_mtv(const Obb& a, const Obb& b) {
  const Vec2 d = b.center - a.center;
  double best_overlap = std::numeric_limits<double>::max();
  Vec2 best_axis;
  for (const Vec2 axis : {a.axis_x, a.axis_y, b.axis_x, b.axis_y}) {
    const double overlap = a.projected_radius(axis) + b.projected_radius(axis) -
                           std::abs(d.dot(axis));
    if (overlap <= 0.0) return {};
    if (overlap < best_overlap) {
      best_overlap = overlap;
      best_axis = d.dot(axis) >= 0.0 ? axis : -axis;
    }
  }
  return best_axis * best_overlap;
}

// Penetration vector pushing a circle out of an OBB; zero when separated.
Vec2 obb_circle_mtv(const Obb& box, Vec2 center, double radius) {
  const Vec2 d = center - box.center;
  const Vec2 local{d.dot(box.axis_x), d.dot(box.axis_y)};
  const Vec2 clamped{std::clamp(local.x, -box.ex, box.ex), std::clamp(local.y, -box.ey, box.ey)};
  if (clamped.x != local.x || clamped.y != local.y) {
    // Circle center outside the box.
    const Vec2 delta = local - clamped;
    const double dist = delta.norm();
    if (dist >= radius) return {};
    const Vec2 n_local = delta.normalized();
    const Vec2 n = box.axis_x * n_local.x + box.axis_y * n_local.y;
    return n * (radius - dist);
  }
  // Center inside: push along the axis with the smallest exit distance.
  const double exit_x = box.ex - std::abs(local.x);
  const double exit_y = box.ey - std::abs(local.y);
  if (exit_x < exit_y) {
    const double s = local.x >= 0.0 ? 1.0 : -1.0;
    return box.axis_x * (s * (exit_x + radius));
  }
  const double s = local.y >= 0.0 ? 1.0 : -1.0;
  return box.axis_y * (s * (exit_y + radius));
}

}  // namespace

const char* to_string(SimEventKind k) {
  switch (k) {
    case SimEventKind::GOAL_HOME: return "GOAL_HOME";
    case SimEventKind::GOAL_AWAY: return "GOAL_AWAY";
    case SimEventKind::OUT_OF_BOUNDS: return "OUT_OF_BOUNDS";
    case SimEventKind::FALL: return "FALL";
    case SimEventKind::KICK_EXECUTED: return "KICK_EXECUTED";
  }
  return "?";
}

bool has_event(const std::vector<SimEvent>& events, SimEventKind kind) {
  for (const auto& e : events)
    if (e.kind == kind) return true;
  return false;
}

Simulator::Simulator(const Config& cfg, Fidelity fidelity, std::uint64_t seed)
    : cfg_(cfg),
      fidelity_(fidelity),
      profile_(cfg.profile(fidelity)),
      seed_(seed),
      ball_stream_(Rng::stream(seed, Rng::tag("ball"))) {}

Rng& Simulator::robot_stream(int id) {
  auto it = robot_streams_.find(id);
  if (it == robot_streams_.end())
    it = robot_streams_.emplace(id, Rng::stream(seed_, Rng::tag("robot", id))).first;
  return it->second;
}

Rng& Simulator::obs_stream(int id) {
  auto it = obs_streams_.find(id);
  if (it == obs_streams_.end())
    it = obs_streams_.emplace(id, Rng::stream(seed_, Rng::tag("obs", id))).first;
  return it->second;
}

WorldState Simulator::make_world(std::vector<RobotState> robots, Vec2 ball_position) const {
  WorldState w;
  w.robots = std::move(robots);
  w.ball.position = ball_position;
  w.ball.reset_history();
  w.dt = cfg_.sim.dt;
  return w;
}

bool Simulator::check_fall(const RobotState& robot) {
  if (fidelity_ == Fidelity::LOW) return false;
  const double speed = robot.velocity.norm();
  const double p = profile_.fall_prob_per_step_at_max_speed *
                   std::min(1.0, speed / cfg_.sim.max_linear_speed);
  return robot_stream(robot.id).uniform() < p;
}

Vec2 Simulator::observe_ball(const WorldState& world, int observer_id) {
  const RobotState& r = world.robot(observer_id);
  Vec2 ego = to_egocentric(r.pose, world.ball.position);
  if (profile_.obs_ball_noise_std > 0.0) {
    Rng& rng = obs_stream(observer_id);
    ego.x += rng.normal(0.0, profile_.obs_ball_noise_std);
    ego.y += rng.normal(0.0, profile_.obs_ball_noise_std);
  }
  return ego;
}

SimEvent Simulator::resolve_kick(WorldState& world, int kicker_id, double desired_angle) {
  if (!can_kick(world, kicker_id, cfg_)) throw KickOutOfRange(kicker_id);
  double angle = wrap_angle(desired_angle);
  double speed = cfg_.sim.kick_speed;
  if (fidelity_ == Fidelity::HIGH) {
    Rng& rng = robot_stream(kicker_id);
    angle = wrap_angle(angle + rng.normal(0.0, profile_.kick_angle_noise_std));
    speed = std::max(0.0, speed * (1.0 + profile_.kick_speed_noise_frac * rng.normal()));
  }
  world.ball.velocity = unit_from_angle(angle) * speed;
  SimEvent ev{SimEventKind::KICK_EXECUTED, world.tick, kicker_id, {}};
  ev.detail["angle"] = angle;
  ev.detail["speed"] = speed;
  return ev;
}

void Simulator::integrate_robot(RobotState& r, const WalkAtVelocity& desired_ego, bool has_command,
                                std::vector<SimEvent>& events, std::int64_t tick) {
  const double dt = cfg_.sim.dt;
  if (!r.upright) {
    r.velocity = {};
    r.omega = 0.0;
    if (r.recovery_ticks_left > 0 && --r.recovery_ticks_left == 0) r.upright = true;
    return;
  }

  // Desired velocity in the global frame, clamped to configured maxima.
  Vec2 desired{};
  double desired_omega = 0.0;
  if (has_command) {
    desired = from_egocentric(Pose2D{0, 0, r.pose.theta}, {desired_ego.vx, desired_ego.vy});
    const double n = desired.norm();
    if (n > cfg_.sim.max_linear_speed) desired = desired * (cfg_.sim.max_linear_speed / n);
    desired_omega =
        std::clamp(desired_ego.omega, -cfg_.sim.max_angular_speed, cfg_.sim.max_angular_speed);
  }

  // First-order actuation lag (instant in LOW).
  const double tau = profile_.actuation_lag_tau;
  const double alpha = tau > 0.0 ? 1.0 - std::exp(-dt / tau) : 1.0;
  r.velocity += (desired - r.velocity) * alpha;
  r.omega += (desired_omega - r.omega) * alpha;

  if (fidelity_ == Fidelity::HIGH) {
    Rng& rng = robot_stream(r.id);
    if (profile_.velocity_noise_std > 0.0) {
      r.velocity.x += rng.normal(0.0, profile_.velocity_noise_std);
      r.velocity.y += rng.normal(0.0, profile_.velocity_noise_std);
    }
    const double n = r.velocity.norm();
    if (n > cfg_.sim.max_linear_speed) r.velocity = r.velocity * (cfg_.sim.max_linear_speed / n);

    const double p = profile_.fall_prob_per_step_at_max_speed *
                     std::min(1.0, n / cfg_.sim.max_linear_speed);
    if (rng.uniform() < p) {
      r.upright = false;
      r.velocity = {};
      r.omega = 0.0;
      r.recovery_ticks_left =
          static_cast<int>(std::ceil(cfg_.sim.fall_recovery_time / dt));
      events.push_back({SimEventKind::FALL, tick, r.id, {}});
      return;
    }
  }

  r.pose.x += r.velocity.x * dt;
  r.pose.y += r.velocity.y * dt;
  r.pose.theta = wrap_angle(r.pose.theta + r.omega * dt);
}

void Simulator::resolve_collisions(WorldState& world) {
  const double restitution = profile_.contact_restitution;
  const double ball_r = cfg_.field.ball_radius;
  for (int pass = 0; pass < 8; ++pass) {
    bool any = false;

    for (std::size_t i = 0; i < world.robots.size(); ++i) {
      for (std::size_t j = i + 1; j < world.robots.size(); ++j) {
        const Obb a = Obb::of(world.robots[i], cfg_.field);
        const Obb b = Obb::of(world.robots[j], cfg_.field);
        const Vec2 mtv = obb_mtv(a, b);
        if (mtv.x != 0.0 || mtv.y != 0.0) {
          world.robots[i].pose.x -= 0.5 * mtv.x;
          world.robots[i].pose.y -= 0.5 * mtv.y;
          world.robots[j].pose.x += 0.5 * mtv.x;
          world.robots[j].pose.y += 0.5 * mtv.y;
          any = true;
        }
      }
    }

    for (const auto& r : world.robots) {
      const Obb box = Obb::of(r, cfg_.field);
      const Vec2 mtv = obb_circle_mtv(box, world.ball.position, ball_r);
      if (mtv.x == 0.0 && mtv.y == 0.0) continue;
      world.ball.position += mtv;
      any = true;
      // The ball inherits the restitution-scaled normal component of the
      // robot velocity when the robot is moving into it.
      const Vec2 n = mtv.normalized();
      const double robot_n = r.velocity.dot(n);
      if (robot_n > 0.0) {
        const double ball_n = world.ball.velocity.dot(n);
        const double target_n = restitution * robot_n;
        if (target_n > ball_n) world.ball.velocity += n * (target_n - ball_n);
      }
    }

    if (!any) break;
  }
}

void Simulator::detect_ball_events(const WorldState& world, Vec2 before, bool /*kicked*/,
                                   std::vector<SimEvent>& events) {
  const Vec2 after = world.ball.position;
  const double hl = cfg_.field.half_length();
  const double goal_hw = 0.5 * cfg_.field.goal_width;

  // Continuous crossing of either goal segment between the posts.
  auto crossed_goal = [&](double plane_x) -> bool {
    const double b = before.x - plane_x;
    const double a = after.x - plane_x;
    if (b == a) return false;
    if ((b <= 0.0) == (a <= 0.0)) return false;
    const double t = b / (b - a);
    const double y = before.y + t * (after.y - before.y);
    return std::abs(y) <= goal_hw;
  };

  const bool moving_plus_x = after.x > before.x;
  if (crossed_goal(hl) && moving_plus_x) {
    events.push_back({SimEventKind::GOAL_HOME, world.tick, -1, {}});
    return;
  }
  if (crossed_goal(-hl) && !moving_plus_x) {
    events.push_back({SimEventKind::GOAL_AWAY, world.tick, -1, {}});
    return;
  }

  const Rect field = cfg_.field.bounds();
  if (field.contains(before) && !field.contains(after)) {
    SimEvent ev{SimEventKind::OUT_OF_BOUNDS, world.tick, -1, {}};
    ev.detail["x"] = after.x;
    ev.detail["y"] = after.y;
    events.push_back(ev);
  }
}

void Simulator::step(WorldState& world, std::span<const SkillCommand> commands,
                     std::vector<SimEvent>& events) {
  events.clear();
  world.dt = cfg_.sim.dt;
  const Vec2 ball_before = world.ball.position;

  // Resolve every command against the tick-start state first, so command
  // resolution order cannot leak into the outcome.
  struct Resolved {
    WalkAtVelocity move{};
    bool has_move = false;
    bool kick = false;
    double kick_angle = 0.0;
  };
  std::vector<Resolved> resolved(world.robots.size());
  for (std::size_t i = 0; i < world.robots.size(); ++i) {
    if (i >= commands.size()) continue;
    const RobotState& r = world.robots[i];
    if (!r.upright) continue;
    SkillCommand cmd = commands[i];
    if (!command_is_finite(cmd)) {
      ++rejected_commands_;
      if (!warned_nonfinite_) {
        std::cerr << "pitchlab: non-finite command for robot " << r.id
                  << " treated as Stand\n";
        warned_nonfinite_ = true;
      }
      cmd = Stand{};
    }
    Resolved& out = resolved[i];
    if (const auto* v = std::get_if<WalkAtVelocity>(&cmd)) {
      out.move = *v;
      out.has_move = true;
    } else if (const auto* w = std::get_if<WalkToPoint>(&cmd)) {
      out.move = walk_to_point(world, r.id, w->target, w->face, cfg_);
      out.has_move = true;
    } else if (const auto* k = std::get_if<WalkAndKick>(&cmd)) {
      const WalkAndKickPlan plan = plan_walk_and_kick(world, r.id, k->kick_angle, cfg_);
      if (plan.kick_now) {
        out.kick = true;
        out.kick_angle = plan.kick_angle;
      } else {
        out.move = plan.move;
        out.has_move = true;
      }
    }
  }

  bool kicked = false;
  for (std::size_t i = 0; i < world.robots.size(); ++i) {
    if (!resolved[i].kick) continue;
    events.push_back(resolve_kick(world, world.robots[i].id, resolved[i].kick_angle));
    kicked = true;
  }

  for (std::size_t i = 0; i < world.robots.size(); ++i) {
    integrate_robot(world.robots[i], resolved[i].move, resolved[i].has_move, events, world.tick);
  }

  // Ball friction: linear decay of speed, trapezoidal position update (exact
  // for constant deceleration).
  {
    const double dt = cfg_.sim.dt;
    const double speed = world.ball.velocity.norm();
    if (speed > 0.0) {
      const double new_speed = std::max(0.0, speed - cfg_.sim.ball_friction_decel * dt);
      const Vec2 dir = world.ball.velocity * (1.0 / speed);
      world.ball.position += dir * (0.5 * (speed + new_speed) * dt);
      world.ball.velocity = dir * new_speed;
    }
  }

  resolve_collisions(world);

  // Keep everything inside the extended field apron.
  const Rect apron = cfg_.field.extended_bounds();
  for (auto& r : world.robots) {
    const Vec2 clamped = apron.clamp(r.pose.position());
    r.pose.x = clamped.x;
    r.pose.y = clamped.y;
  }
  {
    const Vec2 clamped = apron.clamp(world.ball.position);
    if (clamped.x != world.ball.position.x || clamped.y != world.ball.position.y) {
      world.ball.position = clamped;
      world.ball.velocity = {};
    }
  }

  detect_ball_events(world, ball_before, kicked, events);

  world.ball.push_history(world.ball.position);
  ++world.tick;
}

}  // namespace pitchlab
