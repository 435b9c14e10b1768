#pragma once

#include <array>
#include <cmath>

namespace pitchlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }

  // Unit vector; (0, 0) maps to (0, 0).
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
  }
};

inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 6.283185307179586476925287;
  double r = std::fmod(a + 3.141592653589793238462643, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r - 3.141592653589793238462643;
}

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // heading, kept in (-pi, pi]

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose2D&) const = default;
};

// Rigid transform of a global point into the observer frame (+x = facing).
inline Vec2 to_egocentric(const Pose2D& observer, Vec2 global) {
  const double c = std::cos(observer.theta);
  const double s = std::sin(observer.theta);
  const Vec2 d = global - observer.position();
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

inline Vec2 from_egocentric(const Pose2D& observer, Vec2 local) {
  const double c = std::cos(observer.theta);
  const double s = std::sin(observer.theta);
  return {observer.x + c * local.x - s * local.y, observer.y + s * local.x + c * local.y};
}

enum class Team { HOME, AWAY };

inline Team opponent_of(Team t) { return t == Team::HOME ? Team::AWAY : Team::HOME; }

// Sign of the attacking direction along x: HOME attacks +x.
inline double attack_sign(Team t) { return t == Team::HOME ? 1.0 : -1.0; }

struct Rect {
  Vec2 lo;  // min corner
  Vec2 hi;  // max corner

  bool contains(Vec2 p) const {  // boundary inclusive
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Vec2 clamp(Vec2 p) const {
    return {std::min(std::max(p.x, lo.x), hi.x), std::min(std::max(p.y, lo.y), hi.y)};
  }
};

struct FieldGeometry {
  double length = 9.0;  // +x axis, attacking direction of the home team
  double width = 6.0;
  double goal_width = 1.5;
  double goal_box_depth = 1.65;
  double goal_box_width = 4.0;
  double robot_half_length = 0.15;
  double robot_half_width = 0.15;
  double ball_radius = 0.05;

  bool operator==(const FieldGeometry&) const = default;

  double half_length() const { return 0.5 * length; }
  double half_width() const { return 0.5 * width; }

  Rect bounds() const { return {{-half_length(), -half_width()}, {half_length(), half_width()}}; }

  // Field plus a 1 m apron; nothing is ever allowed outside this.
  Rect extended_bounds() const {
    return {{-half_length() - 1.0, -half_width() - 1.0}, {half_length() + 1.0, half_width() + 1.0}};
  }

  Vec2 goal_center(Team defending) const {
    // The goal the given team defends sits at its own end of the field.
    return {-attack_sign(defending) * half_length(), 0.0};
  }

  Vec2 opponent_goal_center(Team attacker) const {
    return {attack_sign(attacker) * half_length(), 0.0};
  }

  // Goal box in front of the goal the given team defends.
  Rect goal_box(Team defending) const { return goal_box_at(-attack_sign(defending)); }

  // Goal box at the field end the attacker shoots toward.
  Rect opposing_goal_box(Team attacker) const { return goal_box_at(attack_sign(attacker)); }

  // The four goalposts ordered from the given team's perspective:
  // opponent +y, opponent -y, own +y, own -y.
  std::array<Vec2, 4> goalposts(Team perspective = Team::HOME) const {
    const double s = attack_sign(perspective);
    const double hx = half_length();
    const double hy = 0.5 * goal_width;
    return {Vec2{s * hx, hy}, Vec2{s * hx, -hy}, Vec2{-s * hx, hy}, Vec2{-s * hx, -hy}};
  }

 private:
  Rect goal_box_at(double end_sign) const {
    const double x_goal = end_sign * half_length();
    const double x_front = end_sign * (half_length() - goal_box_depth);
    return {{std::min(x_goal, x_front), -0.5 * goal_box_width},
            {std::max(x_goal, x_front), 0.5 * goal_box_width}};
  }
};

// True iff the point lies in the goal box at the opponent end for the
// attacking team, boundary inclusive.
inline bool in_opposing_goal_box(const FieldGeometry& g, Team attacker, Vec2 point) {
  return g.opposing_goal_box(attacker).contains(point);
}

}  // namespace pitchlab
