#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pitchlab/policy_io.hpp"

using namespace pitchlab;

namespace {

RobotState robot_at(int id, Team team, double x, double y, double theta) {
  RobotState r;
  r.id = id;
  r.team = team;
  r.pose = {x, y, theta};
  return r;
}

WorldState make_world(std::vector<RobotState> robots, Vec2 ball) {
  WorldState w;
  w.robots = std::move(robots);
  w.ball.position = ball;
  w.ball.reset_history();
  return w;
}

// Reflects the whole world across the x axis.
WorldState reflect(const WorldState& w) {
  WorldState out = w;
  for (auto& r : out.robots) {
    r.pose.y = -r.pose.y;
    r.pose.theta = wrap_angle(-r.pose.theta);
    r.velocity.y = -r.velocity.y;
    r.omega = -r.omega;
  }
  out.ball.position.y = -out.ball.position.y;
  out.ball.velocity.y = -out.ball.velocity.y;
  for (auto& h : out.ball.history) h.y = -h.y;
  return out;
}

}  // namespace

TEST_CASE("observation dimensions match the specs") {
  const Config cfg = default_config();
  for (PolicyName p : kAllPolicies) {
    const PolicySpec spec = PolicySpec::of(p);
    WorldState w = make_world({robot_at(0, Team::HOME, 0.3, -0.2, 0.4),
                               robot_at(1, Team::HOME, -2, 1, 0),
                               robot_at(2, Team::AWAY, 2, 1, 0),
                               robot_at(3, Team::AWAY, 2, -1, 0)},
                              {1, 0.5});
    const auto obs = build_observation(spec, w, 0, Vec2{1.0, 1.0}, cfg);
    CHECK(static_cast<int>(obs.size()) == spec.obs_dim);
    for (double v : obs) CHECK(std::isfinite(v));
    const auto layout = observation_layout(p);
    CHECK(layout.back().offset + layout.back().size == spec.obs_dim);
  }
  CHECK(PolicySpec::of(PolicyName::MID_FIELD).act_dim == 1);
  CHECK(PolicySpec::of(PolicyName::BALL_DUEL).act_dim == 3);
  CHECK(PolicySpec::of(PolicyName::NEAR_GOAL).act_dim == 3);
  CHECK(PolicySpec::of(PolicyName::POSITIONING).act_dim == 4);
  CHECK(PolicySpec::of(PolicyName::NEAR_GOAL).obs_dim == 12);
}

TEST_CASE("MID_FIELD ball-at-feet example") {
  const Config cfg = default_config();
  // Robot at field center facing the opponent goal, ball at its feet.
  WorldState w = make_world({robot_at(0, Team::HOME, 0, 0, 0)}, {0.25, 0.0});
  const auto obs =
      build_observation(PolicySpec::of(PolicyName::MID_FIELD), w, 0, std::nullopt, cfg);
  CHECK(obs[0] == doctest::Approx(0.25 / 4.5));
  CHECK(obs[1] == doctest::Approx(0.0));
  CHECK(obs[2] == 0.0);  // can-kick one-hot = (0, 1)
  CHECK(obs[3] == 1.0);
  // Goal center dead ahead at 4.5 m -> normalized 1.0.
  CHECK(obs[4] == doctest::Approx(1.0));
  CHECK(obs[5] == doctest::Approx(0.0));
}

TEST_CASE("stationary ball: history entries equal the current ball entry") {
  const Config cfg = default_config();
  WorldState w = make_world({robot_at(0, Team::HOME, -1, 0.5, 0.3)}, {1, -0.5});
  const auto obs =
      build_observation(PolicySpec::of(PolicyName::NEAR_GOAL), w, 0, std::nullopt, cfg);
  // NEAR_GOAL layout: ball(2), opponent posts(4), history(6).
  for (int k = 0; k < 3; ++k) {
    CHECK(obs[6 + 2 * k] == doctest::Approx(obs[0]));
    CHECK(obs[7 + 2 * k] == doctest::Approx(obs[1]));
  }
}

TEST_CASE("POSITIONING requires a strategy position") {
  const Config cfg = default_config();
  WorldState w = make_world({robot_at(0, Team::HOME, 0, 0, 0)}, {1, 1});
  CHECK_THROWS_AS(build_observation(PolicySpec::of(PolicyName::POSITIONING), w, 0,
                                    std::nullopt, cfg),
                  MissingStrategyPosition);
}

TEST_CASE("POSITIONING pads missing defenders with the sentinel") {
  const Config cfg = default_config();
  WorldState w = make_world({robot_at(0, Team::HOME, 0, 0, 0)}, {1, 1});
  const auto obs = build_observation(PolicySpec::of(PolicyName::POSITIONING), w, 0,
                                     Vec2{2.0, 0.0}, cfg);
  // Layout: ball(2), strategy(2), defenders(4) at offsets 4..7.
  CHECK(obs[4] == -2.0);
  CHECK(obs[5] == -2.0);
  CHECK(obs[6] == -2.0);
  CHECK(obs[7] == -2.0);
}

TEST_CASE("field symmetry: reflecting the world maps observations predictably") {
  const Config cfg = default_config();
  Rng rng(321);
  for (int trial = 0; trial < 200; ++trial) {
    WorldState w = make_world(
        {robot_at(0, Team::HOME, rng.uniform(-4, 4), rng.uniform(-2.5, 2.5),
                  rng.uniform(-M_PI, M_PI)),
         robot_at(1, Team::HOME, rng.uniform(-4, 4), rng.uniform(-2.5, 2.5), 0),
         robot_at(2, Team::AWAY, rng.uniform(-4, 4), rng.uniform(-2.5, 2.5), 0),
         robot_at(3, Team::AWAY, rng.uniform(-4, 4), rng.uniform(-2.5, 2.5), 0)},
        {rng.uniform(-4, 4), rng.uniform(-2.5, 2.5)});
    const WorldState m = reflect(w);
    const Vec2 strategy{rng.uniform(-4, 4), rng.uniform(-2.5, 2.5)};
    const Vec2 strategy_m{strategy.x, -strategy.y};

    for (PolicyName p : kAllPolicies) {
      const PolicySpec spec = PolicySpec::of(p);
      const auto a = build_observation(spec, w, 0, strategy, cfg);
      const auto b = build_observation(spec, m, 0, strategy_m, cfg);
      for (const auto& entry : observation_layout(p)) {
        if (entry.name == "can_kick") {
          for (int k = 0; k < entry.size; ++k)
            CHECK(b[entry.offset + k] == doctest::Approx(a[entry.offset + k]));
        } else if (entry.name == "field_sides") {
          // Goal-line distances fixed; left/right side distances swap.
          CHECK(b[entry.offset + 0] == doctest::Approx(a[entry.offset + 0]));
          CHECK(b[entry.offset + 1] == doctest::Approx(a[entry.offset + 1]));
          CHECK(b[entry.offset + 2] == doctest::Approx(a[entry.offset + 3]));
          CHECK(b[entry.offset + 3] == doctest::Approx(a[entry.offset + 2]));
        } else if (entry.name == "goalposts" || entry.name == "opponent_goalposts") {
          // Posts swap within each (+y, -y) pair; x equal, y negated.
          for (int pair = 0; pair < entry.size / 4; ++pair) {
            const int o = entry.offset + 4 * pair;
            CHECK(b[o + 0] == doctest::Approx(a[o + 2]));
            CHECK(b[o + 1] == doctest::Approx(-a[o + 3]));
            CHECK(b[o + 2] == doctest::Approx(a[o + 0]));
            CHECK(b[o + 3] == doctest::Approx(-a[o + 1]));
          }
        } else {
          // Coordinate pairs: x preserved, y negated.
          for (int k = 0; k < entry.size; k += 2) {
            CHECK(b[entry.offset + k] == doctest::Approx(a[entry.offset + k]));
            CHECK(b[entry.offset + k + 1] == doctest::Approx(-a[entry.offset + k + 1]));
          }
        }
      }
    }
  }
}

TEST_CASE("closest_teammate_to_goal") {
  const Config cfg = default_config();

  SUBCASE("single teammate") {
    WorldState w = make_world(
        {robot_at(0, Team::HOME, 0, 0, 0), robot_at(1, Team::HOME, 2, 1, 0)}, {1, 1});
    const Vec2 p = closest_teammate_to_goal(w, 0, cfg);
    CHECK(p.x == doctest::Approx(2));
    CHECK(p.y == doctest::Approx(1));
  }
  SUBCASE("no teammate: observer's own position") {
    WorldState w = make_world({robot_at(0, Team::HOME, 0.5, -0.5, 0)}, {1, 1});
    const Vec2 p = closest_teammate_to_goal(w, 0, cfg);
    CHECK(p.x == doctest::Approx(0.5));
    CHECK(p.y == doctest::Approx(-0.5));
  }
  SUBCASE("tie broken by lowest id") {
    WorldState w = make_world({robot_at(0, Team::HOME, 0, 0, 0),
                               robot_at(3, Team::HOME, 2, 1, 0),
                               robot_at(1, Team::HOME, 2, -1, 0)},
                              {1, 1});
    const Vec2 p = closest_teammate_to_goal(w, 0, cfg);
    CHECK(p.y == doctest::Approx(-1));  // id 1 beats id 3 at equal distance
  }
  SUBCASE("argmin against brute force") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<RobotState> robots{robot_at(0, Team::HOME, 0, 0, 0)};
      for (int i = 1; i <= 3; ++i)
        robots.push_back(
            robot_at(i, Team::HOME, rng.uniform(-4, 4), rng.uniform(-2.5, 2.5), 0));
      WorldState w = make_world(robots, {1, 1});
      const Vec2 got = closest_teammate_to_goal(w, 0, cfg);
      const Vec2 goal = cfg.field.opponent_goal_center(Team::HOME);
      double best = 1e18;
      Vec2 expect{};
      for (int i = 1; i <= 3; ++i) {
        const double d = (w.robot(i).pose.position() - goal).norm();
        if (d < best) {
          best = d;
          expect = w.robot(i).pose.position();
        }
      }
      CHECK(got.x == doctest::Approx(expect.x));
      CHECK(got.y == doctest::Approx(expect.y));
    }
  }
}

TEST_CASE("decode_action") {
  const Config cfg = default_config();
  WorldState w = make_world({robot_at(0, Team::HOME, 0, 0, 0)}, {1, 0});

  SUBCASE("MID_FIELD zero delta keeps the kick angle") {
    ActionDecoder dec(PolicySpec::of(PolicyName::MID_FIELD));
    dec.reset(w, 0, cfg);
    const double before = dec.desired_kick_angle();
    const double raw[] = {0.0};
    const SkillCommand cmd = dec.decode(raw, w.robot(0).pose, cfg);
    CHECK(std::get<WalkAndKick>(cmd).kick_angle == doctest::Approx(before));
  }

  SUBCASE("MID_FIELD angle moves by at most delta_theta_clip per tick") {
    ActionDecoder dec(PolicySpec::of(PolicyName::MID_FIELD));
    dec.reset(w, 0, cfg);
    Rng rng(99);
    double prev = dec.desired_kick_angle();
    for (int i = 0; i < 500; ++i) {
      const double raw[] = {rng.uniform(-3.0, 3.0)};  // decoder clips to [-1,1]
      dec.decode(raw, w.robot(0).pose, cfg);
      const double now = dec.desired_kick_angle();
      CHECK(std::abs(wrap_angle(now - prev)) <= 0.2 + 1e-12);
      prev = now;
    }
  }

  SUBCASE("BALL_DUEL full-forward raw maps to vmax") {
    ActionDecoder dec(PolicySpec::of(PolicyName::BALL_DUEL));
    const double raw[] = {1.0, 0.0, 0.0};
    const auto cmd = dec.decode(raw, w.robot(0).pose, cfg);
    const auto& v = std::get<WalkAtVelocity>(cmd);
    CHECK(v.vx == doctest::Approx(0.30));
    CHECK(v.vy == doctest::Approx(0.0));
    CHECK(v.omega == doctest::Approx(0.0));
  }

  SUBCASE("POSITIONING stand threshold") {
    ActionDecoder dec(PolicySpec::of(PolicyName::POSITIONING));
    const double stand_raw[] = {1.0, 1.0, 1.0, 0.9};
    CHECK(std::holds_alternative<Stand>(dec.decode(stand_raw, w.robot(0).pose, cfg)));
    const double move_raw[] = {1.0, 1.0, 1.0, -0.1};
    CHECK(std::holds_alternative<WalkAtVelocity>(dec.decode(move_raw, w.robot(0).pose, cfg)));
  }

  SUBCASE("decode is total on random raw vectors and outputs valid commands") {
    Rng rng(505);
    for (PolicyName p : kAllPolicies) {
      ActionDecoder dec(PolicySpec::of(p));
      dec.reset(w, 0, cfg);
      for (int i = 0; i < 200; ++i) {
        std::vector<double> raw(PolicySpec::of(p).act_dim);
        for (double& r : raw) r = rng.uniform(-1, 1);
        const SkillCommand cmd = dec.decode(raw, w.robot(0).pose, cfg);
        if (const auto* v = std::get_if<WalkAtVelocity>(&cmd)) {
          CHECK(std::abs(v->vx) <= cfg.sim.max_linear_speed + 1e-12);
          CHECK(std::abs(v->vy) <= cfg.sim.max_linear_speed + 1e-12);
          CHECK(std::abs(v->omega) <= cfg.sim.max_angular_speed + 1e-12);
        } else if (const auto* k = std::get_if<WalkAndKick>(&cmd)) {
          CHECK(k->kick_angle > -M_PI);
          CHECK(k->kick_angle <= M_PI);
        }
      }
    }
  }
}

TEST_CASE("layout documentation lists every policy") {
  const std::string text = describe_layouts(false);
  for (PolicyName p : kAllPolicies) CHECK(text.find(to_string(p)) != std::string::npos);
  const std::string json = describe_layouts(true);
  CHECK(json.find("\"obs_dim\": 24") != std::string::npos);
  CHECK(json.find("\"obs_dim\": 12") != std::string::npos);
  CHECK(json.find("\"obs_dim\": 26") != std::string::npos);
}
