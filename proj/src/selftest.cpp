#include "pitchlab/selftest.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "pitchlab/simulator.hpp"

namespace pitchlab {

namespace {

std::vector<RobotState> bench_robots() {
  std::vector<RobotState> robots;
  const Vec2 at[4] = {{-2.0, -1.0}, {-1.0, 1.2}, {1.5, -0.8}, {2.5, 0.9}};
  for (int i = 0; i < 4; ++i) {
    RobotState r;
    r.id = i;
    r.team = i < 2 ? Team::HOME : Team::AWAY;
    r.pose = {at[i].x, at[i].y, 0.4 * i};
    robots.push_back(r);
  }
  return robots;
}

std::vector<SkillCommand> bench_commands() {
  return {WalkAtVelocity{0.25, 0.05, 0.3}, WalkAtVelocity{-0.2, 0.1, -0.2},
          WalkAtVelocity{0.1, -0.25, 0.5}, WalkAtVelocity{-0.15, -0.1, 0.1}};
}

bool run_twice_identical(const Config& cfg, Fidelity fid) {
  WorldState worlds[2];
  for (int run = 0; run < 2; ++run) {
    Simulator sim(cfg, fid, 424242);
    WorldState w = sim.make_world(bench_robots(), {0.5, 0.2});
    w.ball.velocity = {0.8, -0.3};
    const auto commands = bench_commands();
    std::vector<SimEvent> events;
    for (int t = 0; t < 500; ++t) sim.step(w, commands, events);
    worlds[run] = w;
  }
  return worlds[0] == worlds[1];
}

}  // namespace

SelftestResult run_selftest(const Config& cfg, int bench_steps) {
  SelftestResult res;

  {
    Simulator sim(cfg, Fidelity::LOW, 7);
    WorldState w = sim.make_world(bench_robots(), {0.0, 0.0});
    const auto commands = bench_commands();
    std::vector<SimEvent> events;
    // Warm-up, then the timed run.
    for (int t = 0; t < 1000; ++t) sim.step(w, commands, events);
    const auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < bench_steps; ++t) sim.step(w, commands, events);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    res.low_steps_per_second = bench_steps / secs;
  }

  res.determinism_ok =
      run_twice_identical(cfg, Fidelity::LOW) && run_twice_identical(cfg, Fidelity::HIGH);

  {
    Rng rng(99);
    res.frame_roundtrip_ok = true;
    for (int i = 0; i < 1000; ++i) {
      const Pose2D obs{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-M_PI, M_PI)};
      const Vec2 p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
      const Vec2 back = from_egocentric(obs, to_egocentric(obs, p));
      if ((back - p).norm() > 1e-9) res.frame_roundtrip_ok = false;
    }
  }

  res.passed = res.determinism_ok && res.frame_roundtrip_ok &&
               res.low_steps_per_second >= 50000.0;

  nlohmann::json j;
  j["low_steps_per_second"] = res.low_steps_per_second;
  j["throughput_target"] = 50000.0;
  j["determinism_ok"] = res.determinism_ok;
  j["frame_roundtrip_ok"] = res.frame_roundtrip_ok;
  j["passed"] = res.passed;
  res.summary_json = j.dump(2) + "\n";
  return res;
}

}  // namespace pitchlab
