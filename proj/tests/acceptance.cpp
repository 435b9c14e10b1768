// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Trains every policy it evaluates; set PITCHLAB_ACCEPT_CACHE to a
// writable directory to reuse trained weights across runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pitchlab/behavior.hpp"
#include "pitchlab/eval.hpp"
#include "pitchlab/ppo.hpp"
#include "pitchlab/selftest.hpp"

using namespace pitchlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string cache_dir() {
  if (const char* env = std::getenv("PITCHLAB_ACCEPT_CACHE")) return env;
  return "pitchlab_acceptance_cache";
}

struct TrainedPolicy {
  ActorCritic net;
  double goal_rate_last100 = 0.0;
  double train_seconds = 0.0;
};

// Trains (or loads from cache) one policy; the cache key carries every
// input that affects the result.
TrainedPolicy trained(const Config& cfg, PolicyName policy, ScenarioName scenario,
                      std::optional<Fidelity> fidelity, std::int64_t steps, std::uint64_t seed,
                      const std::string& label) {
  Config run_cfg = cfg;
  run_cfg.train.total_steps = steps;
  run_cfg.train.seed = seed;

  fs::create_directories(cache_dir());
  const std::string stem = (fs::path(cache_dir()) / label).string();
  const std::string weights_path = stem + ".plw";
  const std::string meta_path = stem + ".meta";

  if (fs::exists(weights_path) && fs::exists(meta_path)) {
    std::ifstream meta(meta_path);
    double goal_rate = 0.0, secs = 0.0;
    std::int64_t cached_steps = 0;
    std::uint64_t cached_seed = 0;
    meta >> goal_rate >> secs >> cached_steps >> cached_seed;
    if (meta && cached_steps == steps && cached_seed == seed) {
      std::printf("  [cache] %s (goal rate %.2f)\n", label.c_str(), goal_rate);
      std::fflush(stdout);
      return {load_weights_for(policy, weights_path), goal_rate, secs};
    }
  }

  std::printf("  training %s: %lld steps (scenario %s, %s)\n", label.c_str(),
              static_cast<long long>(steps), to_string(scenario),
              fidelity ? to_string(*fidelity) : "scenario default");
  std::fflush(stdout);
  const double t0 = now_seconds();
  TrainResult result = train_policy(run_cfg, policy, scenario, fidelity,
                                    [](const TrainProgress& p) {
                                      if (p.update % 50 == 0 || p.steps_done >= p.total_steps)
                                        std::printf("    update %d  steps %lld  return %.3f\n",
                                                    p.update,
                                                    static_cast<long long>(p.steps_done),
                                                    p.mean_return);
                                      std::fflush(stdout);
                                    });
  const double secs = now_seconds() - t0;
  const double goal_rate = recent_goal_rate(result.episodes, 100);
  save_weights(result.net, policy, weights_path);
  std::ofstream meta(meta_path);
  meta << goal_rate << " " << secs << " " << steps << " " << seed << "\n";
  std::printf("  trained %s in %.0f s, goal rate %.2f\n", label.c_str(), secs, goal_rate);
  std::fflush(stdout);
  return {load_weights_for(policy, weights_path), goal_rate, secs};
}

// ---- criterion 1: selector oracle equivalence -------------------------

std::optional<PolicyName> rule_oracle(const WorldState& w, int self_id,
                                      const SelectorConfig& sel, const FieldGeometry& field) {
  const Vec2 ball = w.ball.position;
  const RobotState& self = w.robot(self_id);
  const double self_d = (self.pose.position() - ball).norm();
  for (const auto& r : w.robots)
    if (r.id != self_id && r.team == self.team && r.upright &&
        (r.pose.position() - ball).norm() < self_d)
      return PolicyName::POSITIONING;
  const Rect box = field.opposing_goal_box(self.team);
  if (ball.x >= box.lo.x - sel.near_goal_margin && ball.x <= box.hi.x + sel.near_goal_margin &&
      ball.y >= box.lo.y - sel.near_goal_margin && ball.y <= box.hi.y + sel.near_goal_margin &&
      self_d <= sel.near_ball_radius)
    return PolicyName::NEAR_GOAL;
  for (const auto& r : w.robots)
    if (r.team != self.team && (r.pose.position() - ball).norm() <= sel.ball_duel_opponent_radius)
      return PolicyName::BALL_DUEL;
  return PolicyName::MID_FIELD;
}

void criterion_1(const Config& cfg) {
  const double t0 = now_seconds();
  long states = 0, mismatches = 0;

  WorldState w;
  w.robots = {RobotState{}, RobotState{}, RobotState{}};
  w.robots[0].id = 0;
  w.robots[0].team = Team::HOME;
  w.robots[1].id = 1;
  w.robots[1].team = Team::HOME;
  w.robots[2].id = 2;
  w.robots[2].team = Team::AWAY;
  w.ball.reset_history();

  // All placements on the 0.25 m lattice: ball at full resolution, self at
  // 0.75 m, teammate and opponent at 2.25 m (plus fallen-teammate and
  // absent-robot sweeps below as parked far-away placements).
  const double hl = cfg.field.half_length(), hw = cfg.field.half_width();
  for (double bx = -hl; bx <= hl + 1e-9; bx += 0.25) {
    for (double by = -hw; by <= hw + 1e-9; by += 0.25) {
      w.ball.position = {bx, by};
      for (double sx = -hl; sx <= hl + 1e-9; sx += 0.75) {
        for (double sy = -hw; sy <= hw + 1e-9; sy += 0.75) {
          w.robots[0].pose = {sx, sy, 0.0};
          for (double tx = -hl; tx <= hl + 1e-9; tx += 2.25) {
            for (double ty = -hw; ty <= hw + 1e-9; ty += 2.25) {
              w.robots[1].pose = {tx, ty, 0.0};
              w.robots[1].upright = ((states / 7) % 5 != 0);  // periodic fallen sweep
              for (double ox = -hl; ox <= hl + 1e-9; ox += 4.5) {
                for (double oy = -hw; oy <= hw + 1e-9; oy += 3.0) {
                  w.robots[2].pose = {ox, oy, 0.0};
                  const auto got =
                      select_raw(w, 0, cfg.selector, cfg.field, w.ball.position).chosen;
                  const auto want = rule_oracle(w, 0, cfg.selector, cfg.field);
                  ++states;
                  if (got != want) ++mismatches;
                }
              }
            }
          }
        }
      }
    }
  }
  const double secs = now_seconds() - t0;
  char detail[256];
  std::snprintf(detail, sizeof(detail), "%ld lattice states, %ld mismatches, %.1f s", states,
                mismatches, secs);
  report(1, states >= 100000 && mismatches == 0 && secs < 60.0,
         "selector matches the brute-force rule table on an exhaustive lattice", detail);
}

// ---- criterion 2: physics/numerics property suite ----------------------

void criterion_2(const Config& cfg) {
  const double t0 = now_seconds();
  std::vector<std::string> failures;

  {  // frame round-trip
    Rng rng(555);
    for (int i = 0; i < 2000; ++i) {
      const Pose2D obs{rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-M_PI, M_PI)};
      const Vec2 p{rng.uniform(-6, 6), rng.uniform(-6, 6)};
      if ((from_egocentric(obs, to_egocentric(obs, p)) - p).norm() > 1e-9) {
        failures.push_back("frame round-trip");
        break;
      }
    }
  }

  {  // ball roll distance vs v^2/(2 mu)
    Simulator sim(cfg, Fidelity::LOW, 1);
    WorldState w = sim.make_world({}, {0, 0});
    w.ball.velocity = {1.0, 0.0};
    std::vector<SimEvent> events;
    while (w.ball.velocity.norm() > 0) sim.step(w, {}, events);
    const double expect = 1.0 / (2.0 * cfg.sim.ball_friction_decel);
    if (std::abs(w.ball.position.x - expect) > 0.02 * expect)
      failures.push_back("roll distance");
  }

  {  // GAE vs brute force
    Rng rng(777);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t T = 24;
      std::vector<double> rewards(T), values(T + 1);
      std::vector<std::uint8_t> dones(T);
      for (auto& r : rewards) r = rng.uniform(-2, 2);
      for (auto& v : values) v = rng.uniform(-2, 2);
      for (auto& d : dones) d = rng.uniform() < 0.2 ? 1 : 0;
      const GaeResult fast = gae(rewards, values, dones, 0.99, 0.95);
      for (std::size_t t = 0; t < T; ++t) {
        double adv = 0.0, coef = 1.0;
        for (std::size_t l = t; l < T; ++l) {
          const double nd = dones[l] ? 0.0 : 1.0;
          adv += coef * (rewards[l] + 0.99 * values[l + 1] * nd - values[l]);
          if (dones[l]) break;
          coef *= 0.99 * 0.95;
        }
        if (std::abs(adv - fast.advantages[t]) > 1e-10) {
          failures.push_back("gae");
          goto gae_done;
        }
      }
    }
  gae_done:;
  }

  {  // PPO gradient vs central finite differences
    TrainConfig tc;
    ActorCritic net(6, 3, 8);
    Rng rng(42);
    net.init(rng, -0.5);
    RolloutBatch b;
    b.obs_dim = 6;
    b.act_dim = 3;
    b.size = 8;
    for (std::size_t i = 0; i < b.size; ++i) {
      std::vector<double> obs(6);
      for (double& o : obs) o = rng.uniform(-1, 1);
      std::vector<double> mean(3);
      net.actor_mean(obs, mean);
      for (int j = 0; j < 3; ++j) b.actions.push_back(mean[j] + 0.3 * rng.normal());
      b.obs.insert(b.obs.end(), obs.begin(), obs.end());
      b.log_probs.push_back(
          gaussian_log_prob(mean, net.log_std(), {b.actions.data() + i * 3, 3}) +
          rng.uniform(-0.02, 0.02));
      b.advantages.push_back(rng.uniform(-1.5, 1.5));
      b.returns.push_back(rng.uniform(-1, 1));
    }
    double m = 0.0;
    for (double a : b.advantages) m += a;
    m /= b.size;
    double var = 0.0;
    for (double a : b.advantages) var += (a - m) * (a - m);
    for (double& a : b.advantages) a = (a - m) / (std::sqrt(var / b.size) + 1e-8);

    std::vector<std::size_t> idx(b.size);
    for (std::size_t i = 0; i < b.size; ++i) idx[i] = i;
    std::vector<double> grad(net.param_count(), 0.0);
    ppo_loss(net, b, idx, tc, &grad);
    const double h = 1e-6;
    double max_rel = 0.0;
    for (std::size_t k = 0; k < net.param_count(); ++k) {
      const double saved = net.params()[k];
      net.params()[k] = saved + h;
      const double up = ppo_loss(net, b, idx, tc, nullptr).total_loss;
      net.params()[k] = saved - h;
      const double dn = ppo_loss(net, b, idx, tc, nullptr).total_loss;
      net.params()[k] = saved;
      const double fd = (up - dn) / (2 * h);
      const double denom = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
      max_rel = std::max(max_rel, std::abs(fd - grad[k]) / denom);
    }
    if (max_rel > 1e-4) failures.push_back("ppo gradient");
  }

  {  // seeded determinism: simulator, training, evaluation
    const SelftestResult st = run_selftest(cfg, 2000);
    if (!st.determinism_ok) failures.push_back("simulator determinism");

    Config tcfg = cfg;
    tcfg.train.total_steps = 4096;
    tcfg.train.n_envs = 4;
    tcfg.train.rollout_horizon = 64;
    tcfg.train.minibatch_size = 64;
    tcfg.train.seed = 12;
    const TrainResult a =
        train_policy(tcfg, PolicyName::BALL_DUEL, ScenarioName::TOY_REACH_1V0, std::nullopt);
    const TrainResult b =
        train_policy(tcfg, PolicyName::BALL_DUEL, ScenarioName::TOY_REACH_1V0, std::nullopt);
    if (a.net.params() != b.net.params()) failures.push_back("training determinism");

    PolicySpec spec = PolicySpec::of(PolicyName::NEAR_GOAL);
    ActorCritic net(spec.obs_dim, spec.act_dim, 16);
    Rng rng(5);
    net.init(rng, -0.5);
    const EvalReport r1 = run_fidelity(cfg, net, net, false, 4, 9);
    const EvalReport r2 = run_fidelity(cfg, net, net, false, 4, 9);
    if (r1.to_json() != r2.to_json()) failures.push_back("evaluation determinism");
  }

  const double secs = now_seconds() - t0;
  std::string detail = failures.empty() ? "all checks passed" : "failed:";
  for (const auto& f : failures) detail += " " + f;
  char buf[64];
  std::snprintf(buf, sizeof(buf), " (%.1f s)", secs);
  detail += buf;
  report(2, failures.empty() && secs < 300.0, "physics/numerics property suite", detail);
}

// ---- criterion 3: learning sanity --------------------------------------

double toy_policy_mean_return(const Config& cfg, const ActorCritic* net, int episodes,
                              std::uint64_t seed) {
  // Evaluates mean undiscounted return on the toy reach task; net == nullptr
  // plays the uniform random policy.
  TrainingEnv env(cfg, PolicyName::BALL_DUEL, ScenarioName::TOY_REACH_1V0, std::nullopt, seed);
  Rng rng = Rng::stream(seed, Rng::tag("random_policy"));
  std::vector<double> mean(3);
  double total = 0.0;
  int done_count = 0;
  auto obs = env.reset();
  double ep_ret = 0.0;
  while (done_count < episodes) {
    std::vector<double> action(3);
    if (net) {
      net->actor_mean(obs, mean);
      for (int j = 0; j < 3; ++j) action[j] = std::clamp(mean[j], -1.0, 1.0);
    } else {
      for (int j = 0; j < 3; ++j) action[j] = rng.uniform(-1.0, 1.0);
    }
    const auto r = env.step(action);
    ep_ret += r.reward;
    obs = *r.obs;
    if (r.done) {
      total += ep_ret;
      ep_ret = 0.0;
      ++done_count;
    }
  }
  return total / episodes;
}

void criterion_3(const Config& cfg) {
  {  // toy reach-the-ball task
    const double t0 = now_seconds();
    const double random_mean = toy_policy_mean_return(cfg, nullptr, 200, 101);
    const TrainedPolicy toy = trained(cfg, PolicyName::BALL_DUEL, ScenarioName::TOY_REACH_1V0,
                                      std::nullopt, 200000, 11, "TOY_REACH");
    const double trained_mean = toy_policy_mean_return(cfg, &toy.net, 200, 102);
    const double secs = now_seconds() - t0 + 0.0;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "random %.3f, trained %.3f (need >= 5x), train %.0f s (budget 900 s)",
                  random_mean, trained_mean, toy.train_seconds);
    report(3, trained_mean >= 5.0 * random_mean && toy.train_seconds < 900.0 && secs < 1800.0,
           "toy reach-the-ball mean return >= 5x random baseline within 200k steps", detail);
  }
  {  // MIDFIELD_1V0 goal rate
    const TrainedPolicy mid = trained(cfg, PolicyName::MID_FIELD, ScenarioName::MIDFIELD_1V0,
                                      std::nullopt, 1000000, 21, "MID_FIELD");
    char detail[128];
    std::snprintf(detail, sizeof(detail), "goal rate %.2f over final 100 training episodes",
                  mid.goal_rate_last100);
    report(3, mid.goal_rate_last100 >= 0.8,
           "MIDFIELD_1V0 goal rate >= 0.8 within 1M steps", detail);
  }
}

// ---- criteria 4-6: experiments ------------------------------------------

void criterion_4(const Config& cfg, const PolicySet& set, int episodes) {
  const EvalReport r = run_decomposition(cfg, set, episodes, 2026);
  std::printf("%s", r.table().c_str());
  const auto& full = r.condition("full_suite");
  const auto& no_mid = r.condition("no_mid_field");
  const auto& no_near = r.condition("no_near_goal");
  const auto& no_duel = r.condition("no_ball_duel");
  const bool ci_separated = full.ci_lo > no_mid.ci_hi;
  const bool point_order = full.success_rate > no_mid.success_rate &&
                           full.success_rate > no_near.success_rate &&
                           full.success_rate > no_duel.success_rate;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "full %.2f [%.2f,%.2f]; no_mid %.2f [%.2f,%.2f]; no_near %.2f; no_duel %.2f",
                full.success_rate, full.ci_lo, full.ci_hi, no_mid.success_rate, no_mid.ci_lo,
                no_mid.ci_hi, no_near.success_rate, no_duel.success_rate);
  report(4, ci_separated && point_order,
         "decomposition ablation: full suite beats ablations (CI-separated vs no-MID_FIELD)",
         detail);
}

void criterion_5(const Config& cfg, const ActorCritic& low_trained,
                 const ActorCritic& high_trained, int episodes) {
  const EvalReport r = run_fidelity(cfg, low_trained, high_trained, false, episodes, 2027);
  std::printf("%s", r.table().c_str());
  const auto& ll = r.condition("train_LOW_eval_LOW");
  const auto& hl = r.condition("train_HIGH_eval_LOW");
  const auto& lh = r.condition("train_LOW_eval_HIGH");
  const auto& hh = r.condition("train_HIGH_eval_HIGH");
  const bool a = ll.success_rate > hl.success_rate;
  const bool b = hh.success_rate > lh.success_rate && hh.ci_lo > lh.ci_hi;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "LOW eval: LOW-tr %.2f vs HIGH-tr %.2f; HIGH eval: HIGH-tr %.2f [%.2f,%.2f] vs "
                "LOW-tr %.2f [%.2f,%.2f]",
                ll.success_rate, hl.success_rate, hh.success_rate, hh.ci_lo, hh.ci_hi,
                lh.success_rate, lh.ci_lo, lh.ci_hi);
  report(5, a && b, "fidelity gap: each profile's graduate wins at home (CI-separated in HIGH)",
         detail);
}

void criterion_6(const Config& cfg, const ActorCritic& ball_duel, const ActorCritic& mid_field,
                 int episodes) {
  const EvalReport dribble = run_actionspace_dribble(cfg, ball_duel, mid_field, episodes, 2028);
  std::printf("%s", dribble.table().c_str());
  const auto& vel = dribble.condition("walk_at_relative_speed");
  const auto& pnt = dribble.condition("walk_to_point");
  const bool dribble_ok =
      vel.successes > 0 && vel.success_rate >= 2.0 * pnt.success_rate;

  const EvalReport walk = run_actionspace_walktime(cfg, ball_duel, episodes, 2029);
  std::printf("%s", walk.table().c_str());
  const auto& wp = walk.condition("walk_to_point");
  const auto& wv = walk.condition("walk_at_relative_speed");
  const double bound = 4.0 / cfg.sim.max_linear_speed;
  const bool walk_ok = std::isfinite(wp.mean_time_to_success) &&
                       std::isfinite(wv.mean_time_to_success) &&
                       wp.mean_time_to_success < wv.mean_time_to_success &&
                       wp.mean_time_to_success > bound;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "dribble %.2f vs %.2f (need 2x); walk %.2f s vs %.2f s (bound %.2f s)",
                vel.success_rate, pnt.success_rate, wp.mean_time_to_success,
                wv.mean_time_to_success, bound);
  report(6, dribble_ok && walk_ok, "action-space trade-off: dribble 2x and traversal ordering",
         detail);
}

// ---- criterion 7: bootstrap ---------------------------------------------

void criterion_7() {
  std::vector<std::uint8_t> v{1, 1, 1, 1, 1, 1, 0, 0, 0, 0};
  const BootstrapCi ci = bootstrap_ci(v, 10000, 0.95, 1);

  // Exact enumeration: resampled mean is Binomial(10, 0.6)/10.
  std::vector<double> pmf(11);
  for (int x = 0; x <= 10; ++x) {
    double logc = std::lgamma(11.0) - std::lgamma(x + 1.0) - std::lgamma(11.0 - x);
    pmf[x] = std::exp(logc + x * std::log(0.6) + (10 - x) * std::log(0.4));
  }
  auto quantile = [&](double q) {
    double cum = 0.0;
    for (int x = 0; x <= 10; ++x) {
      cum += pmf[x];
      if (cum >= q) return x / 10.0;
    }
    return 1.0;
  };
  const double exact_hw = (quantile(0.975) - quantile(0.025)) / 2.0;
  const double got_hw = (ci.hi - ci.lo) / 2.0;

  const BootstrapCi zeros = bootstrap_ci(std::vector<std::uint8_t>(10, 0));
  const BootstrapCi ones = bootstrap_ci(std::vector<std::uint8_t>(10, 1));
  const bool degenerate_ok =
      zeros.mean == 0 && zeros.lo == 0 && zeros.hi == 0 && ones.mean == 1 && ones.lo == 1 &&
      ones.hi == 1;

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "half-width %.3f vs exact %.3f (tol 0.05); degenerate zero-width %s", got_hw,
                exact_hw, degenerate_ok ? "ok" : "BROKEN");
  report(7, std::abs(got_hw - exact_hw) <= 0.05 && degenerate_ok,
         "bootstrap CI matches exact enumeration for 6/10 and degenerates cleanly", detail);
}

// ---- criterion 8: throughput ---------------------------------------------

void criterion_8(const Config& cfg) {
  const SelftestResult res = run_selftest(cfg);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%.0f steps/s (target 50000)",
                res.low_steps_per_second);
  report(8, res.low_steps_per_second >= 50000.0,
         "LOW-fidelity 4-robot stepping throughput on one core", detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  int episodes = 200;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only.insert(std::atoi(argv[++i]));
    if (std::strcmp(argv[i], "--episodes") == 0 && i + 1 < argc) episodes = std::atoi(argv[++i]);
  }
  auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };

  const Config cfg = default_config();
  std::printf("pitchlab acceptance suite (episodes per condition: %d)\n", episodes);
  std::printf("weights cache: %s\n", cache_dir().c_str());

  if (wanted(1)) criterion_1(cfg);
  if (wanted(2)) criterion_2(cfg);
  if (wanted(3)) criterion_3(cfg);

  const bool need_experiments = wanted(4) || wanted(5) || wanted(6);
  if (need_experiments) {
    const TrainedPolicy mid = trained(cfg, PolicyName::MID_FIELD, ScenarioName::MIDFIELD_1V0,
                                      std::nullopt, 1000000, 21, "MID_FIELD");
    const TrainedPolicy duel = trained(cfg, PolicyName::BALL_DUEL, ScenarioName::BALL_DUEL_2V0,
                                       std::nullopt, 1000000, 22, "BALL_DUEL");
    const TrainedPolicy near_high =
        trained(cfg, PolicyName::NEAR_GOAL, ScenarioName::NEARGOAL_1V0, Fidelity::HIGH, 800000,
                23, "NEAR_GOAL_HIGH");
    const TrainedPolicy near_low =
        trained(cfg, PolicyName::NEAR_GOAL, ScenarioName::NEARGOAL_1V0, Fidelity::LOW, 800000,
                24, "NEAR_GOAL_LOW");
    const TrainedPolicy pos = trained(cfg, PolicyName::POSITIONING, ScenarioName::POSITIONING,
                                      std::nullopt, 300000, 25, "POSITIONING");

    PolicySet set;
    set.set(PolicyName::MID_FIELD, mid.net);
    set.set(PolicyName::BALL_DUEL, duel.net);
    set.set(PolicyName::NEAR_GOAL, near_high.net);
    set.set(PolicyName::POSITIONING, pos.net);

    if (wanted(4)) criterion_4(cfg, set, episodes);
    if (wanted(5)) criterion_5(cfg, near_low.net, near_high.net, episodes);
    if (wanted(6)) criterion_6(cfg, duel.net, mid.net, episodes);
  }

  if (wanted(7)) criterion_7();
  if (wanted(8)) criterion_8(cfg);

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
