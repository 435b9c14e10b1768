#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pitchlab/eval.hpp"

using namespace pitchlab;

namespace {

// Exact percentile quantiles of the bootstrap resampling distribution for a
// binary vector: the resampled mean is Binomial(n, k/n) / n, enumerable.
std::pair<double, double> exact_bootstrap_quantiles(int n, int k, double level) {
  const double p = static_cast<double>(k) / n;
  std::vector<double> pmf(n + 1);
  for (int x = 0; x <= n; ++x) {
    double logc = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
    pmf[x] = std::exp(logc + x * std::log(p) + (n - x) * std::log1p(-p));
  }
  const double alpha = (1.0 - level) / 2.0;
  auto quantile = [&](double q) {
    double cum = 0.0;
    for (int x = 0; x <= n; ++x) {
      cum += pmf[x];
      if (cum >= q) return static_cast<double>(x) / n;
    }
    return 1.0;
  };
  return {quantile(alpha), quantile(1.0 - alpha)};
}

ActorCritic tiny_net(PolicyName p, std::uint64_t seed) {
  const PolicySpec spec = PolicySpec::of(p);
  ActorCritic net(spec.obs_dim, spec.act_dim, 16);
  Rng rng(seed);
  net.init(rng, -0.5);
  return net;
}

}  // namespace

TEST_CASE("bootstrap_ci degenerate vectors give zero-width intervals") {
  const std::vector<std::uint8_t> zeros(10, 0);
  const BootstrapCi z = bootstrap_ci(zeros);
  CHECK(z.mean == 0.0);
  CHECK(z.lo == 0.0);
  CHECK(z.hi == 0.0);

  const std::vector<std::uint8_t> ones(25, 1);
  const BootstrapCi o = bootstrap_ci(ones);
  CHECK(o.mean == 1.0);
  CHECK(o.lo == 1.0);
  CHECK(o.hi == 1.0);
}

TEST_CASE("bootstrap_ci rejects empty input") {
  CHECK_THROWS_AS(bootstrap_ci({}), std::invalid_argument);
}

TEST_CASE("bootstrap_ci mean equals the sample mean exactly") {
  std::vector<std::uint8_t> v{1, 0, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1};
  const BootstrapCi ci = bootstrap_ci(v, 2000, 0.95, 3);
  CHECK(ci.mean == doctest::Approx(7.0 / 12.0));
  CHECK(ci.lo <= ci.mean);
  CHECK(ci.hi >= ci.mean);
}

TEST_CASE("bootstrap_ci is equivariant under episode relabeling") {
  std::vector<std::uint8_t> v{1, 1, 0, 0, 0, 1, 0, 1, 1, 0};
  std::vector<std::uint8_t> shuffled{0, 1, 1, 0, 1, 0, 0, 1, 1, 0};
  const BootstrapCi a = bootstrap_ci(v, 5000, 0.95, 9);
  const BootstrapCi b = bootstrap_ci(shuffled, 5000, 0.95, 9);
  CHECK(a.mean == b.mean);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
}

TEST_CASE("bootstrap half-width within 0.05 of the exact enumeration for 6/10") {
  std::vector<std::uint8_t> v{1, 1, 1, 1, 1, 1, 0, 0, 0, 0};
  const BootstrapCi ci = bootstrap_ci(v, 10000, 0.95, 1);
  const auto [lo, hi] = exact_bootstrap_quantiles(10, 6, 0.95);
  const double got_hw = (ci.hi - ci.lo) / 2.0;
  const double exact_hw = (hi - lo) / 2.0;
  CHECK(std::abs(got_hw - exact_hw) <= 0.05);
}

TEST_CASE("walk-time episode: point skill beats the kinematic bound") {
  const Config cfg = default_config();
  const EpisodeOutcome o = walktime_episode(cfg, nullptr, 555);
  CHECK(o.success);
  CHECK(o.time_to_success > 4.0 / 0.3);  // 13.33 s lower bound
  CHECK(o.time_to_success < 16.0);
}

TEST_CASE("episode runners are deterministic under their seed") {
  const Config cfg = default_config();
  const ActorCritic duel = tiny_net(PolicyName::BALL_DUEL, 2);

  const EpisodeOutcome a = dribble_episode(cfg, duel, PolicyName::BALL_DUEL, 99);
  const EpisodeOutcome b = dribble_episode(cfg, duel, PolicyName::BALL_DUEL, 99);
  CHECK(a.success == b.success);
  CHECK(a.time_to_success == b.time_to_success);
  CHECK(a.terminal == b.terminal);

  const ActorCritic near = tiny_net(PolicyName::NEAR_GOAL, 3);
  const EpisodeOutcome c = fidelity_episode(cfg, near, Fidelity::HIGH, false, 7);
  const EpisodeOutcome d = fidelity_episode(cfg, near, Fidelity::HIGH, false, 7);
  CHECK(c.success == d.success);
  CHECK(c.time_to_success == d.time_to_success);
}

TEST_CASE("fidelity report: same seed twice gives an identical report") {
  const Config cfg = default_config();
  const ActorCritic low = tiny_net(PolicyName::NEAR_GOAL, 10);
  const ActorCritic high = tiny_net(PolicyName::NEAR_GOAL, 11);
  const EvalReport a = run_fidelity(cfg, low, high, false, 6, 42);
  const EvalReport b = run_fidelity(cfg, low, high, false, 6, 42);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.conditions.size() == 4);
  for (const auto& c : a.conditions) {
    CHECK(c.episodes == 6);
    CHECK(c.ci_lo >= 0.0);
    CHECK(c.ci_hi <= 1.0);
    CHECK(c.successes <= c.episodes);
  }
}

TEST_CASE("report JSON embeds config and parses back") {
  const Config cfg = default_config();
  const ActorCritic duel = tiny_net(PolicyName::BALL_DUEL, 2);
  const EvalReport r = run_actionspace_walktime(cfg, duel, 3, 5);
  const std::string js = r.to_json();
  CHECK(js.find("\"experiment\"") != std::string::npos);
  CHECK(js.find("\"config\"") != std::string::npos);
  CHECK(js.find("ACTIONSPACE_WALKTIME") != std::string::npos);
  CHECK_NOTHROW(r.condition("walk_to_point"));
  CHECK_THROWS(r.condition("nope"));
  const std::string table = r.table();
  CHECK(table.find("walk_to_point") != std::string::npos);
}

TEST_CASE("episodes rejected when fewer than one") {
  const Config cfg = default_config();
  const ActorCritic duel = tiny_net(PolicyName::BALL_DUEL, 2);
  CHECK_THROWS_AS(run_actionspace_walktime(cfg, duel, 0, 5), std::invalid_argument);
}

TEST_CASE("replay trace: deterministic, parseable, replays to the same terminal") {
  const Config cfg = default_config();
  const ActorCritic near = tiny_net(PolicyName::NEAR_GOAL, 3);

  auto run_traced = [&](const std::string& path) {
    std::ofstream out(path);
    TraceWriter trace(out);
    return fidelity_episode(cfg, near, Fidelity::HIGH, false, 1234, &trace);
  };
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string p1 = (tmp / "pitchlab_trace_a.jsonl").string();
  const std::string p2 = (tmp / "pitchlab_trace_b.jsonl").string();
  const EpisodeOutcome live = run_traced(p1);
  const EpisodeOutcome again = run_traced(p2);

  std::ifstream f1(p1), f2(p2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());  // bit-exact across runs with equal seeds
  CHECK(!s1.str().empty());

  const auto records = read_trace(p1);
  REQUIRE(!records.empty());
  CHECK(records.front().tick == 1);
  // The trace's final events line matches the live terminal.
  const auto& last = records.back();
  if (live.terminal == TerminalKind::GOAL) {
    bool goal = false;
    for (const auto& k : last.event_kinds)
      if (k == "GOAL_HOME" || k == "GOAL_AWAY") goal = true;
    CHECK(goal);
  }
  CHECK(again.terminal == live.terminal);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("sha256_file matches a known vector") {
  const auto tmp = std::filesystem::temp_directory_path() / "pitchlab_hash_test.txt";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << "abc";
  }
  CHECK(sha256_file(tmp.string()) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(tmp);
}
