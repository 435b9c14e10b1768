#include "pitchlab/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pitchlab {

GaeResult gae(const std::vector<double>& rewards, const std::vector<double>& values,
              const std::vector<std::uint8_t>& dones, double gamma, double lambda) {
  const std::size_t T = rewards.size();
  if (values.size() != T + 1 || dones.size() != T)
    throw std::invalid_argument("gae: length mismatch (values must carry a bootstrap entry)");
  GaeResult out;
  out.advantages.resize(T);
  out.returns.resize(T);
  double running = 0.0;
  for (std::size_t i = T; i-- > 0;) {
    const double not_done = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * values[i + 1] * not_done - values[i];
    running = delta + gamma * lambda * not_done * running;
    out.advantages[i] = running;
    out.returns[i] = running + values[i];
  }
  return out;
}

PpoStats ppo_loss(const ActorCritic& net, const RolloutBatch& batch,
                  const std::vector<std::size_t>& indices, const TrainConfig& cfg,
                  std::vector<double>* grad) {
  const int act_dim = batch.act_dim;
  const double n = static_cast<double>(indices.size());
  const auto log_std = net.log_std();

  PpoStats stats;
  ActorCritic::Trace trace;
  std::vector<double> dmean(act_dim), dlog_std(act_dim), z(act_dim);

  for (const std::size_t i : indices) {
    std::span<const double> obs{batch.obs.data() + i * batch.obs_dim,
                                static_cast<std::size_t>(batch.obs_dim)};
    std::span<const double> action{batch.actions.data() + i * act_dim,
                                   static_cast<std::size_t>(act_dim)};
    net.forward(obs, trace);

    double logp = 0.0;
    for (int j = 0; j < act_dim; ++j) {
      z[j] = (action[j] - trace.mean[j]) / std::exp(log_std[j]);
      logp += -0.5 * z[j] * z[j] - log_std[j] - 0.918938533204672742;  // 0.5*log(2*pi)
    }

    const double adv = batch.advantages[i];
    const double log_ratio = logp - batch.log_probs[i];
    const double ratio = std::exp(log_ratio);
    const double surr1 = ratio * adv;
    const double clipped =
        std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
    const double surr2 = clipped * adv;
    stats.policy_loss += -std::min(surr1, surr2) / n;

    const double verr = trace.value - batch.returns[i];
    stats.value_loss += verr * verr / n;

    stats.entropy += gaussian_entropy(log_std) / n;
    stats.approx_kl += ((ratio - 1.0) - log_ratio) / n;

    if (grad) {
      // d(policy_loss)/d(logp): active only when the unclipped branch is
      // selected or the ratio sits inside the clip band.
      double coef = 0.0;
      const bool unclipped_selected = surr1 <= surr2;
      const bool inside_band =
          ratio > 1.0 - cfg.clip_epsilon && ratio < 1.0 + cfg.clip_epsilon;
      if (unclipped_selected || inside_band) coef = -adv * ratio / n;

      const double dv = cfg.value_coef * 2.0 * verr / n;
      for (int j = 0; j < act_dim; ++j) {
        dmean[j] = coef * z[j] / std::exp(log_std[j]);
        dlog_std[j] = coef * (z[j] * z[j] - 1.0) - cfg.entropy_coef / n;
      }
      net.backward(trace, dmean, dlog_std, dv, *grad);
    }
  }

  stats.total_loss =
      stats.policy_loss + cfg.value_coef * stats.value_loss - cfg.entropy_coef * stats.entropy;
  return stats;
}

Adam::Adam(std::size_t n, double beta1, double beta2, double eps)
    : m_(n, 0.0), v_(n, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
  }
}

PpoStats ppo_update(ActorCritic& net, RolloutBatch& batch, const TrainConfig& cfg, Adam& adam,
                    Rng& shuffle_rng) {
  // Batch-level advantage normalization.
  const std::size_t n = batch.size;
  double mean = 0.0;
  for (double a : batch.advantages) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double a : batch.advantages) var += (a - mean) * (a - mean);
  const double std = std::sqrt(var / static_cast<double>(n));
  for (double& a : batch.advantages) a = (a - mean) / (std + 1e-8);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(net.param_count());
  std::vector<std::size_t> mb;

  PpoStats last{};
  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    // Fisher-Yates with the seeded stream; std::shuffle is avoided so the
    // permutation is identical across standard libraries.
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = shuffle_rng.uniform_int(i);
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t start = 0; start < n; start += cfg.minibatch_size) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.minibatch_size));
      mb.assign(order.begin() + start, order.begin() + stop);
      std::fill(grad.begin(), grad.end(), 0.0);
      last = ppo_loss(net, batch, mb, cfg, &grad);
      if (!std::isfinite(last.total_loss)) {
        std::ostringstream os;
        os << "ppo_update: non-finite loss (policy=" << last.policy_loss
           << " value=" << last.value_loss << " entropy=" << last.entropy
           << " kl=" << last.approx_kl << "), update aborted";
        throw std::runtime_error(os.str());
      }
      adam.step(net.params(), grad, cfg.learning_rate);
    }
  }
  return last;
}

double recent_goal_rate(const std::vector<EpisodeRecord>& episodes, std::size_t window) {
  if (episodes.empty()) return 0.0;
  const std::size_t n = std::min(window, episodes.size());
  std::size_t goals = 0;
  for (std::size_t i = episodes.size() - n; i < episodes.size(); ++i)
    if (episodes[i].terminal == TerminalKind::GOAL) ++goals;
  return static_cast<double>(goals) / static_cast<double>(n);
}

void write_curve_csv(const std::vector<CurveRow>& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve csv: " + path);
  out << "update,steps,mean_return,entropy\n";
  for (const auto& row : curve) {
    out << row.update << "," << row.steps << "," << row.mean_return << "," << row.entropy
        << "\n";
  }
}

TrainResult train_policy(const Config& cfg, PolicyName policy, ScenarioName scenario,
                         std::optional<Fidelity> fidelity_override, const ProgressFn& progress) {
  const TrainConfig& tc = cfg.train;
  const PolicySpec spec = PolicySpec::of(policy);
  const int n_envs = tc.n_envs;
  const int horizon = tc.rollout_horizon;
  const std::size_t batch_size = static_cast<std::size_t>(n_envs) * horizon;

  // Environments, action-sampling streams, and per-env running returns.
  std::vector<std::unique_ptr<TrainingEnv>> envs;
  std::vector<Rng> act_rngs;
  std::vector<double> ep_return(n_envs, 0.0);
  envs.reserve(n_envs);
  for (int e = 0; e < n_envs; ++e) {
    envs.push_back(std::make_unique<TrainingEnv>(
        cfg, policy, scenario, fidelity_override,
        Rng::stream(tc.seed, Rng::tag("env", e)).next_u64()));
    act_rngs.push_back(Rng::stream(tc.seed, Rng::tag("act", e)));
  }

  TrainResult result{ActorCritic(spec.obs_dim, spec.act_dim, tc.hidden_size), {}, {}};
  {
    Rng init_rng = Rng::stream(tc.seed, Rng::tag("init"));
    result.net.init(init_rng, tc.log_std_init);
  }
  Adam adam(result.net.param_count());
  Rng shuffle_rng = Rng::stream(tc.seed, Rng::tag("shuffle"));

  std::vector<std::vector<double>> current_obs(n_envs);
  for (int e = 0; e < n_envs; ++e) current_obs[e] = envs[e]->reset();

  RolloutBatch batch;
  batch.obs_dim = spec.obs_dim;
  batch.act_dim = spec.act_dim;
  batch.size = batch_size;
  batch.obs.resize(batch_size * spec.obs_dim);
  batch.actions.resize(batch_size * spec.act_dim);
  batch.log_probs.resize(batch_size);
  batch.advantages.resize(batch_size);
  batch.returns.resize(batch_size);

  std::vector<double> rewards(horizon), values(horizon + 1);
  std::vector<std::uint8_t> dones(horizon);
  std::vector<double> mean(spec.act_dim), action(spec.act_dim), clipped(spec.act_dim);

  std::int64_t steps_done = 0;
  int update = 0;
  while (steps_done < tc.total_steps) {
    ++update;
    std::size_t episodes_before = result.episodes.size();

    for (int e = 0; e < n_envs; ++e) {
      TrainingEnv& env = *envs[e];
      Rng& arng = act_rngs[e];
      const std::size_t base = static_cast<std::size_t>(e) * horizon;

      for (int t = 0; t < horizon; ++t) {
        const std::size_t row = base + t;
        std::copy(current_obs[e].begin(), current_obs[e].end(),
                  batch.obs.begin() + row * spec.obs_dim);

        result.net.actor_mean(current_obs[e], mean);
        const auto log_std = result.net.log_std();
        for (int j = 0; j < spec.act_dim; ++j) {
          action[j] = mean[j] + std::exp(log_std[j]) * arng.normal();
          clipped[j] = std::clamp(action[j], -1.0, 1.0);
        }
        const double logp = gaussian_log_prob(mean, log_std, action);
        std::copy(action.begin(), action.end(), batch.actions.begin() + row * spec.act_dim);
        batch.log_probs[row] = logp;
        values[t] = result.net.value(current_obs[e]);

        const auto sr = env.step(clipped);
        rewards[t] = sr.reward;
        dones[t] = sr.done ? 1 : 0;
        ep_return[e] += sr.reward;
        if (sr.done) {
          result.episodes.push_back({ep_return[e], sr.terminal});
          ep_return[e] = 0.0;
        }
        current_obs[e] = *sr.obs;
      }
      values[horizon] = result.net.value(current_obs[e]);

      const GaeResult g = gae(rewards, values, dones, tc.gamma, tc.gae_lambda);
      std::copy(g.advantages.begin(), g.advantages.end(), batch.advantages.begin() + base);
      std::copy(g.returns.begin(), g.returns.end(), batch.returns.begin() + base);
    }

    steps_done += static_cast<std::int64_t>(batch_size);
    const PpoStats stats = ppo_update(result.net, batch, tc, adam, shuffle_rng);

    // Scheduled exploration: log_std anneals linearly over the run, so late
    // training episodes reflect near-deterministic behavior.
    {
      const double progress =
          std::min(1.0, static_cast<double>(steps_done) / std::max<std::int64_t>(1, tc.total_steps));
      const double ls = tc.log_std_init + (tc.log_std_final - tc.log_std_init) * progress;
      for (double& v : result.net.log_std()) v = ls;
    }

    double mean_return = std::numeric_limits<double>::quiet_NaN();
    if (result.episodes.size() > episodes_before) {
      double s = 0.0;
      for (std::size_t i = episodes_before; i < result.episodes.size(); ++i)
        s += result.episodes[i].undiscounted_return;
      mean_return = s / static_cast<double>(result.episodes.size() - episodes_before);
    }
    result.curve.push_back({update, steps_done, mean_return, stats.entropy});
    if (progress) progress({update, steps_done, tc.total_steps, mean_return, stats.entropy});
  }

  return result;
}

}  // namespace pitchlab
