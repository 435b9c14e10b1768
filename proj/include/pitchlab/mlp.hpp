#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pitchlab/policy_io.hpp"
#include "pitchlab/rng.hpp"

namespace pitchlab {

// Tanh MLP actor-critic over one flat parameter vector (all doubles
// internally; weight files store float32). Layout, in order:
//   actor.W1[h x obs] actor.b1[h] actor.W2[h x h] actor.b2[h]
//   actor.W3[act x h] actor.b3[act] log_std[act]
//   critic.W1[h x obs] critic.b1[h] critic.W2[h x h] critic.b2[h]
//   critic.W3[1 x h] critic.b3[1]
// Matrices are row-major. The action head is a state-independent log-std
// per dimension.
class ActorCritic {
 public:
  ActorCritic(int obs_dim, int act_dim, int hidden);

  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  int hidden() const { return hidden_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Xavier-uniform init, final actor layer scaled down, log_std constant.
  void init(Rng& rng, double log_std_init);

  std::span<const double> log_std() const;
  std::span<double> log_std();

  // Deterministic forward passes.
  void actor_mean(std::span<const double> obs, std::span<double> mean_out) const;
  double value(std::span<const double> obs) const;

  // Forward with intermediate activations kept for backprop.
  struct Trace {
    std::vector<double> x, a1, a2, mean, c1, c2;
    double value = 0.0;
  };
  void forward(std::span<const double> obs, Trace& t) const;

  // Accumulates parameter gradients for one sample given upstream
  // derivatives w.r.t. the actor mean, per-dimension log-std, and the value.
  void backward(const Trace& t, std::span<const double> dmean,
                std::span<const double> dlog_std, double dvalue,
                std::span<double> grad) const;

 private:
  struct Offsets {
    std::size_t aW1, ab1, aW2, ab2, aW3, ab3, log_std;
    std::size_t cW1, cb1, cW2, cb2, cW3, cb3;
    std::size_t total;
  };

  void mlp_forward(std::size_t w1, std::size_t b1, std::size_t w2, std::size_t b2,
                   std::size_t w3, std::size_t b3, int out_dim, std::span<const double> x,
                   std::vector<double>& h1, std::vector<double>& h2, double* out) const;

  int obs_dim_, act_dim_, hidden_;
  Offsets off_;
  std::vector<double> params_;
};

// Diagonal Gaussian helpers on top of the actor head.
double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action);
double gaussian_entropy(std::span<const double> log_std);

// Weights file: "PLW1" magic, uint32 little-endian header length, JSON
// header, then param_count little-endian float32 values in layout order.
void save_weights(const ActorCritic& net, PolicyName policy, const std::string& path);

struct LoadedPolicy {
  ActorCritic net;
  PolicyName policy;
};
LoadedPolicy load_weights(const std::string& path);

// Loads and verifies the file matches the given policy's spec; throws
// std::runtime_error on any mismatch (dimension errors are fatal at load).
ActorCritic load_weights_for(PolicyName expected, const std::string& path);

}  // namespace pitchlab
