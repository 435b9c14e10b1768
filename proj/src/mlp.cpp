#include "pitchlab/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pitchlab {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void xavier(std::vector<double>& p, std::size_t off, int rows, int cols, double scale, Rng& rng) {
  const double s = scale * std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (int i = 0; i < rows * cols; ++i) p[off + i] = rng.uniform(-s, s);
}
}  // namespace

ActorCritic::ActorCritic(int obs_dim, int act_dim, int hidden)
    : obs_dim_(obs_dim), act_dim_(act_dim), hidden_(hidden) {
  const std::size_t h = hidden, o = obs_dim, a = act_dim;
  std::size_t p = 0;
  off_.aW1 = p; p += h * o;
  off_.ab1 = p; p += h;
  off_.aW2 = p; p += h * h;
  off_.ab2 = p; p += h;
  off_.aW3 = p; p += a * h;
  off_.ab3 = p; p += a;
  off_.log_std = p; p += a;
  off_.cW1 = p; p += h * o;
  off_.cb1 = p; p += h;
  off_.cW2 = p; p += h * h;
  off_.cb2 = p; p += h;
  off_.cW3 = p; p += h;
  off_.cb3 = p; p += 1;
  off_.total = p;
  params_.assign(p, 0.0);
}

void ActorCritic::init(Rng& rng, double log_std_init) {
  xavier(params_, off_.aW1, hidden_, obs_dim_, 1.0, rng);
  xavier(params_, off_.aW2, hidden_, hidden_, 1.0, rng);
  xavier(params_, off_.aW3, act_dim_, hidden_, 0.01, rng);
  xavier(params_, off_.cW1, hidden_, obs_dim_, 1.0, rng);
  xavier(params_, off_.cW2, hidden_, hidden_, 1.0, rng);
  xavier(params_, off_.cW3, 1, hidden_, 1.0, rng);
  for (int j = 0; j < act_dim_; ++j) params_[off_.log_std + j] = log_std_init;
}

std::span<const double> ActorCritic::log_std() const {
  return {params_.data() + off_.log_std, static_cast<std::size_t>(act_dim_)};
}

std::span<double> ActorCritic::log_std() {
  return {params_.data() + off_.log_std, static_cast<std::size_t>(act_dim_)};
}

void ActorCritic::mlp_forward(std::size_t w1, std::size_t b1, std::size_t w2, std::size_t b2,
                              std::size_t w3, std::size_t b3, int out_dim,
                              std::span<const double> x, std::vector<double>& h1,
                              std::vector<double>& h2, double* out) const {
  const double* P = params_.data();
  h1.resize(hidden_);
  h2.resize(hidden_);
  for (int i = 0; i < hidden_; ++i) {
    double z = P[b1 + i];
    const double* row = P + w1 + static_cast<std::size_t>(i) * obs_dim_;
    for (int j = 0; j < obs_dim_; ++j) z += row[j] * x[j];
    h1[i] = std::tanh(z);
  }
  for (int i = 0; i < hidden_; ++i) {
    double z = P[b2 + i];
    const double* row = P + w2 + static_cast<std::size_t>(i) * hidden_;
    for (int j = 0; j < hidden_; ++j) z += row[j] * h1[j];
    h2[i] = std::tanh(z);
  }
  for (int i = 0; i < out_dim; ++i) {
    double z = P[b3 + i];
    const double* row = P + w3 + static_cast<std::size_t>(i) * hidden_;
    for (int j = 0; j < hidden_; ++j) z += row[j] * h2[j];
    out[i] = z;
  }
}

void ActorCritic::actor_mean(std::span<const double> obs, std::span<double> mean_out) const {
  std::vector<double> h1, h2;
  mlp_forward(off_.aW1, off_.ab1, off_.aW2, off_.ab2, off_.aW3, off_.ab3, act_dim_, obs, h1, h2,
              mean_out.data());
}

double ActorCritic::value(std::span<const double> obs) const {
  std::vector<double> h1, h2;
  double v = 0.0;
  mlp_forward(off_.cW1, off_.cb1, off_.cW2, off_.cb2, off_.cW3, off_.cb3, 1, obs, h1, h2, &v);
  return v;
}

void ActorCritic::forward(std::span<const double> obs, Trace& t) const {
  t.x.assign(obs.begin(), obs.end());
  t.mean.resize(act_dim_);
  mlp_forward(off_.aW1, off_.ab1, off_.aW2, off_.ab2, off_.aW3, off_.ab3, act_dim_, obs, t.a1,
              t.a2, t.mean.data());
  double v = 0.0;
  mlp_forward(off_.cW1, off_.cb1, off_.cW2, off_.cb2, off_.cW3, off_.cb3, 1, obs, t.c1, t.c2, &v);
  t.value = v;
}

void ActorCritic::backward(const Trace& t, std::span<const double> dmean,
                           std::span<const double> dlog_std, double dvalue,
                           std::span<double> grad) const {
  const double* P = params_.data();
  double* G = grad.data();

  for (int j = 0; j < act_dim_; ++j) G[off_.log_std + j] += dlog_std[j];

  // Shared two-hidden-layer backward for one head.
  auto back = [&](std::size_t w1, std::size_t b1, std::size_t w2, std::size_t b2, std::size_t w3,
                  std::size_t b3, int out_dim, const std::vector<double>& a1,
                  const std::vector<double>& a2, const double* dout) {
    std::vector<double> d2(hidden_, 0.0), d1(hidden_, 0.0);
    for (int i = 0; i < out_dim; ++i) {
      const double g = dout[i];
      if (g == 0.0) continue;
      G[b3 + i] += g;
      double* grow = G + w3 + static_cast<std::size_t>(i) * hidden_;
      const double* prow = P + w3 + static_cast<std::size_t>(i) * hidden_;
      for (int j = 0; j < hidden_; ++j) {
        grow[j] += g * a2[j];
        d2[j] += g * prow[j];
      }
    }
    for (int i = 0; i < hidden_; ++i) {
      const double g = d2[i] * (1.0 - a2[i] * a2[i]);
      if (g == 0.0) continue;
      G[b2 + i] += g;
      double* grow = G + w2 + static_cast<std::size_t>(i) * hidden_;
      const double* prow = P + w2 + static_cast<std::size_t>(i) * hidden_;
      for (int j = 0; j < hidden_; ++j) {
        grow[j] += g * a1[j];
        d1[j] += g * prow[j];
      }
    }
    for (int i = 0; i < hidden_; ++i) {
      const double g = d1[i] * (1.0 - a1[i] * a1[i]);
      if (g == 0.0) continue;
      G[b1 + i] += g;
      double* grow = G + w1 + static_cast<std::size_t>(i) * obs_dim_;
      for (int j = 0; j < obs_dim_; ++j) grow[j] += g * t.x[j];
    }
  };

  back(off_.aW1, off_.ab1, off_.aW2, off_.ab2, off_.aW3, off_.ab3, act_dim_, t.a1, t.a2,
       dmean.data());
  back(off_.cW1, off_.cb1, off_.cW2, off_.cb2, off_.cW3, off_.cb3, 1, t.c1, t.c2, &dvalue);
}

double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action) {
  double lp = 0.0;
  for (std::size_t j = 0; j < mean.size(); ++j) {
    const double z = (action[j] - mean[j]) / std::exp(log_std[j]);
    lp += -0.5 * z * z - log_std[j] - 0.5 * kLog2Pi;
  }
  return lp;
}

double gaussian_entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double ls : log_std) h += ls + 0.5 * (kLog2Pi + 1.0);
  return h;
}

void save_weights(const ActorCritic& net, PolicyName policy, const std::string& path) {
  nlohmann::json header;
  header["layout_version"] = 1;
  header["policy_name"] = to_string(policy);
  header["obs_dim"] = net.obs_dim();
  header["act_dim"] = net.act_dim();
  header["hidden"] = net.hidden();
  header["param_count"] = net.param_count();
  header["dtype"] = "float32";
  header["byte_order"] = "little";
  header["layers"] = {"actor.W1", "actor.b1", "actor.W2", "actor.b2", "actor.W3",
                      "actor.b3", "log_std",  "critic.W1", "critic.b1", "critic.W2",
                      "critic.b2", "critic.W3", "critic.b3"};
  const std::string h = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write weights file: " + path);
  out.write("PLW1", 4);
  const std::uint32_t len = static_cast<std::uint32_t>(h.size());
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  std::vector<float> f(net.param_count());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<float>(net.params()[i]);
  out.write(reinterpret_cast<const char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(float)));
  if (!out) throw std::runtime_error("short write to weights file: " + path);
}

LoadedPolicy load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "PLW1", 4) != 0)
    throw std::runtime_error("bad weights file magic: " + path);
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  std::string htext(len, '\0');
  in.read(htext.data(), len);
  if (!in) throw std::runtime_error("truncated weights header: " + path);
  nlohmann::json header = nlohmann::json::parse(htext);
  if (header.at("layout_version").get<int>() != 1)
    throw std::runtime_error("unsupported weights layout version in " + path);

  const PolicyName policy = policy_from_string(header.at("policy_name").get<std::string>());
  ActorCritic net(header.at("obs_dim").get<int>(), header.at("act_dim").get<int>(),
                  header.at("hidden").get<int>());
  const std::size_t count = header.at("param_count").get<std::size_t>();
  if (count != net.param_count())
    throw std::runtime_error("weights param count mismatch in " + path);
  std::vector<float> f(count);
  in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(count * sizeof(float)));
  if (!in) throw std::runtime_error("truncated weights data: " + path);
  for (std::size_t i = 0; i < count; ++i) net.params()[i] = static_cast<double>(f[i]);
  return {std::move(net), policy};
}

ActorCritic load_weights_for(PolicyName expected, const std::string& path) {
  LoadedPolicy loaded = load_weights(path);
  const PolicySpec spec = PolicySpec::of(expected);
  if (loaded.policy != expected)
    throw std::runtime_error("weights file " + path + " is for " + to_string(loaded.policy) +
                             ", expected " + to_string(expected));
  if (loaded.net.obs_dim() != spec.obs_dim || loaded.net.act_dim() != spec.act_dim)
    throw std::runtime_error("weights dimensions in " + path + " do not match " +
                             to_string(expected));
  return std::move(loaded.net);
}

}  // namespace pitchlab
