#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace pitchlab {

// Splittable counter-free PRNG (xoshiro256** seeded through splitmix64).
// Every consumer of randomness in the workbench owns a named stream derived
// from a master seed, so adding one consumer never shifts another's draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  // Derives an independent stream from (master, tag). Streams with distinct
  // tags are decorrelated by the splitmix64 avalanche.
  static Rng stream(std::uint64_t master, std::uint64_t tag) {
    std::uint64_t x = master;
    std::uint64_t a = splitmix64(x);
    std::uint64_t t = tag;
    std::uint64_t b = splitmix64(t);
    return Rng(a ^ (b + 0x9e3779b97f4a7c15ULL));
  }

  static std::uint64_t tag(std::string_view label, std::uint64_t index = 0) {
    // FNV-1a over the label, then mix in the index.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    h ^= index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller. Consumes exactly two uniforms per draw
  // (no cached second value), keeping the draw pattern easy to reason about.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace pitchlab
