#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace rrt {

// SplitMix64 (Steele, Lea & Burton, "Fast splittable pseudorandom number
// generators", OOPSLA 2014). Counter-based: the state advances by the
// golden-ratio increment and every output is a bijective finalizer of the
// counter, so disjoint seeds give statistically independent streams.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  std::uint64_t operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform01() { return double((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Unbiased bounded draw in [0, n) (Lemire's multiply-shift rejection).
  std::uint64_t bounded(std::uint64_t n) {
    unsigned __int128 m = (unsigned __int128)(*this)() * n;
    auto lo = (std::uint64_t)m;
    if (lo < n) {
      std::uint64_t t = (-n) % n;
      while (lo < t) {
        m = (unsigned __int128)(*this)() * n;
        lo = (std::uint64_t)m;
      }
    }
    return (std::uint64_t)(m >> 64);
  }

  // Exponential with the given rate; uniform01() < 1 keeps the log finite.
  double exponential(double rate = 1.0) {
    return -std::log1p(-uniform01()) / rate;
  }

  // Geometric on {1,2,...} with success probability q: P[G=g] = q(1-q)^{g-1}.
  std::uint64_t geometric(double q) {
    double u = uniform01();
    if (u == 0.0) u = 0x1.0p-53;
    return 1 + (std::uint64_t)std::floor(std::log(u) / std::log1p(-q));
  }

  // Beta(1, b): CDF 1-(1-x)^b. Beta(1, 0) is the constant 1.
  double beta_1_b(double b) {
    if (b <= 0.0) return 1.0;
    return 1.0 - std::pow(uniform01(), 1.0 / b);
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace detail

// Seed for one replicate stream: hash(master seed, experiment name, index).
// Adding replicates never perturbs existing streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                                 std::uint64_t index) {
  std::uint64_t h = detail::mix64(master ^ detail::fnv1a(name));
  return detail::mix64(h ^ (index * 0x9e3779b97f4a7c15ULL + 1));
}

inline Rng derive_stream(std::uint64_t master, std::string_view name,
                         std::uint64_t index) {
  return Rng(derive_seed(master, name, index));
}

}  // namespace rrt
