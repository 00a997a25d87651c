#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpmbq {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream rule: fold each path component into the seed with one
// splitmix64 round. substream_seed(s, {i, j}) identifies the same stream
// no matter which thread or call order reaches it, which is what makes
// parallel draws reproducible.
inline constexpr std::uint64_t substream_seed(
    std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t component : path) {
    s = splitmix64(s ^ splitmix64(component + 0x632be59bd9b4e019ULL));
  }
  return s;
}

inline std::mt19937_64 make_rng(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path = {}) {
  return std::mt19937_64(substream_seed(seed, path));
}

// Distribution helpers. Each constructs a fresh distribution so that no
// hidden state (e.g. the cached second normal deviate) leaks between call
// sites; draws are a pure function of the engine state.

inline double draw_uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double draw_normal(std::mt19937_64& rng, double mean = 0.0, double sd = 1.0) {
  if (sd == 0.0) return mean;
  return std::normal_distribution<double>(mean, sd)(rng);
}

inline double draw_gamma(std::mt19937_64& rng, double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

inline double draw_exponential(std::mt19937_64& rng, double rate) {
  return std::exponential_distribution<double>(rate)(rng);
}

// Beta(1, b) by inverse CDF: F(x) = 1 - (1 - x)^b.
inline double draw_beta_one(std::mt19937_64& rng, double b) {
  return 1.0 - std::pow(1.0 - draw_uniform(rng), 1.0 / b);
}

inline std::uint64_t draw_index(std::mt19937_64& rng, std::uint64_t count) {
  return std::uniform_int_distribution<std::uint64_t>(0, count - 1)(rng);
}

}  // namespace dpmbq
