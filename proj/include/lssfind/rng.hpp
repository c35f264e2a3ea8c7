#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lssfind {

// Deterministic, portable PRNG (xoshiro256++ seeded via splitmix64).
// Streams derived from (seed, stream_id) are independent enough for
// per-tree / per-replicate use and reproduce bit-identically across
// thread counts and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    for (auto& w : state_) w = splitmix64(x);
    // xoshiro must not start from the all-zero state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller; second variate cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    // u1 in (0,1] so log() stays finite
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // First k entries of a partial Fisher-Yates shuffle of `items`.
  // `items` is reused across calls; its order carries over, which is fine
  // because every permutation remains equally likely.
  template <typename T>
  void draw_without_replacement(std::vector<T>& items, std::size_t k, std::vector<T>& out) {
    out.clear();
    const std::size_t n = items.size();
    for (std::size_t i = 0; i < k && i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(items[i], items[j]);
      out.push_back(items[i]);
    }
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Stateless mix of (seed, tag); used to derive sub-seeds.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t x = seed ^ (0xbf58476d1ce4e5b9ULL * (tag + 0x9e3779b97f4a7c15ULL));
    return splitmix64(x);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace lssfind
