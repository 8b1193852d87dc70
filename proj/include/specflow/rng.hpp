#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace specflow {

/// xoshiro256++ with splitmix64 seeding.  Chosen over std engines so the
/// whole random stream (including the Gaussian transform below) is pinned
/// bit-for-bit across platforms and compilers.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t z = seed;
    for (auto& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      uint64_t x = z;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      word = x ^ (x >> 31);
    }
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe as a log argument.
  double uniform_open() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (std::normal_distribution is
  /// implementation-defined, which would break seed reproducibility).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double a = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// g1 + i g2 with independent standard normal parts (E |z|^2 = 2).
  std::complex<double> gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  /// Integer in [0, n).
  uint64_t below(uint64_t n) { return next() % n; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4] = {};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

constexpr uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (char c : s) {
    h ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream-splitting rule used throughout the harness:
/// per-trial substream = seed xor suite-hash xor trial-index.
constexpr uint64_t substream(uint64_t seed, uint64_t suite_hash, uint64_t trial_index = 0) {
  return seed ^ suite_hash ^ trial_index;
}

}  // namespace specflow
