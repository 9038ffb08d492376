#pragma once

#include <array>
#include <cassert>
#include <cstdint>

namespace mdist {

/// xoshiro256** generator with splitmix64 seeding. Deterministic across
/// platforms; the sub-stream constructor derives statistically independent
/// streams from one master seed so component-level reproducibility survives
/// code reordering.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& w : s_) w = splitmix(x);
    // avoid the all-zero state (splitmix never returns four zeros in
    // practice, but cheap to guard)
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    assert(bound > 0);
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = next();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        x = next();
        m = static_cast<unsigned __int128>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// One uniform bit, drawn 64 at a time.
  bool bit() {
    if (bits_left_ == 0) {
      bit_word_ = next();
      bits_left_ = 64;
    }
    const bool b = bit_word_ & 1;
    bit_word_ >>= 1;
    --bits_left_;
    return b;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t bit_word_ = 0;
  int bits_left_ = 0;
};

/// Named sub-streams expanded from a single master seed. Each randomized
/// component draws from its own stream.
struct RngBundle {
  Rng gamma;      // row-sample (Gamma) draws
  Rng signs;      // random sign vectors for identity tests
  Rng emptiness;  // random subsets for emptiness sampling
  Rng descent;    // hierarchy descent branch choices
  Rng zk;         // per-bucket resampling draws
  Rng instance;   // instance generators

  explicit RngBundle(std::uint64_t master)
      : gamma(master, 1),
        signs(master, 2),
        emptiness(master, 3),
        descent(master, 4),
        zk(master, 5),
        instance(master, 6) {}
};

}  // namespace mdist
