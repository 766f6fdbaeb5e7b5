/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <cstdint>

namespace coinflip {

/// SplitMix64 stream. Chosen over the std engines because its output is fully
/// specified (bit-exact on every platform) and a stream can be derived from
/// (seed, counter) pairs, which keeps Monte Carlo trials independent of
/// execution order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Stream for trial number `trial` of a run seeded with `seed`. Mixing the
  /// counter through one scramble round before seeding avoids correlated
  /// low-entropy starts for adjacent trials.
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    Rng r(seed ^ scramble(trial + 0x9e3779b97f4a7c15ULL));
    r.next_u64();
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return scramble(state_);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (portable, unlike std::normal_distribution).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) {
      u1 = uniform();
    }
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

private:
  static std::uint64_t scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace coinflip
