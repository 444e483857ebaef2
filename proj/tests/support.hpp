#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "magic_bullet/rng.hpp"

// Seeded draws for property tests; every case gets its own substream so a failing
// case can be replayed from its index alone.
namespace testing_support {

class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t index) : rng_(magic_bullet::substream(seed, index)) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::uint64_t seed() { return rng_(); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing_support
