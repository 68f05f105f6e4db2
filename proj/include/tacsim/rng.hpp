#pragma once

#include <cstdint>
#include <random>

namespace tacsim {

// Seeded generator with distribution helpers whose output depends only on the
// mt19937_64 stream. The standard distribution classes are
// implementation-defined, which would break byte-identical logs across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on [lo, hi]; returns exactly lo when lo == hi.
  double uniform(double lo, double hi);
  // Box-Muller, one fresh pair of uniforms per call.
  double normal(double mean, double stddev);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

// Counter-based seed schedule: the seed of stream `index` under `root` is
// splitmix64(root + (index + 1) * 0x9E3779B97F4A7C15). Episode i can be
// regenerated without replaying episodes 0..i-1.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace tacsim
