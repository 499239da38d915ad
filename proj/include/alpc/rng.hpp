#pragma once

#include <cstdint>
#include <random>

namespace alpc {

// Seeded random source. All draws are derived from the raw mt19937_64 word
// stream by explicit arithmetic, so a given seed reproduces the same value
// sequence on every run of the same binary.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; values are produced in pairs.
  double normal();

  // Unbiased uniform index in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Derives an independent seed for a numbered substream.
  static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace alpc
