#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gpbound {

// Seedable generator whose output stream is identical on every platform.
//
// The engine is std::mt19937_64, whose sequence is fixed by the standard.
// The standard distributions are not (their algorithms are unspecified), so
// the draws below are implemented here: integers by rejection sampling on the
// raw 64-bit output, reals from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  // Uniform real in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller on uniform01.
  double normal();

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

  std::vector<int> permutation(int n);

  // Derives an independent child seed; used to give each sample its own
  // stream so results do not depend on evaluation order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace gpbound
