#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace aac {

/// Counter-based generator: draw i is splitmix64(key + i * golden_gamma), with
/// key = splitmix64(seed). Only integer arithmetic and exact float scaling are
/// used, so the stream is identical on every IEEE-754 platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in [low, high).
  double uniform(double low, double high);
  /// Uniform integer in [0, n); n > 0.
  std::size_t index(std::size_t n);

  /// Independent generator for a named sub-stream of this seed.
  Rng fork(std::uint64_t stream) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace aac
