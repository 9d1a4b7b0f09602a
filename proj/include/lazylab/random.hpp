#pragma once

#include <cstdint>
#include <random>

#include "lazylab/qmat.hpp"

namespace lazylab {

/// One SplitMix64 output step for state x.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent child seed for stream `index` of `seed`. Distinct indices give
/// decorrelated streams, so Monte Carlo trials can run in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seeded Gaussian source. Deterministic for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();
  ComplexMatrix complex_gaussian(int rows, int cols);

  /// Child generator for stream `index`; does not advance this generator.
  Rng split(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace lazylab
