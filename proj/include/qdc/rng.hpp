#pragma once

#include <cstdint>
#include <random>

namespace qdc {

/// Derives an independent substream seed from a master seed and a stream id
/// (splitmix64 finalizer over the combined words). Used so that, e.g., run k
/// of a repeated experiment gets its own reproducible generator.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded random source with fixed, portable output mappings.
/// mt19937_64's sequence is pinned by the C++ standard, and both helper
/// mappings below are fully specified here, so identical seeds give identical
/// draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n); unbiased via rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return static_cast<std::size_t>(x % n);
  }

  /// Bernoulli draw: true with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qdc
