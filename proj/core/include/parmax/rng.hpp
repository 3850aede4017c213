#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "parmax/mathutil.hpp"

namespace parmax {

// 64-bit FNV-1a. Used to derive per-cell seeds from a root seed plus text
// labels, so each (tier, level) cell gets an independent, reproducible stream.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

// Deterministic random source. All variates are produced by inverse-transform
// from a single mt19937_64 so the draw sequence is fixed by the seed alone:
// no distribution-object state, no implementation-defined algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in (0, 1); never returns an exact 0 or 1.
  double uniform01() {
    const std::uint64_t bits = engine_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() { return probit(uniform01()); }

  // Log-normal with the given location (mu) and scale (sigma): median exp(mu).
  double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

  // Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  double bernoulli(double p) { return uniform01() < p; }

  // Fisher-Yates with our own index draws, so shuffles are reproducible
  // across standard-library implementations (std::shuffle is not).
  template <typename Container>
  void shuffle(Container& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace parmax
