#pragma once

// Hand-rolled generators for the property tests. Fixed seeds: failures
// reproduce exactly.

#include <cstdint>
#include <random>

#include "quadgap/error.hpp"

namespace testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  std::uint64_t urange(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }
  bool coin() { return range(0, 1) == 1; }

  /// Small rational with numerator in [-num, num] and denominator in [1, den].
  quadgap::Rational rational(std::int64_t num = 50, std::int64_t den = 12) {
    quadgap::Rational q(quadgap::BigInt(static_cast<long>(range(-num, num))),
                        quadgap::BigInt(static_cast<long>(range(1, den))));
    q.canonicalize();
    return q;
  }

  /// Discriminant: nonzero, 0 or 1 mod 4, |d| <= bound.
  std::int64_t discriminant(std::int64_t bound) {
    for (;;) {
      const std::int64_t d = range(-bound, bound);
      const std::int64_t r = ((d % 4) + 4) % 4;
      if (d != 0 && (r == 0 || r == 1)) return d;
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline quadgap::BigInt big(std::int64_t v) { return quadgap::BigInt(static_cast<long>(v)); }

}  // namespace testing
