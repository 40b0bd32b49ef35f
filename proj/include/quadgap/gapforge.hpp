#pragma once

// Certified intervals [m, m+h] that no integral binary quadratic form with
// discriminant in a given set D can represent.
//
// Construction: pick r with (d/r) = -1 for every d in D, let delta be the lcm
// of |d|, A the largest |r + delta j| for 0 <= j <= h, P the product of
// p^(1+alpha) over primes p <= A not dividing delta (p^alpha <= A < p^(1+alpha)),
// and solve delta m = r (mod P). Then for every j some prime p with (d/p) = -1
// divides m + j to an odd power, which no form of discriminant d allows.

#include <cstdint>
#include <span>
#include <vector>

#include "quadgap/arith.hpp"

namespace quadgap::gapforge {

class DiscriminantSet {
 public:
  /// Validates: nonempty, no zero, every element 0 or 1 mod 4, and no
  /// odd-cardinality subset with a square product. Duplicates collapse.
  static DiscriminantSet validate(std::span<const std::int64_t> values);

  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  bool all_negative() const noexcept { return values_.back() < 0; }

  friend bool operator==(const DiscriminantSet&, const DiscriminantSet&) = default;

 private:
  std::vector<std::int64_t> values_;  // ascending, distinct
};

inline DiscriminantSet validate_D(std::span<const std::int64_t> values) {
  return DiscriminantSet::validate(values);
}

struct GapCertificate {
  DiscriminantSet D;
  std::int64_t r = 0;
  std::int64_t delta = 0;
  std::int64_t h = 0;
  std::int64_t A = 0;
  arith::Natural P;
  arith::Natural m;

  friend bool operator==(const GapCertificate&, const GapCertificate&) = default;
};

struct Witness {
  std::int64_t j;
  std::int64_t d;
  std::int64_t p;
  std::uint64_t valuation_r_plus_dj;
  std::uint64_t valuation_m_plus_j;
  std::uint64_t valuation_P;

  friend bool operator==(const Witness&, const Witness&) = default;
};

using WitnessTable = std::vector<Witness>;

/// Smallest positive r with gcd(d, r) = 1 and (d/r) = -1 for all d in D.
/// Gives up past 4 * prod |d| (Errc::search_exhausted).
std::int64_t find_r(const DiscriminantSet& D);

struct ConstructOptions {
  unsigned threads = 1;
  /// Refuse construction when A exceeds this (the prime sieve runs to A).
  std::int64_t max_A = 2'000'000'000;
};

GapCertificate construct_gap(const DiscriminantSet& D, std::int64_t h,
                             const ConstructOptions& options = {});

/// Checks every structural invariant and one witness prime per (j, d) cell.
/// Throws VerificationError naming the first failing cell (j ascending, then
/// d ascending) or the broken invariant.
WitnessTable verify_certificate(const GapCertificate& cert, unsigned threads = 1);

/// Independent cross-check for D = {-4}: true iff no integer in [m, m+h] is a
/// sum of two squares. Sieves when m + h <= sieve_limit, factors otherwise.
bool verify_interval_free_oracle(const DiscriminantSet& D, const arith::Natural& m, std::int64_t h,
                                 std::uint64_t sieve_limit = 10'000'000);

struct BoundReport {
  double log_m = 0;          // approximate
  double four_A = 0;
  double eight_delta_h = 0;
  bool m_le_exp_4A = false;
  bool m_le_exp_8_delta_h = false;  // asymptotic claim, reported only
  double h_over_log_m = 0;   // approximate
  double asymptotic_floor = 0;  // 1/(8 delta)
};

BoundReport bound_report(const GapCertificate& cert);

}  // namespace quadgap::gapforge
