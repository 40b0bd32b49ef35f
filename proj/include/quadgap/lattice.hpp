#pragma once

// Sums of two and three squares, gap scans, exact lattice-point enumeration
// in annuli and spherical shells, sparse-annulus search, the explicit
// close-pair constructions, and the 3D sparse-shell pipeline.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "quadgap/arith.hpp"
#include "quadgap/gapforge.hpp"
#include "quadgap/rational.hpp"

namespace quadgap::lattice {

template <std::size_t Dim>
struct LatticePoint {
  std::array<std::int64_t, Dim> x{};

  std::int64_t norm2() const {
    std::int64_t s = 0;
    for (auto v : x) s += v * v;
    return s;
  }

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

using LatticePoint2 = LatticePoint<2>;
using LatticePoint3 = LatticePoint<3>;

template <std::size_t Dim>
std::int64_t distance2(const LatticePoint<Dim>& a, const LatticePoint<Dim>& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < Dim; ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
  return s;
}

/// {x : lower <= |x|^2 <= upper} with per-bound closure; exact rationals.
struct Region {
  Rational lower;
  Rational upper;
  bool lower_closed = true;
  bool upper_closed = true;

  bool contains(const BigInt& norm2) const;
  bool contains(std::int64_t norm2) const { return contains(BigInt(static_cast<long>(norm2))); }
  /// Integer norms in the region form [first, last]; empty when first > last.
  std::pair<BigInt, BigInt> norm_range() const;
};

/// {x in R^2 : lambda <= |x|^2 <= lambda + kappa}.
struct Annulus {
  Rational lambda;
  Rational kappa;
  bool lower_closed = true;
  bool upper_closed = true;

  Region region() const { return {lambda, lambda + kappa, lower_closed, upper_closed}; }
};

/// {x in R^3 : m <= |x|^2 <= m + h}.
struct SphericalShell {
  Rational m;
  Rational h;
  bool lower_closed = true;
  bool upper_closed = true;

  Region region() const { return {m, m + h, lower_closed, upper_closed}; }
};

// --- sums of squares ---------------------------------------------------------

/// Membership bitset of sums of two squares over [0, limit].
class TwoSquaresSieve {
 public:
  TwoSquaresSieve() = default;
  explicit TwoSquaresSieve(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  bool contains(std::uint64_t n) const { return (words_[n >> 6] >> (n & 63)) & 1u; }
  std::uint64_t count() const;
  /// Smallest member >= n within the sieve, if any.
  std::optional<std::uint64_t> next_member(std::uint64_t n) const;

  void mark_window(std::uint64_t lo, std::uint64_t hi);

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Sieve budget: 2^34 entries (2 GiB of bits) by default.
TwoSquaresSieve two_squares_sieve(std::uint64_t limit, unsigned threads = 1,
                                  std::uint64_t max_limit = std::uint64_t{1} << 34);

/// Every prime 3 mod 4 divides n an even number of times. Factors n; throws
/// Errc::factoring_budget instead of guessing.
bool is_sum_two_squares(const arith::Natural& n, const arith::FactorBudget& budget = {});

struct GapRecord {
  std::uint64_t s_n;
  std::uint64_t s_next;
  std::uint64_t gap;
  /// gap / ln(s_n); approximate. NaN when s_n <= 1.
  double ratio;
};

/// Record gaps between consecutive sums of two squares up to limit.
std::vector<GapRecord> gap_scan_2sq(std::uint64_t limit, unsigned threads = 1);

/// Smallest k in [from, limit] whose window [k, k + beta k^(1/4)) misses every
/// sum of two squares. Exact comparison; no floating point.
std::optional<std::uint64_t> bambah_chowla_check(std::uint64_t limit, const Rational& beta,
                                                 std::uint64_t from = 2, unsigned threads = 1);

bool is_sum_three_squares(std::uint64_t n);

struct ThreeSquaresGapReport {
  std::uint64_t max_gap = 0;
  /// First (s_n, s_next) for each gap size.
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> witnesses;
};

ThreeSquaresGapReport three_squares_gap_check(std::uint64_t limit);

// --- enumeration -------------------------------------------------------------

struct EnumerationBudget {
  std::uint64_t max_iterations = 50'000'000;
};

std::vector<LatticePoint2> enumerate_annulus_points(const Annulus& a, const EnumerationBudget& budget = {});
std::vector<LatticePoint3> enumerate_shell_points(const SphericalShell& s, const EnumerationBudget& budget = {});
std::vector<LatticePoint2> enumerate_region2(const Region& r, const EnumerationBudget& budget = {});
std::vector<LatticePoint3> enumerate_region3(const Region& r, const EnumerationBudget& budget = {});

/// Exact minimum squared distance over distinct pairs; empty for < 2 points.
/// Uses a uniform grid, falling back to all pairs when the grid gets coarse.
template <std::size_t Dim>
std::optional<std::int64_t> min_pairwise_distance2(std::span<const LatticePoint<Dim>> points);

extern template std::optional<std::int64_t> min_pairwise_distance2<2>(std::span<const LatticePoint2>);
extern template std::optional<std::int64_t> min_pairwise_distance2<3>(std::span<const LatticePoint3>);

// --- sparse annulus search -----------------------------------------------------

struct SparseAnnulusParams {
  Rational C;
  Rational s;   // in (0, 1/4)
  std::int64_t d = 1;
  Rational mu;
};

struct AnnulusBucket {
  std::int64_t index;
  std::uint64_t points;
  std::optional<std::int64_t> min_distance2;
  std::uint64_t strip_points;  // points of this annulus inside the strip union
};

struct SparseSearchReport {
  bool found = false;
  std::int64_t m0 = -1;
  std::int64_t J = 0;
  RationalPower kappa{1, 1, 0, 1};
  /// lambda = mu + m0 * kappa; the selected annulus is lambda < |x|^2 <= lambda + kappa.
  Rational mu;
  std::vector<LatticePoint2> points;
  std::optional<std::int64_t> min_distance2;
  /// Same lattice points as the half-open annulus, as a closed one:
  /// [floor(lambda) + 1, floor(lambda + kappa)].
  BigInt closed_lower = 0;
  BigInt closed_upper = 0;
  bool strip_empty = false;

  // diagnostics
  std::vector<AnnulusBucket> buckets;
  std::uint64_t total_points = 0;         // card(N^mu cap Z^2)
  std::uint64_t strip_union_points = 0;   // card(S^mu cap N^mu cap Z^2)
  double counting_bound = 0;              // 16 d^2 C^2 mu^(2s), approximate
  bool counting_bound_holds = false;      // asymptotic; reported only
  double thickness = 0;                   // sqrt(mu + (J+1) kappa) - sqrt(mu)
  double half_C_mu_s = 0;
  double strip_width_max = 0;             // (kappa + d^2) / min |j|, approximate
  double lambda_approx = 0;
};

SparseSearchReport sparse_annulus_search(const SparseAnnulusParams& params,
                                         const EnumerationBudget& budget = {});

// --- explicit close pairs --------------------------------------------------------

struct ClosePair2 {
  LatticePoint2 first;
  LatticePoint2 second;
  Rational lambda;
  RationalPower width;  // alpha * lambda^(1/4)
};

/// Two lattice points at distance 1 in [lambda, lambda + alpha lambda^(1/4)],
/// alpha > 4 sqrt 2. Errc::not_found when lambda is too small.
ClosePair2 prop23_construct(const Rational& lambda, const Rational& alpha);

struct ClosePair3 {
  LatticePoint3 first;
  LatticePoint3 second;
  Rational m;
  RationalPower width;  // C m^(1/8)
  Rational beta;
  std::uint64_t s;      // k^2 + l^2
};

/// Two lattice points at distance 1 in [m, m + C m^(1/8)], C > 4 * 8^(1/4).
/// beta defaults to a rational near the midpoint of (2 sqrt 2, C^2/16).
ClosePair3 prop26_construct(const Rational& m, const Rational& C,
                            std::optional<Rational> beta = std::nullopt);

Rational default_prop26_beta(const Rational& C);

// --- 3D pipeline --------------------------------------------------------------

struct PipelineOptions {
  unsigned threads = 1;
  /// Direct shell enumeration only when the outer norm is at most this.
  std::int64_t verify_norm_limit = 1'000'000;
  Rational interval_width{1, 1'000'000'000};
  EnumerationBudget budget{};
};

struct ShellVerification {
  bool ran = false;
  std::vector<LatticePoint3> points;
  std::optional<std::int64_t> min_distance2;
  bool sparse = false;
  std::string skipped_reason;
};

struct Theorem25Report {
  std::int64_t d = 0;
  std::int64_t h0 = 0;
  BigInt beta;
  std::vector<BigInt> D;
  gapforge::GapCertificate certificate;
  gapforge::WitnessTable witnesses;
  /// h = -(d^2 + 2) + sqrt(4 (d^2 + 1 + h0 / beta^3)).
  ShiftedSqrt h_out;
  RationalInterval h_interval;
  /// m = (m0 + h0) / beta^3 + (d^2 + 2) - sqrt(...) ; m + h = (m0 + h0) / beta^3.
  ShiftedSqrt m;
  RationalInterval m_interval;
  Rational shell_upper;
  ShellVerification verification;

  /// Exact membership of an integer norm in [m, m + h].
  bool shell_contains(const BigInt& norm2) const;
};

Theorem25Report theorem25_pipeline(std::int64_t d, std::int64_t h0, const PipelineOptions& options = {});

}  // namespace quadgap::lattice
