#pragma once

// Binary and affine quadratic forms, completing the square, and the forms
// that arise from slicing a sphere |k|^2 along the plane k.j = n.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "quadgap/error.hpp"

namespace quadgap::qforms {

/// a k1^2 + b k1 k2 + c k2^2 with integer coefficients.
struct BinaryQuadraticForm {
  BigInt a, b, c;

  BigInt discriminant() const { return b * b - 4 * a * c; }
  BigInt operator()(const BigInt& k1, const BigInt& k2) const { return a * k1 * k1 + b * k1 * k2 + c * k2 * k2; }
  Rational operator()(const Rational& x1, const Rational& x2) const {
    return Rational(a) * x1 * x1 + Rational(b) * x1 * x2 + Rational(c) * x2 * x2;
  }

  friend bool operator==(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;
};

/// a k1^2 + b k1 k2 + c k2^2 + s k1 + t k2 + u over the rationals.
struct AffineQuadraticForm {
  Rational a, b, c, s, t, u;

  Rational quadratic_discriminant() const { return b * b - 4 * a * c; }
  Rational operator()(const Rational& x1, const Rational& x2) const {
    return a * x1 * x1 + b * x1 * x2 + c * x2 * x2 + s * x1 + t * x2 + u;
  }

  friend bool operator==(const AffineQuadraticForm&, const AffineQuadraticForm&) = default;
};

/// Shift with f(x1 + xi1, x2 + xi2) - xi3 = a x1^2 + b x1 x2 + c x2^2.
struct CompletionShift {
  Rational xi1, xi2, xi3;

  friend bool operator==(const CompletionShift&, const CompletionShift&) = default;
};

using Vec3 = std::array<std::int64_t, 3>;

/// A nonzero integer direction rotated so its last coordinate is nonzero.
struct DirectionVector {
  Vec3 original;
  Vec3 j;
  /// Number of right rotations (x, y, z) -> (z, x, y) applied to `original`.
  int shifts = 0;

  std::int64_t norm2() const { return j[0] * j[0] + j[1] * j[1] + j[2] * j[2]; }
};

BigInt discriminant(const BinaryQuadraticForm& f);

CompletionShift complete_square(const AffineQuadraticForm& f);

DirectionVector normalize_j(const Vec3& j);

/// |k|^2 written in (k1, k2) on the plane k.j = n, after eliminating k3.
AffineQuadraticForm build_Tjn(const DirectionVector& j, std::int64_t n);

/// lcm{1, 2, ..., d^2}.
BigInt beta_lcm(std::int64_t d);

/// beta^3 times the quadratic part of T_{j,n} evaluated at (i1/beta, i2/beta):
/// an integral binary form for every |j| <= d.
BinaryQuadraticForm build_tilde_Tj(const DirectionVector& j, std::int64_t d);

struct EvenValuationResult {
  bool pass = true;
  std::optional<std::pair<std::int64_t, std::int64_t>> counterexample;
  std::uint64_t checked = 0;
};

/// Exhaustive check that v_p(f(k1, k2)) is even for |k1|, |k2| <= bound.
/// Points are visited center-out (0, 1, -1, 2, -2, ...) in k1 then k2.
EvenValuationResult even_valuation_check(const BinaryQuadraticForm& f, std::int64_t p,
                                         std::int64_t bound);

/// All nonzero j with |j| <= d, each normalized.
std::vector<DirectionVector> directions(std::int64_t d);

/// Distinct discriminants of build_tilde_Tj over all 0 < |j| <= d, ascending.
std::vector<BigInt> discriminant_set(std::int64_t d);

}  // namespace quadgap::qforms
