#pragma once

// Exact rational helpers and a couple of exactly comparable irrational
// quantities (scaled rational powers, shifted square roots).

#include <string>
#include <string_view>

#include "quadgap/error.hpp"

namespace quadgap {

/// Accepts "p", "p/q" or a plain decimal "x.y"; result is canonical.
Rational parse_rational(std::string_view text);
/// Always "p/q", q >= 1, lowest terms.
std::string format_rational(const Rational& q);

BigInt floor(const Rational& q);
BigInt ceil(const Rational& q);

/// floor(sqrt(q)) for q >= 0.
BigInt floor_sqrt(const Rational& q);
/// Smallest integer r >= 0 with r*r >= q.
BigInt ceil_sqrt(const Rational& q);

/// coeff * base^(num/den) with coeff >= 0, base > 0, num >= 0, den >= 1.
/// Comparisons against rationals are decided exactly by raising both sides to
/// the den-th power.
class RationalPower {
 public:
  RationalPower(Rational coeff, Rational base, unsigned long num, unsigned long den);

  /// Sign of (*this - x): -1, 0 or +1.
  int compare(const Rational& x) const;
  RationalPower scaled(const Rational& factor) const;
  double approx() const;
  /// e.g. "1/1*(400/1)^(1/5)"
  std::string expression() const;

  const Rational& coeff() const noexcept { return coeff_; }
  const Rational& base() const noexcept { return base_; }
  unsigned long num() const noexcept { return num_; }
  unsigned long den() const noexcept { return den_; }

 private:
  Rational coeff_;
  Rational base_;
  unsigned long num_;
  unsigned long den_;
};

/// offset + sqrt(radicand), or offset - sqrt(radicand) when negated.
struct ShiftedSqrt {
  Rational offset;
  Rational radicand;
  bool negated = false;

  /// Sign of (*this - x).
  int compare(const Rational& x) const;
  double approx() const;
  std::string expression() const;
};

struct RationalInterval {
  Rational lower;
  Rational upper;
};

/// Certified enclosure lower <= sqrt(q) <= upper with upper - lower <= width.
RationalInterval sqrt_interval(const Rational& q, const Rational& width);
RationalInterval enclose(const ShiftedSqrt& x, const Rational& width);

double to_double(const Rational& q);

}  // namespace quadgap
