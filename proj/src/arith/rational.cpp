#include <cctype>
#include <cmath>

#include "quadgap/arith.hpp"
#include "quadgap/rational.hpp"

namespace quadgap {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!std::isdigit(c)) return false;
  return true;
}

Rational pow(const Rational& q, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
  return r;
}

int sign_of(int c) { return (c > 0) - (c < 0); }

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational q;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw Error(Errc::invalid_argument, "not a rational: '" + original + "'");
    }
    const BigInt d(std::string(den), 10);
    if (d == 0) throw Error(Errc::invalid_argument, "zero denominator in '" + original + "'");
    q = Rational(BigInt(std::string(num), 10), d);
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot), frac = text.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw Error(Errc::invalid_argument, "not a rational: '" + original + "'");
    }
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const BigInt digits(std::string(whole) + std::string(frac), 10);
    q = Rational(digits, scale);
  } else {
    if (!all_digits(text)) throw Error(Errc::invalid_argument, "not a rational: '" + original + "'");
    q = Rational(BigInt(std::string(text), 10));
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BigInt floor(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt floor_sqrt(const Rational& q) {
  if (sgn(q) < 0) throw Error(Errc::invalid_argument, "square root of a negative rational");
  // floor(sqrt(q)) = floor(sqrt(floor(q))) for q >= 0.
  return arith::isqrt(floor(q));
}

BigInt ceil_sqrt(const Rational& q) {
  if (sgn(q) <= 0) return 0;
  BigInt r = floor_sqrt(q);
  if (Rational(r * r) < q) ++r;
  return r;
}

RationalPower::RationalPower(Rational coeff, Rational base, unsigned long num, unsigned long den)
    : coeff_(std::move(coeff)), base_(std::move(base)), num_(num), den_(den) {
  if (den_ == 0) throw Error(Errc::invalid_argument, "zero exponent denominator");
  if (sgn(coeff_) < 0 || sgn(base_) <= 0)
    throw Error(Errc::invalid_argument, "RationalPower needs coeff >= 0 and base > 0");
}

int RationalPower::compare(const Rational& x) const {
  if (sgn(coeff_) == 0) return -sgn(x);
  if (sgn(x) <= 0) return 1;
  // coeff * base^(num/den) vs x  <=>  coeff^den * base^num vs x^den
  const Rational lhs = pow(coeff_, den_) * pow(base_, num_);
  return sign_of(cmp(lhs, pow(x, den_)));
}

RationalPower RationalPower::scaled(const Rational& factor) const {
  return RationalPower(coeff_ * factor, base_, num_, den_);
}

double RationalPower::approx() const {
  return to_double(coeff_) *
         std::pow(to_double(base_), static_cast<double>(num_) / static_cast<double>(den_));
}

std::string RationalPower::expression() const {
  return format_rational(coeff_) + "*(" + format_rational(base_) + ")^(" + std::to_string(num_) +
         "/" + std::to_string(den_) + ")";
}

namespace {

// Sign of sqrt(r) - t.
int sqrt_cmp(const Rational& r, const Rational& t) {
  if (sgn(t) < 0) return 1;
  return sign_of(cmp(r, Rational(t * t)));
}

}  // namespace

int ShiftedSqrt::compare(const Rational& x) const {
  if (negated) return -sqrt_cmp(radicand, offset - x);
  return sqrt_cmp(radicand, x - offset);
}

double ShiftedSqrt::approx() const {
  const double root = std::sqrt(to_double(radicand));
  return to_double(offset) + (negated ? -root : root);
}

std::string ShiftedSqrt::expression() const {
  return format_rational(offset) + (negated ? " - sqrt(" : " + sqrt(") + format_rational(radicand) + ")";
}

RationalInterval sqrt_interval(const Rational& q, const Rational& width) {
  if (sgn(q) < 0) throw Error(Errc::invalid_argument, "square root of a negative rational");
  if (sgn(width) <= 0) throw Error(Errc::invalid_argument, "interval width must be positive");
  // Scale S with 1/S <= width: floor(sqrt(q*S^2))/S <= sqrt(q) < (that + 1)/S.
  const BigInt scale = ceil(Rational(1) / width);
  const BigInt root = floor_sqrt(q * Rational(scale * scale));
  RationalInterval out{Rational(root, scale), Rational(root + 1, scale)};
  out.lower.canonicalize();
  out.upper.canonicalize();
  if (out.lower * out.lower == q) out.upper = out.lower;
  return out;
}

RationalInterval enclose(const ShiftedSqrt& x, const Rational& width) {
  auto r = sqrt_interval(x.radicand, width);
  if (x.negated) return {x.offset - r.upper, x.offset - r.lower};
  return {x.offset + r.lower, x.offset + r.upper};
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace quadgap
