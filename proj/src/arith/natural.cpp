#include <algorithm>
#include <cctype>
#include <cmath>

#include "quadgap/arith.hpp"

namespace quadgap {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::not_prime: return "not_prime";
    case Errc::even_prime: return "even_prime";
    case Errc::divides_argument: return "divides_argument";
    case Errc::bad_discriminant: return "bad_discriminant";
    case Errc::zero_argument: return "zero_argument";
    case Errc::not_coprime: return "not_coprime";
    case Errc::degenerate_form: return "degenerate_form";
    case Errc::zero_vector: return "zero_vector";
    case Errc::square_product: return "square_product";
    case Errc::search_exhausted: return "search_exhausted";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::factoring_budget: return "factoring_budget";
    case Errc::overflow: return "overflow";
    case Errc::not_found: return "not_found";
    case Errc::verification_failed: return "verification_failed";
  }
  return "unknown";
}

}  // namespace quadgap

namespace quadgap::arith {

Natural::Natural(std::uint64_t v) : value_(static_cast<unsigned long>(v)) {}

Natural::Natural(BigInt v) : value_(std::move(v)) {
  if (sgn(value_) < 0) throw Error(Errc::invalid_argument, "Natural must be nonnegative");
}

Natural Natural::from_decimal(std::string_view text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(),
                                   [](unsigned char c) { return std::isdigit(c); })) {
    throw Error(Errc::invalid_argument, "not a decimal natural: '" + std::string(text) + "'");
  }
  return Natural(BigInt(std::string(text), 10));
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Natural solve_congruence(const Natural& a, const Natural& b, const Natural& modulus) {
  const BigInt& M = modulus.value();
  if (M < 1) throw Error(Errc::invalid_argument, "modulus must be >= 1");
  BigInt g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.value().get_mpz_t(), M.get_mpz_t());
  if (g != 1) {
    throw NotCoprimeError(g, "gcd(a, M) = " + g.get_str() + " != 1; congruence not uniquely solvable");
  }
  // a*s + M*t = 1, so s is the inverse of a.
  BigInt x = (s * b.value()) % M;
  if (x <= 0) x += M;
  return Natural(std::move(x));
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

BigInt isqrt(const BigInt& n) {
  if (sgn(n) < 0) throw Error(Errc::invalid_argument, "isqrt of negative");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::uint64_t ceil_sqrt(std::uint64_t n) {
  const std::uint64_t r = isqrt(n);
  return r * r == n ? r : r + 1;
}

bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  const auto r = isqrt(static_cast<std::uint64_t>(n));
  return r * r == static_cast<std::uint64_t>(n);
}

bool is_perfect_square(const BigInt& n) {
  if (sgn(n) < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

namespace {

void require_prime(const BigInt& p) {
  if (!is_prime(p)) throw Error(Errc::not_prime, p.get_str() + " is not prime");
}

}  // namespace

std::uint64_t valuation_unchecked(const BigInt& p, const BigInt& n) {
  BigInt rest;
  return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

Valuation valuation(const BigInt& p, const BigInt& n) {
  require_prime(p);
  if (sgn(n) == 0) return {p, std::nullopt};
  return {p, valuation_unchecked(p, n)};
}

Valuation valuation(const BigInt& p, const Natural& n) { return valuation(p, n.value()); }

Valuation valuation(std::int64_t p, std::int64_t n) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
  }
  if (n == 0) return {BigInt(static_cast<long>(p)), std::nullopt};
  std::uint64_t e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return {BigInt(static_cast<long>(p)), e};
}

}  // namespace quadgap::arith
