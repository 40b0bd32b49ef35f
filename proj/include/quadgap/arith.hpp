#pragma once

// Exact integer arithmetic: primes, quadratic-residue symbols, p-adic
// valuations, integer roots and linear congruences. Every routine that has a
// machine-width overload also has an arbitrary-precision one; the two agree
// bit for bit wherever both apply.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quadgap/error.hpp"

namespace quadgap::arith {

/// Arbitrary-precision nonnegative integer.
class Natural {
 public:
  Natural() = default;
  Natural(std::uint64_t v);  // NOLINT(google-explicit-constructor)
  explicit Natural(BigInt v);

  /// Parses plain decimal digits: no sign, no separators, no exponent.
  static Natural from_decimal(std::string_view text);
  std::string to_decimal() const { return value_.get_str(10); }

  const BigInt& value() const noexcept { return value_; }

  friend bool operator==(const Natural& a, const Natural& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  BigInt value_{0};
};

enum class SymbolValue : int { minus_one = -1, plus_one = 1 };

constexpr int to_int(SymbolValue s) noexcept { return static_cast<int>(s); }

constexpr SymbolValue operator*(SymbolValue a, SymbolValue b) noexcept {
  return to_int(a) == to_int(b) ? SymbolValue::plus_one : SymbolValue::minus_one;
}

/// p-adic valuation. An empty exponent stands for n = 0, which counts as
/// dividing evenly.
struct Valuation {
  BigInt prime;
  std::optional<std::uint64_t> exponent;

  bool infinite() const noexcept { return !exponent.has_value(); }
  bool even() const noexcept { return infinite() || *exponent % 2 == 0; }
  bool odd() const noexcept { return !even(); }
};

struct PrimePower {
  BigInt prime;
  std::uint64_t exponent;
};

// --- primes ---------------------------------------------------------------

/// All primes <= limit, ascending (segmented sieve of Eratosthenes).
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit, unsigned threads = 1);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n);
/// Exact below 3.3e24 (fixed base battery); above that a strong-probable-prime
/// test on the same bases.
bool is_prime(const BigInt& n);

// --- residue symbols ------------------------------------------------------

SymbolValue legendre_symbol(std::int64_t m, std::int64_t p);
SymbolValue legendre_symbol(const BigInt& m, const BigInt& p);

/// Kronecker symbol (d/n) for discriminants d = 0, 1 (mod 4), d != 0, n != 0
/// and gcd(d, n) = 1. Never returns 0: non-coprime inputs are rejected.
SymbolValue kronecker_symbol(std::int64_t d, std::int64_t n);
SymbolValue kronecker_symbol(const BigInt& d, const BigInt& n);

// --- valuations and roots -------------------------------------------------

Valuation valuation(std::int64_t p, std::int64_t n);
Valuation valuation(const BigInt& p, const BigInt& n);
Valuation valuation(const BigInt& p, const Natural& n);

/// Exponent of p in n for n != 0 without the primality precondition check.
std::uint64_t valuation_unchecked(const BigInt& p, const BigInt& n);

bool is_perfect_square(std::int64_t n);
bool is_perfect_square(const BigInt& n);

/// floor(sqrt(n)) for n >= 0.
std::uint64_t isqrt(std::uint64_t n);
BigInt isqrt(const BigInt& n);
/// Smallest r >= 0 with r*r >= n.
std::uint64_t ceil_sqrt(std::uint64_t n);

// --- congruences ----------------------------------------------------------

/// The unique x in [1, M] with a*x = b (mod M). Throws NotCoprimeError when
/// gcd(a, M) != 1.
Natural solve_congruence(const Natural& a, const Natural& b, const Natural& modulus);

BigInt lcm(const BigInt& a, const BigInt& b);

// --- factorization ----------------------------------------------------------

struct FactorBudget {
  std::uint64_t trial_limit = 1u << 16;
  std::uint64_t rho_iterations = 1u << 22;  // per composite cofactor
};

/// Complete factorization of |n| (n != 0), primes ascending.
std::vector<PrimePower> factor(std::uint64_t n);
/// Trial division then Pollard-Brent rho. Throws Errc::factoring_budget if a
/// cofactor resists within the budget; never returns a partial answer.
std::vector<PrimePower> factor(const BigInt& n, const FactorBudget& budget = {});

}  // namespace quadgap::arith
