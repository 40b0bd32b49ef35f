#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace quadgap {

using BigInt = mpz_class;
using Rational = mpq_class;

// Every failure the library reports carries one of these codes, so callers
// (and the CLI) can tell distinct precondition violations apart.
enum class Errc {
  invalid_argument,
  not_prime,
  even_prime,
  divides_argument,       // p | m for a Legendre symbol
  bad_discriminant,       // d not 0 or 1 mod 4
  zero_argument,
  not_coprime,
  degenerate_form,
  zero_vector,
  square_product,         // odd subset of D with square product
  search_exhausted,
  budget_exceeded,
  factoring_budget,
  overflow,
  not_found,
  verification_failed,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by solve_congruence when the modulus shares a factor with the
/// multiplier; carries that common factor.
class NotCoprimeError : public Error {
 public:
  NotCoprimeError(BigInt gcd, const std::string& what)
      : Error(Errc::not_coprime, what), gcd_(std::move(gcd)) {}

  const BigInt& gcd() const noexcept { return gcd_; }

 private:
  BigInt gcd_;
};

/// A certificate cell (j, d) without a valid witness prime, or a broken
/// structural invariant when `cell` is empty.
class VerificationError : public Error {
 public:
  struct Cell {
    std::int64_t j;
    std::int64_t d;
  };

  VerificationError(std::optional<Cell> cell, const std::string& what)
      : Error(Errc::verification_failed, what), cell_(cell) {}

  const std::optional<Cell>& cell() const noexcept { return cell_; }

 private:
  std::optional<Cell> cell_;
};

}  // namespace quadgap
