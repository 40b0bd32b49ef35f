#include <algorithm>
#include <map>
#include <numeric>

#include "quadgap/arith.hpp"

namespace quadgap::arith {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

// Brent's variant of Pollard rho; returns a nontrivial factor of the odd
// composite n, or 0 after `limit` iterations.
std::uint64_t rho64(std::uint64_t n, std::uint64_t c, std::uint64_t limit) {
  std::uint64_t y = 2, x = 2, q = 1, g = 1, ys = 2;
  std::uint64_t r = 1, spent = 0;
  constexpr std::uint64_t m = 128;
  auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t steps = std::min(m, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += steps;
    }
    r *= 2;
    spent += r;
    if (spent > limit) return 0;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? 0 : g;
}

void split64(std::uint64_t n, std::map<std::uint64_t, std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (std::uint64_t c = 1;; ++c) {
    const std::uint64_t f = rho64(n, c, std::uint64_t{1} << 26);
    if (f != 0) {
      split64(f, out);
      split64(n / f, out);
      return;
    }
  }
}

BigInt rho_big(const BigInt& n, unsigned long c, std::uint64_t limit) {
  BigInt x = 2, y = 2, ys = 2, q = 1, g = 1, diff;
  std::uint64_t r = 1, spent = 0;
  constexpr std::uint64_t m = 128;
  auto step = [&](BigInt& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) step(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t steps = std::min(m, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        step(y);
        diff = x - y;
        q = q * diff % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += steps;
    }
    r *= 2;
    spent += r;
    if (spent > limit) return 0;
  }
  if (g == n) {
    do {
      step(ys);
      diff = x - ys;
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g == n ? BigInt(0) : g;
}

void split_big(const BigInt& n, const FactorBudget& budget, std::map<BigInt, std::uint64_t>& out) {
  if (n == 1) return;
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    std::map<std::uint64_t, std::uint64_t> small;
    split64(n.get_ui(), small);
    for (const auto& [p, e] : small) out[BigInt(static_cast<unsigned long>(p))] += e;
    return;
  }
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (unsigned long c = 1; c <= 8; ++c) {
    const BigInt f = rho_big(n, c, budget.rho_iterations);
    if (f != 0) {
      split_big(f, budget, out);
      split_big(BigInt(n / f), budget, out);
      return;
    }
  }
  throw Error(Errc::factoring_budget,
              "could not factor a " + std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) +
                  "-digit cofactor within the budget");
}

}  // namespace

std::vector<PrimePower> factor(std::uint64_t n) {
  if (n == 0) throw Error(Errc::zero_argument, "cannot factor 0");
  std::map<std::uint64_t, std::uint64_t> found;
  for (std::uint64_t p : {2u, 3u, 5u}) {
    while (n % p == 0) {
      n /= p;
      ++found[p];
    }
  }
  for (std::uint64_t p = 7; p * p <= n && p < 1000; p += 2) {
    while (n % p == 0) {
      n /= p;
      ++found[p];
    }
  }
  split64(n, found);
  std::vector<PrimePower> out;
  for (const auto& [p, e] : found) out.push_back({BigInt(static_cast<unsigned long>(p)), e});
  return out;
}

std::vector<PrimePower> factor(const BigInt& n, const FactorBudget& budget) {
  if (n == 0) throw Error(Errc::zero_argument, "cannot factor 0");
  BigInt rest = abs(n);
  if (mpz_fits_ulong_p(rest.get_mpz_t())) return factor(static_cast<std::uint64_t>(rest.get_ui()));

  std::map<BigInt, std::uint64_t> found;
  for (std::uint64_t p : sieve_primes(budget.trial_limit)) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      const BigInt bp(static_cast<unsigned long>(p));
      found[bp] += mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), bp.get_mpz_t());
      if (mpz_fits_ulong_p(rest.get_mpz_t())) break;
    }
  }
  split_big(rest, budget, found);
  std::vector<PrimePower> out;
  for (auto& [p, e] : found) out.push_back({p, e});
  return out;
}

}  // namespace quadgap::arith
