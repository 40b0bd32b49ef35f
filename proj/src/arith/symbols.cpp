#include <cstdlib>
#include <limits>
#include <numeric>

#include "quadgap/arith.hpp"

namespace quadgap::arith {

namespace {

long emod(std::int64_t x, long m) {
  const long r = static_cast<long>(x % m);
  return r < 0 ? r + m : r;
}

long emod(const BigInt& x, long m) {
  return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(m)));
}

bool is_even(std::int64_t x) { return (x & 1) == 0; }
bool is_even(const BigInt& x) { return mpz_even_p(x.get_mpz_t()) != 0; }

std::int64_t absval(std::int64_t x) { return x < 0 ? -x : x; }
BigInt absval(const BigInt& x) { return abs(x); }

// (2/b) for odd b, indexed by b mod 8.
constexpr int kTwoTable[8] = {0, 1, 0, -1, 0, -1, 0, 1};

// Kronecker symbol by the binary reciprocity algorithm; returns 0 when the
// arguments share a factor. Callers validate preconditions beforehand.
template <class Int>
int kronecker_core(Int a, Int b) {
  if (b == 0) return absval(a) == 1 ? 1 : 0;
  if (is_even(a) && is_even(b)) return 0;

  int k = 1;
  unsigned v = 0;
  while (is_even(b)) {
    b /= 2;
    ++v;
  }
  if (v % 2 == 1) k = kTwoTable[emod(a, 8)];
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  // b odd and positive from here on.
  while (true) {
    if (a == 0) return b > 1 ? 0 : k;
    v = 0;
    while (is_even(a)) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= kTwoTable[emod(b, 8)];
    if (emod(a, 4) == 3 && emod(b, 4) == 3) k = -k;
    Int r = absval(a);
    a = b % r;
    b = r;
  }
}

SymbolValue from_int(int v) { return v > 0 ? SymbolValue::plus_one : SymbolValue::minus_one; }

void reject_min(std::int64_t x) {
  if (x == std::numeric_limits<std::int64_t>::min())
    throw Error(Errc::overflow, "argument out of machine range; use the arbitrary-precision overload");
}

template <class Int>
void check_legendre(const Int& m, const Int& p) {
  if (p == 2) throw Error(Errc::even_prime, "Legendre symbol needs an odd prime, got 2");
  if (p < 2 || !is_prime(BigInt(p))) throw Error(Errc::not_prime, "Legendre modulus is not prime");
  if (m % p == 0) throw Error(Errc::divides_argument, "p divides m");
}

template <class Int>
void check_kronecker(const Int& d, const Int& n, const Int& g) {
  if (d == 0 || n == 0) throw Error(Errc::zero_argument, "Kronecker symbol needs d != 0 and n != 0");
  const long r = emod(d, 4);
  if (r != 0 && r != 1) throw Error(Errc::bad_discriminant, "d must be 0 or 1 mod 4");
  if (g != 1) throw Error(Errc::not_coprime, "Kronecker symbol needs gcd(d, n) = 1");
}

}  // namespace

SymbolValue legendre_symbol(std::int64_t m, std::int64_t p) {
  reject_min(m);
  reject_min(p);
  check_legendre(m, p);
  return from_int(kronecker_core<std::int64_t>(emod(m, p), p));
}

SymbolValue legendre_symbol(const BigInt& m, const BigInt& p) {
  check_legendre(m, p);
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
  return from_int(kronecker_core<BigInt>(r, p));
}

SymbolValue kronecker_symbol(std::int64_t d, std::int64_t n) {
  reject_min(d);
  reject_min(n);
  check_kronecker(d, n, d == 0 || n == 0 ? std::int64_t{0} : std::gcd(d, n));
  return from_int(kronecker_core(d, n));
}

SymbolValue kronecker_symbol(const BigInt& d, const BigInt& n) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  check_kronecker(d, n, g);
  return from_int(kronecker_core(d, n));
}

}  // namespace quadgap::arith
