#include <algorithm>
#include <array>
#include <thread>

#include "quadgap/arith.hpp"

namespace quadgap::arith {

namespace {

constexpr std::uint64_t kSegmentBytes = 1u << 18;

// Odd-only segmented sieve of [low, high], low odd, using base primes
// (odd, <= sqrt(high)).
void sieve_segment(std::uint64_t low, std::uint64_t high,
                   const std::vector<std::uint64_t>& base,
                   std::vector<std::uint64_t>& out) {
  std::vector<char> mark(kSegmentBytes);
  for (std::uint64_t seg = low; seg <= high; seg += 2 * kSegmentBytes) {
    const std::uint64_t seg_high = std::min(high, seg + 2 * kSegmentBytes - 1);
    const std::size_t len = (seg_high - seg) / 2 + 1;
    std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (std::uint64_t p : base) {
      if (p * p > seg_high) break;
      std::uint64_t start = std::max(p * p, (seg + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t k = (start - seg) / 2; k < len; k += p) mark[k] = 0;
    }
    for (std::size_t i = 0; i < len; ++i)
      if (mark[i]) out.push_back(seg + 2 * i);
  }
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// First twelve primes as Miller-Rabin bases: deterministic below 3.3e24.
constexpr std::array<unsigned, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit, unsigned threads) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  primes.push_back(2);
  if (limit < 3) return primes;

  const std::uint64_t root = isqrt(limit);
  std::vector<std::uint64_t> base;
  {
    std::vector<char> small(root + 1, 1);
    for (std::uint64_t i = 3; i <= root; i += 2) {
      if (!small[i]) continue;
      base.push_back(i);
      for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = 0;
    }
  }

  threads = std::max(1u, threads);
  const std::uint64_t odd_count = (limit - 3) / 2 + 1;
  if (threads == 1 || odd_count < 4 * kSegmentBytes) {
    sieve_segment(3, limit, base, primes);
    return primes;
  }

  // Contiguous odd ranges per worker; concatenation in order keeps the
  // result independent of the thread count.
  std::vector<std::vector<std::uint64_t>> parts(threads);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (odd_count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t first = t * chunk;
    if (first >= odd_count) break;
    const std::uint64_t last = std::min(odd_count - 1, first + chunk - 1);
    pool.emplace_back([&, t, first, last] {
      sieve_segment(3 + 2 * first, 3 + 2 * last, base, parts[t]);
    });
  }
  for (auto& th : pool) th.join();
  for (auto& part : parts) primes.insert(primes.end(), part.begin(), part.end());
  return primes;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (unsigned p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (unsigned a : kBases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime(static_cast<std::uint64_t>(n.get_ui()));
  for (unsigned p : kBases) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  const BigInt n1 = n - 1;
  BigInt d = n1;
  const auto s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  BigInt x;
  for (unsigned a : kBases) {
    const BigInt base(a);
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n1) continue;
    bool composite = true;
    for (mp_bitcnt_t r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace quadgap::arith
