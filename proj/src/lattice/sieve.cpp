#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include "quadgap/lattice.hpp"

namespace quadgap::lattice {

TwoSquaresSieve::TwoSquaresSieve(std::uint64_t limit) : limit_(limit), words_(limit / 64 + 1, 0) {}

void TwoSquaresSieve::mark_window(std::uint64_t lo, std::uint64_t hi) {
  hi = std::min(hi, limit_);
  for (std::uint64_t a = 0; a * a <= hi; ++a) {
    const std::uint64_t a2 = a * a;
    std::uint64_t b = a;
    if (lo > a2) b = std::max(b, arith::ceil_sqrt(lo - a2));
    const std::uint64_t b_max = arith::isqrt(hi - a2);
    for (; b <= b_max; ++b) {
      const std::uint64_t n = a2 + b * b;
      words_[n >> 6] |= std::uint64_t{1} << (n & 63);
    }
  }
}

std::uint64_t TwoSquaresSieve::count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::optional<std::uint64_t> TwoSquaresSieve::next_member(std::uint64_t n) const {
  for (; n <= limit_; ++n)
    if (contains(n)) return n;
  return std::nullopt;
}

TwoSquaresSieve two_squares_sieve(std::uint64_t limit, unsigned threads, std::uint64_t max_limit) {
  if (limit > max_limit) {
    throw Error(Errc::budget_exceeded, "two-squares sieve to " + std::to_string(limit) + " needs " +
                                           std::to_string(limit / 8 + 8) + " bytes; limit is " +
                                           std::to_string(max_limit));
  }
  TwoSquaresSieve sieve(limit);
  threads = std::max(1u, threads);
  if (threads == 1 || limit < (1u << 20)) {
    sieve.mark_window(0, limit);
    return sieve;
  }
  // Windows aligned to whole 64-bit words: workers never share a word.
  const std::uint64_t words = limit / 64 + 1;
  const std::uint64_t per = (words + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = t * per * 64;
    if (lo > limit) break;
    const std::uint64_t hi = std::min(limit, (t + 1) * per * 64 - 1);
    pool.emplace_back([&sieve, lo, hi] { sieve.mark_window(lo, hi); });
  }
  for (auto& th : pool) th.join();
  return sieve;
}

bool is_sum_two_squares(const arith::Natural& n, const arith::FactorBudget& budget) {
  if (n.value() == 0) return true;
  for (const auto& pp : arith::factor(n.value(), budget)) {
    if (mpz_fdiv_ui(pp.prime.get_mpz_t(), 4) == 3 && pp.exponent % 2 == 1) return false;
  }
  return true;
}

std::vector<GapRecord> gap_scan_2sq(std::uint64_t limit, unsigned threads) {
  if (limit < 2) throw Error(Errc::invalid_argument, "gap scan needs limit >= 2");
  const auto sieve = two_squares_sieve(limit, threads);
  std::vector<GapRecord> records;
  std::uint64_t prev = 0, best = 0;  // 0 is always a member
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (!sieve.contains(n)) continue;
    if (n - prev > best) {
      best = n - prev;
      const double ratio = prev > 1 ? static_cast<double>(best) / std::log(static_cast<double>(prev))
                                    : std::numeric_limits<double>::quiet_NaN();
      records.push_back({prev, n, best, ratio});
    }
    prev = n;
  }
  return records;
}

std::optional<std::uint64_t> bambah_chowla_check(std::uint64_t limit, const Rational& beta,
                                                 std::uint64_t from, unsigned threads) {
  if (limit < 2) throw Error(Errc::invalid_argument, "Bambah-Chowla scan needs N >= 2");
  if (sgn(beta) <= 0) throw Error(Errc::invalid_argument, "beta must be positive");
  from = std::max<std::uint64_t>(from, 2);
  if (from > limit) return std::nullopt;

  // Any window starting at k <= limit ends before limit + beta*limit^(1/4) < end.
  const std::uint64_t root4 = arith::isqrt(arith::isqrt(limit)) + 1;
  const BigInt reach = ceil(beta * Rational(BigInt(static_cast<unsigned long>(root4)))) + 2;
  if (!mpz_fits_ulong_p(reach.get_mpz_t())) throw Error(Errc::overflow, "beta too large");
  const std::uint64_t end = limit + reach.get_ui();
  const auto sieve = two_squares_sieve(end, threads);

  // k passes iff g := next(k) - k satisfies g^4 < beta^4 k, i.e. k > floor(g^4 / beta^4).
  const Rational beta4 = beta * beta * beta * beta;
  std::unordered_map<std::uint64_t, BigInt> threshold;
  auto passes = [&](std::uint64_t k, std::uint64_t g) {
    if (g == 0) return true;
    auto it = threshold.find(g);
    if (it == threshold.end()) {
      const BigInt g4 = BigInt(static_cast<unsigned long>(g)) * g * g * g;
      it = threshold.emplace(g, floor(Rational(g4) / beta4)).first;
    }
    return BigInt(static_cast<unsigned long>(k)) > it->second;
  };

  std::optional<std::uint64_t> next;
  std::vector<std::uint64_t> next_of(limit - from + 1);
  for (std::uint64_t n = end + 1; n-- > from;) {
    if (sieve.contains(n)) next = n;
    if (n <= limit) next_of[n - from] = next.value_or(std::numeric_limits<std::uint64_t>::max());
  }
  for (std::uint64_t k = from; k <= limit; ++k) {
    const std::uint64_t s = next_of[k - from];
    if (s == std::numeric_limits<std::uint64_t>::max() || !passes(k, s - k)) return k;
  }
  return std::nullopt;
}

bool is_sum_three_squares(std::uint64_t n) {
  if (n == 0) return true;
  while (n % 4 == 0) n /= 4;
  return n % 8 != 7;
}

ThreeSquaresGapReport three_squares_gap_check(std::uint64_t limit) {
  if (limit < 10) throw Error(Errc::invalid_argument, "three-squares gap check needs N >= 10");
  ThreeSquaresGapReport report;
  std::uint64_t prev = 0;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (!is_sum_three_squares(n)) continue;
    const std::uint64_t gap = n - prev;
    report.witnesses.try_emplace(gap, prev, n);
    report.max_gap = std::max(report.max_gap, gap);
    prev = n;
  }
  return report;
}

}  // namespace quadgap::lattice
