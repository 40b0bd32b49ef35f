#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

#include "quadgap/gapforge.hpp"
#include "quadgap/lattice.hpp"

namespace quadgap::gapforge {

namespace {

constexpr std::size_t kMaxExhaustiveD = 24;

std::int64_t checked_i64(const BigInt& v, const char* what) {
  if (!mpz_fits_slong_p(v.get_mpz_t()))
    throw Error(Errc::overflow, std::string(what) + " does not fit in 64 bits");
  return v.get_si();
}

BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

std::int64_t lcm_of_abs(const std::vector<std::int64_t>& D) {
  BigInt delta = 1;
  for (std::int64_t d : D) delta = arith::lcm(delta, abs(big(d)));
  return checked_i64(delta, "delta");
}

std::int64_t max_abs_progression(std::int64_t r, std::int64_t delta, std::int64_t h) {
  // |r + delta j| is convex in j, so the sup over [0, h] sits at an endpoint.
  const BigInt first = abs(big(r));
  const BigInt last = abs(big(r) + big(delta) * big(h));
  return checked_i64(first > last ? first : last, "A");
}

BigInt product_tree(std::vector<BigInt> terms) {
  if (terms.empty()) return 1;
  while (terms.size() > 1) {
    std::vector<BigInt> next;
    next.reserve((terms.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] * terms[i + 1]);
    if (terms.size() % 2 == 1) next.push_back(std::move(terms.back()));
    terms = std::move(next);
  }
  return terms.front();
}

// One witness per discriminant for the j-th entry, or the failure message.
struct CellOutcome {
  std::vector<Witness> witnesses;
  std::optional<std::int64_t> failed_d;
  std::string message;
};

CellOutcome check_row(const GapCertificate& cert, std::int64_t j) {
  CellOutcome out;
  const std::int64_t value = cert.r + cert.delta * j;
  const auto factors = arith::factor(static_cast<std::uint64_t>(value < 0 ? -value : value));
  const BigInt m_plus_j = cert.m.value() + big(j);

  for (std::int64_t d : cert.D.values()) {
    std::optional<Witness> found;
    for (const auto& pp : factors) {
      if (pp.exponent % 2 == 0) continue;
      const std::int64_t p = pp.prime.get_si();
      if (d % p == 0) continue;
      if (arith::kronecker_symbol(d, p) != arith::SymbolValue::minus_one) continue;
      found = Witness{j, d, p, pp.exponent, 0, 0};
      break;
    }
    if (!found) {
      out.failed_d = d;
      out.message = "no prime p with (d/p) = -1 divides r + delta*j to an odd power";
      return out;
    }
    const BigInt bp = big(found->p);
    found->valuation_m_plus_j = arith::valuation_unchecked(bp, m_plus_j);
    found->valuation_P = arith::valuation_unchecked(bp, cert.P.value());
    if (found->valuation_m_plus_j % 2 == 0) {
      out.failed_d = d;
      out.message = "witness p = " + std::to_string(found->p) + " divides m + j to an even power";
      return out;
    }
    if (found->valuation_P <= found->valuation_r_plus_dj) {
      out.failed_d = d;
      out.message = "witness p = " + std::to_string(found->p) +
                    " does not divide P with greater multiplicity than r + delta*j";
      return out;
    }
    out.witnesses.push_back(*found);
  }
  return out;
}

[[noreturn]] void fail(const std::string& what) { throw VerificationError(std::nullopt, what); }

}  // namespace

DiscriminantSet DiscriminantSet::validate(std::span<const std::int64_t> values) {
  if (values.empty()) throw Error(Errc::invalid_argument, "discriminant set must be nonempty");
  std::vector<std::int64_t> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (std::int64_t d : v) {
    if (d == 0) throw Error(Errc::zero_argument, "discriminant set contains 0");
    const std::int64_t r = ((d % 4) + 4) % 4;
    if (r != 0 && r != 1)
      throw Error(Errc::bad_discriminant, std::to_string(d) + " is not 0 or 1 mod 4");
  }
  DiscriminantSet out;
  out.values_ = std::move(v);
  if (out.all_negative()) return out;  // odd products of negatives are negative

  if (out.values_.size() > kMaxExhaustiveD)
    throw Error(Errc::invalid_argument, "too many discriminants for the exhaustive subset check");
  const std::size_t n = out.values_.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    BigInt product = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) product *= big(out.values_[i]);
    if (arith::is_perfect_square(product))
      throw Error(Errc::square_product,
                  "an odd-size subset of D multiplies to the square " + product.get_str());
  }
  return out;
}

std::int64_t find_r(const DiscriminantSet& D) {
  BigInt cap = 4;
  for (std::int64_t d : D.values()) cap *= abs(big(d));
  const std::int64_t limit =
      mpz_fits_slong_p(cap.get_mpz_t()) ? cap.get_si() : std::numeric_limits<std::int64_t>::max();
  for (std::int64_t r = 1; r <= limit; ++r) {
    const bool ok = std::all_of(D.values().begin(), D.values().end(), [r](std::int64_t d) {
      return std::gcd(d, r) == 1 && arith::kronecker_symbol(d, r) == arith::SymbolValue::minus_one;
    });
    if (ok) return r;
  }
  throw Error(Errc::search_exhausted, "no r found up to 4 * prod |d|");
}

GapCertificate construct_gap(const DiscriminantSet& D, std::int64_t h, const ConstructOptions& options) {
  if (h < 1) throw Error(Errc::invalid_argument, "gap length h must be >= 1");
  GapCertificate cert{D, find_r(D), lcm_of_abs(D.values()), h, 0, {}, {}};
  cert.A = max_abs_progression(cert.r, cert.delta, h);
  if (cert.A > options.max_A)
    throw Error(Errc::budget_exceeded, "A = " + std::to_string(cert.A) + " exceeds the construction budget");

  const auto A = static_cast<std::uint64_t>(cert.A);
  std::vector<BigInt> factors;
  for (std::uint64_t p : arith::sieve_primes(A, options.threads)) {
    if (static_cast<std::uint64_t>(cert.delta) % p == 0) continue;
    // p^alpha <= A < p^(alpha+1), by integer powering.
    std::uint64_t power = p;
    while (power <= A / p) power *= p;
    BigInt term(static_cast<unsigned long>(power));
    term *= static_cast<unsigned long>(p);
    factors.push_back(std::move(term));
  }
  cert.P = arith::Natural(product_tree(std::move(factors)));

  BigInt r_mod = big(cert.r) % cert.P.value();
  if (r_mod < 0) r_mod += cert.P.value();
  cert.m = arith::solve_congruence(arith::Natural(big(cert.delta)), arith::Natural(r_mod), cert.P);
  return cert;
}

WitnessTable verify_certificate(const GapCertificate& cert, unsigned threads) {
  const auto& D = cert.D.values();
  if (D.empty()) fail("empty discriminant set");
  if (cert.h < 1) fail("h must be >= 1");
  if (cert.r == 0) fail("r must be nonzero");
  if (cert.delta != lcm_of_abs(D)) fail("delta is not lcm{|d|}");
  for (std::int64_t d : D) {
    if (std::gcd(d, cert.r) != 1) fail("gcd(d, r) != 1 for d = " + std::to_string(d));
    if (arith::kronecker_symbol(d, cert.r) != arith::SymbolValue::minus_one)
      fail("(d/r) != -1 for d = " + std::to_string(d));
  }
  if (cert.A != max_abs_progression(cert.r, cert.delta, cert.h)) fail("A is not max |r + delta j|");
  const BigInt& P = cert.P.value();
  const BigInt& m = cert.m.value();
  if (P < 1 || m < 1 || m > P) fail("m must lie in [1, P]");
  BigInt g;
  const BigInt delta = big(cert.delta);
  mpz_gcd(g.get_mpz_t(), delta.get_mpz_t(), P.get_mpz_t());
  if (g != 1) fail("gcd(delta, P) != 1");

  const std::int64_t rows = cert.h + 1;
  std::vector<CellOutcome> outcomes(static_cast<std::size_t>(rows));
  const auto workers = static_cast<std::int64_t>(std::max(1u, threads));
  if (workers == 1) {
    for (std::int64_t j = 0; j < rows; ++j) {
      outcomes[j] = check_row(cert, j);
      if (outcomes[j].failed_d) break;
    }
  } else {
    std::vector<std::thread> pool;
    for (std::int64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t j = w; j < rows; j += workers) outcomes[j] = check_row(cert, j);
      });
    }
    for (auto& t : pool) t.join();
  }

  WitnessTable table;
  for (std::int64_t j = 0; j < rows; ++j) {
    auto& row = outcomes[j];
    if (row.failed_d) {
      throw VerificationError(VerificationError::Cell{j, *row.failed_d},
                              "cell (j=" + std::to_string(j) + ", d=" + std::to_string(*row.failed_d) +
                                  "): " + row.message);
    }
    table.insert(table.end(), row.witnesses.begin(), row.witnesses.end());
  }

  if ((delta * m - big(cert.r)) % P != 0) fail("delta * m is not congruent to r mod P");
  return table;
}

bool verify_interval_free_oracle(const DiscriminantSet& D, const arith::Natural& m, std::int64_t h,
                                 std::uint64_t sieve_limit) {
  if (D.values() != std::vector<std::int64_t>{-4})
    throw Error(Errc::invalid_argument, "the two-squares oracle applies to D = {-4} only");
  if (h < 1) throw Error(Errc::invalid_argument, "h must be >= 1");
  const BigInt last = m.value() + big(h);
  if (last <= sieve_limit) {
    const auto sieve = lattice::two_squares_sieve(last.get_ui());
    for (std::uint64_t n = m.value().get_ui(); n <= last.get_ui(); ++n)
      if (sieve.contains(n)) return false;
    return true;
  }
  for (BigInt n = m.value(); n <= last; ++n)
    if (lattice::is_sum_two_squares(arith::Natural(n))) return false;
  return true;
}

BoundReport bound_report(const GapCertificate& cert) {
  BoundReport out;
  long exp2 = 0;
  const double mantissa = mpz_get_d_2exp(&exp2, cert.m.value().get_mpz_t());
  out.log_m = std::log(mantissa) + static_cast<double>(exp2) * std::log(2.0);
  out.four_A = 4.0 * static_cast<double>(cert.A);
  out.eight_delta_h = 8.0 * static_cast<double>(cert.delta) * static_cast<double>(cert.h);
  out.m_le_exp_4A = out.log_m <= out.four_A;
  out.m_le_exp_8_delta_h = out.log_m <= out.eight_delta_h;
  out.h_over_log_m = out.log_m > 0 ? static_cast<double>(cert.h) / out.log_m
                                   : std::numeric_limits<double>::infinity();
  out.asymptotic_floor = 1.0 / (8.0 * static_cast<double>(cert.delta));
  return out;
}

}  // namespace quadgap::gapforge
