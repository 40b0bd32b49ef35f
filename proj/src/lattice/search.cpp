#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "quadgap/lattice.hpp"

namespace quadgap::lattice {

namespace {

BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

std::int64_t to_i64(const BigInt& v, const char* what) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) throw Error(Errc::overflow, std::string(what) + " out of range");
  return v.get_si();
}

// floor(mu + t), t irrational but exactly comparable: the largest integer N
// with t >= N - mu.
BigInt floor_shifted(const Rational& mu, const RationalPower& t) {
  BigInt n = floor(mu + Rational(t.approx()));
  while (t.compare(Rational(n) - mu) < 0) --n;
  while (t.compare(Rational(n + 1) - mu) >= 0) ++n;
  return n;
}

// Index m >= 0 with m*kappa < N - mu <= (m+1)*kappa, for N > mu.
std::int64_t bucket_of(const Rational& offset, const RationalPower& kappa) {
  auto m = static_cast<std::int64_t>(std::ceil(to_double(offset) / kappa.approx())) - 1;
  m = std::max<std::int64_t>(m, 0);
  while (m > 0 && kappa.scaled(big(m)).compare(offset) >= 0) --m;
  while (kappa.scaled(big(m + 1)).compare(offset) < 0) ++m;
  return m;
}

bool in_closed_region(const Rational& lower, const RationalPower& width, std::int64_t norm) {
  const Rational n(big(norm));
  return n >= lower && width.compare(n - lower) >= 0;
}

}  // namespace

SparseSearchReport sparse_annulus_search(const SparseAnnulusParams& params, const EnumerationBudget& budget) {
  const Rational& C = params.C;
  const Rational& s = params.s;
  const Rational& mu = params.mu;
  const std::int64_t d = params.d;
  if (sgn(C) <= 0) throw Error(Errc::invalid_argument, "C must be positive");
  if (sgn(s) <= 0 || s >= Rational(1, 4)) throw Error(Errc::invalid_argument, "s must lie in (0, 1/4)");
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  if (sgn(mu) <= 0) throw Error(Errc::invalid_argument, "mu must be positive");
  if (!mpz_fits_ulong_p(s.get_num_mpz_t()) || !mpz_fits_ulong_p(s.get_den_mpz_t()))
    throw Error(Errc::invalid_argument, "exponent s has an oversized numerator or denominator");

  SparseSearchReport report;
  report.mu = mu;
  report.kappa = RationalPower(C, mu, s.get_num().get_ui(), s.get_den().get_ui());
  const RationalPower& kappa = report.kappa;
  if (kappa.compare(mu) > 0)
    throw Error(Errc::invalid_argument, "degenerate parameters: kappa = C mu^s exceeds mu");
  report.J = to_i64(floor_sqrt(mu), "J");
  const std::int64_t J = report.J;

  // N^mu = {mu < |x|^2 <= mu + (J+1) kappa}
  const BigInt outer = floor_shifted(mu, kappa.scaled(big(J + 1)));
  const auto points = enumerate_region2({mu, Rational(outer), false, true}, budget);
  report.total_points = points.size();

  // Strip union S^mu: some 0 < |j| <= d with |x.j| < (kappa + d^2)/2.
  std::vector<std::array<std::int64_t, 2>> dirs;
  for (std::int64_t a = -d; a <= d; ++a)
    for (std::int64_t b = -d; b <= d; ++b)
      if ((a != 0 || b != 0) && a * a + b * b <= d * d) dirs.push_back({a, b});
  auto in_strip = [&](const LatticePoint2& x) {
    return std::any_of(dirs.begin(), dirs.end(), [&](const auto& j) {
      const std::int64_t dot = std::abs(x.x[0] * j[0] + x.x[1] * j[1]);
      return kappa.compare(Rational(big(2 * dot - d * d))) > 0;
    });
  };

  std::vector<std::vector<LatticePoint2>> by_bucket(static_cast<std::size_t>(J + 1));
  std::vector<std::uint64_t> strip_count(static_cast<std::size_t>(J + 1), 0);
  std::unordered_map<std::int64_t, std::int64_t> bucket_cache;
  for (const auto& p : points) {
    const std::int64_t n = p.norm2();
    auto it = bucket_cache.find(n);
    if (it == bucket_cache.end()) it = bucket_cache.emplace(n, bucket_of(Rational(big(n)) - mu, kappa)).first;
    const std::int64_t m = it->second;
    if (m > J) continue;  // cannot happen: N <= floor(mu + (J+1) kappa)
    by_bucket[m].push_back(p);
    if (in_strip(p)) {
      ++strip_count[m];
      ++report.strip_union_points;
    }
  }

  for (std::int64_t m = 0; m <= J; ++m) {
    const auto& pts = by_bucket[m];
    const auto md = min_pairwise_distance2<2>(pts);
    report.buckets.push_back({m, pts.size(), md, strip_count[m]});
    if (!report.found && (!md || *md > d * d)) {
      report.found = true;
      report.m0 = m;
      report.points = pts;
      report.min_distance2 = md;
      report.strip_empty = strip_count[m] == 0;
    }
  }

  const double kappa_approx = kappa.approx();
  const double mu_approx = to_double(mu);
  report.counting_bound = 16.0 * static_cast<double>(d * d) * to_double(C) * to_double(C) *
                          std::pow(mu_approx, 2.0 * to_double(s));
  report.counting_bound_holds = static_cast<double>(report.strip_union_points) <= report.counting_bound;
  report.thickness = std::sqrt(mu_approx + static_cast<double>(J + 1) * kappa_approx) - std::sqrt(mu_approx);
  report.half_C_mu_s = 0.5 * kappa_approx;
  report.strip_width_max = kappa_approx + static_cast<double>(d * d);
  if (report.found) {
    const RationalPower lambda_offset = kappa.scaled(big(report.m0));
    report.lambda_approx = mu_approx + lambda_offset.approx();
    report.closed_lower = floor_shifted(mu, lambda_offset) + 1;
    report.closed_upper = floor_shifted(mu, kappa.scaled(big(report.m0 + 1)));
  }
  return report;
}

ClosePair2 prop23_construct(const Rational& lambda, const Rational& alpha) {
  if (sgn(alpha) <= 0 || alpha * alpha <= 32)
    throw Error(Errc::invalid_argument, "alpha must exceed 4 sqrt(2)");
  if (sgn(lambda) <= 0) throw Error(Errc::invalid_argument, "lambda must be positive");

  const RationalPower width(alpha, lambda, 1, 4);
  const BigInt m = floor_sqrt(lambda);
  const BigInt n = ceil_sqrt(lambda - Rational(m * m));
  // (n+1)^2 <= lambda + alpha lambda^(1/4) - m^2
  if (width.compare(Rational((n + 1) * (n + 1) + m * m) - lambda) < 0) {
    throw Error(Errc::not_found, "no n with sqrt(lambda - m^2) <= n < n+1 <= sqrt(lambda + alpha lambda^(1/4) - m^2) at lambda = " +
                                     format_rational(lambda) + "; lambda is below the working range");
  }
  ClosePair2 out{{{to_i64(m, "m"), to_i64(n, "n")}}, {{to_i64(m, "m"), to_i64(n + 1, "n")}}, lambda, width};
  if (!in_closed_region(lambda, width, out.first.norm2()) || !in_closed_region(lambda, width, out.second.norm2()))
    throw Error(Errc::verification_failed, "constructed points fall outside the annulus");
  return out;
}

Rational default_prop26_beta(const Rational& C) {
  const Rational upper = C * C / 16;
  // Rational near the midpoint of (2 sqrt 2, C^2/16), decimal with the fewest
  // digits that stays strictly inside.
  const auto root8 = sqrt_interval(Rational(8), Rational(BigInt(1), BigInt("1000000000000")));
  const Rational mid = (root8.lower + upper) / 2;
  for (unsigned digits = 3; digits <= 18; ++digits) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Rational beta(floor(mid * Rational(scale) + Rational(1, 2)), scale);
    beta.canonicalize();
    if (beta * beta > 8 && beta < upper) return beta;
  }
  throw Error(Errc::invalid_argument, "interval (2 sqrt 2, C^2/16) too narrow for a rational beta");
}

ClosePair3 prop26_construct(const Rational& m, const Rational& C, std::optional<Rational> beta_opt) {
  if (sgn(C) <= 0 || C * C * C * C <= 2048) throw Error(Errc::invalid_argument, "C must exceed 4 * 8^(1/4)");
  if (sgn(m) <= 0) throw Error(Errc::invalid_argument, "m must be positive");
  const Rational beta = beta_opt ? *beta_opt : default_prop26_beta(C);
  if (sgn(beta) <= 0 || beta * beta <= 8 || beta >= C * C / 16)
    throw Error(Errc::invalid_argument, "beta must lie in (2 sqrt 2, C^2/16)");

  const RationalPower window(beta, m, 1, 4);  // s > m - beta m^(1/4)
  const RationalPower width(C, m, 1, 8);
  // Candidates s < m, largest first, while m - s < beta m^(1/4).
  for (BigInt s = ceil(m) - 1; sgn(s) >= 0 && window.compare(m - Rational(s)) > 0; --s) {
    if (!is_sum_two_squares(arith::Natural(s))) continue;
    const BigInt n = ceil_sqrt(m - Rational(s));
    if (width.compare(Rational((n + 1) * (n + 1) + s) - m) < 0) continue;
    BigInt k = arith::isqrt(s), l;
    for (;; --k) {
      const BigInt rest = s - k * k;
      if (arith::is_perfect_square(rest)) {
        l = arith::isqrt(rest);
        break;
      }
    }
    ClosePair3 out{{{to_i64(k, "k"), to_i64(l, "l"), to_i64(n, "n")}},
                   {{to_i64(k, "k"), to_i64(l, "l"), to_i64(n + 1, "n")}},
                   m,
                   width,
                   beta,
                   static_cast<std::uint64_t>(to_i64(s, "s"))};
    if (!in_closed_region(m, width, out.first.norm2()) || !in_closed_region(m, width, out.second.norm2()))
      throw Error(Errc::verification_failed, "constructed points fall outside the shell");
    return out;
  }
  throw Error(Errc::not_found, "no sum of two squares s in (m - beta m^(1/4), m) admits the pair at m = " +
                                   format_rational(m) + "; m is below the working range");
}

}  // namespace quadgap::lattice
