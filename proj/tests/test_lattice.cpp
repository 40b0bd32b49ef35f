#include <doctest.h>

#include <cmath>
#include <limits>

#include "quadgap/lattice.hpp"
#include "support.hpp"

using namespace quadgap;
using namespace quadgap::lattice;
using testing::big;
using testing::Gen;

namespace {

bool two_squares_brute(std::uint64_t n) {
  for (std::uint64_t a = 0; a * a <= n; ++a) {
    const std::uint64_t rest = n - a * a;
    const std::uint64_t b = arith::isqrt(rest);
    if (b * b == rest) return true;
  }
  return false;
}

bool three_squares_brute(std::uint64_t n) {
  for (std::uint64_t a = 0; a * a <= n; ++a)
    for (std::uint64_t b = a; a * a + b * b <= n; ++b) {
      const std::uint64_t rest = n - a * a - b * b;
      const std::uint64_t c = arith::isqrt(rest);
      if (c * c == rest) return true;
    }
  return false;
}

// Independent record scan: recompute the sequence of sums of two squares by
// brute force, then the running maximum of consecutive differences.
std::vector<std::pair<std::uint64_t, std::uint64_t>> naive_records(std::uint64_t limit) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t prev = 0, best = 0;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (!two_squares_brute(n)) continue;
    if (n - prev > best) {
      best = n - prev;
      out.push_back({prev, n});
    }
    prev = n;
  }
  return out;
}

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

template <std::size_t Dim>
std::optional<std::int64_t> all_pairs(const std::vector<LatticePoint<Dim>>& pts) {
  std::optional<std::int64_t> best;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      const auto d = distance2(pts[i], pts[k]);
      if (!best || d < *best) best = d;
    }
  return best;
}

std::vector<LatticePoint2> box2(const Region& r) {
  std::vector<LatticePoint2> out;
  const auto R = static_cast<std::int64_t>(std::ceil(std::sqrt(to_double(r.upper)))) + 1;
  for (std::int64_t x = -R; x <= R; ++x)
    for (std::int64_t y = -R; y <= R; ++y)
      if (r.contains(big(x * x + y * y))) out.push_back({{x, y}});
  return out;
}

std::vector<LatticePoint3> box3(const Region& r) {
  std::vector<LatticePoint3> out;
  const auto R = static_cast<std::int64_t>(std::ceil(std::sqrt(to_double(r.upper)))) + 1;
  for (std::int64_t x = -R; x <= R; ++x)
    for (std::int64_t y = -R; y <= R; ++y)
      for (std::int64_t z = -R; z <= R; ++z)
        if (r.contains(big(x * x + y * y + z * z))) out.push_back({{x, y, z}});
  return out;
}

}  // namespace

// --- sums of two squares -------------------------------------------------------

TEST_CASE("two_squares_sieve examples") {
  const auto s = two_squares_sieve(10);
  std::vector<std::uint64_t> members;
  for (std::uint64_t n = 0; n <= 10; ++n)
    if (s.contains(n)) members.push_back(n);
  CHECK(members == std::vector<std::uint64_t>{0, 1, 2, 4, 5, 8, 9, 10});
  CHECK_FALSE(s.contains(3));
  CHECK(s.next_member(6) == 8u);
  CHECK_THROWS_AS(two_squares_sieve(1000, 1, 100), Error);
}

TEST_CASE("sieve agrees with the factoring criterion") {
  const auto s = two_squares_sieve(100000, 3);
  for (std::uint64_t n = 0; n <= 100000; ++n) REQUIRE(s.contains(n) == is_sum_two_squares(arith::Natural(n)));
  for (std::uint64_t n = 0; n <= 5000; ++n) REQUIRE(s.contains(n) == two_squares_brute(n));

  Gen g(77);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = g.urange(0, 1'000'000'000);
    REQUIRE(is_sum_two_squares(arith::Natural(n)) == two_squares_brute(n));
  }
  CHECK(is_sum_two_squares(arith::Natural(25)));
  CHECK_FALSE(is_sum_two_squares(arith::Natural(2757)));
  CHECK(is_sum_two_squares(arith::Natural(98)));
}

TEST_CASE("threaded sieve equals single-threaded") {
  const std::uint64_t limit = 5'000'003;
  const auto a = two_squares_sieve(limit, 1), b = two_squares_sieve(limit, 6);
  REQUIRE(a.count() == b.count());
  for (std::uint64_t n = 0; n <= limit; n += 1) REQUIRE(a.contains(n) == b.contains(n));
}

TEST_CASE("sieve count at 10^6 cross-checks the criterion on random samples") {
  const auto s = two_squares_sieve(1'000'000);
  CHECK(s.count() > 0);
  Gen g(78);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = g.urange(0, 1'000'000);
    REQUIRE(s.contains(n) == is_sum_two_squares(arith::Natural(n)));
  }
}

TEST_CASE("gap records") {
  const auto r100 = gap_scan_2sq(100);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (const auto& r : r100) pairs.push_back({r.s_n, r.s_next});
  CHECK(pairs == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 1}, {2, 4}, {5, 8}, {20, 25}, {74, 80}, {90, 97}});
  const auto& rec74 = r100[4];
  CHECK(rec74.gap == 6);
  CHECK(std::abs(rec74.ratio - 6.0 / std::log(74.0)) < 1e-12);
  CHECK(std::isnan(r100[0].ratio));

  const auto r1000 = gap_scan_2sq(1000);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> got;
  for (const auto& r : r1000) {
    got.push_back({r.s_n, r.s_next});
    CHECK(r.gap == r.s_next - r.s_n);
  }
  CHECK(got == naive_records(1000));
  CHECK(got.back() == std::pair<std::uint64_t, std::uint64_t>{986, 997});
  CHECK(gap_scan_2sq(100000, 4).size() == gap_scan_2sq(100000, 1).size());
}

TEST_CASE("bambah_chowla_check") {
  CHECK(bambah_chowla_check(100, q(1, 2)) == 3u);
  // 6 fails too: [6, 6 + 6^(1/4)/2) = [6, 6.78) holds no sum of two squares.
  CHECK(bambah_chowla_check(100, q(1, 2), 4) == 6u);
  CHECK_FALSE(bambah_chowla_check(100, q(100)).has_value());
  CHECK_FALSE(bambah_chowla_check(100'000, q(3), 100).has_value());

  // k = 3, next member 4: the window reaches 4 iff beta^4 * 3 > 1, i.e. beta > 0.7598...
  CHECK(bambah_chowla_check(3, q(3, 4), 3) == 3u);
  CHECK_FALSE(bambah_chowla_check(3, q(76, 100), 3).has_value());
}

TEST_CASE("bambah_chowla_check agrees with a float-free brute force") {
  const auto s = two_squares_sieve(3000);
  for (const Rational& beta : {q(1, 2), q(1), q(3, 2), q(2), q(5, 2)}) {
    std::optional<std::uint64_t> expected;
    for (std::uint64_t k = 2; k <= 2000 && !expected; ++k) {
      bool hit = false;
      // u in [k, k + beta k^(1/4))  <=>  (u - k)^4 < beta^4 k
      for (std::uint64_t u = k; !hit; ++u) {
        const Rational off(big(static_cast<std::int64_t>(u - k)));
        if (off * off * off * off >= beta * beta * beta * beta * Rational(big(static_cast<std::int64_t>(k)))) break;
        hit = s.contains(u);
      }
      if (!hit) expected = k;
    }
    CHECK(bambah_chowla_check(2000, beta) == expected);
  }
}

TEST_CASE("sums of three squares") {
  CHECK_FALSE(is_sum_three_squares(7));
  CHECK(is_sum_three_squares(6));
  CHECK_FALSE(is_sum_three_squares(112));
  for (std::uint64_t n = 0; n <= 2000; ++n) REQUIRE(is_sum_three_squares(n) == three_squares_brute(n));

  const auto report = three_squares_gap_check(10000);
  CHECK(report.max_gap == 3);
  REQUIRE(report.witnesses.count(3));
  CHECK(report.witnesses.at(3) == std::pair<std::uint64_t, std::uint64_t>{110, 113});
  CHECK(report.witnesses.at(2) == std::pair<std::uint64_t, std::uint64_t>{6, 8});
  CHECK_THROWS_AS(three_squares_gap_check(5), Error);
}

// --- enumeration ----------------------------------------------------------------

TEST_CASE("annulus and shell enumeration examples") {
  CHECK(enumerate_annulus_points({q(0), q(0)}) == std::vector<LatticePoint2>{{{0, 0}}});
  CHECK(enumerate_annulus_points({q(25), q(0)}).size() == 12);
  CHECK(enumerate_shell_points({q(2), q(0)}).size() == 12);
  CHECK(enumerate_shell_points({q(7), q(0)}).empty());
  CHECK_THROWS_AS(enumerate_annulus_points({q(-1), q(1)}), Error);
  CHECK_THROWS_AS(enumerate_annulus_points({q(0), q(1'000'000'000)}, {1000}), Error);
}

TEST_CASE("enumerators match the bounding-box oracle") {
  const Region big_annulus{q(10000), q(10100)};
  const auto pts = enumerate_region2(big_annulus);
  CHECK(pts == box2(big_annulus));
  for (const auto& p : pts) REQUIRE(big_annulus.contains(big(p.norm2())));

  Gen g(90);
  for (int i = 0; i < 60; ++i) {
    const Rational lo = abs(g.rational(3000, 7));
    const Rational hi = lo + abs(g.rational(200, 5));
    const Region r{lo, hi, g.coin(), g.coin()};
    REQUIRE(enumerate_region2(r) == box2(r));
  }
  for (int i = 0; i < 25; ++i) {
    const Rational lo = abs(g.rational(900, 7));
    const Rational hi = lo + abs(g.rational(60, 5));
    const Region r{lo, hi, g.coin(), g.coin()};
    REQUIRE(enumerate_region3(r) == box3(r));
  }
  const Region shell{q(9990), q(10000)};
  CHECK(enumerate_region3(shell).size() == box3(shell).size());
}

TEST_CASE("closure flags decide integer boundaries exactly") {
  const Region closed{q(25), q(26)}, open_lo{q(25), q(26), false, true}, open_both{q(25), q(26), false, false};
  CHECK(enumerate_region2(closed).size() == 12 + 8);
  CHECK(enumerate_region2(open_lo).size() == 8);
  CHECK(enumerate_region2(open_both).empty());
}

TEST_CASE("min_pairwise_distance2") {
  CHECK_FALSE(min_pairwise_distance2<2>(std::vector<LatticePoint2>{{{0, 0}}}).has_value());
  CHECK(min_pairwise_distance2<2>(std::vector<LatticePoint2>{{{3, 4}}, {{4, 3}}}) == 2);

  Gen g(91);
  for (int i = 0; i < 40; ++i) {
    std::vector<LatticePoint2> pts;
    const std::int64_t spread = g.range(10, 100000);
    for (int k = 0; k < 1000; ++k) pts.push_back({{g.range(-spread, spread), g.range(-spread, spread)}});
    REQUIRE(min_pairwise_distance2<2>(pts) == all_pairs(pts));
  }
  for (int i = 0; i < 20; ++i) {
    std::vector<LatticePoint3> pts;
    const std::int64_t spread = g.range(5, 5000);
    for (int k = 0; k < 1000; ++k)
      pts.push_back({{g.range(-spread, spread), g.range(-spread, spread), g.range(-spread, spread)}});
    REQUIRE(min_pairwise_distance2<3>(pts) == all_pairs(pts));
  }
  // points on one circle
  const auto circle = enumerate_annulus_points({q(5525), q(0)});
  CHECK(min_pairwise_distance2<2>(circle) == all_pairs(circle));
}

// --- sparse annulus search ------------------------------------------------------

TEST_CASE("sparse_annulus_search at mu = 400") {
  const SparseAnnulusParams p{q(1), q(1, 5), 1, q(400)};
  const auto r = sparse_annulus_search(p);
  REQUIRE(r.found);
  CHECK(r.J == 20);
  CHECK(r.m0 >= 0);
  CHECK(r.m0 <= 20);
  CHECK(r.buckets.size() == 21);

  // Oracle: enumerate the selected half-open annulus directly and compare.
  const RationalPower lower = r.kappa.scaled(big(r.m0)), upper = r.kappa.scaled(big(r.m0 + 1));
  std::vector<LatticePoint2> direct;
  for (const auto& pt : enumerate_region2({q(400), Rational(r.closed_upper) + 1})) {
    const Rational off = Rational(big(pt.norm2())) - q(400);
    if (lower.compare(off) < 0 && upper.compare(off) >= 0) direct.push_back(pt);
  }
  CHECK(direct == r.points);
  const auto md = all_pairs(direct);
  CHECK((!md || *md > 1));
  CHECK(md == r.min_distance2);
  for (const auto& pt : r.points) {
    REQUIRE(pt.norm2() >= r.closed_lower);
    REQUIRE(pt.norm2() <= r.closed_upper);
  }
  // Every earlier bucket really had a close pair.
  for (std::int64_t m = 0; m < r.m0; ++m) {
    REQUIRE(r.buckets[m].min_distance2.has_value());
    REQUIRE(*r.buckets[m].min_distance2 <= 1);
  }
  CHECK(r.counting_bound == doctest::Approx(16.0 * std::pow(400.0, 0.4)));
  CHECK(r.total_points >= r.points.size());
}

TEST_CASE("sparse_annulus_search parameter checks") {
  CHECK_THROWS_AS(sparse_annulus_search({q(1), q(1, 4), 1, q(400)}), Error);
  CHECK_THROWS_AS(sparse_annulus_search({q(0), q(1, 5), 1, q(400)}), Error);
  CHECK_THROWS_AS(sparse_annulus_search({q(1), q(1, 5), 0, q(400)}), Error);
  CHECK_THROWS_AS(sparse_annulus_search({q(100), q(1, 5), 1, q(2)}), Error);  // kappa > mu
}

TEST_CASE("sparse_annulus_search is exact across a range of mu") {
  for (long mu = 50; mu <= 3000; mu += 97) {
    for (long d = 1; d <= 2; ++d) {
      const auto r = sparse_annulus_search({q(1), q(1, 5), d, q(mu)});
      std::uint64_t total = 0;
      for (const auto& b : r.buckets) total += b.points;
      REQUIRE(total == r.total_points);
      if (r.found) {
        const auto md = all_pairs(r.points);
        REQUIRE((!md || *md > d * d));
      }
    }
  }
}

// --- explicit constructions -----------------------------------------------------------

TEST_CASE("prop23_construct") {
  const auto a = prop23_construct(q(10000), q(6));
  CHECK(a.first == LatticePoint2{{100, 0}});
  CHECK(a.second == LatticePoint2{{100, 1}});
  const auto b = prop23_construct(q(50), q(6));
  CHECK(b.first == LatticePoint2{{7, 1}});
  CHECK(b.second == LatticePoint2{{7, 2}});
  CHECK_THROWS_AS(prop23_construct(q(10000), q(5)), Error);  // 5 < 4 sqrt 2
  CHECK_THROWS_AS(prop23_construct(q(10000), q(565685, 100000)), Error);
  CHECK_NOTHROW(prop23_construct(q(10000), q(565686, 100000)));

  Gen g(93);
  for (int i = 0; i < 2000; ++i) {
    const Rational lambda = abs(g.rational(1'000'000, 9)) + 1;
    const Rational alpha = q(6) + abs(g.rational(10, 3));
    try {
      const auto r = prop23_construct(lambda, alpha);
      REQUIRE(distance2(r.first, r.second) == 1);
      REQUIRE(r.first.x[0] == r.second.x[0]);
      for (const auto& pt : {r.first, r.second}) {
        const Rational n(big(pt.norm2()));
        REQUIRE(n >= lambda);
        REQUIRE(r.width.compare(n - lambda) >= 0);
      }
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::not_found);
    }
  }
}

TEST_CASE("prop26_construct") {
  const auto r = prop26_construct(q(10000), q(12));
  CHECK(r.first.x[2] + 1 == r.second.x[2]);
  CHECK(r.first.x[0] == r.second.x[0]);
  CHECK(r.first.x[1] == r.second.x[1]);
  CHECK(r.s == 9997);
  for (const auto& pt : {r.first, r.second}) {
    const Rational n(big(pt.norm2()));
    CHECK(n >= 10000);
    CHECK(r.width.compare(n - 10000) >= 0);
  }
  CHECK(r.beta * r.beta > 8);
  CHECK(r.beta < q(144, 16));
  CHECK_THROWS_AS(prop26_construct(q(10000), q(6)), Error);      // 6^4 = 1296 <= 2048
  CHECK_THROWS_AS(prop26_construct(q(10000), q(12), q(2)), Error);  // beta below 2 sqrt 2

  Gen g(94);
  for (int i = 0; i < 300; ++i) {
    const Rational m = abs(g.rational(10'000'000, 7)) + 1;
    const Rational C = q(7) + abs(g.rational(20, 3));
    try {
      const auto p = prop26_construct(m, C);
      REQUIRE(distance2(p.first, p.second) == 1);
      for (const auto& pt : {p.first, p.second}) {
        const Rational n(big(pt.norm2()));
        REQUIRE(n >= m);
        REQUIRE(p.width.compare(n - m) >= 0);
      }
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::not_found);
    }
  }
}

// --- 3D pipeline ------------------------------------------------------------------------

TEST_CASE("theorem25_pipeline at d = 1, h0 = 1") {
  const auto r = theorem25_pipeline(1, 1);
  CHECK(r.certificate.m.to_decimal() == "2757");
  CHECK(r.D == std::vector<BigInt>{-4});
  CHECK(r.beta == 1);
  // h_out = 2 sqrt 3 - 3 = -3 + sqrt 12
  CHECK(r.h_out.offset == -3);
  CHECK(r.h_out.radicand == 12);
  CHECK(r.h_interval.upper - r.h_interval.lower <= q(1, 1'000'000'000));
  CHECK(r.h_out.compare(r.h_interval.lower) >= 0);
  CHECK(r.h_out.compare(r.h_interval.upper) <= 0);
  CHECK(r.h_out.approx() == doctest::Approx(2 * std::sqrt(3.0) - 3).epsilon(1e-14));
  CHECK(r.m.approx() == doctest::Approx(2757.5358983848623).epsilon(1e-14));
  CHECK(r.shell_upper == 2758);
  REQUIRE(r.verification.ran);
  CHECK(r.verification.sparse);
  CHECK(r.verification.min_distance2 > 1);
  for (const auto& p : r.verification.points) CHECK(p.norm2() == 2758);
  CHECK(r.verification.points.size() == enumerate_shell_points({q(2758), q(0)}).size());
  CHECK(r.witnesses.size() == 2);
}

TEST_CASE("theorem25_pipeline certificate-only path and errors") {
  const auto r = theorem25_pipeline(1, 2);
  CHECK(r.certificate.m.to_decimal() == "3001557");
  CHECK_FALSE(r.verification.ran);
  CHECK_FALSE(r.verification.skipped_reason.empty());
  CHECK(r.h_out.compare(q(1)) == 0);  // -3 + sqrt 16

  PipelineOptions opt;
  opt.verify_norm_limit = 4'000'000;
  const auto v = theorem25_pipeline(1, 2, opt);
  REQUIRE(v.verification.ran);
  CHECK(v.verification.sparse);

  CHECK_THROWS_AS(theorem25_pipeline(2, 1), Error);  // 4 h0 <= d^4 beta^3
  CHECK_THROWS_AS(theorem25_pipeline(0, 1), Error);
}

TEST_CASE("shell membership is exact at the irrational lower end") {
  const auto r = theorem25_pipeline(1, 1);
  CHECK(r.shell_contains(big(2758)));
  CHECK_FALSE(r.shell_contains(big(2757)));
  CHECK_FALSE(r.shell_contains(big(2759)));
  // Rationals straddling m
  CHECK(r.m.compare(r.m_interval.lower) >= 0);
  CHECK(r.m.compare(r.m_interval.upper) <= 0);
}

TEST_CASE("theorem25 sparsity holds whenever direct verification runs") {
  PipelineOptions opt;
  opt.verify_norm_limit = 200'000'000;
  opt.budget = {200'000'000};
  for (std::int64_t h0 = 1; h0 <= 3; ++h0) {
    const auto r = theorem25_pipeline(1, h0, opt);
    if (!r.verification.ran) continue;
    const auto md = min_pairwise_distance2<3>(r.verification.points);
    CHECK((!md || *md > 1));
    CHECK(r.verification.sparse);
  }
}
