#include <set>
#include <string>

#include "quadgap/arith.hpp"
#include "quadgap/qforms.hpp"

namespace quadgap::qforms {

BigInt discriminant(const BinaryQuadraticForm& f) { return f.discriminant(); }

CompletionShift complete_square(const AffineQuadraticForm& f) {
  const Rational det = 4 * f.a * f.c - f.b * f.b;
  if (sgn(det) == 0) throw Error(Errc::degenerate_form, "b^2 - 4ac = 0: the square cannot be completed");
  CompletionShift shift;
  shift.xi1 = (f.b * f.t - 2 * f.c * f.s) / det;
  shift.xi2 = (f.b * f.s - 2 * f.a * f.t) / det;
  shift.xi3 = f(shift.xi1, shift.xi2);
  return shift;
}

DirectionVector normalize_j(const Vec3& j) {
  if (j[0] == 0 && j[1] == 0 && j[2] == 0) throw Error(Errc::zero_vector, "direction j must be nonzero");
  DirectionVector out{j, j, 0};
  while (out.j[2] == 0) {
    out.j = {out.j[2], out.j[0], out.j[1]};
    ++out.shifts;
  }
  return out;
}

AffineQuadraticForm build_Tjn(const DirectionVector& dir, std::int64_t n) {
  const auto& j = dir.j;
  if (j[2] == 0) throw Error(Errc::invalid_argument, "T_{j,n} needs j3 != 0");
  const Rational inv(1, BigInt(static_cast<long>(j[2] * j[2])));
  const BigInt j1(static_cast<long>(j[0])), j2(static_cast<long>(j[1])), j3(static_cast<long>(j[2]));
  const BigInt nn(static_cast<long>(n));
  AffineQuadraticForm f;
  f.a = inv * Rational(j1 * j1 + j3 * j3);
  f.b = inv * Rational(2 * j1 * j2);
  f.c = inv * Rational(j2 * j2 + j3 * j3);
  f.s = inv * Rational(-2 * nn * j1);
  f.t = inv * Rational(-2 * nn * j2);
  f.u = inv * Rational(nn * nn);
  return f;
}

BigInt beta_lcm(std::int64_t d) {
  if (d < 1) throw Error(Errc::invalid_argument, "beta_lcm needs d >= 1");
  BigInt beta = 1;
  for (std::int64_t k = 2; k <= d * d; ++k) beta = arith::lcm(beta, BigInt(static_cast<long>(k)));
  return beta;
}

BinaryQuadraticForm build_tilde_Tj(const DirectionVector& dir, std::int64_t d) {
  const auto& j = dir.j;
  if (j[2] == 0) throw Error(Errc::invalid_argument, "tilde T_j needs j3 != 0");
  if (dir.norm2() > d * d)
    throw Error(Errc::invalid_argument, "|j| exceeds d for tilde T_j");
  const BigInt beta = beta_lcm(d);
  const BigInt j1(static_cast<long>(j[0])), j2(static_cast<long>(j[1])), j3sq(static_cast<long>(j[2] * j[2]));
  auto exact = [&](const BigInt& numerator) {
    BigInt q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), numerator.get_mpz_t(), j3sq.get_mpz_t());
    if (r != 0) throw Error(Errc::invalid_argument, "tilde T_j coefficient is not integral");
    return q;
  };
  return {exact(beta * (j1 * j1 + j3sq)), exact(2 * beta * j1 * j2), exact(beta * (j2 * j2 + j3sq))};
}

EvenValuationResult even_valuation_check(const BinaryQuadraticForm& f, std::int64_t p,
                                         std::int64_t bound) {
  if (p < 2 || !arith::is_prime(static_cast<std::uint64_t>(p)))
    throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
  if (bound < 1) throw Error(Errc::invalid_argument, "bound must be positive");
  const BigInt bp(static_cast<long>(p));
  if (f.discriminant() % bp == 0)
    throw Error(Errc::divides_argument, "p divides the discriminant");

  // Center-out order: 0, 1, -1, 2, -2, ...
  std::vector<std::int64_t> order{0};
  for (std::int64_t k = 1; k <= bound; ++k) {
    order.push_back(k);
    order.push_back(-k);
  }
  EvenValuationResult out;
  for (std::int64_t k1 : order) {
    for (std::int64_t k2 : order) {
      ++out.checked;
      const BigInt value = f(BigInt(static_cast<long>(k1)), BigInt(static_cast<long>(k2)));
      if (value == 0) continue;
      if (arith::valuation_unchecked(bp, value) % 2 == 1) {
        out.pass = false;
        out.counterexample = {k1, k2};
        return out;
      }
    }
  }
  return out;
}

std::vector<DirectionVector> directions(std::int64_t d) {
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  std::vector<DirectionVector> out;
  for (std::int64_t a = -d; a <= d; ++a)
    for (std::int64_t b = -d; b <= d; ++b)
      for (std::int64_t c = -d; c <= d; ++c) {
        const std::int64_t n2 = a * a + b * b + c * c;
        if (n2 == 0 || n2 > d * d) continue;
        out.push_back(normalize_j({a, b, c}));
      }
  return out;
}

std::vector<BigInt> discriminant_set(std::int64_t d) {
  std::set<BigInt> found;
  for (const auto& dir : directions(d)) found.insert(build_tilde_Tj(dir, d).discriminant());
  return {found.begin(), found.end()};
}

}  // namespace quadgap::qforms
