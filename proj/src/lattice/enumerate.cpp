#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "quadgap/lattice.hpp"

namespace quadgap::lattice {

namespace {

constexpr std::int64_t kMaxNorm = std::int64_t{1} << 60;

std::pair<std::int64_t, std::int64_t> machine_range(const Region& r) {
  auto [first, last] = r.norm_range();
  if (first < 0) first = 0;
  if (last > kMaxNorm) throw Error(Errc::budget_exceeded, "region norm exceeds the machine range");
  return {first.get_si(), last.get_si()};
}

void charge(double estimate, const EnumerationBudget& budget) {
  if (estimate > static_cast<double>(budget.max_iterations))
    throw Error(Errc::budget_exceeded,
                "enumeration needs about " + std::to_string(static_cast<std::uint64_t>(estimate)) +
                    " steps; budget is " + std::to_string(budget.max_iterations));
}

// Values v >= 0 with lo <= q + v^2 <= hi, as [v_min, v_max] (empty if v_min > v_max).
std::pair<std::int64_t, std::int64_t> root_span(std::int64_t q, std::int64_t lo, std::int64_t hi) {
  if (q > hi) return {1, 0};
  const auto v_min = lo > q ? static_cast<std::int64_t>(arith::ceil_sqrt(static_cast<std::uint64_t>(lo - q))) : 0;
  const auto v_max = static_cast<std::int64_t>(arith::isqrt(static_cast<std::uint64_t>(hi - q)));
  return {v_min, v_max};
}

template <class Emit>
void for_signed(std::int64_t v_min, std::int64_t v_max, Emit&& emit) {
  for (std::int64_t v = v_min; v <= v_max; ++v) {
    emit(v);
    if (v != 0) emit(-v);
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

template <std::size_t Dim>
struct CellHash {
  std::size_t operator()(const std::array<std::int64_t, Dim>& c) const noexcept {
    std::size_t h = 0;
    for (auto v : c) h = h * 1'000'003u ^ std::hash<std::int64_t>{}(v);
    return h;
  }
};

template <std::size_t Dim>
std::int64_t naive_min(std::span<const LatticePoint<Dim>> pts) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k) best = std::min(best, distance2(pts[i], pts[k]));
  return best;
}

// Minimum over pairs in the same or adjacent cells of side g.
template <std::size_t Dim>
std::int64_t grid_min(std::span<const LatticePoint<Dim>> pts, std::int64_t g) {
  using Cell = std::array<std::int64_t, Dim>;
  std::unordered_map<Cell, std::vector<std::size_t>, CellHash<Dim>> cells;
  std::vector<Cell> cell_of(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t a = 0; a < Dim; ++a) cell_of[i][a] = floor_div(pts[i].x[a], g);
    cells[cell_of[i]].push_back(i);
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::size_t offsets = 1;
  for (std::size_t a = 0; a < Dim; ++a) offsets *= 3;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t o = 0; o < offsets; ++o) {
      Cell c = cell_of[i];
      std::size_t code = o;
      for (std::size_t a = 0; a < Dim; ++a) {
        c[a] += static_cast<std::int64_t>(code % 3) - 1;
        code /= 3;
      }
      const auto it = cells.find(c);
      if (it == cells.end()) continue;
      for (std::size_t k : it->second)
        if (k > i) best = std::min(best, distance2(pts[i], pts[k]));
    }
  }
  return best;
}

}  // namespace

bool Region::contains(const BigInt& norm2) const {
  const Rational n(norm2);
  const bool above = lower_closed ? n >= lower : n > lower;
  const bool below = upper_closed ? n <= upper : n < upper;
  return above && below;
}

std::pair<BigInt, BigInt> Region::norm_range() const {
  BigInt first = lower_closed ? ceil(lower) : BigInt(floor(lower) + 1);
  BigInt last = upper_closed ? floor(upper) : BigInt(ceil(upper) - 1);
  return {std::move(first), std::move(last)};
}

std::vector<LatticePoint2> enumerate_region2(const Region& r, const EnumerationBudget& budget) {
  std::vector<LatticePoint2> out;
  const auto [lo, hi] = machine_range(r);
  if (lo > hi) return out;
  const double root = std::sqrt(static_cast<double>(hi));
  charge(2 * root + std::numbers::pi * static_cast<double>(hi - lo + 1) + 4 * root, budget);
  const auto R = static_cast<std::int64_t>(arith::isqrt(static_cast<std::uint64_t>(hi)));
  for (std::int64_t x1 = -R; x1 <= R; ++x1) {
    const auto [v_min, v_max] = root_span(x1 * x1, lo, hi);
    for_signed(v_min, v_max, [&](std::int64_t x2) { out.push_back({{x1, x2}}); });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LatticePoint3> enumerate_region3(const Region& r, const EnumerationBudget& budget) {
  std::vector<LatticePoint3> out;
  const auto [lo, hi] = machine_range(r);
  if (lo > hi) return out;
  const double root = std::sqrt(static_cast<double>(hi));
  charge(std::numbers::pi * static_cast<double>(hi) + 4 * std::numbers::pi * root * static_cast<double>(hi - lo + 1),
         budget);
  const auto R = static_cast<std::int64_t>(arith::isqrt(static_cast<std::uint64_t>(hi)));
  for (std::int64_t x1 = -R; x1 <= R; ++x1) {
    const std::int64_t q1 = x1 * x1;
    const auto R2 = static_cast<std::int64_t>(arith::isqrt(static_cast<std::uint64_t>(hi - q1)));
    for (std::int64_t x2 = -R2; x2 <= R2; ++x2) {
      const auto [v_min, v_max] = root_span(q1 + x2 * x2, lo, hi);
      for_signed(v_min, v_max, [&](std::int64_t x3) { out.push_back({{x1, x2, x3}}); });
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LatticePoint2> enumerate_annulus_points(const Annulus& a, const EnumerationBudget& budget) {
  if (sgn(a.lambda) < 0 || sgn(a.kappa) < 0)
    throw Error(Errc::invalid_argument, "annulus needs lambda >= 0 and kappa >= 0");
  return enumerate_region2(a.region(), budget);
}

std::vector<LatticePoint3> enumerate_shell_points(const SphericalShell& s, const EnumerationBudget& budget) {
  if (sgn(s.m) < 0 || sgn(s.h) < 0) throw Error(Errc::invalid_argument, "shell needs m >= 0 and h >= 0");
  return enumerate_region3(s.region(), budget);
}

template <std::size_t Dim>
std::optional<std::int64_t> min_pairwise_distance2(std::span<const LatticePoint<Dim>> points) {
  if (points.size() < 2) return std::nullopt;
  if (points.size() <= 32) return naive_min(points);

  std::int64_t extent = 0;
  for (std::size_t a = 0; a < Dim; ++a) {
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [a](const auto& p, const auto& q) { return p.x[a] < q.x[a]; });
    extent = std::max(extent, hi->x[a] - lo->x[a]);
  }
  // A pair at distance <= g always lands in adjacent cells of side g, so a
  // grid minimum <= g^2 is the true minimum.
  std::int64_t g = 1;
  while (g <= extent) {
    const std::int64_t best = grid_min(points, g);
    if (best <= g * g) return best;
    if (best != std::numeric_limits<std::int64_t>::max()) {
      g = static_cast<std::int64_t>(arith::ceil_sqrt(static_cast<std::uint64_t>(best)));
    } else {
      g *= 4;
    }
  }
  return naive_min(points);
}

template std::optional<std::int64_t> min_pairwise_distance2<2>(std::span<const LatticePoint2>);
template std::optional<std::int64_t> min_pairwise_distance2<3>(std::span<const LatticePoint3>);

}  // namespace quadgap::lattice
