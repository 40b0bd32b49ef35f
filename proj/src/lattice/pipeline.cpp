#include "quadgap/gapforge.hpp"
#include "quadgap/lattice.hpp"
#include "quadgap/qforms.hpp"

namespace quadgap::lattice {

bool Theorem25Report::shell_contains(const BigInt& norm2) const {
  const Rational n(norm2);
  return m.compare(n) <= 0 && n <= shell_upper;
}

Theorem25Report theorem25_pipeline(std::int64_t d, std::int64_t h0, const PipelineOptions& options) {
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  if (h0 < 1) throw Error(Errc::invalid_argument, "inner gap length must be >= 1");

  Theorem25Report report;
  report.d = d;
  report.h0 = h0;
  report.beta = qforms::beta_lcm(d);
  report.D = qforms::discriminant_set(d);

  std::vector<std::int64_t> values;
  for (const auto& v : report.D) {
    if (!mpz_fits_slong_p(v.get_mpz_t())) throw Error(Errc::overflow, "discriminant out of range");
    values.push_back(v.get_si());
  }
  const auto D = gapforge::validate_D(values);
  report.certificate = gapforge::construct_gap(D, h0, {options.threads});
  report.witnesses = gapforge::verify_certificate(report.certificate, options.threads);

  const BigInt beta3 = report.beta * report.beta * report.beta;
  const Rational scaled_h0(BigInt(static_cast<long>(h0)), beta3);
  const BigInt d2 = BigInt(static_cast<long>(d)) * d;
  // h + (h + d^2)^2 / 4 = h0 / beta^3, positive root.
  const Rational radicand = 4 * (Rational(d2) + 1 + scaled_h0);
  const Rational shift(d2 + 2);
  if (radicand <= shift * shift) {
    throw Error(Errc::invalid_argument, "inner gap too short: need 4 h0 > d^4 beta^3 for a positive shell thickness");
  }
  report.h_out = {-shift, radicand, false};
  report.h_interval = enclose(report.h_out, options.interval_width);

  // m + h_out = (m0 + h0) / beta^3 exactly.
  report.shell_upper = Rational(report.certificate.m.value() + h0, beta3);
  report.shell_upper.canonicalize();
  report.m = {report.shell_upper + shift, radicand, true};
  report.m_interval = enclose(report.m, options.interval_width);

  auto& ver = report.verification;
  if (report.shell_upper > Rational(BigInt(static_cast<long>(options.verify_norm_limit)))) {
    ver.skipped_reason = "outer norm " + floor(report.shell_upper).get_str() + " exceeds the direct verification limit " +
                         std::to_string(options.verify_norm_limit) + "; certificate verified instead";
    return report;
  }
  // Rational superset [m_lower, m + h], then the exact filter.
  std::vector<LatticePoint3> superset;
  try {
    superset = enumerate_region3({report.m_interval.lower, report.shell_upper}, options.budget);
  } catch (const Error& e) {
    if (e.code() != Errc::budget_exceeded) throw;
    ver.skipped_reason = std::string(e.what()) + "; certificate verified instead";
    return report;
  }
  for (const auto& p : superset) {
    if (report.shell_contains(BigInt(static_cast<long>(p.norm2())))) ver.points.push_back(p);
  }
  ver.ran = true;
  ver.min_distance2 = min_pairwise_distance2<3>(ver.points);
  ver.sparse = !ver.min_distance2 || *ver.min_distance2 > d * d;
  return report;
}

}  // namespace quadgap::lattice
