#include "quadgap/io.hpp"

#include "quadgap/rational.hpp"

namespace quadgap::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::invalid_argument, "malformed JSON: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t count_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned()) bad(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

arith::Natural natural_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a decimal string");
  return arith::Natural::from_decimal(v.get<std::string>());
}

}  // namespace

std::string rational_string(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(static_cast<long>(j.get<std::int64_t>())));
  bad("expected a rational string");
}

Json to_json(const gapforge::GapCertificate& cert) {
  return Json{{"version", kSchemaVersion},
              {"D", cert.D.values()},
              {"r", cert.r},
              {"delta", cert.delta},
              {"h", cert.h},
              {"A", cert.A},
              {"P", cert.P.to_decimal()},
              {"m", cert.m.to_decimal()}};
}

gapforge::GapCertificate certificate_from_json(const Json& j) {
  if (int_field(j, "version") != kSchemaVersion) bad("unsupported certificate version");
  const Json& d = field(j, "D");
  if (!d.is_array()) bad("field 'D' must be an array");
  std::vector<std::int64_t> values;
  for (const auto& v : d) {
    if (!v.is_number_integer()) bad("'D' entries must be integers");
    values.push_back(v.get<std::int64_t>());
  }
  gapforge::GapCertificate cert;
  cert.D = gapforge::validate_D(values);
  cert.r = int_field(j, "r");
  cert.delta = int_field(j, "delta");
  cert.h = int_field(j, "h");
  cert.A = int_field(j, "A");
  cert.P = natural_field(j, "P");
  cert.m = natural_field(j, "m");
  return cert;
}

Json to_json(const gapforge::WitnessTable& table) {
  Json out = Json::array();
  for (const auto& w : table) {
    out.push_back({{"j", w.j},
                   {"d", w.d},
                   {"p", w.p},
                   {"valuation_r_plus_dj", w.valuation_r_plus_dj},
                   {"valuation_m_plus_j", w.valuation_m_plus_j}});
  }
  return out;
}

gapforge::WitnessTable witnesses_from_json(const Json& j) {
  if (!j.is_array()) bad("witness table must be an array");
  gapforge::WitnessTable table;
  for (const auto& row : j) {
    table.push_back({int_field(row, "j"), int_field(row, "d"), int_field(row, "p"),
                     count_field(row, "valuation_r_plus_dj"), count_field(row, "valuation_m_plus_j"), 0});
  }
  return table;
}

Json to_json(const qforms::BinaryQuadraticForm& f) {
  return Json{{"a", f.a.get_str()}, {"b", f.b.get_str()}, {"c", f.c.get_str()}};
}

Json to_json(const qforms::AffineQuadraticForm& f) {
  return Json{{"a", rational_string(f.a)}, {"b", rational_string(f.b)}, {"c", rational_string(f.c)},
              {"s", rational_string(f.s)}, {"t", rational_string(f.t)}, {"u", rational_string(f.u)}};
}

qforms::AffineQuadraticForm affine_form_from_json(const Json& j) {
  return {rational_from_json(field(j, "a")), rational_from_json(field(j, "b")), rational_from_json(field(j, "c")),
          rational_from_json(field(j, "s")), rational_from_json(field(j, "t")), rational_from_json(field(j, "u"))};
}

}  // namespace quadgap::io
