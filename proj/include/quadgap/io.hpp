#pragma once

// JSON encodings shared by the command-line tool and the tests. Big integers
// travel as decimal strings, rationals as "p/q".

#include <json.hpp>

#include "quadgap/gapforge.hpp"
#include "quadgap/qforms.hpp"

namespace quadgap::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const gapforge::GapCertificate& cert);
/// Validates shape, field types and the discriminant set; does not verify.
gapforge::GapCertificate certificate_from_json(const Json& j);

Json to_json(const gapforge::WitnessTable& table);
gapforge::WitnessTable witnesses_from_json(const Json& j);

Json to_json(const qforms::BinaryQuadraticForm& f);
Json to_json(const qforms::AffineQuadraticForm& f);
qforms::AffineQuadraticForm affine_form_from_json(const Json& j);

std::string rational_string(const Rational& q);
Rational rational_from_json(const Json& j);

}  // namespace quadgap::io
