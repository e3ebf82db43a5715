#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ttcalc/algebra.hpp"

namespace ttcalc {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; throws ParseError.
Json read_json_file(const std::string& path);

Field field_from_json(const Json& j);
Json field_to_json(const Field& f);

Scalar scalar_from_json(const Json& j, const Field& f);
Json scalar_to_json(const Scalar& s);
Vector vector_from_json(const Json& j, const Field& f, std::size_t dim);
Json vector_to_json(const Vector& v, const Field& f);

/**
 * Algebra document: name, field, dim, basis, unit, mult ([i, j, l, "c"]
 * entries), optional idempotents. `field_override` replaces the declared
 * field; coefficients are then read in that field. Throws ParseError.
 */
Algebra algebra_from_json(const Json& j, std::optional<Field> field_override = std::nullopt);
Json algebra_to_json(const Algebra& a);

/// A path to an algebra document, or a family name understood by build().
Algebra load_algebra(const std::string& path_or_family, std::optional<Field> field_override = std::nullopt);

}  // namespace ttcalc
