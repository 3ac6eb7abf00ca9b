#pragma once

#include <json.hpp>
#include <string>

#include "stiffgeo/geodesics.hpp"
#include "stiffgeo/metrics.hpp"
#include "stiffgeo/models.hpp"
#include "stiffgeo/transport.hpp"
#include "stiffgeo/weakstiff2d.hpp"

namespace stiffgeo::io {

using nlohmann::json;

inline constexpr const char* kSchema = "stiffgeo/1";

// Rounded to 12 significant digits; non-finite values become "inf", "-inf", "nan".
json number(double v);
json vector(const Vector& v);
json matrix(const Matrix& m);  // row-major nested arrays

// Shortest representation that reads back to the same double.
std::string shortest(double v);

Vector parse_vector(const std::string& text);  // "1,0,-2.5"
std::pair<int, int> parse_index_pair(const std::string& text);  // "1,2" (1-based) -> (0, 1)

json to_json(const Signature& sig);
Signature signature_from_json(const json& j);

json to_json(const CanonicalModel& M);
QuadraticPotential potential_from_json(const json& j);
json to_json(const QuadraticPotential& P);
RationalComplexFn rational_from_json(const json& j);

json to_json(const TransportMap& T);
json to_json(const DomainFacts& f);
json to_json(const GeodesicSolution& s);
json to_json(const TableRow& row);

json parse_json(const std::string& text);

}  // namespace stiffgeo::io
