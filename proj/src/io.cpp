#include "stiffgeo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "stiffgeo/errors.hpp"

namespace stiffgeo::io {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

json vector(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

json matrix(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vector(m.row(i).transpose()));
  return rows;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty component in vector '" + text + "'");
    const std::string t = item.substr(b, e - b + 1);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw ParseError("cannot parse number '" + t + "' in vector '" + text + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw ParseError("empty vector");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::pair<int, int> parse_index_pair(const std::string& text) {
  const Vector v = parse_vector(text);
  if (v.size() != 2 || v(0) != std::floor(v(0)) || v(1) != std::floor(v(1)) || v(0) < 1 || v(1) < 1)
    throw ParseError("expected a pair of 1-based indices, got '" + text + "'");
  return {static_cast<int>(v(0)) - 1, static_cast<int>(v(1)) - 1};
}

json to_json(const Signature& sig) { return {{"p", sig.p}, {"m", sig.m}}; }

Signature signature_from_json(const json& j) {
  try {
    return Signature(j.at("p").get<int>(), j.at("m").get<int>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("signature: ") + e.what());
  }
}

json to_json(const CanonicalModel& M) {
  const char* branch = M.branch == Branch::Whole ? "Whole" : M.branch == Branch::Right ? "Right" : "Left";
  return {{"string", to_string(M)},
          {"signature", to_json(M.sig)},
          {"lambda", number(M.lambda)},
          {"nu", M.nu == Nu::Plus ? "+" : "-"},
          {"branch", branch}};
}

QuadraticPotential potential_from_json(const json& j) {
  try {
    const Signature sig = signature_from_json(j.at("signature"));
    const auto lin = j.at("lin").get<std::vector<double>>();
    if (static_cast<int>(lin.size()) != sig.dim()) throw ParseError("potential: 'lin' must have d entries");
    return QuadraticPotential(sig, j.at("K").get<double>(),
                              Eigen::Map<const Vector>(lin.data(), static_cast<Eigen::Index>(lin.size())),
                              j.at("const").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("potential: ") + e.what());
  }
}

json to_json(const QuadraticPotential& P) {
  return {{"signature", to_json(P.sig)}, {"K", number(P.K)}, {"lin", vector(P.lin)}, {"const", number(P.c)}};
}

RationalComplexFn rational_from_json(const json& j) {
  auto coeffs = [](const json& arr) {
    std::vector<Complex> out;
    for (const auto& c : arr) {
      if (c.is_number()) out.emplace_back(c.get<double>(), 0.0);
      else if (c.is_array() && c.size() == 2) out.emplace_back(c[0].get<double>(), c[1].get<double>());
      else throw ParseError("rational function: coefficients must be numbers or [re, im] pairs");
    }
    return out;
  };
  try {
    if (j.value("infinity", false)) return RationalComplexFn::infinity();
    return RationalComplexFn(coeffs(j.at("num")), coeffs(j.at("den")));
  } catch (const json::exception& e) {
    throw ParseError(std::string("rational function: ") + e.what());
  }
}

json to_json(const TransportMap& T) {
  json j = {{"matrix", matrix(T.matrix)},
            {"from", vector(T.from)},
            {"to", vector(T.to)},
            {"method", T.method == TransportMethod::ODE ? "ODE" : "ClosedForm"},
            {"est_error", number(T.est_error)},
            {"det", number(T.matrix.determinant())}};
  if (T.frame) {
    j["frame"] = {{"from", matrix(T.frame->frame_from)},
                  {"to", matrix(T.frame->frame_to)},
                  {"matrix", matrix(T.frame->in_frame)}};
  }
  if (!T.note.empty()) j["note"] = T.note;
  return j;
}

json to_json(const DomainFacts& f) {
  return {{"empty", f.empty},
          {"connected", f.connected},
          {"simply_connected", f.simply_connected},
          {"bounded", f.bounded},
          {"contains_origin", f.contains_origin}};
}

namespace {

const char* end_kind(EndKind k) {
  switch (k) {
    case EndKind::Unbounded: return "Unbounded";
    case EndKind::ReachesInfinity: return "ReachesInfinity";
    case EndKind::ApproachesBoundary: return "ApproachesBoundary";
  }
  return "?";
}

}  // namespace

json to_json(const GeodesicSolution& s) {
  json j = {{"case", to_string(s.reduction.kind)},
            {"alpha", number(s.alpha)},
            {"beta", number(s.beta)},
            {"t_min", number(s.t_min)},
            {"t_max", number(s.t_max)},
            {"lower_end", end_kind(s.lower.kind)},
            {"upper_end", end_kind(s.upper.kind)}};
  if (s.reduction.lambda_prime) j["lambda_prime"] = *s.reduction.lambda_prime;
  if (s.reduction.kind == GeodesicCaseKind::C3_TwoPoles) j["inside"] = s.reduction.inside;
  j["reparam"] = {{"a", number(s.reduction.a)}, {"b", number(s.reduction.b)}, {"kappa", number(s.reduction.kappa)}};
  return j;
}

json to_json(const TableRow& row) {
  json j = {{"connection", row.connection},
            {"volume_form", number(row.volume)},
            {"curvature_form", number(row.curvature)},
            {"geodesically_complete", row.geodesically_complete},
            {"infinitesimally_conformal", row.infinitesimally_conformal},
            {"straight_geodesics", row.straight_geodesics}};
  j["preserved_metric"] = row.metric ? matrix(*row.metric) : json(nullptr);
  return j;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace stiffgeo::io
