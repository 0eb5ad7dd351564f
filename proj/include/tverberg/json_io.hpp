#pragma once

// JSON encodings. Exact rationals and big integers are always strings.
//
//   complex:     {"num_vertices": int, "maximal_faces": [[int,...],...]}
//   map:         {"d": int, "coords": {"0": ["1/2","-3/4",...], ...}}
//   witness:     {"tuple": [[int,...],...], "point": [str,...],
//                 "barycentric": [[str,...],...]}
//   certificate: {"r": int, "coeffs": [str,...]}
//   plan:        {"r": int, "steps": [{"k": int, "sign": +-1}],
//                 "radius_rule": "min_orbit_dist/3"}

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tverberg/complexes.hpp"
#include "tverberg/errors.hpp"
#include "tverberg/numbercert.hpp"
#include "tverberg/plmaps.hpp"
#include "tverberg/rational.hpp"

namespace tverberg::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kRadiusRule = "min_orbit_dist/3";

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidInput(std::string("JSON: missing field '") + key + "'");
  return j.at(key);
}

inline std::int64_t as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InvalidInput(std::string("JSON: '") + what + "' must be an integer");
  return j.get<std::int64_t>();
}

inline Rational as_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw InvalidInput("JSON: rational entries must be strings like \"-3/4\"");
}

}  // namespace detail

inline Json to_json(const SimplicialComplex& K) {
  Json faces = Json::array();
  for (const auto& f : K.maximal_faces()) faces.push_back(f);
  return Json{{"num_vertices", K.num_vertices()}, {"maximal_faces", std::move(faces)}};
}

inline SimplicialComplex complex_from_json(const Json& j) {
  const auto n = detail::as_int(detail::field(j, "num_vertices"), "num_vertices");
  const Json& faces = detail::field(j, "maximal_faces");
  if (!faces.is_array()) throw InvalidInput("JSON: 'maximal_faces' must be an array");
  std::vector<Face> out;
  for (const auto& f : faces) {
    if (!f.is_array()) throw InvalidInput("JSON: each face must be an array");
    Face face;
    for (const auto& v : f) face.push_back(static_cast<int>(detail::as_int(v, "vertex")));
    out.push_back(std::move(face));
  }
  return SimplicialComplex(static_cast<int>(n), std::move(out));
}

inline Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (const auto& x : p) a.push_back(to_string(x));
  return a;
}

inline Json to_json(const PLMap& f) {
  Json coords = Json::object();
  for (std::size_t v = 0; v < f.coords().size(); ++v) coords[std::to_string(v)] = point_to_json(f.coords()[v]);
  return Json{{"d", f.d()}, {"coords", std::move(coords)}};
}

inline PLMap map_from_json(const Json& j, const SimplicialComplex& K) {
  const auto d = detail::as_int(detail::field(j, "d"), "d");
  const Json& coords = detail::field(j, "coords");
  if (!coords.is_object()) throw InvalidInput("JSON: 'coords' must be an object keyed by vertex");
  std::vector<Point> pts(static_cast<std::size_t>(K.num_vertices()));
  std::vector<bool> seen(pts.size(), false);
  for (const auto& [key, value] : coords.items()) {
    const auto v = parse_bigint(key);
    if (v < 0 || v >= K.num_vertices()) throw InvalidInput("JSON: map vertex '" + key + "' out of range");
    const auto idx = v.convert_to<std::size_t>();
    if (!value.is_array()) throw InvalidInput("JSON: coordinates of vertex " + key + " must be an array");
    for (const auto& x : value) pts[idx].push_back(detail::as_rational(x));
    seen[idx] = true;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) throw InvalidInput("JSON: map lacks coordinates for vertex " + std::to_string(v));
  return PLMap(K, static_cast<int>(d), std::move(pts));
}

inline Json to_json(const IntersectionWitness& w) {
  Json tuple = Json::array();
  for (const auto& f : w.tuple.faces) tuple.push_back(f);
  Json bary = Json::array();
  for (const auto& lam : w.barycentric) bary.push_back(point_to_json(lam));
  return Json{{"tuple", std::move(tuple)}, {"point", point_to_json(w.point)}, {"barycentric", std::move(bary)}};
}

inline IntersectionWitness witness_from_json(const Json& j) {
  IntersectionWitness w;
  for (const auto& f : detail::field(j, "tuple")) {
    Face face;
    for (const auto& v : f) face.push_back(static_cast<int>(detail::as_int(v, "vertex")));
    w.tuple.faces.push_back(std::move(face));
  }
  for (const auto& x : detail::field(j, "point")) w.point.push_back(detail::as_rational(x));
  for (const auto& lam : detail::field(j, "barycentric")) {
    std::vector<Rational> row;
    for (const auto& x : lam) row.push_back(detail::as_rational(x));
    w.barycentric.push_back(std::move(row));
  }
  return w;
}

inline Json to_json(const numbercert::BezoutCertificate& c) {
  Json coeffs = Json::array();
  for (const auto& a : c.coeffs) coeffs.push_back(to_string(a));
  return Json{{"r", c.r}, {"coeffs", std::move(coeffs)}};
}

inline numbercert::BezoutCertificate certificate_from_json(const Json& j) {
  numbercert::BezoutCertificate c;
  c.r = detail::as_int(detail::field(j, "r"), "r");
  for (const auto& a : detail::field(j, "coeffs")) {
    if (!a.is_string()) throw InvalidInput("JSON: certificate coefficients must be strings");
    c.coeffs.push_back(parse_bigint(a.get<std::string>()));
  }
  return c;
}

inline Json to_json(const numbercert::ModificationPlan& plan) {
  Json steps = Json::array();
  for (const auto& s : plan.steps) steps.push_back(Json{{"k", s.k}, {"sign", s.sign}});
  return Json{{"r", plan.r}, {"steps", std::move(steps)}, {"radius_rule", kRadiusRule}};
}

inline numbercert::ModificationPlan plan_from_json(const Json& j) {
  numbercert::ModificationPlan plan;
  plan.r = detail::as_int(detail::field(j, "r"), "r");
  for (const auto& s : detail::field(j, "steps")) {
    numbercert::PlanStep step;
    step.k = static_cast<int>(detail::as_int(detail::field(s, "k"), "k"));
    step.sign = static_cast<int>(detail::as_int(detail::field(s, "sign"), "sign"));
    plan.steps.push_back(step);
  }
  if (j.contains("radius_rule") && j.at("radius_rule") != kRadiusRule)
    throw InvalidInput("JSON: unsupported radius_rule");
  numbercert::validate_plan(plan);
  plan.target_degree = plan.final_degree();
  return plan;
}

}  // namespace tverberg::io
