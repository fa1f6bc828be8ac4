#pragma once

// FunctionSpec file format (JSON) and report serialization helpers. Report
// numerics are rendered with 12 significant digits and +inf as the token
// "inf"; emitted FunctionSpec coefficients are left untouched so that a
// reparse reproduces them bit for bit.

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ebound/polyfun.hpp"

namespace ebound {

using Json = nlohmann::json;

struct FunctionSpec {
  std::string name;
  PolyhedralFunction f;
};

inline FunctionSpec parse_function_spec(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec: expected an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw std::invalid_argument("spec: missing integer field 'dim'");
  const int dim = j["dim"].get<int>();
  if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
    throw std::invalid_argument("spec: 'pieces' must be a nonempty array");
  std::vector<AffinePiece> pieces;
  for (const Json& pj : j["pieces"]) {
    if (!pj.is_object() || !pj.contains("a") || !pj.contains("b"))
      throw std::invalid_argument("spec: each piece needs fields 'a' and 'b'");
    AffinePiece piece;
    piece.gradient = pj["a"].get<Vec>();
    piece.offset = pj["b"].get<double>();
    if (static_cast<int>(piece.gradient.size()) != dim)
      throw std::invalid_argument("spec: piece gradient length != dim");
    if (!all_finite(piece.gradient) || !std::isfinite(piece.offset))
      throw std::invalid_argument("spec: non-finite coefficient");
    pieces.push_back(std::move(piece));
  }
  std::string name = j.value("name", std::string{});
  return {std::move(name), PolyhedralFunction(dim, std::move(pieces))};
}

inline FunctionSpec load_function_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  Json j = Json::parse(in);  // throws nlohmann parse_error on bad input
  return parse_function_spec(j);
}

inline Json function_spec_to_json(const PolyhedralFunction& f,
                                  const std::string& name = {}) {
  Json j;
  if (!name.empty()) j["name"] = name;
  j["dim"] = f.dim();
  j["pieces"] = Json::array();
  for (const AffinePiece& p : f.pieces())
    j["pieces"].push_back({{"a", p.gradient}, {"b", p.offset}});
  return j;
}

// 12 significant digits, the report-wide serialization precision.
inline double round_sig(double v, int digits = 12) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

// Report number: finite values rounded, infinities as string tokens.
inline Json report_num(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return round_sig(v);
}

inline Json report_vec(const Vec& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(round_sig(x));
  return j;
}

inline Json report_pattern(const ActiveSet& d) {
  return Json(d);
}

}  // namespace ebound
