#pragma once

// Measure files. A measure is a JSON object holding either
//   {"atoms": [{"x": ..., "w": ...}, ...]}
// or a piecewise-affine quantile function
//   {"quantile_pieces": [{"u_hi": ..., "slope": ..., "value_hi": ...}, ...]}
// Quantile pieces are discretized with midpoint sampling on load.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wproj/error.hpp"
#include "wproj/measures.hpp"

namespace wproj::io {

using json = nlohmann::json;

inline constexpr std::size_t kDefaultDiscretizeN = 4096;

using MeasureSource = std::variant<DiscreteMeasure, GeneralQuantile>;

namespace detail {

inline double number(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number())
    throw Error(ErrorCode::Parse, std::string("expected numeric field '") + key + "'");
  return obj.at(key).get<double>();
}

}  // namespace detail

inline MeasureSource parse_measure(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "measure record must be an object");
  const bool has_atoms = doc.contains("atoms");
  const bool has_pieces = doc.contains("quantile_pieces");
  if (has_atoms == has_pieces)
    throw Error(ErrorCode::Parse, "measure record needs exactly one of 'atoms' or 'quantile_pieces'");
  if (has_atoms) {
    const auto& arr = doc.at("atoms");
    if (!arr.is_array()) throw Error(ErrorCode::Parse, "'atoms' must be an array");
    std::vector<Atom> atoms;
    for (const auto& a : arr) atoms.push_back({detail::number(a, "x"), detail::number(a, "w")});
    return DiscreteMeasure::from_atoms(std::move(atoms));
  }
  const auto& arr = doc.at("quantile_pieces");
  if (!arr.is_array()) throw Error(ErrorCode::Parse, "'quantile_pieces' must be an array");
  std::vector<GeneralQuantile::Piece> pieces;
  for (const auto& p : arr)
    pieces.push_back({detail::number(p, "u_hi"), detail::number(p, "slope"), detail::number(p, "value_hi")});
  return GeneralQuantile(std::move(pieces));
}

inline MeasureSource parse_measure(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return parse_measure(doc);
}

inline DiscreteMeasure to_discrete(const MeasureSource& src, std::size_t discretize_n) {
  if (const auto* m = std::get_if<DiscreteMeasure>(&src)) return *m;
  return discretize(std::get<GeneralQuantile>(src), discretize_n);
}

inline DiscreteMeasure load_measure(const std::string& path,
                                    std::size_t discretize_n = kDefaultDiscretizeN) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open measure file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return to_discrete(parse_measure(buf.str()), discretize_n);
}

inline json to_json(const DiscreteMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"x", a.x}, {"w", a.w}});
  return json{{"atoms", atoms}};
}

inline json to_json(const GeneralQuantile& q) {
  json pieces = json::array();
  for (const auto& p : q.pieces())
    pieces.push_back({{"u_hi", p.u_hi}, {"slope", p.slope}, {"value_hi", p.value_hi}});
  return json{{"quantile_pieces", pieces}};
}

}  // namespace wproj::io
