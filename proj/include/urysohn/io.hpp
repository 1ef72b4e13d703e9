#pragma once

// JSON file formats. A space reference is either an inline space object or a
// path string resolved against the directory of the file that contains it.
// Every numeric entry must be a JSON integer; distances are numerators over
// the space's denominator.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "urysohn/error.hpp"
#include "urysohn/gh.hpp"
#include "urysohn/graev.hpp"
#include "urysohn/grid.hpp"
#include "urysohn/homog.hpp"
#include "urysohn/katetov.hpp"
#include "urysohn/metric_space.hpp"
#include "urysohn/relations.hpp"

namespace urysohn::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// A parsed document together with the directory its relative refs resolve against.
struct Document {
  json value;
  fs::path base;
};

inline Document read_document(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  Document doc;
  try {
    doc.value = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  doc.base = path.parent_path();
  return doc;
}

/// Follows a path string, or returns an inline object unchanged.
inline Document resolve(const json& ref, const fs::path& base, const std::string& what) {
  if (ref.is_string()) {
    const fs::path p = fs::path(ref.get<std::string>());
    return read_document(p.is_absolute() ? p : base / p);
  }
  if (ref.is_object()) return {ref, base};
  throw InputError(what + " must be an object or a path string");
}

inline const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw InputError(what + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(what + " lacks the field \"" + key + "\"");
  return *it;
}

inline Grid integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw InputError(what + " must be an integer, got " + v.dump());
  return v.get<Grid>();
}

inline std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) throw InputError(what + " must be a string, got " + v.dump());
  return v.get<std::string>();
}

inline const json& array(const json& v, const std::string& what) {
  if (!v.is_array()) throw InputError(what + " must be an array");
  return v;
}

inline std::vector<Grid> integers(const json& v, const std::string& what) {
  std::vector<Grid> out;
  for (std::size_t i = 0; i < array(v, what).size(); ++i)
    out.push_back(integer(v[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::string> strings(const json& v, const std::string& what) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < array(v, what).size(); ++i)
    out.push_back(text(v[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::vector<Grid>> integer_rows(const json& v, const std::string& what) {
  std::vector<std::vector<Grid>> rows;
  for (std::size_t i = 0; i < array(v, what).size(); ++i)
    rows.push_back(integers(v[i], what + "[" + std::to_string(i) + "]"));
  return rows;
}

inline SpaceCandidate candidate_from_json(const json& j) {
  SpaceCandidate c;
  c.points = strings(field(j, "points", "space"), "space.points");
  c.denominator = integer(field(j, "denominator", "space"), "space.denominator");
  c.dist = integer_rows(field(j, "dist", "space"), "space.dist");
  return c;
}

inline FiniteMetricSpace space_from_json(const json& j, SpaceKind kind = SpaceKind::metric) {
  return FiniteMetricSpace::from_candidate(candidate_from_json(j), kind);
}

inline FiniteMetricSpace space_ref(const json& ref, const fs::path& base, SpaceKind kind = SpaceKind::metric) {
  return space_from_json(resolve(ref, base, "space reference").value, kind);
}

inline json space_to_json(const FiniteMetricSpace& s) {
  json dist = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < s.size(); ++j) row.push_back(s.d(i, j));
    dist.push_back(std::move(row));
  }
  return {{"points", s.points()}, {"denominator", s.denominator()}, {"dist", std::move(dist)}};
}

inline std::size_t point(const FiniteMetricSpace& s, const json& v, const std::string& what) {
  const std::string name = text(v, what);
  if (auto i = s.find(name)) return *i;
  throw InputError(what + " names the unknown point '" + name + "'");
}

/// {"points": [...], "denominator": q, "dist": [[int or null, ...], ...]}.
inline PartialSpec partial_from_json(const json& j) {
  const auto points = strings(field(j, "points", "partial space"), "partial space.points");
  PartialSpec spec(points, integer(field(j, "denominator", "partial space"), "partial space.denominator"));
  const json& rows = array(field(j, "dist", "partial space"), "partial space.dist");
  if (rows.size() != points.size()) throw InputError("partial space.dist has the wrong number of rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "partial space.dist[" + std::to_string(i) + "]";
    if (array(rows[i], where).size() != points.size()) throw InputError(where + " has the wrong length");
    for (std::size_t k = 0; k < points.size(); ++k) {
      const json& v = rows[i][k];
      if (v.is_null()) continue;
      const Grid x = integer(v, where + "[" + std::to_string(k) + "]");
      if (auto prev = spec.get(i, k); prev && *prev != x)
        throw InputError("partial space gives (" + points[i] + "," + points[k] + ") two values");
      spec.set(i, k, x);
    }
  }
  return spec;
}

struct AmalgamInput {
  FiniteMetricSpace x, y;
  std::vector<std::pair<std::size_t, std::size_t>> glue;
};

/// {"X": <space>, "Y": <space>, "glue": [["x-point", "y-point"], ...]}.
inline AmalgamInput amalgam_from_json(const Document& doc) {
  AmalgamInput in;
  in.x = space_ref(field(doc.value, "X", "amalgam"), doc.base);
  in.y = space_ref(field(doc.value, "Y", "amalgam"), doc.base);
  const json& g = array(field(doc.value, "glue", "amalgam"), "amalgam.glue");
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::string where = "amalgam.glue[" + std::to_string(k) + "]";
    if (!g[k].is_array() || g[k].size() != 2) throw InputError(where + " must be a pair of point names");
    in.glue.emplace_back(point(in.x, g[k][0], where), point(in.y, g[k][1], where));
  }
  return in;
}

struct KatetovInput {
  FiniteMetricSpace space;
  KatetovFunction f;
};

/// {"space": <ref>, "support": ["a", ...], "values": [int, ...]}.
inline KatetovInput katetov_from_json(const Document& doc) {
  KatetovInput in;
  in.space = space_ref(field(doc.value, "space", "function"), doc.base);
  const json& sup = array(field(doc.value, "support", "function"), "function.support");
  for (std::size_t k = 0; k < sup.size(); ++k)
    in.f.support.push_back(point(in.space, sup[k], "function.support[" + std::to_string(k) + "]"));
  in.f.values = integers(field(doc.value, "values", "function"), "function.values");
  detail::check_function_shape(in.space, in.f.support, in.f.values);
  return in;
}

struct MatrixInput {
  FiniteMetricSpace space;
  GridMatrix entries;
};

inline GridMatrix matrix_from_rows(const FiniteMetricSpace& s, const std::vector<std::vector<Grid>>& rows,
                                   const std::string& what) {
  if (rows.size() != s.size()) throw InputError(what + " needs " + std::to_string(s.size()) + " rows");
  GridMatrix m(s.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != s.size()) throw InputError(what + "[" + std::to_string(i) + "] has the wrong length");
    for (std::size_t k = 0; k < s.size(); ++k) m(i, k) = rows[i][k];
  }
  require_matrix_on(s, m, what.c_str());
  return m;
}

/// {"space": <ref>, "entries": [[int, ...], ...]}.
inline MatrixInput matrix_from_json(const Document& doc) {
  MatrixInput in;
  in.space = space_ref(field(doc.value, "space", "matrix"), doc.base);
  in.entries = matrix_from_rows(in.space, integer_rows(field(doc.value, "entries", "matrix"), "matrix.entries"),
                                "matrix.entries");
  return in;
}

inline json matrix_to_json(const FiniteMetricSpace& s, const GridMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return {{"space", space_to_json(s)}, {"entries", std::move(rows)}};
}

struct WordInput {
  WeightedAlphabet alphabet;
  GroupWord word;
};

/// {"alphabet": <space ref>, "weights": [int, ...], "word": "x y^-1 x"}.
inline WordInput word_from_json(const Document& doc) {
  FiniteMetricSpace s = space_ref(field(doc.value, "alphabet", "word file"), doc.base);
  auto k = integers(field(doc.value, "weights", "word file"), "word file.weights");
  WeightedAlphabet a(std::move(s), std::move(k));
  GroupWord w = parse_word(text(field(doc.value, "word", "word file"), "word file.word"), a.space().points());
  return {std::move(a), std::move(w)};
}

inline Relation relation_pairs(const FiniteMetricSpace& s, const json& v, const std::string& what) {
  std::vector<PointPair> pairs;
  for (std::size_t k = 0; k < array(v, what).size(); ++k) {
    const std::string where = what + "[" + std::to_string(k) + "]";
    if (!v[k].is_array() || v[k].size() != 2) throw InputError(where + " must be a pair of point names");
    pairs.emplace_back(point(s, v[k][0], where), point(s, v[k][1], where));
  }
  return Relation(std::move(pairs));
}

struct RelationInput {
  FiniteMetricSpace space;
  Relation relation;
};

/// {"space": <ref>, "pairs": [["a", "b"], ...]}.
inline RelationInput relation_from_json(const Document& doc) {
  RelationInput in;
  in.space = space_ref(field(doc.value, "space", "relation"), doc.base);
  in.relation = relation_pairs(in.space, field(doc.value, "pairs", "relation"), "relation.pairs");
  return in;
}

struct RelationWordInput {
  RelationAlphabet alphabet;
  GroupWord word;
};

/// {"space": <ref>, "relations": [{"id": "R", "pairs": [...]}, ...], "word": "R S^-1"}.
/// The word is optional and defaults to the empty word.
inline RelationWordInput relation_word_from_json(const Document& doc) {
  FiniteMetricSpace s = space_ref(field(doc.value, "space", "relation word"), doc.base);
  const json& rels = array(field(doc.value, "relations", "relation word"), "relation word.relations");
  std::vector<Relation> gens;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    const std::string where = "relation word.relations[" + std::to_string(i) + "]";
    names.push_back(text(field(rels[i], "id", where), where + ".id"));
    gens.push_back(relation_pairs(s, field(rels[i], "pairs", where), where + ".pairs"));
  }
  RelationAlphabet a(std::move(s), std::move(gens), std::move(names));
  GroupWord w;
  if (auto it = doc.value.find("word"); it != doc.value.end()) w = parse_word(text(*it, "relation word.word"), a.names());
  return {std::move(a), std::move(w)};
}

/// {"X": <space>, "Y": <space>}; point order is the enumeration.
inline EnumeratedInstance gh_instance_from_json(const Document& doc) {
  return EnumeratedInstance(space_ref(field(doc.value, "X", "instance"), doc.base),
                            space_ref(field(doc.value, "Y", "instance"), doc.base));
}

inline json members_to_json(const GridFunctionSpace& k) {
  json members = json::array();
  for (const auto& f : k.members()) members.push_back(f);
  return members;
}

/// {"space": <ref>, "members": [[...], ...], "pairs": [[i, j], ...]}. Indices
/// refer to the carrier enumeration; "members", when present, must match it.
struct KRelationInput {
  GridFunctionSpace carrier;
  BoolMatrix relation;
};

inline KRelationInput k_relation_from_json(const Document& doc) {
  GridFunctionSpace k(space_ref(field(doc.value, "space", "relation on K"), doc.base));
  if (auto it = doc.value.find("members"); it != doc.value.end()) {
    const auto rows = integer_rows(*it, "relation on K.members");
    if (rows != k.members()) throw InputError("relation on K.members does not match the carrier enumeration");
  }
  BoolMatrix r(k.size(), 0);
  const json& pairs = array(field(doc.value, "pairs", "relation on K"), "relation on K.pairs");
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::string where = "relation on K.pairs[" + std::to_string(p) + "]";
    const auto ij = integers(pairs[p], where);
    if (ij.size() != 2) throw InputError(where + " must be a pair of member indices");
    for (Grid v : ij)
      if (v < 0 || static_cast<std::size_t>(v) >= k.size())
        throw InputError(where + " refers to member " + std::to_string(v) + " of " + std::to_string(k.size()));
    r(static_cast<std::size_t>(ij[0]), static_cast<std::size_t>(ij[1])) = 1;
  }
  return {std::move(k), std::move(r)};
}

inline json k_relation_to_json(const GridFunctionSpace& k, const BoolMatrix& r) {
  json pairs = json::array();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r(i, j)) pairs.push_back({i, j});
  return {{"space", space_to_json(k.space())}, {"members", members_to_json(k)}, {"pairs", std::move(pairs)}};
}

}  // namespace urysohn::io
