#pragma once

#include <map>
#include <string>
#include <variant>

#include "gpmod/classify.hpp"
#include "gpmod/field.hpp"
#include "gpmod/quiver.hpp"
#include "gpmod/repn.hpp"
#include "gpmod/semilinear.hpp"

namespace gpmod {

/// A field given either by a short name ("F4", "Q") or a descriptor object.
inline AnyField field_of(const json& j) {
  if (j.is_string()) return field_from_name(j.get<std::string>());
  return field_from_json(j);
}

template <class K>
json matrix_to_json(const K& k, const Matrix<K>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(k.to_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

/// rows x cols matrix from an array of rows. An empty array is accepted for
/// any shape with a zero dimension.
template <class K>
Matrix<K> matrix_from_json(const K& k, const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array()) throw parse_error("matrix must be an array of rows");
  Matrix<K> m = zero_matrix(k, rows, cols);
  if ((rows == 0 || cols == 0) && (j.empty() || j.size() == rows)) return m;
  if (j.size() != rows) throw parse_error("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw parse_error("matrix row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = k.from_json(j[i][c]);
  }
  return m;
}

template <class K>
json module_to_json(const K& k, const GPModule<K>& m) {
  return {{"field", k.descriptor()}, {"dim", m.dim}, {"F", matrix_to_json(k, m.f)}, {"V", matrix_to_json(k, m.v)}};
}

template <class K>
json module_to_json(const K& k, const BuiltModule<K>& b) {
  json j = module_to_json(k, b.module);
  json blocks = json::object();
  for (const auto& [v, ofs] : b.blocks) blocks[std::to_string(v)] = {{"offset", ofs.first}, {"dim", ofs.second}};
  j["blocks"] = blocks;
  return j;
}

template <class K>
GPModule<K> module_from_json(const K& k, const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("F") || !j.contains("V"))
    throw parse_error("module needs \"dim\", \"F\" and \"V\"");
  if (!j.at("dim").is_number_unsigned()) throw parse_error("module dim must be a nonnegative integer");
  const auto n = j.at("dim").get<std::size_t>();
  return GPModule<K>{n, matrix_from_json(k, j.at("F"), n, n), matrix_from_json(k, j.at("V"), n, n)};
}

/// A module file: the field is read from the file itself.
struct AnyModule {
  AnyField field;
  std::variant<GPModule<FiniteField>, GPModule<Rationals>> module;
};

inline AnyModule any_module_from_json(const json& j) {
  if (!j.is_object() || !j.contains("field")) throw parse_error("module file needs a \"field\"");
  AnyField f = field_of(j.at("field"));
  return std::visit(
      [&](const auto& k) -> AnyModule {
        return AnyModule{f, module_from_json(k, j)};
      },
      f);
}

template <class K>
json report_to_json(const K& k, const ClassificationReport<K>& r) {
  json lin = json::array(), circ = json::array();
  for (const auto& l : r.linear) lin.push_back({{"word", to_json(l.word)}, {"mult", l.mult}});
  for (const auto& c : r.circular) {
    json e = {{"pattern", to_json(c.pattern.pattern)},
              {"dim", c.dim},
              {"monodromy", matrix_to_json(k, c.monodromy.matrix)},
              {"twist", c.monodromy.twist}};
    e["canonical_form"] = c.canonical_form ? matrix_to_json(k, *c.canonical_form) : json(nullptr);
    circ.push_back(e);
  }
  return {{"linear", lin}, {"circular", circ}, {"dim", r.dim}};
}

template <class K>
ClassificationReport<K> report_from_json(const K& k, const json& j) {
  ClassificationReport<K> r;
  try {
    r.dim = j.at("dim").get<std::size_t>();
    for (const auto& l : j.at("linear")) r.linear.push_back({word_from_json(l.at("word")), l.at("mult").get<std::size_t>()});
    for (const auto& c : j.at("circular")) {
      CircularEntry<K> e;
      e.pattern = PeriodicWord(word_from_json(c.at("pattern")));
      e.dim = c.at("dim").get<std::size_t>();
      e.monodromy = Monodromy<K>{0, e.dim, c.at("twist").get<long long>(), matrix_from_json(k, c.at("monodromy"), e.dim, e.dim)};
      if (c.contains("canonical_form") && !c.at("canonical_form").is_null())
        e.canonical_form = matrix_from_json(k, c.at("canonical_form"), e.dim, e.dim);
      r.circular.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw parse_error(std::string("malformed report: ") + ex.what());
  }
  return r;
}

template <class K>
json rep_to_json(const K& k, const Representation<K>& r) {
  json dims = json::object();
  for (int v : r.quiver.vertices) dims[std::to_string(v)] = r.dim_at(v);
  json maps = json::array();
  for (std::size_t i = 0; i < r.maps.size(); ++i) maps.push_back({{"edge", i}, {"matrix", matrix_to_json(k, r.maps[i])}});
  return {{"quiver", to_json(r.quiver)}, {"dims", dims}, {"maps", maps}};
}

/// Dims and maps over an already known quiver.
template <class K>
Representation<K> rep_data_from_json(const K& k, const Quiver& g, const json& j) {
  Representation<K> r{g, {}, {}};
  try {
    for (const auto& [key, val] : j.at("dims").items()) r.dims[std::stoi(key)] = val.template get<std::size_t>();
  } catch (const std::exception& ex) {
    throw parse_error(std::string("malformed dims: ") + ex.what());
  }
  for (int v : g.vertices)
    if (!r.dims.count(v)) throw parse_error("missing dimension for vertex " + std::to_string(v));
  std::vector<std::optional<Matrix<K>>> maps(g.edges.size());
  if (!j.contains("maps") || !j.at("maps").is_array()) throw parse_error("representation needs \"maps\"");
  for (const auto& e : j.at("maps")) {
    if (!e.contains("edge") || !e.contains("matrix")) throw parse_error("map entries need \"edge\" and \"matrix\"");
    const auto i = e.at("edge").get<std::size_t>();
    if (i >= g.edges.size()) throw parse_error("map refers to unknown edge " + std::to_string(i));
    maps[i] = matrix_from_json(k, e.at("matrix"), r.dim_at(g.edges[i].head), r.dim_at(g.edges[i].tail));
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!maps[i]) throw parse_error("missing map for edge " + std::to_string(i));
    r.maps.push_back(*maps[i]);
  }
  return r;
}

template <class K>
Representation<K> rep_from_json(const K& k, const json& j) {
  if (!j.contains("quiver")) throw parse_error("representation needs a \"quiver\"");
  return rep_data_from_json(k, quiver_from_json(j.at("quiver")), j);
}

/// Quiver of a spec file: "quiver", or the shorthands "word" and "periodic" + "m".
inline Quiver spec_quiver(const json& j) {
  if (j.contains("quiver")) return quiver_from_json(j.at("quiver"));
  if (j.contains("word")) return quiver_of_word(word_from_json(j.at("word")));
  if (j.contains("periodic")) {
    const PeriodicWord p(word_from_json(j.at("periodic")));
    const std::size_t m = j.contains("m") ? j.at("m").get<std::size_t>() : p.period();
    return quiver_of_periodic(p, m);
  }
  throw parse_error("spec needs \"quiver\", \"word\" or \"periodic\"");
}

/// Representation described by a spec: "representation" is "trivial"
/// (optionally with "mult") or an object with dims and maps.
template <class K>
Representation<K> spec_representation(const K& k, const json& j) {
  const Quiver g = spec_quiver(j);
  const json rep = j.contains("representation") ? j.at("representation") : json("trivial");
  if (rep.is_string()) {
    if (rep.get<std::string>() != "trivial") throw parse_error("representation must be \"trivial\" or an object");
    return trivial_rep(k, g, j.value("mult", std::size_t{1}));
  }
  return rep_data_from_json(k, g, rep);
}

inline AnyField spec_field(const json& j) { return j.contains("field") ? field_of(j.at("field")) : AnyField{FiniteField(2, 1)}; }

template <class K>
json spec_to_json(const K& k, const Representation<K>& r) {
  json j = rep_to_json(k, r);
  json out = {{"field", k.descriptor()}, {"quiver", j["quiver"]}};
  out["representation"] = {{"dims", j["dims"]}, {"maps", j["maps"]}};
  return out;
}

template <class K>
json relation_to_json(const K& k, const SigmaRelation<K>& b) {
  json gens = json::array();
  for (const auto& [x, y] : b.generators(k)) {
    json a = json::array(), c = json::array();
    for (const auto& e : x) a.push_back(k.to_json(e));
    for (const auto& e : y) c.push_back(k.to_json(e));
    gens.push_back({a, c});
  }
  return {{"ambient_dim", b.ambient_dim()}, {"twist", b.twist()}, {"generators", gens}};
}

template <class K>
SigmaRelation<K> relation_from_json(const K& k, const json& j) {
  try {
    const auto n = j.at("ambient_dim").get<std::size_t>();
    std::vector<std::pair<Vec<K>, Vec<K>>> pairs;
    for (const auto& g : j.at("generators")) {
      Vec<K> x, y;
      for (const auto& e : g.at(0)) x.push_back(k.from_json(e));
      for (const auto& e : g.at(1)) y.push_back(k.from_json(e));
      pairs.emplace_back(std::move(x), std::move(y));
    }
    return SigmaRelation<K>::generated(k, n, j.at("twist").get<long long>(), pairs);
  } catch (const json::exception& ex) {
    throw parse_error(std::string("malformed relation: ") + ex.what());
  }
}

}  // namespace gpmod
