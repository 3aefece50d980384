#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpmod/error.hpp"

namespace gpmod {

using json = nlohmann::json;

/// Arrow labels of a quiver.
enum class Label { F, V };
/// Letters of words and labels of converse graphs. F < V#.
enum class Letter { F, Vs };

inline std::string to_string(Label l) { return l == Label::F ? "F" : "V"; }
inline std::string to_string(Letter l) { return l == Letter::F ? "F" : "V#"; }

inline Label label_from_string(const std::string& s) {
  if (s == "F") return Label::F;
  if (s == "V") return Label::V;
  throw parse_error("unknown arrow label: " + s);
}
inline Letter letter_from_string(const std::string& s) {
  if (s == "F") return Letter::F;
  if (s == "V#") return Letter::Vs;
  throw parse_error("unknown letter: " + s);
}

/// A word w = w_m ... w_1 over {F, V#}.
///
/// letters[i] holds w_{i+1}, so letters.front() is applied first. The written
/// form (and JSON) lists w_m first.
struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> l) : letters(std::move(l)) {}

  /// Build from the written form, most significant letter first.
  static Word written(std::vector<Letter> display) {
    std::reverse(display.begin(), display.end());
    return Word(std::move(display));
  }
  static Word parse(const std::string& s) {
    std::vector<Letter> d;
    for (std::size_t i = 0; i < s.size();) {
      if (s[i] == 'F') {
        d.push_back(Letter::F);
        ++i;
      } else if (s.compare(i, 2, "V#") == 0) {
        d.push_back(Letter::Vs);
        i += 2;
      } else if (s[i] == ' ') {
        ++i;
      } else {
        throw parse_error("cannot parse word: " + s);
      }
    }
    return written(d);
  }

  std::size_t length() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  /// w_i for 1 <= i <= m.
  Letter at(std::size_t i) const { return letters.at(i - 1); }

  std::vector<Letter> display() const { return {letters.rbegin(), letters.rend()}; }
  std::string str() const {
    if (letters.empty()) return "()";
    std::string s;
    for (auto l : display()) s += to_string(l);
    return s;
  }

  /// The product a b: b is applied first.
  friend Word operator*(const Word& a, const Word& b) {
    Word r = b;
    r.letters.insert(r.letters.end(), a.letters.begin(), a.letters.end());
    return r;
  }
  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator!=(const Word& o) const { return letters != o.letters; }
  /// Compares written forms lexicographically with F < V#.
  bool operator<(const Word& o) const {
    auto a = display(), b = o.display();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

inline Word letter_word(Letter l) { return Word({l}); }

/// Is v a prefix of w in the sense w = v u?
inline bool is_prefix(const Word& v, const Word& w) {
  if (v.length() > w.length()) return false;
  return std::equal(v.letters.rbegin(), v.letters.rend(), w.letters.rbegin());
}

/// Smallest p with s[i] = s[i+p] for all valid i (border computation).
template <class T>
std::size_t minimal_period(const std::vector<T>& s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::vector<std::size_t> fail(n + 1, 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    while (k > 0 && s[i] != s[k]) k = fail[k];
    if (s[i] == s[k]) ++k;
    fail[i + 1] = k;
  }
  return n - fail[n];
}

/// Smallest t dividing n such that s is (s_1..s_t) repeated.
template <class T>
std::size_t cyclic_period(const std::vector<T>& s) {
  const std::size_t n = s.size(), p = minimal_period(s);
  return (p > 0 && n % p == 0) ? p : n;
}

/// Rotation w(j) = w_j ... w_1 w_t ... w_{j+1}.
inline Word rotate(const Word& w, std::size_t j) {
  const std::size_t t = w.length();
  if (t == 0) return w;
  std::vector<Letter> l(t);
  for (std::size_t i = 0; i < t; ++i) l[i] = w.letters[(i + j) % t];
  return Word(std::move(l));
}

/// Index j such that rotate(w, j) is the least rotation.
inline std::size_t canonical_rotation_index(const Word& w) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < w.length(); ++j)
    if (rotate(w, j) < rotate(w, best)) best = j;
  return best;
}

inline Word canonical_rotation(const Word& w) { return rotate(w, canonical_rotation_index(w)); }

/// A periodic word [w] with primitive pattern.
struct PeriodicWord {
  Word pattern;

  PeriodicWord() = default;
  explicit PeriodicWord(Word p) : pattern(std::move(p)) {
    if (pattern.empty()) throw domain_error("periodic word needs a nonempty pattern");
    if (cyclic_period(pattern.letters) != pattern.length())
      throw domain_error("periodic pattern is not primitive: " + pattern.str());
  }
  std::size_t period() const { return pattern.length(); }
  PeriodicWord canonical() const { return PeriodicWord(canonical_rotation(pattern)); }
  bool operator==(const PeriodicWord& o) const { return pattern == o.pattern; }
  bool same_class(const PeriodicWord& o) const { return canonical().pattern == o.canonical().pattern; }
};

inline PeriodicWord rotate(const PeriodicWord& p, std::size_t j) { return PeriodicWord(rotate(p.pattern, j)); }

/// Lyndon words over {F < V#} of length 1..max_len in written form: one
/// canonical representative per primitive rotation class.
inline std::vector<PeriodicWord> primitive_necklaces(std::size_t max_len) {
  std::vector<PeriodicWord> out;
  if (max_len == 0) return out;
  // Duval's generation, letters 0 = F, 1 = V#.
  std::vector<int> a(1, -1);
  while (!a.empty()) {
    ++a.back();
    std::vector<Letter> d;
    for (int x : a) d.push_back(x == 0 ? Letter::F : Letter::Vs);
    out.emplace_back(Word::written(d));
    const std::size_t m = a.size();
    while (a.size() < max_len) a.push_back(a[a.size() - m]);
    while (!a.empty() && a.back() == 1) a.pop_back();
  }
  std::stable_sort(out.begin(), out.end(), [](const PeriodicWord& x, const PeriodicWord& y) {
    if (x.period() != y.period()) return x.period() < y.period();
    return x.pattern < y.pattern;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Graphs

struct Edge {
  int tail, head;
  Label label;
  bool operator==(const Edge& o) const { return tail == o.tail && head == o.head && label == o.label; }
};

struct ConverseEdge {
  int tail, head;
  Letter label;
  bool operator==(const ConverseEdge& o) const { return tail == o.tail && head == o.head && label == o.label; }
};

/// Finite directed graph labeled by {F, V}.
struct Quiver {
  std::vector<int> vertices;
  std::vector<Edge> edges;

  std::size_t index_of(int v) const {
    auto it = std::find(vertices.begin(), vertices.end(), v);
    if (it == vertices.end()) throw domain_error("unknown vertex " + std::to_string(v));
    return static_cast<std::size_t>(it - vertices.begin());
  }
  bool has_vertex(int v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }
  bool operator==(const Quiver& o) const { return vertices == o.vertices && edges == o.edges; }
};

/// Graph labeled by {F, V#}.
struct ConverseGraph {
  std::vector<int> vertices;
  std::vector<ConverseEdge> edges;
};

struct KraftViolation {
  int condition;  // 0 = malformed graph, 1..3 = Kraft condition
  std::string message;
};

inline std::vector<KraftViolation> validate_kraft(const Quiver& g) {
  std::vector<KraftViolation> out;
  std::set<int> ids(g.vertices.begin(), g.vertices.end());
  if (ids.size() != g.vertices.size()) out.push_back({0, "duplicate vertex ids"});
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (!ids.count(g.edges[i].tail) || !ids.count(g.edges[i].head))
      out.push_back({0, "edge " + std::to_string(i) + " uses an unknown vertex"});
  if (!out.empty()) return out;

  for (int v : g.vertices) {
    std::size_t incident = 0;
    for (const auto& e : g.edges)
      if (e.tail == v || e.head == v) ++incident;
    if (incident > 2)
      out.push_back({1, "vertex " + std::to_string(v) + " is the tail or head of " + std::to_string(incident) +
                            " arrows"});
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    for (std::size_t j = i + 1; j < g.edges.size(); ++j) {
      const auto &a = g.edges[i], &b = g.edges[j];
      if (a.label != b.label) continue;
      if (a.tail == b.tail)
        out.push_back({2, to_string(a.label) + "-arrows " + std::to_string(i) + " and " + std::to_string(j) +
                              " share the tail " + std::to_string(a.tail)});
      if (a.head == b.head)
        out.push_back({2, to_string(a.label) + "-arrows " + std::to_string(i) + " and " + std::to_string(j) +
                              " share the head " + std::to_string(a.head)});
    }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& f = g.edges[i];
    if (f.label != Label::F) continue;
    for (std::size_t j = 0; j < g.edges.size(); ++j) {
      const auto& v = g.edges[j];
      if (v.label != Label::V) continue;
      if (f.head == v.tail)
        out.push_back({3, "vertex " + std::to_string(f.head) + " is the head of F-arrow " + std::to_string(i) +
                              " and the tail of V-arrow " + std::to_string(j)});
      if (f.tail == v.head)
        out.push_back({3, "vertex " + std::to_string(f.tail) + " is the tail of F-arrow " + std::to_string(i) +
                              " and the head of V-arrow " + std::to_string(j)});
    }
  }
  return out;
}

inline bool is_kraft(const Quiver& g) { return validate_kraft(g).empty(); }

inline void require_kraft(const Quiver& g) {
  auto v = validate_kraft(g);
  if (v.empty()) return;
  std::string msg = "not a Kraft quiver:";
  for (const auto& x : v) msg += " [condition " + std::to_string(x.condition) + "] " + x.message + ";";
  throw domain_error(msg);
}

/// Reverses the V-arrows and relabels them V#.
inline ConverseGraph converse_graph(const Quiver& g) {
  ConverseGraph c{g.vertices, {}};
  for (const auto& e : g.edges) {
    if (e.label == Label::F) c.edges.push_back({e.tail, e.head, Letter::F});
    else c.edges.push_back({e.head, e.tail, Letter::Vs});
  }
  return c;
}

inline Quiver from_converse(const ConverseGraph& c) {
  Quiver g{c.vertices, {}};
  for (const auto& e : c.edges) {
    if (e.label == Letter::F) g.edges.push_back({e.tail, e.head, Label::F});
    else g.edges.push_back({e.head, e.tail, Label::V});
  }
  return g;
}

inline Quiver opposite_graph(const Quiver& g) {
  Quiver o{g.vertices, {}};
  for (const auto& e : g.edges) o.edges.push_back({e.head, e.tail, e.label});
  return o;
}

/// Components ordered by their smallest vertex position.
inline std::vector<Quiver> connected_components(const Quiver& g) {
  const std::size_t n = g.vertices.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    auto a = find(g.index_of(e.tail)), b = find(g.index_of(e.head));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::size_t> slot;
  std::vector<Quiver> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = find(i);
    if (!slot.count(r)) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].vertices.push_back(g.vertices[i]);
  }
  for (const auto& e : g.edges) out[slot[find(g.index_of(e.tail))]].edges.push_back(e);
  return out;
}

/// Shape of a connected Kraft quiver: an ordering v_1..v_n with converse edges
/// E_i = (v_i, v_{i+1}), indices taken mod n in the circular case.
struct ComponentShape {
  bool circular = false;
  std::vector<int> order;
  /// edge_of[i] = index (in the quiver) of the edge realizing E_{i+1}.
  std::vector<std::size_t> edge_of;
  /// labels[i] = label# of E_{i+1}.
  std::vector<Letter> labels;
};

inline ComponentShape classify_connected(const Quiver& g) {
  if (g.vertices.empty()) throw domain_error("classify_connected: empty quiver");
  const auto c = converse_graph(g);
  std::map<int, std::size_t> out_edge, in_deg;
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    const auto& e = c.edges[i];
    check_internal(!out_edge.count(e.tail), "converse graph has out-degree > 1");
    out_edge[e.tail] = i;
    ++in_deg[e.head];
    check_internal(in_deg[e.head] <= 1, "converse graph has in-degree > 1");
  }
  ComponentShape s;
  int start = g.vertices.front();
  s.circular = true;
  for (int v : g.vertices)
    if (!in_deg.count(v)) {
      start = v;
      s.circular = false;
      break;
    }
  if (s.circular) start = *std::min_element(g.vertices.begin(), g.vertices.end());
  int v = start;
  std::set<int> seen;
  while (true) {
    s.order.push_back(v);
    seen.insert(v);
    auto it = out_edge.find(v);
    if (it == out_edge.end()) break;
    const auto& e = c.edges[it->second];
    s.edge_of.push_back(it->second);
    s.labels.push_back(e.label);
    if (e.head == start && s.circular) break;
    v = e.head;
    check_internal(!seen.count(v), "converse walk revisits a vertex");
  }
  check_internal(s.order.size() == g.vertices.size(), "quiver is not connected");
  check_internal(s.circular == (s.labels.size() == s.order.size()), "linear/circular shape inconsistent");
  return s;
}

/// Descriptor of a connected quiver: a word, or a primitive periodic word
/// (canonical rotation) and the number of vertices.
struct ComponentWord {
  bool circular = false;
  Word word;             // linear case
  PeriodicWord pattern;  // circular case, canonical rotation
  std::size_t m = 0;     // circular case
  /// Position in the shape ordering where the canonical pattern starts.
  std::size_t canonical_start = 0;

  bool operator==(const ComponentWord& o) const {
    return circular == o.circular && (circular ? (pattern == o.pattern && m == o.m) : word == o.word);
  }
  std::string str() const {
    if (!circular) return word.str();
    return "[" + pattern.pattern.str() + "]x" + std::to_string(m);
  }
};

inline ComponentWord word_of_shape(const ComponentShape& s) {
  ComponentWord w;
  w.circular = s.circular;
  if (!s.circular) {
    w.word = Word(s.labels);
    return w;
  }
  w.m = s.order.size();
  const std::size_t t = cyclic_period(s.labels);
  Word raw(std::vector<Letter>(s.labels.begin(), s.labels.begin() + static_cast<std::ptrdiff_t>(t)));
  const std::size_t j = canonical_rotation_index(raw);
  w.pattern = PeriodicWord(rotate(raw, j));
  w.canonical_start = j;
  return w;
}

inline ComponentWord word_of(const Quiver& g) { return word_of_shape(classify_connected(g)); }

/// Gamma(w): vertices 0..m, E_i = (i-1, i) in the converse graph.
inline Quiver quiver_of_word(const Word& w) {
  Quiver g;
  for (std::size_t i = 0; i <= w.length(); ++i) g.vertices.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < w.length(); ++i) {
    const int a = static_cast<int>(i), b = static_cast<int>(i + 1);
    if (w.letters[i] == Letter::F) g.edges.push_back({a, b, Label::F});
    else g.edges.push_back({b, a, Label::V});
  }
  return g;
}

/// Gamma([p], m): vertices 0..m-1, E_i labeled p_{i mod t}.
inline Quiver quiver_of_periodic(const PeriodicWord& p, std::size_t m) {
  const std::size_t t = p.period();
  if (m == 0 || m % t != 0) throw domain_error("quiver_of_periodic: m must be a positive multiple of the period");
  Quiver g;
  for (std::size_t i = 0; i < m; ++i) g.vertices.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < m; ++i) {
    const int a = static_cast<int>(i), b = static_cast<int>((i + 1) % m);
    if (p.pattern.letters[i % t] == Letter::F) g.edges.push_back({a, b, Label::F});
    else g.edges.push_back({b, a, Label::V});
  }
  return g;
}

inline bool has_repetitions(const Quiver& g) {
  auto s = classify_connected(g);
  if (!s.circular) throw domain_error("has_repetitions needs a circular quiver");
  return cyclic_period(s.labels) < s.labels.size();
}

/// Gamma([w], l(w)) for a circular Gamma([w], m).
inline Quiver reduce(const Quiver& g) {
  auto s = classify_connected(g);
  if (!s.circular) throw domain_error("reduce needs a circular quiver");
  const auto w = word_of_shape(s);
  if (w.m == w.pattern.period()) return g;
  return quiver_of_periodic(w.pattern, w.pattern.period());
}

/// Vertex bijection preserving edges and labels, if one exists.
inline std::optional<std::map<int, int>> graph_iso(const Quiver& a, const Quiver& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return std::nullopt;
  if (!is_kraft(a) || !is_kraft(b)) throw domain_error("graph_iso is only defined for Kraft quivers");
  auto ca = connected_components(a), cb = connected_components(b);
  if (ca.size() != cb.size()) return std::nullopt;
  std::vector<bool> used(cb.size(), false);
  std::map<int, int> phi;
  for (const auto& x : ca) {
    const auto sx = classify_connected(x);
    const auto wx = word_of_shape(sx);
    bool matched = false;
    for (std::size_t j = 0; j < cb.size() && !matched; ++j) {
      if (used[j]) continue;
      const auto sy = classify_connected(cb[j]);
      const auto wy = word_of_shape(sy);
      if (!(wx == wy)) continue;
      const std::size_t n = sx.order.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (wx.circular)
          phi[sx.order[(wx.canonical_start + i) % n]] = sy.order[(wy.canonical_start + i) % n];
        else
          phi[sx.order[i]] = sy.order[i];
      }
      used[j] = matched = true;
    }
    if (!matched) return std::nullopt;
  }
  return phi;
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const Word& w) {
  json a = json::array();
  for (auto l : w.display()) a.push_back(to_string(l));
  return a;
}

inline Word word_from_json(const json& j) {
  if (!j.is_array()) throw parse_error("word must be an array of letters");
  std::vector<Letter> d;
  for (const auto& x : j) {
    if (!x.is_string()) throw parse_error("letters must be strings");
    d.push_back(letter_from_string(x.get<std::string>()));
  }
  return Word::written(d);
}

inline json to_json(const Quiver& g) {
  json e = json::array();
  for (const auto& x : g.edges) e.push_back({{"tail", x.tail}, {"head", x.head}, {"label", to_string(x.label)}});
  return {{"vertices", g.vertices}, {"edges", e}};
}

inline Quiver quiver_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw parse_error("quiver needs \"vertices\" and \"edges\"");
  Quiver g;
  try {
    g.vertices = j.at("vertices").get<std::vector<int>>();
    for (const auto& e : j.at("edges"))
      g.edges.push_back({e.at("tail").get<int>(), e.at("head").get<int>(), label_from_string(e.at("label").get<std::string>())});
  } catch (const json::exception& ex) {
    throw parse_error(std::string("malformed quiver: ") + ex.what());
  }
  return g;
}

inline std::string to_dot(const Quiver& g) {
  std::string s = "digraph quiver {\n";
  for (int v : g.vertices) s += "  v" + std::to_string(v) + ";\n";
  for (const auto& e : g.edges)
    s += "  v" + std::to_string(e.tail) + " -> v" + std::to_string(e.head) + " [label=\"" + to_string(e.label) + "\"];\n";
  s += "}\n";
  return s;
}

}  // namespace gpmod
