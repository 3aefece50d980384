#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gpmod/classify.hpp"
#include "gpmod/random.hpp"

namespace gpmod {

/// Report predicted from a strict representation: one entry per component,
/// circular components reduced first, equal shapes merged.
template <class K>
ClassificationReport<K> expected_report(const K& k, const Representation<K>& r) {
  ClassificationReport<K> out;
  if (!is_strict(k, r)) throw domain_error("expected_report needs a strict representation");
  for (const auto& comp : connected_components(r.quiver)) {
    Representation<K> c{comp, {}, {}};
    for (int v : comp.vertices) c.dims[v] = r.dim_at(v);
    for (const auto& e : comp.edges)
      for (std::size_t i = 0; i < r.quiver.edges.size(); ++i)
        if (r.quiver.edges[i] == e) {
          c.maps.push_back(r.maps[i]);
          break;
        }
    const auto shape = classify_connected(comp);
    ClassificationReport<K> one;
    const std::size_t d = c.dim_at(shape.order.front());
    if (!shape.circular) {
      one.linear.push_back({Word(shape.labels), d});
      one.dim = (shape.labels.size() + 1) * d;
    } else {
      auto red = unreduce_transport(k, c).rep;
      const auto w = word_of(red.quiver);
      const std::size_t dd = red.dim_at(0);
      auto mo = monodromy(k, red, static_cast<int>(w.canonical_start));
      CircularEntry<K> e{w.pattern, dd, mo, std::nullopt};
      if (exact_branch(k, mo.twist)) e.canonical_form = rational_canonical_form(k, mo.matrix);
      one.circular.push_back(e);
      one.dim = w.pattern.period() * dd;
    }
    out = merge_reports(k, out, one);
  }
  return out;
}

/// g with every circular component replaced by its reduction; vertex ids are
/// renumbered consecutively.
inline Quiver reduce_components(const Quiver& g) {
  Quiver out;
  int next = 0;
  for (const auto& comp : connected_components(g)) {
    const Quiver c = classify_connected(comp).circular ? reduce(comp) : comp;
    std::map<int, int> id;
    for (int v : c.vertices) {
      id[v] = next++;
      out.vertices.push_back(id[v]);
    }
    for (const auto& e : c.edges) out.edges.push_back({id[e.tail], id[e.head], e.label});
  }
  return out;
}

/// Outcome of comparing a computed report with an expected one.
struct ReportMatch {
  bool ok = true;
  bool undetermined = false;
  std::string reason;
};

/// Linear parts and circular shapes must agree exactly. Circular monodromies
/// must be conjugate when sigma^t = id; otherwise Phi^r must share invariant
/// factors and the search must not refute conjugacy.
template <class K>
ReportMatch match_reports(const K& k, const ClassificationReport<K>& got, const ClassificationReport<K>& want,
                          const SearchConfig& cfg = {}) {
  ReportMatch m;
  auto fail = [&](std::string why) {
    m.ok = false;
    m.reason = std::move(why);
    return m;
  };
  if (got.dim != want.dim) return fail("dimension");
  if (got.linear != want.linear) return fail("linear part");
  if (got.circular.size() != want.circular.size()) return fail("number of circular entries");
  for (std::size_t i = 0; i < got.circular.size(); ++i) {
    const auto& a = got.circular[i];
    const auto& b = want.circular[i];
    if (!(a.pattern == b.pattern) || a.dim != b.dim || a.monodromy.twist != b.monodromy.twist)
      return fail("circular shape [" + a.pattern.pattern.str() + "]");
    const auto c = semilinear_conjugate(k, a.monodromy, b.monodromy, cfg);
    if (exact_branch(k, a.monodromy.twist)) {
      if (c.verdict != Verdict::yes) return fail("monodromy of [" + a.pattern.pattern.str() + "] not conjugate");
      continue;
    }
    const long long r = order_of_power(k, a.monodromy.twist);
    if (invariant_factors(k, power_matrix(k, a.monodromy.matrix, a.monodromy.twist, r)) !=
        invariant_factors(k, power_matrix(k, b.monodromy.matrix, b.monodromy.twist, r)))
      return fail("power invariant of [" + a.pattern.pattern.str() + "] differs");
    if (c.verdict == Verdict::no) return fail("monodromy of [" + a.pattern.pattern.str() + "] refuted");
    if (c.verdict == Verdict::undetermined) m.undetermined = true;
  }
  return m;
}

struct SuiteResult {
  SuiteResult(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t undetermined = 0;
  double seconds = 0;
  std::vector<std::string> notes;

  bool passed() const { return failures == 0 && cases > 0; }
  void fail(const std::string& why) {
    ++failures;
    if (notes.size() < 8) notes.push_back(why);
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Runs f once per field of the standard corpus (F2, F4, F9) in turn.
template <class F>
void for_corpus_fields(std::size_t i, F&& f) {
  static const FiniteField f2(2, 1), f4(2, 2), f9(3, 2);
  switch (i % 3) {
    case 0:
      f(f2);
      break;
    case 1:
      f(f4);
      break;
    default:
      f(f9);
      break;
  }
}

template <class K>
bool same_relation(const SigmaRelation<K>& a, const SigmaRelation<K>& b) {
  return a == b;
}

/// Algebraic laws of sigma-linear relations on random input.
inline SuiteResult relation_law_suite(std::size_t count, std::uint64_t seed) {
  SuiteResult res{"relation laws"};
  Stopwatch sw;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    for_corpus_fields(i, [&](const auto& k) {
      using K = std::decay_t<decltype(k)>;
      const std::size_t n = rng.range(1, 4);
      const long long e1 = static_cast<long long>(rng.range(0, 4)) - 2, e2 = static_cast<long long>(rng.range(0, 4)) - 2;
      const auto b1 = random_relation(k, n, e1, rng);
      const auto b2 = random_relation(k, n, e2, rng);
      const auto b21 = compose(k, b2, b1);
      ++res.cases;
      const std::string tag = " (" + k.name() + ", case " + std::to_string(i) + ")";
      if (!(converse(k, converse(k, b1)) == b1)) res.fail("involution" + tag);
      if (!(converse(k, b21) == compose(k, converse(k, b1), converse(k, b2)))) res.fail("contravariance" + tag);
      if (!(compose(k, one(k, n), b1) == b1) || !(compose(k, b1, one(k, n)) == b1)) res.fail("unit" + tag);
      const SemilinearMap<K> f{random_matrix(k, n, n, rng), e1}, g{random_matrix(k, n, n, rng), e2};
      const SemilinearMap<K> gf{mat_mul(k, g.matrix, sigma_mat(k, f.matrix, e2)), e1 + e2};
      if (!(compose(k, graph_of(k, g), graph_of(k, f)) == graph_of(k, gf))) res.fail("graph composition" + tag);
      const auto p1 = parts(k, b1), p2 = parts(k, b2), p21 = parts(k, b21);
      if (!(parts(k, converse(k, b1)).dom == p1.im)) res.fail("Dom(B#) = Im(B)" + tag);
      if (!contains(k, p1.dom, p21.dom) || !contains(k, p21.ker, p1.ker) || !contains(k, p2.im, p21.im) ||
          !contains(k, p21.indet, p2.indet))
        res.fail("monotonicity" + tag);
      if (p1.dom.dim() + p1.indet.dim() != p1.im.dim() + p1.ker.dim()) res.fail("dimension identity" + tag);
    });
  }
  res.seconds = sw.seconds();
  return res;
}

/// Independent membership checks of the weak decomposition output.
template <class K>
std::string check_weak_decomposition(const K& k, const SigmaRelation<K>& b) {
  const std::size_t n = b.ambient_dim();
  const auto wd = weak_decomposition(k, b);
  const auto& st = wd.stable;
  if (intersect(k, wd.s, st.ker).dim() != 0 || !(sum(k, wd.s, st.ker) == st.dom)) return "Dom-inf != S (+) Ker-inf";
  const auto mprime = sum(k, st.dom, st.im);
  if (intersect(k, wd.s, wd.n).dim() != 0 || !(sum(k, wd.s, wd.n) == mprime)) return "M' != S (+) N";
  const auto rm = restrict(k, b, mprime), rs = restrict(k, b, wd.s), rn = restrict(k, b, wd.n);
  if (!(sum(k, rs.stored(), rn.stored()) == rm.stored())) return "B|M' != B|S (+) B|N";
  std::vector<std::pair<Vec<K>, Vec<K>>> graph;
  for (std::size_t a = 0; a < wd.basis.size(); ++a) {
    Vec<K> z = zero_vec(k, n);
    for (std::size_t r = 0; r < wd.basis.size(); ++r) vaxpy(k, z, wd.t.matrix(r, a), wd.basis[r]);
    graph.emplace_back(wd.basis[a], z);
  }
  if (!(rs == SigmaRelation<K>::generated(k, n, b.twist(), graph))) return "B|S is not the graph of T";
  if (!is_invertible(k, wd.t.matrix) && wd.t.matrix.rows() > 0) return "T is not invertible";
  return {};
}

inline SuiteResult weak_decomposition_suite(std::size_t random_count, std::uint64_t seed) {
  SuiteResult res{"weak decomposition"};
  Stopwatch sw;
  Rng rng(seed);
  auto run = [&](const auto& k, const auto& b, const std::string& tag) {
    ++res.cases;
    try {
      auto why = check_weak_decomposition(k, b);
      if (!why.empty()) res.fail(why + " for " + tag);
    } catch (const std::exception& ex) {
      res.fail(std::string(ex.what()) + " for " + tag);
    }
  };
  const CanonicalKind kinds[] = {CanonicalKind::T, CanonicalKind::T_plus, CanonicalKind::plus_T, CanonicalKind::plus_T_plus};
  const char* names[] = {"T", "T+", "+T", "+T+"};
  for (std::size_t f = 0; f < 3; ++f)
    for_corpus_fields(f, [&](const auto& k) {
      for (std::size_t ki = 0; ki < 4; ++ki)
        for (std::size_t n = 1; n <= 5; ++n)
          run(k, canonical_relation(k, kinds[ki], n), std::string(names[ki]) + "(" + std::to_string(n) + ") over " + k.name());
    });
  for (std::size_t i = 0; i < random_count; ++i)
    for_corpus_fields(i, [&](const auto& k) {
      using K = std::decay_t<decltype(k)>;
      auto piece = [&]() -> SigmaRelation<K> {
        if (rng.coin()) {
          const std::size_t d = rng.range(1, 3);
          return graph_of(k, SemilinearMap<K>{random_invertible(k, d, rng), 1});
        }
        return canonical_relation(k, kinds[rng.range(0, 3)], rng.range(1, 3));
      };
      SigmaRelation<K> b = piece();
      const std::size_t extra = rng.range(0, 2);
      for (std::size_t j = 0; j < extra; ++j) b = direct_sum(k, b, piece());
      run(k, b, "random block sum " + std::to_string(i) + " over " + k.name());
    });
  res.seconds = sw.seconds();
  return res;
}

/// Criteria over one random strict representation; shared by the round-trip
/// corpus.
struct RoundTripTally {
  SuiteResult round_trip{"round trip"};
  SuiteResult bookkeeping{"dimension bookkeeping"};
  SuiteResult first_kind{"first-kind tree"};
};

template <class K>
void round_trip_case(const K& k, const Representation<K>& rep, const GPModule<K>& m, RoundTripTally& t,
                     const std::string& tag, const ClassifyOptions& opt = {}) {
  ++t.round_trip.cases;
  ++t.bookkeeping.cases;
  ++t.first_kind.cases;
  Analysis<K> a;
  try {
    a = analyze(k, m, opt);
  } catch (const std::exception& ex) {
    t.round_trip.fail(std::string(ex.what()) + " " + tag);
    return;
  }
  const auto& r = a.report;
  // Round trip.
  const auto want = expected_report(k, rep);
  const auto match = match_reports(k, r, want, opt.search);
  if (!match.ok) t.round_trip.fail(match.reason + " " + tag);
  if (match.undetermined) ++t.round_trip.undetermined;
  if (!graph_iso(reduce_components(rep.quiver), rep_of_report(k, r).quiver))
    t.round_trip.fail("quiver not recovered " + tag);
  // Bookkeeping.
  std::size_t lin = 0, circ = 0;
  for (const auto& l : r.linear) lin += (l.word.length() + 1) * l.mult;
  for (const auto& c : r.circular) circ += c.pattern.period() * c.dim;
  if (r.dim != m.dim || lin + circ != m.dim) t.bookkeeping.fail("total_dim " + tag);
  try {
    const auto s = split(k, m, a);
    if (s.first.size() != lin || s.second.size() != circ) t.bookkeeping.fail("split dims " + tag);
    const auto r1 = classify(k, submodule(k, m, s.first), opt);
    const auto r2 = classify(k, submodule(k, m, s.second), opt);
    if (!r1.circular.empty() || r1.linear != r.linear) t.bookkeeping.fail("M1 is not the linear part " + tag);
    if (!r2.linear.empty() || r2.circular.size() != r.circular.size()) t.bookkeeping.fail("M2 is not the circular part " + tag);
  } catch (const std::exception& ex) {
    t.bookkeeping.fail(std::string(ex.what()) + " " + tag);
  }
  // First-kind tree.
  std::set<std::size_t> seen;
  for (const auto& w : a.first) {
    if (!w.word.empty()) {
      const Word parent(std::vector<Letter>(w.word.letters.begin() + 1, w.word.letters.end()));
      if (!find_word(a.first, parent)) t.first_kind.fail("W1 not prefix-closed at " + w.word.str() + " " + tag);
    }
    if (!seen.insert(w.interval).second) t.first_kind.fail("interval map not injective " + tag);
  }
  if (a.first.size() > m.dim) t.first_kind.fail("|W1| > dim M " + tag);
  if (a.graded) {
    const auto& g = a.graded->rep;
    for (std::size_t i = 0; i < g.maps.size(); ++i) {
      const auto rk = rank(k, g.maps[i]);
      if (g.quiver.edges[i].label == Label::F ? rk != g.maps[i].cols() : rk != g.maps[i].rows())
        t.first_kind.fail("gr_first edge map " + std::to_string(i) + " " + tag);
    }
  }
}

inline RoundTripTally round_trip_suite(std::size_t count, std::uint64_t seed, const QuiverSampling& s = {}) {
  RoundTripTally t;
  Stopwatch sw;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i)
    for_corpus_fields(i, [&](const auto& k) {
      const auto rep = random_strict_rep(k, rng, s);
      const auto m = scramble(k, module_of(k, rep).module, rng);
      round_trip_case(k, rep, m, t, "(" + k.name() + ", case " + std::to_string(i) + ")");
    });
  t.round_trip.seconds = t.bookkeeping.seconds = t.first_kind.seconds = sw.seconds();
  return t;
}

inline SuiteResult additivity_suite(std::size_t count, std::uint64_t seed) {
  SuiteResult res{"direct-sum additivity"};
  Stopwatch sw;
  Rng rng(seed);
  QuiverSampling s;
  s.max_total_dim = 8;
  s.max_components = 3;
  for (std::size_t i = 0; i < count; ++i)
    for_corpus_fields(i, [&](const auto& k) {
      ++res.cases;
      const std::string tag = "(" + k.name() + ", case " + std::to_string(i) + ")";
      try {
        const auto m1 = scramble(k, module_of(k, random_strict_rep(k, rng, s)).module, rng);
        const auto m2 = scramble(k, module_of(k, random_strict_rep(k, rng, s)).module, rng);
        const auto iso = modules_isomorphic(k, direct_sum(k, m1, m2), direct_sum(k, m2, m1));
        const auto merged = merge_reports(k, classify(k, m1), classify(k, m2));
        const auto match = match_reports(k, classify(k, direct_sum(k, m1, m2)), merged);
        bool exact = true;
        for (const auto& c : merged.circular) exact = exact && exact_branch(k, c.monodromy.twist);
        if (iso.verdict == Verdict::no || (exact && iso.verdict != Verdict::yes)) res.fail("m1+m2 vs m2+m1: " + iso.reason + " " + tag);
        if (iso.verdict == Verdict::undetermined) ++res.undetermined;
        if (!match.ok) res.fail("merged report: " + match.reason + " " + tag);
      } catch (const std::exception& ex) {
        res.fail(std::string(ex.what()) + " " + tag);
      }
    });
  res.seconds = sw.seconds();
  return res;
}

inline std::string format_result(const SuiteResult& r) {
  std::ostringstream os;
  os << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.cases << " cases, " << r.failures << " failures";
  if (r.undetermined) os << ", " << r.undetermined << " undetermined";
  os.setf(std::ios::fixed);
  os.precision(2);
  os << " (" << r.seconds << " s)";
  for (const auto& n : r.notes) os << "\n    " << n;
  return os.str();
}

}  // namespace gpmod
