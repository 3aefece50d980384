#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gpmod/canonical_form.hpp"
#include "gpmod/quiver.hpp"
#include "gpmod/repn.hpp"
#include "gpmod/semilinear.hpp"

namespace gpmod {

/// Memoized monomial relations D(w) on a fixed module.
template <class K>
class MonomialCache {
 public:
  MonomialCache(const K& k, const GPModule<K>& m) : k_(k), m_(m) {
    f_ = graph_of(k, SemilinearMap<K>{m.f, 1});
    vs_ = converse(k, graph_of(k, SemilinearMap<K>{m.v, -1}));
    memo_.emplace(Word{}, one(k, m.dim));
  }

  const K& field() const { return k_; }
  const GPModule<K>& module() const { return m_; }
  const SigmaRelation<K>& letter(Letter l) const { return l == Letter::F ? f_ : vs_; }

  /// D(w) = D(w_m) o ... o D(w_1).
  const SigmaRelation<K>& relation(const Word& w) {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    Word rest(std::vector<Letter>(w.letters.begin(), w.letters.end() - 1));
    auto r = compose(k_, letter(w.letters.back()), relation(rest));
    return memo_.emplace(w, std::move(r)).first->second;
  }

  std::size_t size() const { return memo_.size(); }

 private:
  K k_;
  GPModule<K> m_;
  SigmaRelation<K> f_, vs_;
  std::map<Word, SigmaRelation<K>> memo_;
};

template <class K>
const SigmaRelation<K>& relation_of_word(MonomialCache<K>& cache, const Word& w) {
  return cache.relation(w);
}

/// The subspace operators behind the closure: Ker D(wL) = pi_L(Ker D(w)) and
/// Dom D(wL) = pi_L(Dom D(w)).
template <class K>
struct ModuleOps {
  K k;
  GPModule<K> m;
  Subspace<K> ker_f, ker_v, im_v, full;

  ModuleOps(const K& field, const GPModule<K>& mod) : k(field), m(mod) {
    ker_f = map_kernel(k, m.f, 1);
    ker_v = map_kernel(k, m.v, -1);
    full = Subspace<K>::full(k, m.dim);
    im_v = map_image(k, m.v, full, -1);
  }
  Subspace<K> pi(Letter l, const Subspace<K>& x) const {
    return l == Letter::F ? map_preimage(k, m.f, x, 1) : map_image(k, m.v, x, -1);
  }
  /// Ker D(w) and Dom D(w) without building the relation.
  std::pair<Subspace<K>, Subspace<K>> ker_dom(const Word& w) const {
    Subspace<K> ker = Subspace<K>::zero(m.dim), dom = full;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
      ker = pi(*it, ker);
      dom = pi(*it, dom);
    }
    return {ker, dom};
  }
};

// ---------------------------------------------------------------------------
// Stabilized sequence

template <class K>
struct FlagMember {
  Subspace<K> space;
  /// Shortest words with Ker D(w) = space, resp. Dom D(w) = space.
  std::optional<Word> ker_word, dom_word;
};

template <class K>
struct StabilizedSequence {
  std::vector<FlagMember<K>> flag;  // beta_0 = 0 < ... < beta_s = M

  std::size_t intervals() const { return flag.empty() ? 0 : flag.size() - 1; }
  std::optional<std::size_t> index_of(const Subspace<K>& x) const {
    for (std::size_t i = 0; i < flag.size(); ++i)
      if (flag[i].space == x) return i;
    return std::nullopt;
  }
  /// Index i with (beta_i, beta_{i+1}) = (lo, hi), if that interval is elementary.
  std::optional<std::size_t> interval_of(const Subspace<K>& lo, const Subspace<K>& hi) const {
    auto i = index_of(lo);
    if (!i || *i + 1 >= flag.size() || !(flag[*i + 1].space == hi)) return std::nullopt;
    return i;
  }
};

namespace detail {

template <class K>
std::vector<std::pair<Subspace<K>, Word>> closure_from(const ModuleOps<K>& ops, const Subspace<K>& start) {
  std::vector<std::pair<Subspace<K>, Word>> seen{{start, Word{}}};
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (Letter l : {Letter::F, Letter::Vs}) {
      auto next = ops.pi(l, seen[i].first);
      bool known = false;
      for (const auto& s : seen)
        if (s.first == next) known = true;
      if (known) continue;
      check_internal(seen.size() <= ops.m.dim + 1, "stabilized sequence: closure is not a chain");
      seen.emplace_back(std::move(next), seen[i].second * letter_word(l));
      queue.push_back(seen.size() - 1);
    }
  }
  return seen;
}

}  // namespace detail

template <class K>
StabilizedSequence<K> stabilized_sequence(const ModuleOps<K>& ops) {
  const std::size_t n = ops.m.dim;
  StabilizedSequence<K> seq;
  auto add = [&](const Subspace<K>& x, const Word& w, bool kernel) {
    for (auto& f : seq.flag)
      if (f.space == x) {
        auto& slot = kernel ? f.ker_word : f.dom_word;
        if (!slot) slot = w;
        return;
      }
    FlagMember<K> f{x, std::nullopt, std::nullopt};
    (kernel ? f.ker_word : f.dom_word) = w;
    seq.flag.push_back(std::move(f));
  };
  for (const auto& [x, w] : detail::closure_from(ops, Subspace<K>::zero(n))) add(x, w, true);
  for (const auto& [x, w] : detail::closure_from(ops, ops.full)) add(x, w, false);
  std::sort(seq.flag.begin(), seq.flag.end(),
            [](const FlagMember<K>& a, const FlagMember<K>& b) { return a.space.dim() < b.space.dim(); });
  for (std::size_t i = 0; i + 1 < seq.flag.size(); ++i) {
    check_internal(seq.flag[i].space.dim() < seq.flag[i + 1].space.dim(),
                   "stabilized sequence: two members of equal dimension");
    check_internal(contains(ops.k, seq.flag[i + 1].space, seq.flag[i].space),
                   "stabilized sequence: members are not totally ordered");
  }
  return seq;
}

template <class K>
StabilizedSequence<K> stabilized_sequence(const K& k, const GPModule<K>& m) {
  require_gp(k, m);
  return stabilized_sequence(ModuleOps<K>(k, m));
}

// ---------------------------------------------------------------------------
// First kind

template <class K>
struct FirstKindWord {
  Word word;
  Subspace<K> ker_f;  // Ker D(Fw)
  Subspace<K> dom_v;  // Dom D(V#w)
  std::size_t interval = 0;
};

/// W_1 in breadth-first order (shortest words first).
template <class K>
std::vector<FirstKindWord<K>> words_first_kind(const ModuleOps<K>& ops, const StabilizedSequence<K>& seq) {
  std::vector<FirstKindWord<K>> out;
  std::deque<FirstKindWord<K>> queue;
  queue.push_back({Word{}, ops.ker_f, ops.im_v, 0});
  std::set<std::size_t> used;
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    check_internal(contains(ops.k, cur.ker_f, cur.dom_v), "first kind: Dom D(V#w) not inside Ker D(Fw)");
    if (cur.ker_f.dim() == cur.dom_v.dim()) continue;
    auto idx = seq.interval_of(cur.dom_v, cur.ker_f);
    check_internal(idx.has_value(), "first kind: interval of " + cur.word.str() + " is not elementary");
    check_internal(used.insert(*idx).second, "first kind: two words share an elementary interval");
    cur.interval = *idx;
    for (Letter l : {Letter::F, Letter::Vs})
      queue.push_back({cur.word * letter_word(l), ops.pi(l, cur.ker_f), ops.pi(l, cur.dom_v), 0});
    out.push_back(std::move(cur));
    check_internal(out.size() <= ops.m.dim, "first kind: more words than dimensions");
  }
  return out;
}

template <class K>
std::optional<std::size_t> find_word(const std::vector<FirstKindWord<K>>& w1, const Word& w) {
  for (std::size_t i = 0; i < w1.size(); ++i)
    if (w1[i].word == w) return i;
  return std::nullopt;
}

/// The representation (U^1st, rho^1st) on Gamma(M, 1st). Vertex i is w1[i].
template <class K>
struct FirstKindGraded {
  Representation<K> rep;
  std::vector<Quotient<K>> quotients;
  /// Edge indices: f_in[i] is the F-edge into vertex i, v_out[i] the V-edge out of it.
  std::vector<std::optional<std::size_t>> f_in, v_out;
};

template <class K>
FirstKindGraded<K> gr_first(const ModuleOps<K>& ops, const std::vector<FirstKindWord<K>>& w1) {
  if (w1.empty()) throw domain_error("gr_first needs a nonempty W_1");
  const K& k = ops.k;
  FirstKindGraded<K> g;
  g.f_in.assign(w1.size(), std::nullopt);
  g.v_out.assign(w1.size(), std::nullopt);
  for (std::size_t i = 0; i < w1.size(); ++i) {
    g.quotients.emplace_back(k, w1[i].ker_f, w1[i].dom_v);
    g.rep.quiver.vertices.push_back(static_cast<int>(i));
    g.rep.dims[static_cast<int>(i)] = g.quotients.back().dim();
  }
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const auto& q = g.quotients[i];
    if (auto c = find_word(w1, w1[i].word * letter_word(Letter::F))) {
      const auto& qc = g.quotients[*c];
      Matrix<K> a = zero_matrix(k, q.dim(), qc.dim());
      for (std::size_t b = 0; b < qc.dim(); ++b) {
        const auto col = q.coords(k, ops.m.apply_f(k, qc.rep(b)));
        for (std::size_t r = 0; r < q.dim(); ++r) a(r, b) = col[r];
      }
      check_internal(rank(k, a) == qc.dim(), "gr_first: F-edge map is not injective");
      g.f_in[i] = g.rep.quiver.edges.size();
      g.rep.quiver.edges.push_back({static_cast<int>(*c), static_cast<int>(i), Label::F});
      g.rep.maps.push_back(a);
    }
    if (auto c = find_word(w1, w1[i].word * letter_word(Letter::Vs))) {
      const auto& qc = g.quotients[*c];
      Matrix<K> a = zero_matrix(k, qc.dim(), q.dim());
      for (std::size_t b = 0; b < q.dim(); ++b) {
        const auto col = qc.coords(k, ops.m.apply_v(k, q.rep(b)));
        for (std::size_t r = 0; r < qc.dim(); ++r) a(r, b) = col[r];
      }
      check_internal(rank(k, a) == qc.dim(), "gr_first: V-edge map is not surjective");
      g.v_out[i] = g.rep.quiver.edges.size();
      g.rep.quiver.edges.push_back({static_cast<int>(i), static_cast<int>(*c), Label::V});
      g.rep.maps.push_back(a);
    }
  }
  return g;
}

template <class K>
struct GammaSpace {
  Subspace<K> gamma, from_f, from_v, fresh;
};

/// gamma(w) for w in W_1 (same order as w1), built from the longest words down.
template <class K>
std::vector<GammaSpace<K>> gamma_spaces(const ModuleOps<K>& ops, const std::vector<FirstKindWord<K>>& w1) {
  const K& k = ops.k;
  const std::size_t n = ops.m.dim;
  std::vector<GammaSpace<K>> out(w1.size());
  std::vector<std::size_t> order(w1.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w1[a].word.length() > w1[b].word.length(); });
  for (std::size_t i : order) {
    const auto& w = w1[i];
    auto& g = out[i];
    const auto kv = intersect(k, ops.ker_v, w.ker_f);
    g.from_f = Subspace<K>::zero(n);
    g.from_v = Subspace<K>::zero(n);
    if (auto c = find_word(w1, w.word * letter_word(Letter::F))) {
      g.from_f = map_image(k, ops.m.f, out[*c].gamma, 1);
      check_internal(g.from_f.dim() == out[*c].gamma.dim(), "gamma: F is not injective on gamma(wF)");
    }
    if (auto c = find_word(w1, w.word * letter_word(Letter::Vs))) {
      const auto lift = intersect(k, map_preimage(k, ops.m.v, out[*c].gamma, -1), w.ker_f);
      g.from_v = complement_in(k, lift, kv);
    }
    const auto covered = intersect(k, sum(k, sum(k, g.from_f, g.from_v), w.dom_v), kv);
    g.fresh = complement_in(k, kv, covered);
    g.gamma = sum(k, sum(k, g.from_f, g.from_v), g.fresh);
    check_internal(g.gamma.dim() == g.from_f.dim() + g.from_v.dim() + g.fresh.dim(), "gamma: parts are not independent");
    check_internal(g.gamma.dim() + w.dom_v.dim() == w.ker_f.dim() && sum(k, g.gamma, w.dom_v) == w.ker_f,
                   "gamma: Ker D(Fw) != Dom D(V#w) (+) gamma(w) for w = " + w.word.str());
    if (auto c = find_word(w1, w.word * letter_word(Letter::Vs))) {
      const auto img = map_image(k, ops.m.v, g.gamma, -1);
      check_internal(img == out[*c].gamma, "gamma: V does not map gamma(w) onto gamma(wV#)");
    } else {
      check_internal(contains(k, ops.ker_v, g.gamma), "gamma: V does not vanish on gamma(w)");
    }
  }
  return out;
}

struct LinearEntry {
  Word word;
  std::size_t mult = 0;
  bool operator==(const LinearEntry& o) const { return word == o.word && mult == o.mult; }
};

/// Multiplicities d_w = dim U_w - dim X^F_w - dim X^V_w read off gr_first,
/// cross-checked against dim of the fresh part of gamma(w).
template <class K>
std::vector<LinearEntry> linear_decomposition(const ModuleOps<K>& ops, const std::vector<FirstKindWord<K>>& w1,
                                              const FirstKindGraded<K>& g, const std::vector<GammaSpace<K>>& gammas) {
  std::vector<LinearEntry> out;
  std::size_t total_u = 0, total_x = 0;
  for (std::size_t i = 0; i < w1.size(); ++i) {
    const std::size_t u = g.quotients[i].dim();
    std::size_t xf = 0, xv = 0;
    if (g.f_in[i]) xf = rank(ops.k, g.rep.maps[*g.f_in[i]]);
    if (g.v_out[i]) xv = rank(ops.k, g.rep.maps[*g.v_out[i]]);
    check_internal(xf + xv <= u, "linear decomposition: X^F and X^V overflow U_w");
    const std::size_t d = u - xf - xv;
    check_internal(d == gammas[i].fresh.dim(), "linear decomposition: multiplicity disagrees with gamma");
    total_u += u;
    total_x += (w1[i].word.length() + 1) * d;
    if (d) out.push_back({w1[i].word, d});
  }
  check_internal(total_u == total_x, "linear decomposition: dimension identity fails");
  std::sort(out.begin(), out.end(), [](const LinearEntry& a, const LinearEntry& b) {
    if (a.word.length() != b.word.length()) return a.word.length() < b.word.length();
    return a.word < b.word;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Second kind

enum class SecondKindMethod { fast, necklaces };

template <class K>
struct SecondKindClass {
  PeriodicWord pattern;              // canonical rotation
  std::size_t dim = 0;               // dimension of each interval
  std::vector<std::size_t> intervals;  // intervals[j] belongs to rotation j
};

namespace detail {

template <class K>
std::pair<Subspace<K>, Subspace<K>> stable_interval(const ModuleOps<K>& ops, const Word& c) {
  Subspace<K> ker = Subspace<K>::zero(ops.m.dim), dom = ops.full;
  for (std::size_t it = 0; it <= ops.m.dim + 1; ++it) {
    auto nk = ker, nd = dom;
    for (auto l = c.letters.rbegin(); l != c.letters.rend(); ++l) {
      nk = ops.pi(*l, nk);
      nd = ops.pi(*l, nd);
    }
    if (nk == ker && nd == dom) return {ker, dom};
    ker = std::move(nk);
    dom = std::move(nd);
  }
  throw internal_error("stable interval did not stabilize");
}

template <class K>
std::optional<SecondKindClass<K>> class_of_pattern(const ModuleOps<K>& ops, const StabilizedSequence<K>& seq,
                                                  const PeriodicWord& c) {
  SecondKindClass<K> cls{c, 0, {}};
  for (std::size_t j = 0; j < c.period(); ++j) {
    auto [ker, dom] = stable_interval(ops, rotate(c.pattern, j));
    if (ker.dim() == dom.dim()) {
      check_internal(j == 0, "second kind: a rotation of a kept word has a trivial stable interval");
      return std::nullopt;
    }
    auto idx = seq.interval_of(ker, dom);
    check_internal(idx.has_value(), "second kind: stable interval of " + rotate(c.pattern, j).str() + " is not elementary");
    const std::size_t d = dom.dim() - ker.dim();
    check_internal(j == 0 || d == cls.dim, "second kind: rotations have different interval dimensions");
    cls.dim = d;
    cls.intervals.push_back(*idx);
  }
  return cls;
}

}  // namespace detail

/// Classes of second-kind words, one per rotation class, in canonical order.
template <class K>
std::vector<SecondKindClass<K>> words_second_kind(const ModuleOps<K>& ops, MonomialCache<K>& cache,
                                                  const StabilizedSequence<K>& seq,
                                                  const std::vector<FirstKindWord<K>>& w1,
                                                  SecondKindMethod method = SecondKindMethod::fast) {
  const K& k = ops.k;
  std::set<std::size_t> first;
  for (const auto& w : w1) first.insert(w.interval);
  std::vector<std::size_t> second;
  std::size_t n2 = 0;
  for (std::size_t i = 0; i < seq.intervals(); ++i)
    if (!first.count(i)) {
      second.push_back(i);
      n2 += seq.flag[i + 1].space.dim() - seq.flag[i].space.dim();
    }
  std::vector<SecondKindClass<K>> out;
  std::set<std::size_t> covered;
  auto keep = [&](const SecondKindClass<K>& cls) {
    for (const auto& o : out)
      if (o.pattern == cls.pattern) return;
    for (std::size_t i : cls.intervals) {
      check_internal(!first.count(i), "second kind: interval already of the first kind");
      check_internal(covered.insert(i).second, "second kind: interval claimed twice");
    }
    out.push_back(cls);
  };

  if (method == SecondKindMethod::necklaces) {
    for (const auto& c : primitive_necklaces(second.size()))
      if (auto cls = detail::class_of_pattern(ops, seq, c)) keep(*cls);
  } else {
    for (std::size_t i : second) {
      if (covered.count(i)) continue;
      const auto& lo = seq.flag[i];
      const auto& hi = seq.flag[i + 1];
      check_internal(lo.ker_word && hi.dom_word, "second kind: interval ends lack kernel/domain witnesses");
      Word w = lo.ker_word->length() >= hi.dom_word->length() ? *lo.ker_word : *hi.dom_word;
      {
        auto [ker, dom] = ops.ker_dom(w);
        check_internal(ker == lo.space && dom == hi.space, "second kind: no word realizes the interval");
      }
      // Extend on the left; exactly one of D(Fw), D(V#w) is non-null.
      SigmaRelation<K> rel = cache.relation(w);
      std::vector<Letter> ext;
      for (std::size_t step = 0; step < 2 * second.size(); ++step) {
        std::optional<Letter> pick;
        SigmaRelation<K> next;
        for (Letter l : {Letter::F, Letter::Vs}) {
          auto cand = compose(k, cache.letter(l), rel);
          if (!is_null(k, cand)) {
            check_internal(!pick, "second kind: both extensions are non-null");
            pick = l;
            next = std::move(cand);
          }
        }
        check_internal(pick.has_value(), "second kind: both extensions are null");
        const auto p = parts(k, next);
        check_internal(p.ker == lo.space && p.dom == hi.space, "second kind: extension leaves the interval");
        ext.push_back(*pick);
        rel = std::move(next);
      }
      std::size_t t = 0;
      for (std::size_t cand = 1; cand <= second.size() && !t; ++cand) {
        bool ok = true;
        for (std::size_t a = 0; a + cand < ext.size() && ok; ++a) ok = ext[a] == ext[a + cand];
        if (ok) t = cand;
      }
      check_internal(t > 0, "second kind: extension is not periodic");
      const PeriodicWord c =
          PeriodicWord(Word(std::vector<Letter>(ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(t)))).canonical();
      auto cls = detail::class_of_pattern(ops, seq, c);
      check_internal(cls.has_value(), "second kind: candidate period fails the stable-interval test");
      check_internal(std::count(cls->intervals.begin(), cls->intervals.end(), i) == 1,
                     "second kind: candidate does not explain its interval");
      keep(*cls);
    }
    std::sort(out.begin(), out.end(), [](const SecondKindClass<K>& a, const SecondKindClass<K>& b) {
      if (a.pattern.period() != b.pattern.period()) return a.pattern.period() < b.pattern.period();
      return a.pattern.pattern < b.pattern.pattern;
    });
  }
  check_internal(covered.size() == second.size(), "second kind: elementary intervals are not all accounted for");
  std::size_t dims = 0;
  for (const auto& c : out) dims += c.dim * c.pattern.period();
  check_internal(dims == n2, "second kind: interval dimensions do not add up");
  return out;
}

/// S_{w(j)} for one class, with the representation of Gamma([w], t) they carry.
template <class K>
struct SecondKindSections {
  PeriodicWord pattern;
  std::vector<std::vector<Vec<K>>> bases;  // bases[j] spans S_{w(j)}
  Representation<K> rep;                   // on quiver_of_periodic(pattern, t)
  Monodromy<K> monodromy;                  // at vertex 0
};

template <class K>
SecondKindSections<K> second_kind_sections(const ModuleOps<K>& ops, MonomialCache<K>& cache,
                                           const SecondKindClass<K>& cls) {
  const K& k = ops.k;
  const std::size_t n = ops.m.dim, t = cls.pattern.period(), d = cls.dim;
  const Word& c = cls.pattern.pattern;
  const auto wd = weak_decomposition(k, cache.relation(c));
  check_internal(wd.s.dim() == d, "sections: S has the wrong dimension");
  check_internal(intersect(k, wd.s, wd.n).dim() == 0, "sections: S meets Ker-inf + Indet-inf");

  SecondKindSections<K> out;
  out.pattern = cls.pattern;
  std::vector<Vec<K>> z(d, zero_vec(k, n));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t r = 0; r < d; ++r) vaxpy(k, z[a], wd.t.matrix(r, a), wd.basis[r]);

  out.bases.push_back(wd.basis);
  for (std::size_t j = 0; j + 1 < t; ++j) {
    const Word rest(std::vector<Letter>(c.letters.begin() + static_cast<std::ptrdiff_t>(j + 1), c.letters.end()));
    std::vector<Vec<K>> next;
    for (std::size_t a = 0; a < d; ++a) {
      auto y = find_middle(k, cache.letter(c.letters[j]), cache.relation(rest), out.bases[j][a], z[a]);
      check_internal(y.has_value(), "sections: basis vector cannot be transported");
      next.push_back(std::move(*y));
    }
    out.bases.push_back(std::move(next));
  }
  for (std::size_t j = 0; j < t; ++j) {
    const auto s = Subspace<K>::span(k, n, Matrix<K>::from_rows(n, out.bases[j]));
    auto [ker, dom] = detail::stable_interval(ops, rotate(c, j));
    check_internal(s.dim() == d && contains(k, dom, s) && intersect(k, s, ker).dim() == 0 &&
                       sum(k, s, ker) == dom,
                   "sections: S_{w(j)} is not a complement of Ker-inf in Dom-inf");
  }

  out.rep.quiver = quiver_of_periodic(cls.pattern, t);
  for (std::size_t j = 0; j < t; ++j) out.rep.dims[static_cast<int>(j)] = d;
  for (std::size_t j = 0; j < t; ++j) {
    const std::size_t nj = (j + 1) % t;
    const bool fwd = c.letters[j] == Letter::F;
    const auto& src = fwd ? out.bases[j] : out.bases[nj];
    const auto& dst = fwd ? out.bases[nj] : out.bases[j];
    Matrix<K> a = zero_matrix(k, d, d);
    for (std::size_t b = 0; b < d; ++b) {
      const auto img = fwd ? ops.m.apply_f(k, src[b]) : ops.m.apply_v(k, src[b]);
      auto col = coords_in_basis(k, dst, img);
      check_internal(col.has_value(), "sections: F/V does not map S_{w(j)} onto its neighbour");
      for (std::size_t r = 0; r < d; ++r) a(r, b) = (*col)[r];
    }
    out.rep.maps.push_back(a);
  }
  check_internal(is_strict(k, out.rep), "sections: transported representation is not strict");
  out.monodromy = monodromy(k, out.rep, 0);
  check_internal(out.monodromy.matrix == wd.t.matrix && out.monodromy.twist == wd.t.twist,
                 "sections: monodromy differs from the weak decomposition automorphism");
  return out;
}

// ---------------------------------------------------------------------------
// Classification

template <class K>
struct CircularEntry {
  PeriodicWord pattern;
  std::size_t dim = 0;
  Monodromy<K> monodromy;
  std::optional<Matrix<K>> canonical_form;
};

template <class K>
struct ClassificationReport {
  std::vector<LinearEntry> linear;
  std::vector<CircularEntry<K>> circular;
  std::size_t dim = 0;
};

struct ClassifyOptions {
  SecondKindMethod method = SecondKindMethod::fast;
  SearchConfig search;
};

/// Everything computed along the way; classify() and split() read from it.
template <class K>
struct Analysis {
  StabilizedSequence<K> sequence;
  std::vector<FirstKindWord<K>> first;
  std::optional<FirstKindGraded<K>> graded;
  std::vector<GammaSpace<K>> gammas;
  std::vector<SecondKindClass<K>> second;
  std::vector<SecondKindSections<K>> sections;
  ClassificationReport<K> report;
};

template <class K>
bool exact_branch(const K& k, long long twist) {
  return twist % k.sigma_order() == 0;
}

template <class K>
Analysis<K> analyze(const K& k, const GPModule<K>& m, const ClassifyOptions& opt = {}) {
  require_gp(k, m);
  const ModuleOps<K> ops(k, m);
  MonomialCache<K> cache(k, m);
  Analysis<K> a;
  a.sequence = stabilized_sequence(ops);
  a.first = words_first_kind(ops, a.sequence);
  if (!a.first.empty()) {
    a.graded = gr_first(ops, a.first);
    a.gammas = gamma_spaces(ops, a.first);
    a.report.linear = linear_decomposition(ops, a.first, *a.graded, a.gammas);
  }
  a.second = words_second_kind(ops, cache, a.sequence, a.first, opt.method);
  for (const auto& cls : a.second) {
    a.sections.push_back(second_kind_sections(ops, cache, cls));
    CircularEntry<K> e{cls.pattern, cls.dim, a.sections.back().monodromy, std::nullopt};
    if (exact_branch(k, e.monodromy.twist)) e.canonical_form = rational_canonical_form(k, e.monodromy.matrix);
    a.report.circular.push_back(std::move(e));
  }
  a.report.dim = m.dim;
  std::size_t total = 0;
  for (const auto& l : a.report.linear) total += (l.word.length() + 1) * l.mult;
  for (const auto& c : a.report.circular) total += c.pattern.period() * c.dim;
  check_internal(total == m.dim, "classification: dimension bookkeeping fails");
  return a;
}

template <class K>
ClassificationReport<K> classify(const K& k, const GPModule<K>& m, const ClassifyOptions& opt = {}) {
  return analyze(k, m, opt).report;
}

template <class K>
struct Split {
  std::vector<Vec<K>> first, second;  // bases of M_1 and M_2
};

template <class K>
Split<K> split(const K& k, const GPModule<K>& m, const Analysis<K>& a) {
  Split<K> s;
  for (const auto& g : a.gammas)
    for (auto& v : g.gamma.vectors()) s.first.push_back(std::move(v));
  for (const auto& sec : a.sections)
    for (const auto& b : sec.bases)
      for (const auto& v : b) s.second.push_back(v);
  std::vector<Vec<K>> all = s.first;
  all.insert(all.end(), s.second.begin(), s.second.end());
  check_internal(all.size() == m.dim, "split: bases have the wrong total size");
  check_internal(m.dim == 0 || rank(k, Matrix<K>::from_rows(m.dim, all)) == m.dim, "split: parts are not complementary");
  for (const auto* part : {&s.first, &s.second}) {
    const auto sp = Subspace<K>::span(k, m.dim, *part);
    for (const auto& v : *part)
      check_internal(contains_vec(k, sp, m.apply_f(k, v)) && contains_vec(k, sp, m.apply_v(k, v)),
                     "split: part is not stable under F and V");
  }
  return s;
}

template <class K>
Split<K> split(const K& k, const GPModule<K>& m, const ClassifyOptions& opt = {}) {
  return split(k, m, analyze(k, m, opt));
}

/// The quiver and representation a report describes: Gamma(w) with
/// 1^{mult} for linear entries, Gamma([p], t) carrying the monodromy on the
/// last arrow for circular ones.
template <class K>
Representation<K> rep_of_report(const K& k, const ClassificationReport<K>& r) {
  Representation<K> out;
  for (const auto& l : r.linear) {
    Representation<K> c = trivial_rep(k, quiver_of_word(l.word), l.mult);
    out = direct_sum(out, c);
  }
  for (const auto& e : r.circular) {
    const std::size_t t = e.pattern.period();
    Representation<K> c = trivial_rep(k, quiver_of_periodic(e.pattern, t), e.dim);
    if (e.pattern.pattern.letters[t - 1] == Letter::F) {
      c.maps[t - 1] = e.monodromy.matrix;
    } else {
      auto inv = inverse(k, sigma_mat(k, e.monodromy.matrix, -1));
      if (!inv) throw domain_error("monodromy is not invertible");
      c.maps[t - 1] = *inv;
    }
    out = direct_sum(out, c);
  }
  return out;
}

template <class K>
struct IsoResult {
  Verdict verdict = Verdict::undetermined;
  std::string reason;
};

/// Compare two reports: linear parts and circular shapes decide 'no';
/// circular monodromies go through semilinear_conjugate.
template <class K>
IsoResult<K> reports_isomorphic(const K& k, const ClassificationReport<K>& a, const ClassificationReport<K>& b,
                                const SearchConfig& cfg = {}) {
  if (a.dim != b.dim) return {Verdict::no, "dimensions differ"};
  if (a.linear != b.linear) return {Verdict::no, "first-kind words or multiplicities differ"};
  if (a.circular.size() != b.circular.size()) return {Verdict::no, "circular parts differ"};
  IsoResult<K> res{Verdict::yes, "isomorphic"};
  for (std::size_t i = 0; i < a.circular.size(); ++i) {
    const auto& x = a.circular[i];
    const auto& y = b.circular[i];
    if (!(x.pattern == y.pattern) || x.dim != y.dim)
      return {Verdict::no, "circular pattern or dimension differs at [" + x.pattern.pattern.str() + "]"};
    const auto c = semilinear_conjugate(k, x.monodromy, y.monodromy, cfg);
    if (c.verdict == Verdict::no) return {Verdict::no, "monodromies of [" + x.pattern.pattern.str() + "] are not conjugate"};
    if (c.verdict == Verdict::undetermined && res.verdict == Verdict::yes)
      res = {Verdict::undetermined, "conjugacy of the monodromy of [" + x.pattern.pattern.str() + "] undetermined"};
  }
  return res;
}

template <class K>
IsoResult<K> modules_isomorphic(const K& k, const GPModule<K>& m1, const GPModule<K>& m2, const ClassifyOptions& opt = {}) {
  if (m1.dim != m2.dim) return {Verdict::no, "dimensions differ"};
  return reports_isomorphic(k, classify(k, m1, opt), classify(k, m2, opt), opt.search);
}

/// Report of m1 (+) m2 predicted from the reports of m1 and m2.
template <class K>
ClassificationReport<K> merge_reports(const K& k, const ClassificationReport<K>& a, const ClassificationReport<K>& b) {
  ClassificationReport<K> r = a;
  r.dim += b.dim;
  for (const auto& l : b.linear) {
    auto it = std::find_if(r.linear.begin(), r.linear.end(), [&](const LinearEntry& x) { return x.word == l.word; });
    if (it == r.linear.end()) r.linear.push_back(l);
    else it->mult += l.mult;
  }
  std::sort(r.linear.begin(), r.linear.end(), [](const LinearEntry& x, const LinearEntry& y) {
    if (x.word.length() != y.word.length()) return x.word.length() < y.word.length();
    return x.word < y.word;
  });
  for (const auto& c : b.circular) {
    auto it = std::find_if(r.circular.begin(), r.circular.end(),
                           [&](const CircularEntry<K>& x) { return x.pattern == c.pattern; });
    if (it == r.circular.end()) {
      r.circular.push_back(c);
      continue;
    }
    it->dim += c.dim;
    it->monodromy.dim += c.dim;
    it->monodromy.matrix = block_diag(k, it->monodromy.matrix, c.monodromy.matrix);
    if (exact_branch(k, it->monodromy.twist)) it->canonical_form = rational_canonical_form(k, it->monodromy.matrix);
  }
  std::sort(r.circular.begin(), r.circular.end(), [](const CircularEntry<K>& x, const CircularEntry<K>& y) {
    if (x.pattern.period() != y.pattern.period()) return x.pattern.period() < y.pattern.period();
    return x.pattern.pattern < y.pattern.pattern;
  });
  return r;
}

template <class K>
struct Summand {
  bool circular = false;
  Word word;             // linear
  PeriodicWord pattern;  // circular
  std::size_t dim = 0;   // dimension of the representation space
  Verdict indecomposable = Verdict::yes;
  std::optional<Matrix<K>> monodromy;
};

/// Expands a report into summands. Circular entries are split along the
/// elementary divisors of the monodromy when sigma^t = id; otherwise only
/// d = 1 is decided.
template <class K>
std::vector<Summand<K>> indecomposables(const K& k, const ClassificationReport<K>& r) {
  std::vector<Summand<K>> out;
  for (const auto& l : r.linear)
    for (std::size_t i = 0; i < l.mult; ++i) out.push_back({false, l.word, {}, 1, Verdict::yes, std::nullopt});
  for (const auto& c : r.circular) {
    Summand<K> s{true, {}, c.pattern, c.dim, Verdict::yes, c.monodromy.matrix};
    if (c.dim == 1) {
      out.push_back(s);
      continue;
    }
    if (!exact_branch(k, c.monodromy.twist)) {
      s.indecomposable = Verdict::undetermined;
      out.push_back(s);
      continue;
    }
    const auto inv = invariant_factors(k, c.monodromy.matrix);
    auto ed = elementary_divisors(k, c.monodromy.matrix);
    if (ed && ed->size() > 1) {
      for (const auto& p : *ed)
        out.push_back({true, {}, c.pattern, p.size() - 1, Verdict::yes, companion(k, p)});
      continue;
    }
    if (ed) {
      out.push_back(s);
      continue;
    }
    if (inv.size() > 1) {
      for (const auto& p : inv)
        out.push_back({true, {}, c.pattern, p.size() - 1, Verdict::undetermined, companion(k, p)});
      continue;
    }
    s.indecomposable = Verdict::undetermined;
    out.push_back(s);
  }
  return out;
}

}  // namespace gpmod
