#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gpmod/quiver.hpp"
#include "gpmod/repn.hpp"
#include "gpmod/semilinear.hpp"

namespace gpmod {

/// Seeded generator with a portable integer draw (modulo reduction), so the
/// same seed gives the same stream on every standard library.
class Rng {
 public:
  using result_type = std::uint64_t;
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return eng_(); }
  /// Uniform-ish integer in [lo, hi].
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + eng_() % (hi - lo + 1); }
  bool coin() { return eng_() & 1; }

 private:
  std::mt19937_64 eng_;
};

template <class K>
Matrix<K> random_matrix(const K& k, std::size_t r, std::size_t c, Rng& rng) {
  Matrix<K> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = k.random(rng);
  return m;
}

template <class K>
Matrix<K> random_invertible(const K& k, std::size_t d, Rng& rng) {
  while (true) {
    auto m = random_matrix(k, d, d, rng);
    if (is_invertible(k, m)) return m;
  }
}

template <class K>
Vec<K> random_vec(const K& k, std::size_t n, Rng& rng) {
  Vec<K> v(n);
  for (auto& x : v) x = k.random(rng);
  return v;
}

/// Relation generated by a random number of random pairs, some of them
/// forced into the kernel or the indeterminacy.
template <class K>
SigmaRelation<K> random_relation(const K& k, std::size_t n, long long twist, Rng& rng) {
  std::vector<std::pair<Vec<K>, Vec<K>>> pairs;
  const std::size_t count = rng.range(0, 2 * n);
  for (std::size_t i = 0; i < count; ++i) {
    auto x = random_vec(k, n, rng), y = random_vec(k, n, rng);
    switch (rng.range(0, 4)) {
      case 0:
        x = zero_vec(k, n);
        break;
      case 1:
        y = zero_vec(k, n);
        break;
      default:
        break;
    }
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return SigmaRelation<K>::generated(k, n, twist, pairs);
}

struct QuiverSampling {
  std::size_t max_components = 6;
  std::size_t max_component_size = 6;
  std::size_t max_total_dim = 16;
  std::size_t max_rep_dim = 3;
  bool allow_circular = true;
};

/// Disjoint union of linear quivers Gamma(w) and repetition-free circular
/// quivers Gamma([p], l(p)), pairwise non-isomorphic, with a strict random
/// representation of constant dimension on each component.
template <class K>
Representation<K> random_strict_rep(const K& k, Rng& rng, const QuiverSampling& s = {}) {
  Representation<K> out;
  std::set<std::string> used;
  std::size_t budget = s.max_total_dim;
  const std::size_t comps = rng.range(1, s.max_components);
  for (std::size_t c = 0; c < comps && budget > 0; ++c) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      const bool circular = s.allow_circular && rng.coin();
      const std::size_t size = rng.range(1, std::min(s.max_component_size, budget));
      std::vector<Letter> letters;
      const std::size_t len = circular ? size : size - 1;
      for (std::size_t i = 0; i < len; ++i) letters.push_back(rng.coin() ? Letter::F : Letter::Vs);
      Quiver g;
      std::string key;
      if (circular) {
        const Word w(letters);
        if (cyclic_period(w.letters) != w.length()) continue;
        const PeriodicWord p = PeriodicWord(w).canonical();
        key = "c" + p.pattern.str();
        g = quiver_of_periodic(PeriodicWord(w), len);
      } else {
        const Word w(letters);
        key = "l" + w.str();
        g = quiver_of_word(w);
      }
      if (used.count(key)) continue;
      const std::size_t d = rng.range(1, std::min(s.max_rep_dim, budget / size));
      if (d == 0) continue;
      used.insert(key);
      budget -= d * size;
      Representation<K> r{g, {}, {}};
      for (int v : g.vertices) r.dims[v] = d;
      for (std::size_t i = 0; i < g.edges.size(); ++i) r.maps.push_back(random_invertible(k, d, rng));
      out = direct_sum(out, r);
      break;
    }
  }
  return out;
}

/// A random module M(Gamma, U, rho) expressed in a random basis.
template <class K>
GPModule<K> scramble(const K& k, const GPModule<K>& m, Rng& rng) {
  return change_basis(k, m, random_invertible(k, m.dim, rng));
}

}  // namespace gpmod
