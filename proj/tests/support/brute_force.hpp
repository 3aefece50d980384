#pragma once

// Exhaustive oracle for relations over F2 with ambient dimension <= 3.
// Vectors are bitmasks, a subset of K^n is a bitmask over its 2^n vectors and
// a relation is the set of its pairs (x, y), encoded as bit x | y << n.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gpmod/semilinear.hpp"

namespace bf {

using gpmod::FiniteField;
using gpmod::SigmaRelation;
using gpmod::Subspace;
using gpmod::Vec;

using VecSet = std::uint64_t;
using PairSet = std::uint64_t;

struct Parts {
  VecSet dom = 0, ker = 0, im = 0, indet = 0;
  bool operator==(const Parts&) const = default;
};

inline Vec<FiniteField> to_vec(const FiniteField& k, unsigned x, std::size_t n) {
  Vec<FiniteField> v(n, k.zero());
  for (std::size_t i = 0; i < n; ++i)
    if ((x >> i) & 1U) v[i] = k.one();
  return v;
}

inline unsigned pair_index(unsigned x, unsigned y, std::size_t n) { return x | (y << n); }

inline VecSet members(const FiniteField& k, const Subspace<FiniteField>& s) {
  const std::size_t n = s.ambient_dim();
  VecSet out = 0;
  for (unsigned x = 0; x < (1U << n); ++x)
    if (gpmod::contains_vec(k, s, to_vec(k, x, n))) out |= VecSet{1} << x;
  return out;
}

inline PairSet pairs_of(const FiniteField& k, const SigmaRelation<FiniteField>& b) {
  const std::size_t n = b.ambient_dim();
  PairSet out = 0;
  for (unsigned x = 0; x < (1U << n); ++x)
    for (unsigned y = 0; y < (1U << n); ++y)
      if (b.contains_pair(k, to_vec(k, x, n), to_vec(k, y, n))) out |= PairSet{1} << pair_index(x, y, n);
  return out;
}

inline SigmaRelation<FiniteField> relation_of(const FiniteField& k, PairSet s, std::size_t n) {
  std::vector<std::pair<Vec<FiniteField>, Vec<FiniteField>>> gens;
  for (unsigned x = 0; x < (1U << n); ++x)
    for (unsigned y = 0; y < (1U << n); ++y)
      if ((s >> pair_index(x, y, n)) & 1U) gens.emplace_back(to_vec(k, x, n), to_vec(k, y, n));
  return SigmaRelation<FiniteField>::generated(k, n, 0, gens);
}

inline bool has(PairSet s, unsigned x, unsigned y, std::size_t n) { return (s >> pair_index(x, y, n)) & 1U; }

inline PairSet compose(PairSet b2, PairSet b1, std::size_t n) {
  PairSet out = 0;
  const unsigned q = 1U << n;
  for (unsigned x = 0; x < q; ++x)
    for (unsigned z = 0; z < q; ++z)
      for (unsigned y = 0; y < q; ++y)
        if (has(b1, x, y, n) && has(b2, y, z, n)) {
          out |= PairSet{1} << pair_index(x, z, n);
          break;
        }
  return out;
}

inline PairSet converse(PairSet b, std::size_t n) {
  PairSet out = 0;
  const unsigned q = 1U << n;
  for (unsigned x = 0; x < q; ++x)
    for (unsigned y = 0; y < q; ++y)
      if (has(b, x, y, n)) out |= PairSet{1} << pair_index(y, x, n);
  return out;
}

/// {x : x -> y for some y in target}.
inline VecSet preimage(PairSet b, VecSet target, std::size_t n) {
  VecSet out = 0;
  const unsigned q = 1U << n;
  for (unsigned x = 0; x < q; ++x)
    for (unsigned y = 0; y < q; ++y)
      if (((target >> y) & 1U) && has(b, x, y, n)) out |= VecSet{1} << x;
  return out;
}

inline VecSet image(PairSet b, VecSet source, std::size_t n) {
  VecSet out = 0;
  const unsigned q = 1U << n;
  for (unsigned x = 0; x < q; ++x)
    for (unsigned y = 0; y < q; ++y)
      if (((source >> x) & 1U) && has(b, x, y, n)) out |= VecSet{1} << y;
  return out;
}

inline VecSet everything(std::size_t n) { return n >= 6 ? ~VecSet{0} : (VecSet{1} << (1U << n)) - 1; }

inline Parts parts(PairSet b, std::size_t n) {
  return {preimage(b, everything(n), n), preimage(b, 1, n), image(b, everything(n), n), image(b, 1, n)};
}

/// Iterates the four chains until each repeats.
inline Parts stable_parts(PairSet b, std::size_t n) {
  Parts p{everything(n), 1, everything(n), 1};
  while (true) {
    Parts next{preimage(b, p.dom, n), preimage(b, p.ker, n), image(b, p.im, n), image(b, p.indet, n)};
    if (next == p) return p;
    p = next;
  }
}

/// All subspaces of F2^dim (dim <= 6), as member bitmasks.
inline std::vector<PairSet> all_subspaces(std::size_t dim) {
  const unsigned q = 1U << dim;
  std::set<PairSet> seen{1};
  std::vector<PairSet> todo{1}, out;
  while (!todo.empty()) {
    const PairSet s = todo.back();
    todo.pop_back();
    out.push_back(s);
    for (unsigned v = 1; v < q; ++v) {
      if ((s >> v) & 1U) continue;
      PairSet t = s;
      for (unsigned u = 0; u < q; ++u)
        if ((s >> u) & 1U) t |= PairSet{1} << (u ^ v);
      if (seen.insert(t).second) todo.push_back(t);
    }
  }
  return out;
}

/// Compares compose, converse, parts and stable_parts with the exhaustive
/// versions. Every relation is checked for dims 1..3; composition runs over
/// all pairs for dims 1..2 and over pair_samples random pairs for dim 3.
inline std::size_t oracle_discrepancies(std::size_t pair_samples, std::uint64_t seed,
                                        std::vector<std::string>* notes = nullptr) {
  const FiniteField k(2, 1);
  std::size_t bad = 0;
  auto report = [&](const std::string& what) {
    ++bad;
    if (notes && notes->size() < 8) notes->push_back(what);
  };
  auto parts_of = [&](const SigmaRelation<FiniteField>& r) {
    const auto p = gpmod::parts(k, r);
    return Parts{members(k, p.dom), members(k, p.ker), members(k, p.im), members(k, p.indet)};
  };
  auto stable_of = [&](const SigmaRelation<FiniteField>& r) {
    const auto p = gpmod::stable_parts(k, r);
    return Parts{members(k, p.dom), members(k, p.ker), members(k, p.im), members(k, p.indet)};
  };
  std::mt19937_64 rng(seed);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto all = all_subspaces(2 * n);
    std::vector<SigmaRelation<FiniteField>> rels;
    for (PairSet s : all) {
      rels.push_back(relation_of(k, s, n));
      const auto& r = rels.back();
      const std::string tag = " (n=" + std::to_string(n) + ", set " + std::to_string(s) + ")";
      if (pairs_of(k, r) != s) report("round trip" + tag);
      if (pairs_of(k, gpmod::converse(k, r)) != converse(s, n)) report("converse" + tag);
      if (parts_of(r) != parts(s, n)) report("parts" + tag);
      if (stable_of(r) != stable_parts(s, n)) report("stable_parts" + tag);
    }
    auto check = [&](std::size_t i, std::size_t j) {
      if (pairs_of(k, gpmod::compose(k, rels[i], rels[j])) != compose(all[i], all[j], n))
        report("compose (n=" + std::to_string(n) + ", sets " + std::to_string(all[i]) + ", " + std::to_string(all[j]) + ")");
    };
    if (n <= 2) {
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) check(i, j);
    } else {
      for (std::size_t t = 0; t < pair_samples; ++t) check(rng() % all.size(), rng() % all.size());
    }
  }
  return bad;
}

}  // namespace bf
