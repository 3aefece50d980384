#pragma once

// Small quivers shared by the tests.

#include "gpmod/quiver.hpp"
#include "gpmod/repn.hpp"

namespace fixtures {

using gpmod::Label;
using gpmod::Letter;
using gpmod::Quiver;

inline Quiver string_quiver() {
  return {{1, 2, 3, 4, 5, 6},
          {{1, 2, Label::F}, {2, 3, Label::F}, {4, 3, Label::V}, {4, 5, Label::F}, {6, 5, Label::V}}};
}

inline Quiver band_quiver() {
  return {{1, 2, 3, 4, 5},
          {{1, 5, Label::F}, {4, 5, Label::V}, {3, 4, Label::V}, {3, 2, Label::F}, {1, 2, Label::V}}};
}

inline gpmod::ConverseGraph string_converse() {
  return {{1, 2, 3, 4, 5, 6},
          {{1, 2, Letter::F}, {2, 3, Letter::F}, {3, 4, Letter::Vs}, {4, 5, Letter::F}, {5, 6, Letter::Vs}}};
}

inline gpmod::ConverseGraph band_converse() {
  return {{1, 2, 3, 4, 5},
          {{1, 5, Letter::F}, {5, 4, Letter::Vs}, {4, 3, Letter::Vs}, {3, 2, Letter::F}, {2, 1, Letter::Vs}}};
}

inline Quiver non_kraft_quiver() {
  return {{1, 2, 3, 4},
          {{1, 2, Label::F}, {3, 2, Label::V}, {4, 3, Label::V}, {4, 1, Label::F}, {4, 4, Label::F}}};
}

/// Circular quivers with and without repetitions.
inline Quiver nonagon() {
  return {{1, 2, 3, 4, 5, 6, 7, 8, 9},
          {{1, 2, Label::F}, {2, 3, Label::F}, {4, 3, Label::V}, {4, 5, Label::F}, {5, 6, Label::F},
           {7, 6, Label::V}, {7, 8, Label::F}, {8, 9, Label::F}, {1, 9, Label::V}}};
}

inline Quiver triangle() { return {{1, 2, 3}, {{1, 2, Label::F}, {2, 3, Label::F}, {1, 3, Label::V}}}; }

inline Quiver square() {
  return {{1, 2, 3, 4}, {{1, 2, Label::F}, {2, 3, Label::F}, {3, 4, Label::F}, {4, 1, Label::F}}};
}

inline Quiver loop() { return {{1}, {{1, 1, Label::F}}}; }

/// First-kind words of tree_module().
inline std::vector<std::string> tree_words() {
  return {"", "F", "V#", "FF", "V#F", "V#V#", "V#FF", "V#FV#", "V#V#V#"};
}

/// A module whose first-kind words form a nine-word tree: the sum of the
/// linear modules of its maximal words and of F^2.
template <class K>
gpmod::GPModule<K> tree_module(const K& k) {
  auto m = gpmod::module_of(k, gpmod::trivial_rep(k, gpmod::quiver_of_word(gpmod::Word::parse("FF")))).module;
  for (const char* w : {"V#FF", "V#FV#", "V#V#V#"})
    m = gpmod::direct_sum(k, m, gpmod::module_of(k, gpmod::trivial_rep(k, gpmod::quiver_of_word(gpmod::Word::parse(w)))).module);
  return m;
}

template <class K>
gpmod::GPModule<K> trivial_module(const K& k, const Quiver& g, std::size_t d = 1) {
  return gpmod::module_of(k, gpmod::trivial_rep(k, g, d)).module;
}

template <class K>
gpmod::GPModule<K> word_module(const K& k, const std::string& w, std::size_t d = 1) {
  return trivial_module(k, gpmod::quiver_of_word(gpmod::Word::parse(w)), d);
}

template <class K>
gpmod::GPModule<K> periodic_module(const K& k, const std::string& p, std::size_t m, std::size_t d = 1) {
  return trivial_module(k, gpmod::quiver_of_periodic(gpmod::PeriodicWord(gpmod::Word::parse(p)), m), d);
}

}  // namespace fixtures
