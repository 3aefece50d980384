#pragma once

#include <initializer_list>
#include <vector>

#include "gpmod/linalg.hpp"

namespace testutil {

template <class K>
gpmod::Matrix<K> mat(const K& k, std::initializer_list<std::initializer_list<long long>> rows) {
  const std::size_t c = rows.size() ? rows.begin()->size() : 0;
  gpmod::Matrix<K> m(rows.size(), c);
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long long v : r) m(i, j++) = k.from_int(v);
    ++i;
  }
  return m;
}

template <class K>
gpmod::Vec<K> vec(const K& k, std::initializer_list<long long> xs) {
  gpmod::Vec<K> v;
  for (long long x : xs) v.push_back(k.from_int(x));
  return v;
}

/// Every vector of F_q^n, in index order.
inline std::vector<gpmod::Vec<gpmod::FiniteField>> all_vectors(const gpmod::FiniteField& k, std::size_t n) {
  std::vector<gpmod::Vec<gpmod::FiniteField>> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= k.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    gpmod::Vec<gpmod::FiniteField> v(n);
    std::size_t t = idx;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = k.element(t % k.size());
      t /= k.size();
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace testutil
