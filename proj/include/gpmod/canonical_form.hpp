#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "gpmod/linalg.hpp"

namespace gpmod {

/// Little-endian polynomial over K with no trailing zeros.
template <class K>
using Poly = std::vector<typename K::value_type>;

namespace poly {

template <class K>
void trim(const K& k, Poly<K>& a) {
  while (!a.empty() && k.is_zero(a.back())) a.pop_back();
}

template <class K>
long degree(const Poly<K>& a) {
  return static_cast<long>(a.size()) - 1;
}

template <class K>
Poly<K> add(const K& k, Poly<K> a, const Poly<K>& b) {
  if (a.size() < b.size()) a.resize(b.size(), k.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = k.add(a[i], b[i]);
  trim(k, a);
  return a;
}

template <class K>
Poly<K> sub(const K& k, Poly<K> a, const Poly<K>& b) {
  if (a.size() < b.size()) a.resize(b.size(), k.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = k.sub(a[i], b[i]);
  trim(k, a);
  return a;
}

template <class K>
Poly<K> mul(const K& k, const Poly<K>& a, const Poly<K>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<K> r(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (k.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  }
  trim(k, r);
  return r;
}

template <class K>
std::pair<Poly<K>, Poly<K>> divmod(const K& k, Poly<K> a, const Poly<K>& b) {
  if (b.empty()) throw domain_error("polynomial division by zero");
  trim(k, a);
  if (a.size() < b.size()) return {{}, a};
  Poly<K> q(a.size() - b.size() + 1, k.zero());
  const auto lead_inv = k.inv(b.back());
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const auto c = k.mul(a.back(), lead_inv);
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = k.sub(a[shift + i], k.mul(c, b[i]));
    a.pop_back();
    trim(k, a);
  }
  trim(k, q);
  return {q, a};
}

template <class K>
Poly<K> monic(const K& k, Poly<K> a) {
  if (a.empty()) return a;
  const auto inv = k.inv(a.back());
  for (auto& c : a) c = k.mul(c, inv);
  return a;
}

template <class K>
Poly<K> gcd(const K& k, Poly<K> a, Poly<K> b) {
  while (!b.empty()) {
    auto r = divmod(k, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(k, a);
}

template <class K>
bool is_one(const K& k, const Poly<K>& a) {
  return a.size() == 1 && a[0] == k.one();
}

}  // namespace poly

/// Invariant factors f_1 | f_2 | ... (monic, nonconstant) of a square matrix,
/// from the Smith form of xI - A over K[x].
template <class K>
std::vector<Poly<K>> invariant_factors(const K& k, const Matrix<K>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw domain_error("invariant_factors needs a square matrix");
  std::vector<std::vector<Poly<K>>> m(n, std::vector<Poly<K>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Poly<K> p{k.neg(a(i, j))};
      if (i == j) p.push_back(k.one());
      poly::trim(k, p);
      m[i][j] = p;
    }
  std::vector<Poly<K>> diag;
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // Smallest-degree nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = n, pj = n;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (!m[i][j].empty() && (pi == n || m[i][j].size() < m[pi][pj].size())) {
            pi = i;
            pj = j;
          }
      if (pi == n) break;
      std::swap(m[t], m[pi]);
      for (auto& row : m) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (m[i][t].empty()) continue;
        auto q = poly::divmod(k, m[i][t], m[t][t]).first;
        for (std::size_t j = t; j < n; ++j) m[i][j] = poly::sub(k, m[i][j], poly::mul(k, q, m[t][j]));
        if (!m[i][t].empty()) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (m[t][j].empty()) continue;
        auto q = poly::divmod(k, m[t][j], m[t][t]).first;
        for (std::size_t i = t; i < n; ++i) m[i][j] = poly::sub(k, m[i][j], poly::mul(k, q, m[i][t]));
        if (!m[t][j].empty()) clean = false;
      }
      if (!clean) continue;
      // The pivot must divide every remaining entry.
      std::size_t bad = n;
      for (std::size_t i = t + 1; i < n && bad == n; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!poly::divmod(k, m[i][j], m[t][t]).second.empty()) {
            bad = i;
            break;
          }
      if (bad == n) break;
      for (std::size_t j = t; j < n; ++j) m[t][j] = poly::add(k, m[t][j], m[bad][j]);
    }
    diag.push_back(poly::monic(k, m[t][t]));
  }
  std::vector<Poly<K>> out;
  for (auto& d : diag)
    if (!d.empty() && !poly::is_one(k, d)) out.push_back(d);
  std::sort(out.begin(), out.end(), [](const Poly<K>& x, const Poly<K>& y) { return x.size() < y.size(); });
  return out;
}

template <class K>
Matrix<K> companion(const K& k, const Poly<K>& f) {
  const std::size_t d = f.size() - 1;
  Matrix<K> c = zero_matrix(k, d, d);
  for (std::size_t i = 1; i < d; ++i) c(i, i - 1) = k.one();
  for (std::size_t i = 0; i < d; ++i) c(i, d - 1) = k.neg(f[i]);
  return c;
}

/// Block-diagonal companion form of the invariant factors.
template <class K>
Matrix<K> rational_canonical_form(const K& k, const Matrix<K>& a) {
  Matrix<K> r(0, 0);
  for (const auto& f : invariant_factors(k, a)) r = block_diag(k, r, companion(k, f));
  return r;
}

/// Irreducible factorization of a monic polynomial by trial division over a
/// finite field. nullopt when the search would exceed the budget.
template <class K>
std::optional<std::vector<std::pair<Poly<K>, int>>> factor_by_trial(const K& k, Poly<K> f,
                                                                     std::uint64_t budget = 1u << 20) {
  if constexpr (!requires { k.element(std::uint64_t{0}); }) {
    return std::nullopt;
  } else {
  std::vector<std::pair<Poly<K>, int>> out;
  const std::uint64_t q = k.size();
  for (long d = 1; 2 * d <= poly::degree<K>(f); ++d) {
    std::uint64_t count = 1;
    for (long i = 0; i < d; ++i) {
      if (count > budget / q) return std::nullopt;
      count *= q;
    }
    for (std::uint64_t idx = 0; idx < count && 2 * d <= poly::degree<K>(f); ++idx) {
      Poly<K> g(d + 1, k.zero());
      std::uint64_t t = idx;
      for (long i = 0; i < d; ++i) {
        g[i] = k.element(t % q);
        t /= q;
      }
      g[d] = k.one();
      int mult = 0;
      while (true) {
        auto [quo, rem] = poly::divmod(k, f, g);
        if (!rem.empty()) break;
        f = quo;
        ++mult;
      }
      if (mult) out.emplace_back(g, mult);
    }
  }
  if (poly::degree<K>(f) >= 1) out.emplace_back(poly::monic(k, f), 1);
  return out;
  }
}

/// Elementary divisors (prime-power factors of the invariant factors), or
/// nullopt when they cannot be computed.
template <class K>
std::optional<std::vector<Poly<K>>> elementary_divisors(const K& k, const Matrix<K>& a) {
  std::vector<Poly<K>> out;
  for (const auto& f : invariant_factors(k, a)) {
    std::optional<std::vector<std::pair<Poly<K>, int>>> fac;
    if (f.size() == 2) fac = std::vector<std::pair<Poly<K>, int>>{{f, 1}};
    else fac = factor_by_trial(k, f);
    if (!fac) return std::nullopt;
    for (const auto& [g, e] : *fac) {
      Poly<K> p{k.one()};
      for (int i = 0; i < e; ++i) p = poly::mul(k, p, g);
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace gpmod
