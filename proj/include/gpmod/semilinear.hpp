#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpmod/linalg.hpp"

namespace gpmod {

/// x -> matrix * sigma^twist(x).
template <class K>
struct SemilinearMap {
  Matrix<K> matrix;
  long long twist = 0;

  std::size_t dim() const { return matrix.cols(); }
  Vec<K> operator()(const K& k, const Vec<K>& x) const { return apply_semilinear(k, matrix, twist, x); }
};

/// A sigma^e-linear relation on K^n.
///
/// The stored subspace of K^{2n} is {(x, sigma^{-e}(y)) : (x, y) in B}, which
/// is closed under ordinary K-scaling.
template <class K>
class SigmaRelation {
 public:
  SigmaRelation() = default;
  SigmaRelation(std::size_t n, long long twist, Subspace<K> stored)
      : n_(n), twist_(twist), stored_(std::move(stored)) {
    if (stored_.ambient_dim() != 2 * n_) throw domain_error("stored relation space has the wrong ambient dimension");
  }

  /// Relation generated by twisted pairs (x, y).
  static SigmaRelation generated(const K& k, std::size_t n, long long twist,
                                 const std::vector<std::pair<Vec<K>, Vec<K>>>& pairs) {
    Matrix<K> m(0, 2 * n);
    for (const auto& [x, y] : pairs) {
      if (x.size() != n || y.size() != n) throw domain_error("generator pair has the wrong length");
      m.append_row(concat<K>(x, sigma_vec(k, y, -twist)));
    }
    return SigmaRelation(n, twist, Subspace<K>::span(k, 2 * n, m));
  }

  std::size_t ambient_dim() const { return n_; }
  long long twist() const { return twist_; }
  const Subspace<K>& stored() const { return stored_; }

  bool contains_pair(const K& k, const Vec<K>& x, const Vec<K>& y) const {
    return contains_vec(k, stored_, concat<K>(x, sigma_vec(k, y, -twist_)));
  }

  /// Twisted generator pairs: one per stored basis vector.
  std::vector<std::pair<Vec<K>, Vec<K>>> generators(const K& k) const {
    std::vector<std::pair<Vec<K>, Vec<K>>> out;
    for (std::size_t i = 0; i < stored_.dim(); ++i) {
      auto [x, u] = split(stored_.basis().row(i));
      out.emplace_back(std::move(x), sigma_vec(k, u, twist_));
    }
    return out;
  }

  std::pair<Vec<K>, Vec<K>> split(const Vec<K>& v) const {
    return {Vec<K>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n_)),
            Vec<K>(v.begin() + static_cast<std::ptrdiff_t>(n_), v.end())};
  }

  bool operator==(const SigmaRelation& o) const {
    return n_ == o.n_ && twist_ == o.twist_ && stored_ == o.stored_;
  }

 private:
  std::size_t n_ = 0;
  long long twist_ = 0;
  Subspace<K> stored_;
};

template <class K>
struct RelationParts {
  Subspace<K> dom, ker, im, indet;
};

namespace detail {

template <class K>
Matrix<K> block_of(const Subspace<K>& s, std::size_t n, bool second) {
  Matrix<K> m(s.dim(), n);
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = s.basis()(i, second ? n + j : j);
  return m;
}

template <class K>
Subspace<K> project(const K& k, const Subspace<K>& s, std::size_t n, bool second) {
  return Subspace<K>::span(k, n, block_of(s, n, second));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors

template <class K>
SigmaRelation<K> graph_of(const K& k, const SemilinearMap<K>& f) {
  const std::size_t n = f.matrix.cols();
  if (f.matrix.rows() != n) throw domain_error("graph_of needs a square matrix");
  const Matrix<K> a = sigma_mat(k, f.matrix, -f.twist);
  Matrix<K> m = zero_matrix(k, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = k.one();
    for (std::size_t j = 0; j < n; ++j) m(i, n + j) = a(j, i);
  }
  return SigmaRelation<K>(n, f.twist, Subspace<K>::span(k, 2 * n, m));
}

template <class K>
SigmaRelation<K> theta(const K& k, const Subspace<K>& s, long long twist = 0) {
  const std::size_t n = s.ambient_dim();
  return SigmaRelation<K>(n, twist, direct_sum_space(k, s, Subspace<K>::zero(n)));
}

template <class K>
SigmaRelation<K> one(const K& k, std::size_t n) {
  return graph_of(k, SemilinearMap<K>{identity(k, n), 0});
}

template <class K>
SigmaRelation<K> zero(std::size_t n, long long twist = 0) {
  return SigmaRelation<K>(n, twist, Subspace<K>::zero(2 * n));
}

enum class CanonicalKind { T, T_plus, plus_T, plus_T_plus };

/// T(n) is generated by (e_i, e_{i+1}); the '+' variants add (e_n, 0) on the
/// right and (0, e_1) on the left.
template <class K>
SigmaRelation<K> canonical_relation(const K& k, CanonicalKind kind, std::size_t n, long long twist = 1) {
  if (n == 0) throw domain_error("canonical relations need n >= 1");
  std::vector<std::pair<Vec<K>, Vec<K>>> gens;
  for (std::size_t i = 0; i + 1 < n; ++i) gens.emplace_back(unit_vec(k, n, i), unit_vec(k, n, i + 1));
  if (kind == CanonicalKind::T_plus || kind == CanonicalKind::plus_T_plus)
    gens.emplace_back(unit_vec(k, n, n - 1), zero_vec(k, n));
  if (kind == CanonicalKind::plus_T || kind == CanonicalKind::plus_T_plus)
    gens.emplace_back(zero_vec(k, n), unit_vec(k, n, 0));
  return SigmaRelation<K>::generated(k, n, twist, gens);
}

// ---------------------------------------------------------------------------
// Algebra

/// B2 after B1: (x, z) with x ->B1 y ->B2 z for some y.
template <class K>
SigmaRelation<K> compose(const K& k, const SigmaRelation<K>& b2, const SigmaRelation<K>& b1) {
  const std::size_t n = b1.ambient_dim();
  if (b2.ambient_dim() != n) throw domain_error("compose: ambient dimension mismatch");
  const auto& s1 = b1.stored();
  const Subspace<K> s2 = sigma_subspace(k, b2.stored(), -b1.twist());
  const std::size_t r1 = s1.dim(), r2 = s2.dim();
  const long long tw = b1.twist() + b2.twist();
  if (r1 + r2 == 0) return zero<K>(n, tw);
  // Pairs (a, b) with a*U1 = b*Y2 form the left kernel of [U1; -Y2].
  Matrix<K> mid(r1 + r2, n);
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < n; ++j) mid(i, j) = s1.basis()(i, n + j);
  for (std::size_t i = 0; i < r2; ++i)
    for (std::size_t j = 0; j < n; ++j) mid(r1 + i, j) = k.neg(s2.basis()(i, j));
  const Matrix<K> ab = nullspace_rows(k, transpose(mid));
  Matrix<K> out(0, 2 * n);
  for (std::size_t t = 0; t < ab.rows(); ++t) {
    Vec<K> v(2 * n, k.zero());
    for (std::size_t i = 0; i < r1; ++i) {
      const auto& c = ab(t, i);
      if (k.is_zero(c)) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] = k.add(v[j], k.mul(c, s1.basis()(i, j)));
    }
    for (std::size_t i = 0; i < r2; ++i) {
      const auto& c = ab(t, r1 + i);
      if (k.is_zero(c)) continue;
      for (std::size_t j = 0; j < n; ++j) v[n + j] = k.add(v[n + j], k.mul(c, s2.basis()(i, n + j)));
    }
    out.append_row(v);
  }
  return SigmaRelation<K>(n, tw, Subspace<K>::span(k, 2 * n, out));
}

template <class K>
SigmaRelation<K> converse(const K& k, const SigmaRelation<K>& b) {
  const std::size_t n = b.ambient_dim();
  Matrix<K> m(b.stored().dim(), 2 * n);
  for (std::size_t i = 0; i < b.stored().dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = k.sigma(b.stored().basis()(i, n + j), b.twist());
      m(i, n + j) = k.sigma(b.stored().basis()(i, j), b.twist());
    }
  return SigmaRelation<K>(n, -b.twist(), Subspace<K>::span(k, 2 * n, m));
}

template <class K>
RelationParts<K> parts(const K& k, const SigmaRelation<K>& b) {
  const std::size_t n = b.ambient_dim();
  const auto& s = b.stored();
  const auto full = Subspace<K>::full(k, n);
  const auto none = Subspace<K>::zero(n);
  RelationParts<K> p;
  p.dom = detail::project(k, s, n, false);
  p.ker = detail::project(k, intersect(k, s, direct_sum_space(k, full, none)), n, false);
  p.im = sigma_subspace(k, detail::project(k, s, n, true), b.twist());
  p.indet = sigma_subspace(k, detail::project(k, intersect(k, s, direct_sum_space(k, none, full)), n, true), b.twist());
  return p;
}

template <class K>
bool is_null(const K& k, const SigmaRelation<K>& b) {
  const auto p = parts(k, b);
  return p.ker == p.dom;
}

/// B(N) = {y : x ->B y for some x in N}.
template <class K>
Subspace<K> image_of(const K& k, const SigmaRelation<K>& b, const Subspace<K>& s) {
  const std::size_t n = b.ambient_dim();
  const auto cut = intersect(k, b.stored(), direct_sum_space(k, s, Subspace<K>::full(k, n)));
  return sigma_subspace(k, detail::project(k, cut, n, true), b.twist());
}

/// B^{-1}(N) = {x : x ->B y for some y in N}.
template <class K>
Subspace<K> preimage_of(const K& k, const SigmaRelation<K>& b, const Subspace<K>& s) {
  const std::size_t n = b.ambient_dim();
  const auto cut = intersect(k, b.stored(), direct_sum_space(k, Subspace<K>::full(k, n), sigma_subspace(k, s, -b.twist())));
  return detail::project(k, cut, n, false);
}

/// B intersected with N (+) N.
template <class K>
SigmaRelation<K> restrict(const K& k, const SigmaRelation<K>& b, const Subspace<K>& s) {
  const auto box = direct_sum_space(k, s, sigma_subspace(k, s, -b.twist()));
  return SigmaRelation<K>(b.ambient_dim(), b.twist(), intersect(k, b.stored(), box));
}

/// Relation on K^{n1+n2}; both inputs must carry the same twist.
template <class K>
SigmaRelation<K> direct_sum(const K& k, const SigmaRelation<K>& b1, const SigmaRelation<K>& b2) {
  if (b1.twist() != b2.twist()) throw domain_error("direct_sum: twist mismatch");
  const std::size_t n1 = b1.ambient_dim(), n2 = b2.ambient_dim(), n = n1 + n2;
  Matrix<K> m(0, 2 * n);
  for (std::size_t i = 0; i < b1.stored().dim(); ++i) {
    Vec<K> v(2 * n, k.zero());
    for (std::size_t j = 0; j < n1; ++j) {
      v[j] = b1.stored().basis()(i, j);
      v[n + j] = b1.stored().basis()(i, n1 + j);
    }
    m.append_row(v);
  }
  for (std::size_t i = 0; i < b2.stored().dim(); ++i) {
    Vec<K> v(2 * n, k.zero());
    for (std::size_t j = 0; j < n2; ++j) {
      v[n1 + j] = b2.stored().basis()(i, j);
      v[n + n1 + j] = b2.stored().basis()(i, n2 + j);
    }
    m.append_row(v);
  }
  return SigmaRelation<K>(n, b1.twist(), Subspace<K>::span(k, 2 * n, m));
}

/// Relation contained in another one (as sets of pairs).
template <class K>
bool relation_contains(const K& k, const SigmaRelation<K>& big, const SigmaRelation<K>& small) {
  if (big.ambient_dim() != small.ambient_dim()) return false;
  for (const auto& [x, y] : small.generators(k))
    if (!big.contains_pair(k, x, y)) return false;
  return true;
}

/// Some y with x ->B y and y in w.
template <class K>
std::optional<Vec<K>> find_image_in(const K& k, const SigmaRelation<K>& b, const Vec<K>& x, const Subspace<K>& w) {
  const std::size_t n = b.ambient_dim();
  const auto& s = b.stored();
  if (s.dim() == 0) {
    if (is_zero_vec(k, x)) return zero_vec(k, n);
    return std::nullopt;
  }
  const Matrix<K> xs = detail::block_of(s, n, false);
  const Matrix<K> us = detail::block_of(s, n, true);
  const Matrix<K> c = annihilator(k, sigma_subspace(k, w, -b.twist()));
  const Matrix<K> uc = c.rows() ? mat_mul(k, us, transpose(c)) : Matrix<K>(s.dim(), 0);
  Matrix<K> sys(s.dim(), n + uc.cols());
  Vec<K> rhs(n + uc.cols(), k.zero());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    for (std::size_t j = 0; j < n; ++j) sys(i, j) = xs(i, j);
    for (std::size_t j = 0; j < uc.cols(); ++j) sys(i, n + j) = uc(i, j);
  }
  for (std::size_t j = 0; j < n; ++j) rhs[j] = x[j];
  auto a = solve_left(k, sys, rhs);
  if (!a) return std::nullopt;
  Vec<K> u(n, k.zero());
  for (std::size_t i = 0; i < s.dim(); ++i) vaxpy(k, u, (*a)[i], us.row(i));
  return sigma_vec(k, u, b.twist());
}

/// Some y with x ->B1 y ->B2 z.
template <class K>
std::optional<Vec<K>> find_middle(const K& k, const SigmaRelation<K>& b1, const SigmaRelation<K>& b2, const Vec<K>& x,
                                  const Vec<K>& z) {
  const std::size_t n = b1.ambient_dim();
  const auto& s1 = b1.stored();
  const Subspace<K> s2 = sigma_subspace(k, b2.stored(), -b1.twist());
  const std::size_t r1 = s1.dim(), r2 = s2.dim();
  Matrix<K> sys = zero_matrix(k, r1 + r2, 3 * n);
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      sys(i, j) = s1.basis()(i, j);
      sys(i, n + j) = s1.basis()(i, n + j);
    }
  for (std::size_t i = 0; i < r2; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      sys(r1 + i, n + j) = k.neg(s2.basis()(i, j));
      sys(r1 + i, 2 * n + j) = s2.basis()(i, n + j);
    }
  Vec<K> rhs(3 * n, k.zero());
  const Vec<K> zt = sigma_vec(k, z, -b1.twist() - b2.twist());
  for (std::size_t j = 0; j < n; ++j) {
    rhs[j] = x[j];
    rhs[2 * n + j] = zt[j];
  }
  if (r1 + r2 == 0) {
    if (is_zero_vec(k, rhs)) return zero_vec(k, n);
    return std::nullopt;
  }
  auto a = solve_left(k, sys, rhs);
  if (!a) return std::nullopt;
  const Matrix<K> u1 = detail::block_of(s1, n, true);
  Vec<K> u(n, k.zero());
  for (std::size_t i = 0; i < r1; ++i) vaxpy(k, u, (*a)[i], u1.row(i));
  return sigma_vec(k, u, b1.twist());
}

// ---------------------------------------------------------------------------
// Stable subspaces

template <class K>
struct StableParts {
  Subspace<K> dom, ker, im, indet;
  /// kers[j] = Ker(B^j) for j = 0 .. index where the chain stops growing.
  std::vector<Subspace<K>> kers;
};

/// Iterates Dom(B^{j+1}) = B^{-1}(Dom B^j), Ker(B^{j+1}) = B^{-1}(Ker B^j),
/// Im(B^{j+1}) = B(Im B^j), Indet(B^{j+1}) = B(Indet B^j).
template <class K>
StableParts<K> stable_parts(const K& k, const SigmaRelation<K>& b) {
  const std::size_t n = b.ambient_dim();
  StableParts<K> sp;
  sp.dom = Subspace<K>::full(k, n);
  sp.im = sp.dom;
  sp.ker = Subspace<K>::zero(n);
  sp.indet = sp.ker;
  sp.kers.push_back(sp.ker);
  bool dom_done = false, im_done = false, ker_done = false, indet_done = false;
  for (std::size_t it = 0; it <= n + 1; ++it) {
    if (dom_done && im_done && ker_done && indet_done) return sp;
    check_internal(it <= n, "stable_parts: chains did not stabilize within n+1 steps");
    if (!dom_done) {
      auto next = preimage_of(k, b, sp.dom);
      check_internal(contains(k, sp.dom, next), "stable_parts: domain chain not descending");
      dom_done = next == sp.dom;
      sp.dom = std::move(next);
    }
    if (!im_done) {
      auto next = image_of(k, b, sp.im);
      check_internal(contains(k, sp.im, next), "stable_parts: image chain not descending");
      im_done = next == sp.im;
      sp.im = std::move(next);
    }
    if (!ker_done) {
      auto next = preimage_of(k, b, sp.ker);
      check_internal(contains(k, next, sp.ker), "stable_parts: kernel chain not ascending");
      ker_done = next == sp.ker;
      if (!ker_done) sp.kers.push_back(next);
      sp.ker = std::move(next);
    }
    if (!indet_done) {
      auto next = image_of(k, b, sp.indet);
      check_internal(contains(k, next, sp.indet), "stable_parts: indeterminacy chain not ascending");
      indet_done = next == sp.indet;
      sp.indet = std::move(next);
    }
  }
  return sp;
}

/// Dom-inf meet Indet(B) lies in Ker-inf, and Im-inf meet Ker(B) lies in Indet-inf.
template <class K>
bool stable_kernel_indet_check(const K& k, const SigmaRelation<K>& b) {
  const auto p = parts(k, b);
  const auto sp = stable_parts(k, b);
  return contains(k, sp.ker, intersect(k, sp.dom, p.indet)) && contains(k, sp.indet, intersect(k, sp.im, p.ker));
}

// ---------------------------------------------------------------------------
// Weak decomposition

template <class K>
struct WeakDecomposition {
  Subspace<K> s;
  std::vector<Vec<K>> basis;  // basis of s in which t is expressed
  SemilinearMap<K> t;         // t(sum a_i s_i) = sum (T sigma^e(a))_i s_i
  Subspace<K> n;              // Ker-inf + Indet-inf
  StableParts<K> stable;
};

/// Splits off the stable non-null part of B: B restricted to S is the graph
/// of a sigma^e-linear automorphism T, and Dom-inf = S (+) Ker-inf.
template <class K>
WeakDecomposition<K> weak_decomposition(const K& k, const SigmaRelation<K>& b) {
  const std::size_t n = b.ambient_dim();
  const long long e = b.twist();
  WeakDecomposition<K> wd;
  wd.stable = stable_parts(k, b);
  const auto& dom = wd.stable.dom;
  const auto& ker = wd.stable.ker;
  const auto indet = parts(k, b).indet;
  const auto dom_plus_indet = sum(k, dom, indet);
  wd.n = sum(k, ker, wd.stable.indet);

  for (std::size_t i = 0; i < dom.dim(); ++i)
    if (!find_image_in(k, b, dom.basis().row(i), dom_plus_indet))
      throw domain_error("weak decomposition hypothesis fails: B(Dom-inf) is not inside Dom-inf + Indet(B)");

  const Quotient<K> q(k, dom, ker);
  const std::size_t d = q.dim();
  Matrix<K> tbar = zero_matrix(k, d, d);
  std::vector<Vec<K>> z0(d);
  Matrix<K> dom_ind(0, n);
  for (std::size_t i = 0; i < dom.dim(); ++i) dom_ind.append_row(dom.basis().row(i));
  for (std::size_t i = 0; i < indet.dim(); ++i) dom_ind.append_row(indet.basis().row(i));

  // Step 1: the induced automorphism on Dom-inf / Ker-inf.
  for (std::size_t i = 0; i < d; ++i) {
    auto y = find_image_in(k, b, q.rep(i), dom_plus_indet);
    check_internal(y.has_value(), "weak decomposition: representative has no image");
    auto coef = solve_left(k, dom_ind, *y);
    check_internal(coef.has_value(), "weak decomposition: image outside Dom-inf + Indet");
    Vec<K> x1(n, k.zero());
    for (std::size_t r = 0; r < dom.dim(); ++r) vaxpy(k, x1, (*coef)[r], dom.basis().row(r));
    const Vec<K> col = q.coords(k, x1);
    for (std::size_t r = 0; r < d; ++r) tbar(r, i) = col[r];
    z0[i] = vsub(k, x1, q.lift(k, col));
  }
  const auto tinv = inverse(k, tbar);
  check_internal(tinv.has_value() || d == 0, "weak decomposition: induced map is not invertible");

  // Step 2: chains z_i -> z_i^1 -> ... -> 0 inside the kernel filtration.
  const std::size_t m = wd.stable.kers.size() - 1;
  std::vector<std::vector<Vec<K>>> delta(m, std::vector<Vec<K>>(d));
  for (std::size_t i = 0; i < d; ++i) {
    Vec<K> z = z0[i];
    check_internal(contains_vec(k, ker, z), "weak decomposition: correction outside Ker-inf");
    for (std::size_t j = 0; j < m; ++j) {
      delta[j][i] = z;
      auto next = find_image_in(k, b, z, wd.stable.kers[m - j - 1]);
      check_internal(next.has_value(), "weak decomposition: kernel chain broken");
      z = *next;
    }
    check_internal(is_zero_vec(k, z), "weak decomposition: chain does not reach zero");
  }

  // Step 3: S = (iota + f)(Dom-inf / Ker-inf), f = sum_j delta_j T^{-j-1}.
  for (std::size_t c = 0; c < d; ++c) {
    Vec<K> s = q.rep(c);
    Vec<K> a = unit_vec(k, d, c);
    for (std::size_t j = 0; j < m; ++j) {
      a = sigma_vec(k, mat_vec(k, *tinv, a), -e);
      const long long tw = static_cast<long long>(j + 1) * e;
      for (std::size_t i = 0; i < d; ++i) vaxpy(k, s, k.sigma(a[i], tw), delta[j][i]);
    }
    wd.basis.push_back(std::move(s));
  }
  wd.s = Subspace<K>::span(k, n, Matrix<K>::from_rows(n, wd.basis));
  check_internal(wd.s.dim() == d, "weak decomposition: section lost rank");
  wd.t = SemilinearMap<K>{tbar, e};
  return wd;
}

}  // namespace gpmod
