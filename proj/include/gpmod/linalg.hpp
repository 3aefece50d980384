#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpmod/error.hpp"
#include "gpmod/field.hpp"

namespace gpmod {

template <class K>
using Vec = std::vector<typename K::value_type>;

// Row-major dense matrix. A value-initialized entry is the field's zero for
// every field type in this library.
template <class K>
class Matrix {
 public:
  using value_type = typename K::value_type;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix from_rows(std::size_t cols, const std::vector<Vec<K>>& rows) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw domain_error("row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<K> row(std::size_t i) const {
    return Vec<K>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  Vec<K> col(std::size_t j) const {
    Vec<K> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<Vec<K>> row_list() const {
    std::vector<Vec<K>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  void append_row(const Vec<K>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw domain_error("row length mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void truncate_rows(std::size_t r) {
    rows_ = r;
    data_.resize(r * cols_);
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<value_type> data_;
};

// ---------------------------------------------------------------------------
// Vector and matrix arithmetic

template <class K>
Vec<K> zero_vec(const K& k, std::size_t n) {
  return Vec<K>(n, k.zero());
}

template <class K>
Vec<K> unit_vec(const K& k, std::size_t n, std::size_t i) {
  Vec<K> v(n, k.zero());
  v[i] = k.one();
  return v;
}

template <class K>
bool is_zero_vec(const K& k, const Vec<K>& v) {
  for (const auto& x : v)
    if (!k.is_zero(x)) return false;
  return true;
}

template <class K>
Vec<K> vadd(const K& k, Vec<K> a, const Vec<K>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = k.add(a[i], b[i]);
  return a;
}

template <class K>
Vec<K> vsub(const K& k, Vec<K> a, const Vec<K>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = k.sub(a[i], b[i]);
  return a;
}

template <class K>
Vec<K> vscale(const K& k, const typename K::value_type& c, Vec<K> a) {
  for (auto& x : a) x = k.mul(c, x);
  return a;
}

// a += c * b
template <class K>
void vaxpy(const K& k, Vec<K>& a, const typename K::value_type& c, const Vec<K>& b) {
  if (k.is_zero(c)) return;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = k.add(a[i], k.mul(c, b[i]));
}

template <class K>
Vec<K> sigma_vec(const K& k, Vec<K> v, long long e) {
  if (k.sigma_order() == 1) return v;
  for (auto& x : v) x = k.sigma(x, e);
  return v;
}

template <class K>
Vec<K> concat(const Vec<K>& a, const Vec<K>& b) {
  Vec<K> r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

template <class K>
Matrix<K> identity(const K& k, std::size_t n) {
  Matrix<K> m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = k.one();
  return m;
}

template <class K>
Matrix<K> zero_matrix(const K& k, std::size_t r, std::size_t c) {
  Matrix<K> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = k.zero();
  return m;
}

template <class K>
Matrix<K> mat_mul(const K& k, const Matrix<K>& a, const Matrix<K>& b) {
  if (a.cols() != b.rows()) throw domain_error("matrix product shape mismatch");
  Matrix<K> c = zero_matrix(k, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const auto& x = a(i, t);
      if (k.is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = k.add(c(i, j), k.mul(x, b(t, j)));
    }
  return c;
}

template <class K>
Matrix<K> mat_add(const K& k, Matrix<K> a, const Matrix<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw domain_error("matrix sum shape mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = k.add(a(i, j), b(i, j));
  return a;
}

template <class K>
Matrix<K> mat_sub(const K& k, Matrix<K> a, const Matrix<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw domain_error("matrix difference shape mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = k.sub(a(i, j), b(i, j));
  return a;
}

template <class K>
Matrix<K> transpose(const Matrix<K>& a) {
  Matrix<K> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// Entrywise sigma^e.
template <class K>
Matrix<K> sigma_mat(const K& k, Matrix<K> a, long long e) {
  if (k.sigma_order() == 1) return a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = k.sigma(a(i, j), e);
  return a;
}

template <class K>
Vec<K> mat_vec(const K& k, const Matrix<K>& a, const Vec<K>& v) {
  if (a.cols() != v.size()) throw domain_error("matrix-vector shape mismatch");
  Vec<K> r(a.rows(), k.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!k.is_zero(v[j])) r[i] = k.add(r[i], k.mul(a(i, j), v[j]));
  return r;
}

/// x -> A * sigma^t(x).
template <class K>
Vec<K> apply_semilinear(const K& k, const Matrix<K>& a, long long t, const Vec<K>& x) {
  return mat_vec(k, a, sigma_vec(k, x, t));
}

template <class K>
bool is_zero_matrix(const K& k, const Matrix<K>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!k.is_zero(a(i, j))) return false;
  return true;
}

template <class K>
Matrix<K> block_diag(const K& k, const Matrix<K>& a, const Matrix<K>& b) {
  Matrix<K> m = zero_matrix(k, a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

/// Matrix whose columns are the given vectors.
template <class K>
Matrix<K> from_columns(const K& k, std::size_t n, const std::vector<Vec<K>>& cols) {
  Matrix<K> m = zero_matrix(k, n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
  return m;
}

// ---------------------------------------------------------------------------
// Row reduction

template <class K>
struct Rref {
  Matrix<K> matrix;  // nonzero rows only
  std::vector<std::size_t> pivots;
};

template <class K>
Rref<K> rref(const K& k, Matrix<K> m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!k.is_zero(m(i, c))) {
        sel = i;
        break;
      }
    if (sel == rows) continue;
    m.swap_rows(sel, r);
    const auto inv = k.inv(m(r, c));
    for (std::size_t j = c; j < cols; ++j) m(r, j) = k.mul(inv, m(r, j));
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || k.is_zero(m(i, c))) continue;
      const auto f = k.neg(m(i, c));
      for (std::size_t j = c; j < cols; ++j) m(i, j) = k.add(m(i, j), k.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  m.truncate_rows(r);
  return {std::move(m), std::move(pivots)};
}

template <class K>
std::size_t rank(const K& k, const Matrix<K>& m) {
  return rref(k, m).pivots.size();
}

template <class K>
std::optional<Matrix<K>> inverse(const K& k, const Matrix<K>& a) {
  if (a.rows() != a.cols()) throw domain_error("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  Matrix<K> aug = zero_matrix(k, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = k.one();
  }
  auto red = rref(k, aug);
  if (red.pivots.size() < n || (n > 0 && red.pivots[n - 1] != n - 1)) return std::nullopt;
  Matrix<K> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red.matrix(i, n + j);
  return inv;
}

template <class K>
bool is_invertible(const K& k, const Matrix<K>& a) {
  return a.rows() == a.cols() && rank(k, a) == a.rows();
}

/// Basis (as rows) of {x : A x = 0}.
template <class K>
Matrix<K> nullspace_rows(const K& k, const Matrix<K>& a) {
  const std::size_t n = a.cols();
  auto red = rref(k, a);
  std::vector<bool> is_pivot(n, false);
  for (auto p : red.pivots) is_pivot[p] = true;
  Matrix<K> out(0, n);
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vec<K> v(n, k.zero());
    v[f] = k.one();
    for (std::size_t i = 0; i < red.pivots.size(); ++i) v[red.pivots[i]] = k.neg(red.matrix(i, f));
    out.append_row(v);
  }
  return out;
}

/// Some row vector a with a * A = b, if one exists.
template <class K>
std::optional<Vec<K>> solve_left(const K& k, const Matrix<K>& a, const Vec<K>& b) {
  // Solve A^T a^T = b^T through the augmented system.
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != n) throw domain_error("solve_left shape mismatch");
  Matrix<K> aug = zero_matrix(k, n, m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug(i, j) = a(j, i);
    aug(i, m) = b[i];
  }
  auto red = rref(k, aug);
  Vec<K> x(m, k.zero());
  for (std::size_t i = 0; i < red.pivots.size(); ++i) {
    if (red.pivots[i] == m) return std::nullopt;
    x[red.pivots[i]] = red.matrix(i, m);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Subspaces

/// Subspace of K^n stored as the RREF of a spanning set, so equality is
/// matrix equality.
template <class K>
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t n) : n_(n), basis_(0, n) {}

  static Subspace span(const K& k, std::size_t n, const Matrix<K>& rows) {
    if (rows.rows() > 0 && rows.cols() != n) throw domain_error("spanning vectors have the wrong length");
    Subspace s(n);
    if (rows.rows() == 0) return s;
    auto red = rref(k, rows);
    s.basis_ = std::move(red.matrix);
    s.pivots_ = std::move(red.pivots);
    return s;
  }
  static Subspace span(const K& k, std::size_t n, const std::vector<Vec<K>>& vs) {
    return span(k, n, Matrix<K>::from_rows(n, vs));
  }
  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace full(const K& k, std::size_t n) { return span(k, n, identity(k, n)); }

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == n_; }
  const Matrix<K>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  std::vector<Vec<K>> vectors() const { return basis_.row_list(); }

  bool operator==(const Subspace& o) const { return n_ == o.n_ && basis_ == o.basis_; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

 private:
  std::size_t n_ = 0;
  Matrix<K> basis_;
  std::vector<std::size_t> pivots_;
};

template <class K>
void require_same_ambient(const Subspace<K>& a, const Subspace<K>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw domain_error("ambient dimension mismatch");
}

template <class K>
Subspace<K> sum(const K& k, const Subspace<K>& a, const Subspace<K>& b) {
  require_same_ambient(a, b);
  Matrix<K> m = a.basis();
  if (m.rows() == 0) m = Matrix<K>(0, a.ambient_dim());
  for (std::size_t i = 0; i < b.dim(); ++i) m.append_row(b.basis().row(i));
  return Subspace<K>::span(k, a.ambient_dim(), m);
}

/// Zassenhaus: reduce [[A, A], [B, 0]]; rows with vanishing left half carry
/// a basis of the intersection in their right half.
template <class K>
Subspace<K> intersect(const K& k, const Subspace<K>& a, const Subspace<K>& b) {
  require_same_ambient(a, b);
  const std::size_t n = a.ambient_dim();
  if (a.is_zero() || b.is_zero()) return Subspace<K>::zero(n);
  Matrix<K> z = zero_matrix(k, a.dim() + b.dim(), 2 * n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) z(i, j) = z(i, n + j) = a.basis()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) z(a.dim() + i, j) = b.basis()(i, j);
  auto red = rref(k, z);
  Matrix<K> out(0, n);
  for (std::size_t i = 0; i < red.pivots.size(); ++i) {
    if (red.pivots[i] < n) continue;
    Vec<K> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = red.matrix(i, n + j);
    out.append_row(v);
  }
  return Subspace<K>::span(k, n, out);
}

/// v minus its components along the pivot columns of s.
template <class K>
Vec<K> reduce_by(const K& k, const Subspace<K>& s, Vec<K> v) {
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const auto c = v[s.pivots()[i]];
    if (k.is_zero(c)) continue;
    vaxpy(k, v, k.neg(c), s.basis().row(i));
  }
  return v;
}

template <class K>
bool contains_vec(const K& k, const Subspace<K>& s, const Vec<K>& v) {
  if (v.size() != s.ambient_dim()) throw domain_error("vector length mismatch");
  return is_zero_vec(k, reduce_by(k, s, v));
}

/// b is a subspace of a.
template <class K>
bool contains(const K& k, const Subspace<K>& a, const Subspace<K>& b) {
  require_same_ambient(a, b);
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (!contains_vec(k, a, b.basis().row(i))) return false;
  return true;
}

/// Entrywise sigma^e of every vector of s.
template <class K>
Subspace<K> sigma_subspace(const K& k, const Subspace<K>& s, long long e) {
  if (k.sigma_order() == 1 || s.is_zero()) return s;
  return Subspace<K>::span(k, s.ambient_dim(), sigma_mat(k, s.basis(), e));
}

/// Rows spanning {c : c . v = 0 for all v in s}.
template <class K>
Matrix<K> annihilator(const K& k, const Subspace<K>& s) {
  if (s.is_zero()) return identity(k, s.ambient_dim());
  return nullspace_rows(k, s.basis());
}

/// Kernel of x -> A sigma^t(x).
template <class K>
Subspace<K> map_kernel(const K& k, const Matrix<K>& a, long long t) {
  return sigma_subspace(k, Subspace<K>::span(k, a.cols(), nullspace_rows(k, a)), -t);
}

/// {A sigma^t(x) : x in s}.
template <class K>
Subspace<K> map_image(const K& k, const Matrix<K>& a, const Subspace<K>& s, long long t) {
  if (a.cols() != s.ambient_dim()) throw domain_error("map_image shape mismatch");
  Matrix<K> out(0, a.rows());
  for (std::size_t i = 0; i < s.dim(); ++i) out.append_row(apply_semilinear(k, a, t, s.basis().row(i)));
  return Subspace<K>::span(k, a.rows(), out);
}

/// {x : A sigma^t(x) in s}.
template <class K>
Subspace<K> map_preimage(const K& k, const Matrix<K>& a, const Subspace<K>& s, long long t) {
  if (a.rows() != s.ambient_dim()) throw domain_error("map_preimage shape mismatch");
  const Matrix<K> c = annihilator(k, s);
  Subspace<K> y = c.rows() == 0 ? Subspace<K>::full(k, a.cols())
                                : Subspace<K>::span(k, a.cols(), nullspace_rows(k, mat_mul(k, c, a)));
  return sigma_subspace(k, y, -t);
}

/// Coset representatives of big/small together with coordinates.
///
/// The representatives are the reduced residues of big's basis modulo
/// small's pivots, so they vanish on every pivot column of small.
template <class K>
class Quotient {
 public:
  Quotient() = default;
  Quotient(const K& k, const Subspace<K>& big, const Subspace<K>& small) : small_(small) {
    require_same_ambient(big, small);
    if (!contains(k, big, small)) throw domain_error("quotient of a space by a non-subspace");
    Matrix<K> res(0, big.ambient_dim());
    for (std::size_t i = 0; i < big.dim(); ++i) res.append_row(reduce_by(k, small, big.basis().row(i)));
    reps_ = Subspace<K>::span(k, big.ambient_dim(), res);
    check_internal(reps_.dim() + small.dim() == big.dim(), "quotient dimension mismatch");
  }

  std::size_t dim() const { return reps_.dim(); }
  std::size_t ambient_dim() const { return small_.ambient_dim(); }
  /// Representative of the i-th basis vector of the quotient.
  Vec<K> rep(std::size_t i) const { return reps_.basis().row(i); }
  std::vector<Vec<K>> reps() const { return reps_.vectors(); }
  const Subspace<K>& complement() const { return reps_; }

  /// Coordinates of the class of v; throws if v is not in big.
  Vec<K> coords(const K& k, const Vec<K>& v) const {
    Vec<K> r = reduce_by(k, small_, v);
    Vec<K> a(dim(), k.zero());
    for (std::size_t i = 0; i < dim(); ++i) {
      a[i] = r[reps_.pivots()[i]];
      vaxpy(k, r, k.neg(a[i]), reps_.basis().row(i));
    }
    if (!is_zero_vec(k, r)) throw domain_error("vector does not lie in the quotient's total space");
    return a;
  }

  Vec<K> lift(const K& k, const Vec<K>& a) const {
    Vec<K> v(ambient_dim(), k.zero());
    for (std::size_t i = 0; i < dim(); ++i) vaxpy(k, v, a[i], reps_.basis().row(i));
    return v;
  }

 private:
  Subspace<K> small_;
  Subspace<K> reps_;
};

template <class K>
std::vector<Vec<K>> quotient_basis(const K& k, const Subspace<K>& big, const Subspace<K>& small) {
  return Quotient<K>(k, big, small).reps();
}

/// Complement of small inside big, as a subspace.
template <class K>
Subspace<K> complement_in(const K& k, const Subspace<K>& big, const Subspace<K>& small) {
  return Quotient<K>(k, big, small).complement();
}

/// Section of big -> big/small: the representative vectors in quotient order.
template <class K>
std::vector<Vec<K>> section(const K& k, const Subspace<K>& big, const Subspace<K>& small) {
  return quotient_basis(k, big, small);
}

/// Coordinates of v in an arbitrary basis (rows), or nullopt if v is outside
/// their span.
template <class K>
std::optional<Vec<K>> coords_in_basis(const K& k, const std::vector<Vec<K>>& basis, const Vec<K>& v) {
  if (basis.empty()) {
    if (is_zero_vec(k, v)) return Vec<K>{};
    return std::nullopt;
  }
  return solve_left(k, Matrix<K>::from_rows(v.size(), basis), v);
}

/// Subspace spanned by the concatenation of two direct-sum blocks.
template <class K>
Subspace<K> direct_sum_space(const K& k, const Subspace<K>& a, const Subspace<K>& b) {
  const std::size_t n = a.ambient_dim() + b.ambient_dim();
  Matrix<K> m(0, n);
  for (std::size_t i = 0; i < a.dim(); ++i) m.append_row(concat<K>(a.basis().row(i), zero_vec(k, b.ambient_dim())));
  for (std::size_t i = 0; i < b.dim(); ++i) m.append_row(concat<K>(zero_vec(k, a.ambient_dim()), b.basis().row(i)));
  return Subspace<K>::span(k, n, m);
}

}  // namespace gpmod
