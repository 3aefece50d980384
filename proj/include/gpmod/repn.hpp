#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gpmod/canonical_form.hpp"
#include "gpmod/linalg.hpp"
#include "gpmod/quiver.hpp"

namespace gpmod {

inline long long twist_of(Label l) { return l == Label::F ? 1 : -1; }

/// sigma-linear representation of a quiver. maps[i] belongs to edge i, has
/// shape d_head x d_tail and acts as x -> A sigma^{+-1}(x).
template <class K>
struct Representation {
  Quiver quiver;
  std::map<int, std::size_t> dims;
  std::vector<Matrix<K>> maps;

  std::size_t dim_at(int v) const {
    auto it = dims.find(v);
    return it == dims.end() ? 0 : it->second;
  }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (int v : quiver.vertices) s += dim_at(v);
    return s;
  }
};

template <class K>
void validate_shapes(const Representation<K>& r) {
  if (r.maps.size() != r.quiver.edges.size()) throw domain_error("representation needs one map per edge");
  for (std::size_t i = 0; i < r.maps.size(); ++i) {
    const auto& e = r.quiver.edges[i];
    const auto& m = r.maps[i];
    if (m.rows() != r.dim_at(e.head) || m.cols() != r.dim_at(e.tail))
      throw domain_error("map of edge " + std::to_string(i) + " has the wrong shape");
  }
}

template <class K>
bool is_strict(const K& k, const Representation<K>& r) {
  for (const auto& m : r.maps)
    if (!is_invertible(k, m)) return false;
  return true;
}

template <class K>
Representation<K> trivial_rep(const K& k, const Quiver& g, std::size_t d = 1) {
  Representation<K> r{g, {}, {}};
  for (int v : g.vertices) r.dims[v] = d;
  for (std::size_t i = 0; i < g.edges.size(); ++i) r.maps.push_back(identity(k, d));
  return r;
}

/// Disjoint union; vertex ids of b are shifted past those of a.
template <class K>
Representation<K> direct_sum(const Representation<K>& a, const Representation<K>& b) {
  int shift = 0;
  for (int v : a.quiver.vertices) shift = std::max(shift, v + 1);
  int low = 0;
  for (int v : b.quiver.vertices) low = std::min(low, v);
  shift -= low;
  Representation<K> r = a;
  for (int v : b.quiver.vertices) {
    r.quiver.vertices.push_back(v + shift);
    r.dims[v + shift] = b.dim_at(v);
  }
  for (std::size_t i = 0; i < b.quiver.edges.size(); ++i) {
    auto e = b.quiver.edges[i];
    e.tail += shift;
    e.head += shift;
    r.quiver.edges.push_back(e);
    r.maps.push_back(b.maps[i]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Modules

/// Module with sigma-linear F and sigma^{-1}-linear V: F(x) = A_F sigma(x), V(x) = A_V sigma^{-1}(x).
template <class K>
struct GPModule {
  std::size_t dim = 0;
  Matrix<K> f, v;

  Vec<K> apply_f(const K& k, const Vec<K>& x) const { return apply_semilinear(k, f, 1, x); }
  Vec<K> apply_v(const K& k, const Vec<K>& x) const { return apply_semilinear(k, v, -1, x); }
};

template <class K>
GPModule<K> zero_module(const K& k, std::size_t n) {
  return GPModule<K>{n, zero_matrix(k, n, n), zero_matrix(k, n, n)};
}

/// Violation message for FV != 0 or VF != 0, naming the offending entry.
template <class K>
std::optional<std::string> check_gp(const K& k, const GPModule<K>& m) {
  if (m.f.rows() != m.dim || m.f.cols() != m.dim || m.v.rows() != m.dim || m.v.cols() != m.dim)
    return "F and V must be " + std::to_string(m.dim) + "x" + std::to_string(m.dim);
  const auto fv = mat_mul(k, m.f, sigma_mat(k, m.v, 1));
  const auto vf = mat_mul(k, m.v, sigma_mat(k, m.f, -1));
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) {
      if (!k.is_zero(fv(i, j)))
        return "FV != 0: entry (" + std::to_string(i) + "," + std::to_string(j) + ") of A_F*sigma(A_V) is nonzero";
      if (!k.is_zero(vf(i, j)))
        return "VF != 0: entry (" + std::to_string(i) + "," + std::to_string(j) +
               ") of A_V*sigma^-1(A_F) is nonzero";
    }
  return std::nullopt;
}

template <class K>
void require_gp(const K& k, const GPModule<K>& m) {
  if (auto v = check_gp(k, m)) throw domain_error(*v);
}

template <class K>
GPModule<K> direct_sum(const K& k, const GPModule<K>& a, const GPModule<K>& b) {
  return GPModule<K>{a.dim + b.dim, block_diag(k, a.f, b.f), block_diag(k, a.v, b.v)};
}

/// Module in the basis given by the columns of p: f' = p^{-1} f sigma(p).
template <class K>
GPModule<K> change_basis(const K& k, const GPModule<K>& m, const Matrix<K>& p) {
  auto pinv = inverse(k, p);
  if (!pinv) throw domain_error("change_basis needs an invertible matrix");
  return GPModule<K>{m.dim, mat_mul(k, *pinv, mat_mul(k, m.f, sigma_mat(k, p, 1))),
                     mat_mul(k, *pinv, mat_mul(k, m.v, sigma_mat(k, p, -1)))};
}

/// F and V restricted to the span of an F,V-stable family of basis vectors,
/// in coordinates of that family. Throws if the span is not stable.
template <class K>
GPModule<K> submodule(const K& k, const GPModule<K>& m, const std::vector<Vec<K>>& basis) {
  const std::size_t r = basis.size();
  GPModule<K> s{r, zero_matrix(k, r, r), zero_matrix(k, r, r)};
  for (std::size_t j = 0; j < r; ++j) {
    auto cf = coords_in_basis(k, basis, m.apply_f(k, basis[j]));
    auto cv = coords_in_basis(k, basis, m.apply_v(k, basis[j]));
    if (!cf || !cv) throw domain_error("submodule: span is not stable under F and V");
    for (std::size_t i = 0; i < r; ++i) {
      s.f(i, j) = (*cf)[i];
      s.v(i, j) = (*cv)[i];
    }
  }
  return s;
}

template <class K>
struct BuiltModule {
  GPModule<K> module;
  /// vertex -> (offset, size) of its coordinate block.
  std::map<int, std::pair<std::size_t, std::size_t>> blocks;
};

/// M(Gamma, U, rho): blocks follow the order of quiver.vertices. With
/// require_valid = false a non-Kraft quiver is accepted as long as the
/// resulting operators still satisfy FV = VF = 0.
template <class K>
BuiltModule<K> module_of(const K& k, const Representation<K>& r, bool require_valid = true) {
  if (require_valid) require_kraft(r.quiver);
  validate_shapes(r);
  BuiltModule<K> out;
  std::size_t off = 0;
  for (int v : r.quiver.vertices) {
    out.blocks[v] = {off, r.dim_at(v)};
    off += r.dim_at(v);
  }
  out.module = zero_module(k, off);
  for (std::size_t i = 0; i < r.quiver.edges.size(); ++i) {
    const auto& e = r.quiver.edges[i];
    auto [to, tn] = out.blocks[e.head];
    auto [from, fn] = out.blocks[e.tail];
    auto& target = e.label == Label::F ? out.module.f : out.module.v;
    for (std::size_t a = 0; a < tn; ++a)
      for (std::size_t b = 0; b < fn; ++b) target(to + a, from + b) = k.add(target(to + a, from + b), r.maps[i](a, b));
  }
  if (auto bad = check_gp(k, out.module)) {
    check_internal(!require_valid, "module_of produced FV != 0 on a Kraft quiver");
    throw domain_error(*bad);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monodromy

/// x -> matrix * sigma^twist(x) on the space at `vertex`.
template <class K>
struct Monodromy {
  int vertex = 0;
  std::size_t dim = 0;
  long long twist = 0;
  Matrix<K> matrix;
};

/// Matrix of the sigma-linear step phi_{v_i}: U_{v_i} -> U_{v_{i+1}}.
template <class K>
Matrix<K> step_matrix(const K& k, const Representation<K>& r, const ComponentShape& s, std::size_t i) {
  const auto& e = r.quiver.edges[s.edge_of[i]];
  const auto& a = r.maps[s.edge_of[i]];
  if (e.label == Label::F) return a;
  auto inv = inverse(k, a);
  if (!inv) throw domain_error("monodromy needs a strict representation");
  return sigma_mat(k, *inv, 1);
}

/// Phi_{v} = phi_{v_{i-1}} o ... o phi_{v_i} where v = v_i.
template <class K>
Monodromy<K> monodromy(const K& k, const Representation<K>& r, int at) {
  const auto s = classify_connected(r.quiver);
  if (!s.circular) throw domain_error("monodromy needs a circular quiver");
  if (!is_strict(k, r)) throw domain_error("monodromy needs a strict representation");
  const std::size_t n = s.order.size();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (s.order[i] == at) start = i;
  if (start == n) throw domain_error("monodromy: unknown vertex");
  Monodromy<K> mo{at, r.dim_at(at), 0, identity(k, r.dim_at(at))};
  for (std::size_t step = 0; step < n; ++step) {
    const auto p = step_matrix(k, r, s, (start + step) % n);
    mo.matrix = mat_mul(k, p, sigma_mat(k, mo.matrix, 1));
    ++mo.twist;
  }
  return mo;
}

enum class Verdict { yes, no, undetermined };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    default:
      return "undetermined";
  }
}

template <class K>
struct ConjugacyResult {
  Verdict verdict = Verdict::undetermined;
  std::optional<Matrix<K>> h;  // B sigma^n(h) = h A
  std::string reason;
};

struct SearchConfig {
  std::uint64_t seed = 0x5eed;
  std::uint64_t exhaustive_limit = 1u << 20;
  std::size_t random_trials = 4096;
};

/// A sigma^n(A) ... sigma^{(r-1)n}(A): the matrix of Phi^r.
template <class K>
Matrix<K> power_matrix(const K& k, const Matrix<K>& a, long long n, long long r) {
  Matrix<K> acc = identity(k, a.rows());
  for (long long i = 0; i < r; ++i) acc = mat_mul(k, acc, sigma_mat(k, a, i * n));
  return acc;
}

/// Order of sigma^n.
template <class K>
long long order_of_power(const K& k, long long n) {
  const long long s = k.sigma_order();
  long long m = ((n % s) + s) % s;
  return s / std::gcd(s, m == 0 ? s : m);
}

namespace detail {

// Looks for an invertible element in the span of `sols` (d x d matrices).
template <class K, class Coef>
std::optional<Matrix<K>> search_invertible(const K& k, const std::vector<Matrix<K>>& sols, std::uint64_t count_per,
                                           Coef coef_of, const SearchConfig& cfg, bool* exhaustive) {
  const std::size_t s = sols.size();
  if (s == 0) {
    *exhaustive = true;
    return std::nullopt;
  }
  const std::size_t d = sols[0].rows();
  auto combine = [&](const std::vector<std::uint64_t>& c) {
    Matrix<K> h = zero_matrix(k, d, d);
    for (std::size_t i = 0; i < s; ++i) {
      if (c[i] == 0) continue;
      const auto lam = coef_of(c[i]);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) h(a, b) = k.add(h(a, b), k.mul(lam, sols[i](a, b)));
    }
    return h;
  };
  std::uint64_t total = 1;
  bool small = count_per > 0;
  for (std::size_t i = 0; i < s && small; ++i) {
    if (total > cfg.exhaustive_limit / count_per) small = false;
    else total *= count_per;
  }
  *exhaustive = small;
  if (small) {
    std::vector<std::uint64_t> c(s, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < s; ++i) {
        c[i] = t % count_per;
        t /= count_per;
      }
      auto h = combine(c);
      if (is_invertible(k, h)) return h;
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::uint64_t> c(s);
  for (std::size_t trial = 0; trial < cfg.random_trials; ++trial) {
    for (auto& x : c) x = count_per ? rng() % count_per : rng() % 7;
    auto h = combine(c);
    if (is_invertible(k, h)) return h;
  }
  return std::nullopt;
}

}  // namespace detail

/// Is there a linear h with B sigma^n(h) = h A?
///
/// When sigma^n = id this is ordinary conjugacy and is decided by invariant
/// factors. Otherwise the solution set is an F_p-subspace (sigma^n is
/// F_p-linear), computed exactly; an invertible element is then searched
/// exhaustively when the subspace is small and randomly otherwise.
template <class K>
ConjugacyResult<K> semilinear_conjugate(const K& k, const Monodromy<K>& a, const Monodromy<K>& b,
                                        const SearchConfig& cfg = {}) {
  if (a.dim != b.dim || a.matrix.rows() != b.matrix.rows()) throw domain_error("semilinear_conjugate: dimension mismatch");
  if (a.twist != b.twist) throw domain_error("semilinear_conjugate: twist mismatch");
  const std::size_t d = a.matrix.rows();
  const long long n = a.twist;
  ConjugacyResult<K> res;
  if (d == 0) {
    res.verdict = Verdict::yes;
    res.h = Matrix<K>(0, 0);
    return res;
  }
  if (a.matrix == b.matrix) {
    res.verdict = Verdict::yes;
    res.h = identity(k, d);
    return res;
  }
  const long long r = order_of_power(k, n);
  if (r == 1) {
    if (invariant_factors(k, a.matrix) != invariant_factors(k, b.matrix)) {
      res.verdict = Verdict::no;
      res.reason = "rational canonical forms differ";
      return res;
    }
    res.verdict = Verdict::yes;
    // Solutions of B h = h A form a K-subspace; look for an invertible one.
    Matrix<K> sys = zero_matrix(k, d * d, d * d);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) {
        // Column for the unit matrix E_pq.
        const std::size_t col = p * d + q;
        for (std::size_t i = 0; i < d; ++i) sys(i * d + q, col) = k.add(sys(i * d + q, col), b.matrix(i, p));
        for (std::size_t j = 0; j < d; ++j) sys(p * d + j, col) = k.sub(sys(p * d + j, col), a.matrix(q, j));
      }
    const auto null = nullspace_rows(k, sys);
    std::vector<Matrix<K>> sols;
    for (std::size_t t = 0; t < null.rows(); ++t) {
      Matrix<K> h(d, d);
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) h(p, q) = null(t, p * d + q);
      sols.push_back(h);
    }
    bool exhaustive = false;
    std::optional<Matrix<K>> h;
    if constexpr (requires { k.element(std::uint64_t{0}); }) {
      h = detail::search_invertible(k, sols, k.size(), [&](std::uint64_t i) { return k.element(i); }, cfg, &exhaustive);
    } else {
      h = detail::search_invertible(k, sols, 0, [&](std::uint64_t i) { return k.from_int(static_cast<long long>(i) - 3); },
                                    cfg, &exhaustive);
    }
    res.h = h;
    res.reason = h ? "rational canonical forms agree" : "rational canonical forms agree; no witness found";
    return res;
  }

  // sigma^n != id: only possible over extension fields.
  if constexpr (!requires { k.element(std::uint64_t{0}); }) {
    res.reason = "unsupported field";
    return res;
  } else {
    if (invariant_factors(k, power_matrix(k, a.matrix, n, r)) != invariant_factors(k, power_matrix(k, b.matrix, n, r))) {
      res.verdict = Verdict::no;
      res.reason = "canonical forms of the r-th powers differ";
      return res;
    }
    const FiniteField fp = FiniteField::prime(k.characteristic());
    const std::size_t deg = static_cast<std::size_t>(k.degree());
    const std::size_t dim = deg * d * d;
    // Column c of the F_p-matrix of h -> B sigma^n(h) - h A.
    Matrix<FiniteField> sys = zero_matrix(fp, dim, dim);
    auto unit = [&](std::size_t idx) {
      Matrix<K> h = zero_matrix(k, d, d);
      const std::size_t pos = idx / deg, c = idx % deg;
      std::vector<std::uint32_t> co(deg, 0);
      co[c] = 1;
      h(pos / d, pos % d) = k.from_coeffs(co);
      return h;
    };
    for (std::size_t col = 0; col < dim; ++col) {
      const auto h = unit(col);
      const auto img = mat_sub(k, mat_mul(k, b.matrix, sigma_mat(k, h, n)), mat_mul(k, h, a.matrix));
      for (std::size_t pos = 0; pos < d * d; ++pos) {
        const auto co = k.coeffs(img(pos / d, pos % d));
        for (std::size_t c = 0; c < deg; ++c) sys(pos * deg + c, col) = co[c];
      }
    }
    const auto null = nullspace_rows(fp, sys);
    std::vector<Matrix<K>> sols;
    for (std::size_t t = 0; t < null.rows(); ++t) {
      Matrix<K> h = zero_matrix(k, d, d);
      for (std::size_t pos = 0; pos < d * d; ++pos) {
        std::vector<std::uint32_t> co(deg);
        for (std::size_t c = 0; c < deg; ++c) co[c] = null(t, pos * deg + c);
        h(pos / d, pos % d) = k.from_coeffs(co);
      }
      sols.push_back(h);
    }
    bool exhaustive = false;
    auto h = detail::search_invertible(k, sols, k.characteristic(),
                                       [&](std::uint64_t i) { return k.from_int(static_cast<long long>(i)); }, cfg,
                                       &exhaustive);
    if (h) {
      res.verdict = Verdict::yes;
      res.h = h;
      res.reason = "witness found";
    } else if (exhaustive) {
      res.verdict = Verdict::no;
      res.reason = "no invertible solution of B sigma^n(h) = h A (exhaustive)";
    } else {
      res.verdict = Verdict::undetermined;
      res.reason = "search budget exhausted";
    }
    return res;
  }
}

template <class K>
struct RepIsoResult {
  Verdict verdict = Verdict::undetermined;
  std::map<int, Matrix<K>> family;  // f_v : U_v -> U'_v, linear
  std::string reason;
};

/// Isomorphism of strict representations on the same connected circular quiver.
template <class K>
RepIsoResult<K> reps_isomorphic(const K& k, const Representation<K>& r1, const Representation<K>& r2,
                                const SearchConfig& cfg = {}) {
  if (!(r1.quiver == r2.quiver)) throw domain_error("reps_isomorphic: quivers differ");
  const auto s = classify_connected(r1.quiver);
  if (!s.circular) throw domain_error("reps_isomorphic needs a circular quiver");
  RepIsoResult<K> out;
  for (int v : s.order)
    if (r1.dim_at(v) != r2.dim_at(v)) {
      out.verdict = Verdict::no;
      out.reason = "dimensions differ at vertex " + std::to_string(v);
      return out;
    }
  const int v1 = s.order.front();
  auto c = semilinear_conjugate(k, monodromy(k, r1, v1), monodromy(k, r2, v1), cfg);
  out.verdict = c.verdict;
  out.reason = c.reason;
  if (c.verdict != Verdict::yes || !c.h) return out;
  Matrix<K> f = *c.h;
  for (std::size_t i = 0; i < s.order.size(); ++i) {
    out.family[s.order[i]] = f;
    if (i + 1 == s.order.size()) break;
    const auto p1 = step_matrix(k, r1, s, i);
    const auto p2 = step_matrix(k, r2, s, i);
    f = mat_mul(k, p2, mat_mul(k, sigma_mat(k, f, 1), *inverse(k, p1)));
  }
  return out;
}

template <class K>
struct Unreduced {
  Representation<K> rep;
  /// perm[i] = coordinate of module_of(input) that becomes coordinate i of
  /// module_of(output).
  std::vector<std::size_t> perm;
};

/// Rep on Gamma([w], kt) -> rep on Gamma([w], t) by summing the spaces along
/// the fibers of Z/kt -> Z/t.
template <class K>
Unreduced<K> unreduce_transport(const K& k, const Representation<K>& r) {
  const auto s = classify_connected(r.quiver);
  if (!s.circular) throw domain_error("unreduce_transport needs a circular quiver");
  const std::size_t m = s.order.size(), t = cyclic_period(s.labels), reps = m / t;
  const PeriodicWord p(Word(std::vector<Letter>(s.labels.begin(), s.labels.begin() + static_cast<std::ptrdiff_t>(t))));
  Unreduced<K> out;
  out.rep.quiver = quiver_of_periodic(p, t);
  // Offsets inside each fiber.
  std::vector<std::vector<std::size_t>> inner(t, std::vector<std::size_t>(reps, 0));
  for (std::size_t i = 0; i < t; ++i) {
    std::size_t off = 0;
    for (std::size_t a = 0; a < reps; ++a) {
      inner[i][a] = off;
      off += r.dim_at(s.order[i + a * t]);
    }
    out.rep.dims[static_cast<int>(i)] = off;
  }
  for (std::size_t i = 0; i < t; ++i) {
    const auto& e = out.rep.quiver.edges[i];
    Matrix<K> big = zero_matrix(k, out.rep.dims[e.head], out.rep.dims[e.tail]);
    for (std::size_t a = 0; a < reps; ++a) {
      const std::size_t j = i + a * t;  // E_{j+1} in the original ordering
      const std::size_t a_next = (j + 1) / t % reps;
      const auto& src = r.maps[s.edge_of[j]];
      const bool forward = s.labels[j] == Letter::F;
      const std::size_t row0 = forward ? inner[(i + 1) % t][a_next] : inner[i][a];
      const std::size_t col0 = forward ? inner[i][a] : inner[(i + 1) % t][a_next];
      for (std::size_t x = 0; x < src.rows(); ++x)
        for (std::size_t y = 0; y < src.cols(); ++y) big(row0 + x, col0 + y) = src(x, y);
    }
    out.rep.maps.push_back(big);
  }
  // Coordinates: input blocks follow r.quiver.vertices.
  std::map<int, std::size_t> in_off;
  std::size_t off = 0;
  for (int v : r.quiver.vertices) {
    in_off[v] = off;
    off += r.dim_at(v);
  }
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t a = 0; a < reps; ++a) {
      const int v = s.order[i + a * t];
      for (std::size_t x = 0; x < r.dim_at(v); ++x) out.perm.push_back(in_off[v] + x);
    }
  return out;
}

}  // namespace gpmod
