#include <gtest/gtest.h>

#include "gpmod/linalg.hpp"
#include "gpmod/random.hpp"
#include "support/util.hpp"

using namespace gpmod;
using testutil::all_vectors;
using testutil::mat;
using testutil::vec;

namespace {

const FiniteField f2(2, 1), f4(2, 2), f9(3, 2);

std::size_t count_members(const FiniteField& k, const Subspace<FiniteField>& s) {
  std::size_t c = 0;
  for (const auto& v : all_vectors(k, s.ambient_dim()))
    if (contains_vec(k, s, v)) ++c;
  return c;
}

std::size_t power(std::size_t q, std::size_t d) {
  std::size_t r = 1;
  while (d--) r *= q;
  return r;
}

}  // namespace

TEST(Linalg, RrefOfPermutation) {
  const auto r = rref(f2, mat(f2, {{0, 1}, {1, 0}}));
  EXPECT_EQ(r.matrix, identity(f2, 2));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));
}

TEST(Linalg, SumAndIntersectOfAxes) {
  const auto a = Subspace<FiniteField>::span(f2, 3, mat(f2, {{1, 0, 0}}));
  const auto b = Subspace<FiniteField>::span(f2, 3, mat(f2, {{0, 1, 0}}));
  EXPECT_EQ(sum(f2, a, b), Subspace<FiniteField>::span(f2, 3, mat(f2, {{1, 0, 0}, {0, 1, 0}})));
  EXPECT_TRUE(intersect(f2, a, b).is_zero());
  EXPECT_TRUE(contains(f2, sum(f2, a, b), a));
  EXPECT_FALSE(contains(f2, a, b));
}

TEST(Linalg, ZeroMapImageAndPreimage) {
  const auto z = zero_matrix(f4, 3, 3);
  EXPECT_TRUE(map_image(f4, z, Subspace<FiniteField>::full(f4, 3), 1).is_zero());
  EXPECT_TRUE(map_preimage(f4, z, Subspace<FiniteField>::zero(3), 1).is_full());
  EXPECT_TRUE(map_kernel(f4, z, -1).is_full());
}

TEST(Linalg, RandomSpacesAgreeWithEnumeration) {
  Rng rng(11);
  for (const auto& k : {f2, f4}) {
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = rng.range(1, 3);
      const auto a = Subspace<FiniteField>::span(k, n, random_matrix(k, rng.range(0, n), n, rng));
      const auto b = Subspace<FiniteField>::span(k, n, random_matrix(k, rng.range(0, n), n, rng));
      const auto s = sum(k, a, b), i = intersect(k, a, b);
      EXPECT_EQ(count_members(k, a), power(k.size(), a.dim()));
      EXPECT_EQ(s.dim() + i.dim(), a.dim() + b.dim());
      for (const auto& v : all_vectors(k, n))
        EXPECT_EQ(contains_vec(k, i, v), contains_vec(k, a, v) && contains_vec(k, b, v));
    }
  }
}

TEST(Linalg, SemilinearImageKernelPreimageByEnumeration) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = rng.range(1, 2);
    const long long t = static_cast<long long>(rng.range(0, 2)) - 1;
    const auto a = random_matrix(f4, n, n, rng);
    const auto s = Subspace<FiniteField>::span(f4, n, random_matrix(f4, rng.range(0, n), n, rng));
    const auto img = map_image(f4, a, s, t), pre = map_preimage(f4, a, s, t), ker = map_kernel(f4, a, t);
    const auto vs = all_vectors(f4, n);
    for (const auto& x : vs) {
      const auto y = apply_semilinear(f4, a, t, x);
      EXPECT_EQ(contains_vec(f4, pre, x), contains_vec(f4, s, y));
      EXPECT_EQ(contains_vec(f4, ker, x), is_zero_vec(f4, y));
      if (contains_vec(f4, s, x)) {
        EXPECT_TRUE(contains_vec(f4, img, y));
      }
    }
    std::size_t hits = 0;
    for (const auto& y : vs) {
      bool found = false;
      for (const auto& x : vs)
        if (contains_vec(f4, s, x) && apply_semilinear(f4, a, t, x) == y) found = true;
      hits += found;
    }
    EXPECT_EQ(hits, power(4, img.dim()));
  }
}

TEST(Linalg, QuotientSectionAndCoordinates) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = rng.range(1, 5);
    const auto big = Subspace<FiniteField>::span(f9, n, random_matrix(f9, rng.range(0, n), n, rng));
    const auto small = Subspace<FiniteField>::span(f9, n, random_matrix(f9, rng.range(0, big.dim()), n, rng));
    const auto inner = intersect(f9, big, small);
    const Quotient<FiniteField> q(f9, big, inner);
    EXPECT_EQ(q.dim() + inner.dim(), big.dim());
    EXPECT_TRUE(intersect(f9, q.complement(), inner).is_zero());
    EXPECT_EQ(sum(f9, q.complement(), inner), big);
    for (std::size_t i = 0; i < q.dim(); ++i) EXPECT_EQ(q.coords(f9, q.rep(i)), unit_vec(f9, q.dim(), i));
    const auto x = random_vec(f9, q.dim(), rng);
    EXPECT_EQ(q.coords(f9, q.lift(f9, x)), x);
  }
  const auto line = Subspace<FiniteField>::span(f2, 2, mat(f2, {{1, 0}}));
  EXPECT_THROW(Quotient<FiniteField>(f2, line, Subspace<FiniteField>::full(f2, 2)), domain_error);
}

TEST(Linalg, InverseAndSolve) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_invertible(f9, 4, rng);
    const auto inv = inverse(f9, a);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(mat_mul(f9, a, *inv), identity(f9, 4));
    const auto c = random_vec(f9, 4, rng);
    Vec<FiniteField> b(4, f9.zero());
    for (std::size_t i = 0; i < 4; ++i) vaxpy(f9, b, c[i], a.row(i));
    EXPECT_EQ(solve_left(f9, a, b), c);
  }
  EXPECT_FALSE(inverse(f2, mat(f2, {{1, 1}, {1, 1}})).has_value());
}

TEST(Linalg, RationalNullspace) {
  const Rationals q;
  const auto a = mat(q, {{1, 2, 3}, {2, 4, 6}});
  const auto ns = nullspace_rows(q, a);
  EXPECT_EQ(ns.rows(), 2u);
  for (std::size_t i = 0; i < ns.rows(); ++i) EXPECT_TRUE(is_zero_vec(q, mat_vec(q, a, ns.row(i))));
  EXPECT_EQ(rank(q, a), 1u);
}

TEST(Linalg, CoordsInBasis) {
  const std::vector<Vec<FiniteField>> basis{vec(f9, {1, 1, 0}), vec(f9, {0, 1, 1})};
  EXPECT_EQ(coords_in_basis(f9, basis, vec(f9, {1, 2, 1})), vec(f9, {1, 1}));
  EXPECT_FALSE(coords_in_basis(f9, basis, vec(f9, {1, 0, 0})).has_value());
}
