#include <gtest/gtest.h>

#include "gpmod/field.hpp"
#include "gpmod/random.hpp"

using namespace gpmod;

namespace {

// Schoolbook product of little-endian coefficient vectors, reduced by a monic
// modulus. Independent of the table-driven field arithmetic.
std::vector<std::uint32_t> naive_mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                     const std::vector<std::uint32_t>& mod, std::uint32_t p) {
  const std::size_t k = mod.size() - 1;
  std::vector<std::uint64_t> r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  for (std::size_t d = r.size(); d-- > k;) {
    const auto c = r[d] % p;
    if (!c) continue;
    for (std::size_t i = 0; i <= k; ++i) r[d - k + i] = (r[d - k + i] + (p - c) * mod[i]) % p;
  }
  return std::vector<std::uint32_t>(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
}

std::vector<FiniteField> small_fields() {
  return {FiniteField(2, 1), FiniteField(3, 1), FiniteField(5, 1), FiniteField(2, 2),
          FiniteField(3, 2), FiniteField(2, 3), FiniteField(5, 2)};
}

}  // namespace

TEST(Field, F4FrobeniusOfX) {
  const FiniteField f4(2, 2);
  const auto x = f4.from_coeffs({0, 1});
  const auto squared = naive_mul({0, 1}, {0, 1}, {1, 1, 1}, 2);
  EXPECT_EQ(squared, (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(f4.sigma(x, 1), f4.from_coeffs(squared));
}

TEST(Field, F4FrobeniusMatrix) {
  const FiniteField f4(2, 2);
  EXPECT_EQ(f4.frobenius_matrix(), (std::vector<std::vector<std::uint32_t>>{{1, 1}, {0, 1}}));
}

TEST(Field, F3InverseOfTwo) {
  const auto f3 = FiniteField::prime(3);
  EXPECT_EQ(f3.inv(2), 2u);
}

TEST(Field, MultiplicationMatchesSchoolbook) {
  for (const auto& k : small_fields()) {
    if (k.degree() == 1) continue;
    const auto mod = k.descriptor().at("modulus").get<std::vector<std::uint32_t>>();
    for (std::uint64_t a = 0; a < k.size(); ++a)
      for (std::uint64_t b = 0; b < k.size(); ++b) {
        const auto ea = k.element(a), eb = k.element(b);
        ASSERT_EQ(k.coeffs(k.mul(ea, eb)), naive_mul(k.coeffs(ea), k.coeffs(eb), mod, k.characteristic()))
            << k.name();
      }
  }
}

TEST(Field, AxiomsByEnumeration) {
  for (const auto& k : small_fields()) {
    for (std::uint64_t i = 0; i < k.size(); ++i) {
      const auto a = k.element(i);
      EXPECT_TRUE(k.is_zero(k.add(a, k.neg(a))));
      EXPECT_EQ(k.sub(a, a), k.zero());
      if (!k.is_zero(a)) {
        EXPECT_EQ(k.mul(a, k.inv(a)), k.one()) << k.name();
      }
      for (std::uint64_t j = 0; j < k.size(); ++j) {
        const auto b = k.element(j);
        EXPECT_EQ(k.add(a, b), k.add(b, a));
        EXPECT_EQ(k.mul(a, b), k.mul(b, a));
        const auto c = k.element((i * 7 + j * 3 + 1) % k.size());
        EXPECT_EQ(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
      }
    }
  }
}

TEST(Field, SigmaIsTheFrobeniusPower) {
  for (const auto& k : small_fields()) {
    EXPECT_EQ(k.sigma_order(), k.degree());
    for (std::uint64_t i = 0; i < k.size(); ++i) {
      const auto a = k.element(i);
      EXPECT_EQ(k.sigma(a, 1), k.pow(a, k.characteristic()));
      EXPECT_EQ(k.sigma(k.sigma(a, 1), -1), a);
      EXPECT_EQ(k.sigma(a, k.degree()), a);
      EXPECT_EQ(k.sigma(a, 2), k.sigma(k.sigma(a, 1), 1));
      for (std::uint64_t j = 0; j < k.size(); ++j) {
        const auto b = k.element(j);
        EXPECT_EQ(k.sigma(k.mul(a, b), 1), k.mul(k.sigma(a, 1), k.sigma(b, 1)));
        EXPECT_EQ(k.sigma(k.add(a, b), 1), k.add(k.sigma(a, 1), k.sigma(b, 1)));
      }
    }
  }
}

TEST(Field, IdentitySigmaOption) {
  const FiniteField k(2, 2, {}, SigmaKind::identity);
  EXPECT_EQ(k.sigma_order(), 1);
  for (std::uint64_t i = 0; i < k.size(); ++i) EXPECT_EQ(k.sigma(k.element(i), 1), k.element(i));
}

TEST(Field, RejectsBadParameters) {
  EXPECT_THROW(FiniteField(4, 1), domain_error);
  EXPECT_THROW(FiniteField(2, 2, {1, 0, 1}), domain_error);  // x^2 + 1 = (x + 1)^2
  EXPECT_THROW(FiniteField(2, 0), domain_error);
  EXPECT_THROW(FiniteField(2, 1).inv(0), domain_error);
  EXPECT_THROW(Rationals().inv(0), domain_error);
}

TEST(Field, JsonRoundTrip) {
  for (const auto& k : small_fields())
    for (std::uint64_t i = 0; i < k.size(); ++i) EXPECT_EQ(k.from_json(k.to_json(k.element(i))), k.element(i));
  const Rationals q;
  const mpq_class half(1, 2);
  EXPECT_EQ(q.from_json(q.to_json(half)), half);
  EXPECT_EQ(q.from_json(json(-3)), mpq_class(-3));
}

TEST(Field, NamesAndDescriptors) {
  const auto f9 = std::get<FiniteField>(field_from_name("F9"));
  EXPECT_EQ(f9.characteristic(), 3u);
  EXPECT_EQ(f9.degree(), 2);
  EXPECT_EQ(field_descriptor(field_from_json(f9.descriptor())), f9.descriptor());
  EXPECT_TRUE(std::holds_alternative<Rationals>(field_from_name("Q")));
  EXPECT_THROW(field_from_name("F6"), parse_error);
  EXPECT_THROW(field_from_name("G2"), parse_error);
}

TEST(Field, RationalArithmetic) {
  const Rationals q;
  const mpq_class a(2, 3), b(-5, 7);
  EXPECT_EQ(q.mul(a, q.inv(a)), q.one());
  EXPECT_EQ(q.add(a, b), mpq_class(-1, 21));
  EXPECT_EQ(q.sigma(a, 5), a);
}

TEST(Field, RandomStaysInRange) {
  Rng rng(7);
  const FiniteField f9(3, 2);
  for (int i = 0; i < 200; ++i) EXPECT_LT(f9.random(rng), f9.size());
}
