#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gpmod/error.hpp"

namespace gpmod {

using json = nlohmann::json;

enum class SigmaKind { identity, frobenius };

namespace detail {

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense polynomials over F_p, little-endian, trimmed.
using ppoly = std::vector<std::uint32_t>;

inline void ptrim(ppoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ppoly pmod(ppoly a, const ppoly& m, std::uint32_t p) {
  ptrim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = mod_pow(m.back(), p - 2, p);
  while (a.size() >= m.size()) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i] % p) % p);
    ptrim(a);
  }
  return a;
}

inline bool irreducible_mod_p(const ppoly& m, std::uint32_t p) {
  const std::size_t deg = m.size() - 1;
  if (deg <= 1) return deg == 1;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      ppoly f(d + 1);
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < d; ++i) {
        f[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      f[d] = 1;
      if (pmod(m, f, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// F_p or F_{p^k} with sigma = identity or Frobenius.
///
/// Elements are indices in [0, q): the base-p digits of an index are the
/// little-endian coefficients of the residue polynomial.
class FiniteField {
 public:
  using value_type = std::uint32_t;

  FiniteField(std::uint32_t p, int k, std::vector<std::uint32_t> modulus = {},
              SigmaKind sigma = SigmaKind::frobenius)
      : p_(p), k_(k), sigma_kind_(sigma) {
    if (!detail::is_prime(p) || p > 0x7fffffffu) throw domain_error("characteristic must be a prime below 2^31");
    if (k < 1) throw domain_error("extension degree must be positive");
    q_ = 1;
    for (int i = 0; i < k; ++i) {
      q_ *= p;
      if (k > 1 && q_ > (1u << 22)) throw domain_error("extension field too large (q > 2^22)");
    }
    if (k == 1) {
      modulus_ = {0, 1};
    } else {
      if (modulus.empty()) modulus = builtin_modulus(p, k);
      if (modulus.size() != static_cast<std::size_t>(k) + 1 || modulus.back() != 1)
        throw domain_error("modulus must be monic of degree k");
      for (auto c : modulus)
        if (c >= p) throw domain_error("modulus coefficients must lie in [0, p)");
      if (!detail::irreducible_mod_p(modulus, p)) throw domain_error("modulus is reducible over F_p");
      modulus_ = std::move(modulus);
      build_tables();
    }
    sigma_order_ = (sigma_kind_ == SigmaKind::frobenius) ? k_ : 1;
    build_sigma();
  }

  static FiniteField prime(std::uint32_t p) { return FiniteField(p, 1); }

  // Small fields with conventional moduli.
  static std::vector<std::uint32_t> builtin_modulus(std::uint32_t p, int k) {
    static const std::map<std::pair<std::uint32_t, int>, std::vector<std::uint32_t>> table = {
        {{2, 2}, {1, 1, 1}},    {{2, 3}, {1, 1, 0, 1}}, {{3, 2}, {1, 0, 1}},
        {{5, 2}, {2, 0, 1}},    {{3, 3}, {1, 2, 0, 1}}, {{2, 4}, {1, 1, 0, 0, 1}},
        {{7, 2}, {1, 0, 1}},
    };
    auto it = table.find({p, k});
    if (it == table.end()) throw domain_error("no built-in modulus for this (p, k); supply one");
    return it->second;
  }

  std::uint32_t characteristic() const { return p_; }
  int degree() const { return k_; }
  std::uint64_t size() const { return q_; }
  bool is_finite() const { return true; }
  SigmaKind sigma_kind() const { return sigma_kind_; }
  int sigma_order() const { return sigma_order_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }
  value_type element(std::uint64_t i) const { return static_cast<value_type>(i); }
  std::uint64_t index(value_type a) const { return a; }
  bool is_zero(value_type a) const { return a == 0; }

  value_type add(value_type a, value_type b) const {
    if (k_ == 1) {
      std::uint64_t s = std::uint64_t(a) + b;
      return static_cast<value_type>(s >= p_ ? s - p_ : s);
    }
    if (!add_table_.empty()) return add_table_[std::size_t(a) * q_ + b];
    if (p_ == 2) return a ^ b;
    value_type r = 0, place = 1;
    for (int i = 0; i < k_; ++i) {
      r += ((a % p_ + b % p_) % p_) * place;
      a /= p_;
      b /= p_;
      place *= p_;
    }
    return r;
  }
  value_type neg(value_type a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    return neg_table_[a];
  }
  value_type sub(value_type a, value_type b) const { return add(a, neg(b)); }
  value_type mul(value_type a, value_type b) const {
    if (k_ == 1) return static_cast<value_type>(std::uint64_t(a) * b % p_);
    if (a == 0 || b == 0) return 0;
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= static_cast<std::uint32_t>(q_ - 1);
    return exp_[e];
  }
  value_type inv(value_type a) const {
    if (a == 0) throw domain_error("inverse of zero");
    if (k_ == 1) return static_cast<value_type>(detail::mod_pow(a, p_ - 2, p_));
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

  /// sigma^e(a); e is reduced modulo sigma_order.
  value_type sigma(value_type a, long long e) const {
    if (sigma_order_ == 1) return a;
    long long r = e % sigma_order_;
    if (r < 0) r += sigma_order_;
    return sigma_tables_[static_cast<std::size_t>(r)][a];
  }

  /// Matrix over F_p of x -> x^p on little-endian coefficient vectors.
  /// Entry (i, j) is coefficient i of (x^j)^p.
  std::vector<std::vector<std::uint32_t>> frobenius_matrix() const {
    std::vector<std::vector<std::uint32_t>> m(k_, std::vector<std::uint32_t>(k_, 0));
    for (int j = 0; j < k_; ++j) {
      value_type xj = 1;
      for (int t = 0; t < j; ++t) xj = times_x(xj);
      value_type img = pow(xj, p_);
      auto c = coeffs(img);
      for (int i = 0; i < k_; ++i) m[i][j] = c[i];
    }
    return m;
  }

  value_type pow(value_type a, std::uint64_t e) const {
    value_type r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  std::vector<std::uint32_t> coeffs(value_type a) const {
    std::vector<std::uint32_t> c(k_);
    for (int i = 0; i < k_; ++i) {
      c[i] = a % p_;
      a /= p_;
    }
    return c;
  }
  value_type from_coeffs(const std::vector<std::uint32_t>& c) const {
    value_type r = 0, place = 1;
    for (int i = 0; i < k_; ++i) {
      r += (i < static_cast<int>(c.size()) ? c[i] % p_ : 0) * place;
      place *= p_;
    }
    return r;
  }

  template <class Rng>
  value_type random(Rng& rng) const {
    return static_cast<value_type>(rng() % q_);
  }

  json to_json(value_type a) const {
    if (k_ == 1) return a;
    json arr = json::array();
    for (auto c : coeffs(a)) arr.push_back(c);
    return arr;
  }
  value_type from_json(const json& j) const {
    if (j.is_number_integer()) return from_int(j.get<long long>());
    if (j.is_array()) {
      if (j.size() > static_cast<std::size_t>(k_)) throw parse_error("field element has too many coefficients");
      std::vector<std::uint32_t> c(k_, 0);
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) throw parse_error("field element coefficient must be an integer");
        c[i] = from_int(j[i].get<long long>());
      }
      return from_coeffs(c);
    }
    throw parse_error("cannot parse finite-field element: " + j.dump());
  }

  json descriptor() const {
    json d = {{"kind", "Fq"}, {"p", p_}, {"k", k_}};
    if (k_ > 1) d["modulus"] = modulus_;
    if (sigma_kind_ == SigmaKind::identity && k_ > 1) d["sigma"] = "identity";
    return d;
  }

  std::string name() const { return "F" + std::to_string(q_); }

  bool operator==(const FiniteField& o) const {
    return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_ && sigma_order_ == o.sigma_order_;
  }

 private:
  // Multiply the residue a by x (only used while building tables).
  value_type times_x(value_type a) const {
    auto c = coeffs(a);
    std::vector<std::uint32_t> r(k_ + 1, 0);
    for (int i = 0; i < k_; ++i) r[i + 1] = c[i];
    std::uint32_t top = r[k_];
    for (int i = 0; i < k_; ++i) r[i] = static_cast<std::uint32_t>((r[i] + std::uint64_t(p_ - modulus_[i]) * top) % p_);
    r.resize(k_);
    return from_coeffs(r);
  }

  value_type slow_mul(value_type a, value_type b) const {
    auto ca = coeffs(a), cb = coeffs(b);
    detail::ppoly prod(2 * k_, 0);
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j) prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t(ca[i]) * cb[j]) % p_);
    auto r = detail::pmod(prod, modulus_, p_);
    r.resize(k_, 0);
    return from_coeffs(r);
  }

  void build_tables() {
    neg_table_.resize(q_);
    for (value_type a = 0; a < q_; ++a) {
      auto c = coeffs(a);
      for (auto& x : c) x = x == 0 ? 0 : p_ - x;
      neg_table_[a] = from_coeffs(c);
    }
    if (q_ <= 256) {
      add_table_.resize(q_ * q_);
      for (value_type a = 0; a < q_; ++a) {
        auto ca = coeffs(a);
        for (value_type b = 0; b < q_; ++b) {
          auto cb = coeffs(b);
          for (int i = 0; i < k_; ++i) cb[i] = (ca[i] + cb[i]) % p_;
          add_table_[a * q_ + b] = from_coeffs(cb);
        }
      }
    }
    const std::uint64_t order = q_ - 1;
    exp_.assign(order, 0);
    log_.assign(q_, 0);
    for (value_type g = 2; g < q_; ++g) {
      value_type x = 1;
      std::uint64_t i = 0;
      bool primitive = true;
      for (; i < order; ++i) {
        if (i > 0 && x == 1) {
          primitive = false;
          break;
        }
        exp_[i] = x;
        x = slow_mul(x, g);
      }
      if (primitive && x == 1) break;
      check_internal(g + 1 < q_, "no primitive element found");
    }
    for (std::uint64_t i = 0; i < order; ++i) log_[exp_[i]] = static_cast<std::uint32_t>(i);
  }

  void build_sigma() {
    sigma_tables_.clear();
    if (sigma_order_ == 1) return;
    auto m = frobenius_matrix();
    std::vector<std::vector<std::uint32_t>> power(k_, std::vector<std::uint32_t>(k_, 0));
    for (int i = 0; i < k_; ++i) power[i][i] = 1;
    for (int e = 0; e < sigma_order_; ++e) {
      std::vector<value_type> table(q_);
      for (value_type a = 0; a < q_; ++a) {
        auto c = coeffs(a);
        std::vector<std::uint32_t> r(k_, 0);
        for (int i = 0; i < k_; ++i) {
          std::uint64_t s = 0;
          for (int j = 0; j < k_; ++j) s += std::uint64_t(power[i][j]) * c[j];
          r[i] = static_cast<std::uint32_t>(s % p_);
        }
        table[a] = from_coeffs(r);
      }
      sigma_tables_.push_back(std::move(table));
      std::vector<std::vector<std::uint32_t>> next(k_, std::vector<std::uint32_t>(k_, 0));
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j) {
          std::uint64_t s = 0;
          for (int t = 0; t < k_; ++t) s += std::uint64_t(m[i][t]) * power[t][j];
          next[i][j] = static_cast<std::uint32_t>(s % p_);
        }
      power = std::move(next);
    }
  }

  std::uint32_t p_;
  int k_;
  std::uint64_t q_ = 1;
  SigmaKind sigma_kind_;
  int sigma_order_ = 1;
  std::vector<std::uint32_t> modulus_;
  std::vector<value_type> add_table_, neg_table_, exp_, log_;
  std::vector<std::vector<value_type>> sigma_tables_;
};

/// The rationals with sigma = identity.
class Rationals {
 public:
  using value_type = mpq_class;

  std::uint32_t characteristic() const { return 0; }
  std::uint64_t size() const { return 0; }
  bool is_finite() const { return false; }
  SigmaKind sigma_kind() const { return SigmaKind::identity; }
  int sigma_order() const { return 1; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return value_type(static_cast<long>(v)); }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw domain_error("inverse of zero");
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const { return mul(a, inv(b)); }
  value_type sigma(const value_type& a, long long) const { return a; }

  template <class Rng>
  value_type random(Rng& rng) const {
    long num = static_cast<long>(rng() % 7) - 3;
    long den = static_cast<long>(rng() % 3) + 1;
    value_type r(num, den);
    r.canonicalize();
    return r;
  }

  json to_json(const value_type& a) const { return a.get_num().get_str() + "/" + a.get_den().get_str(); }
  value_type from_json(const json& j) const {
    if (j.is_number_integer()) return from_int(j.get<long long>());
    if (j.is_string()) {
      value_type r;
      if (r.set_str(j.get<std::string>(), 10) != 0 || r.get_den() == 0)
        throw parse_error("cannot parse rational: " + j.dump());
      r.canonicalize();
      return r;
    }
    throw parse_error("cannot parse rational: " + j.dump());
  }

  json descriptor() const { return {{"kind", "Q"}}; }
  std::string name() const { return "Q"; }
  bool operator==(const Rationals&) const { return true; }
};

using AnyField = std::variant<FiniteField, Rationals>;

inline AnyField field_from_json(const json& d) {
  if (!d.is_object() || !d.contains("kind")) throw parse_error("field descriptor needs a \"kind\"");
  const std::string kind = d.at("kind").get<std::string>();
  if (kind == "Q") {
    if (d.contains("sigma") && d.at("sigma") != "identity") throw domain_error("Q only supports sigma = identity");
    return Rationals{};
  }
  if (kind != "Fq" && kind != "Fp") throw parse_error("unknown field kind: " + kind);
  if (!d.contains("p")) throw parse_error("finite field descriptor needs \"p\"");
  const auto p = d.at("p").get<std::uint32_t>();
  const int k = d.value("k", 1);
  std::vector<std::uint32_t> modulus;
  if (d.contains("modulus")) modulus = d.at("modulus").get<std::vector<std::uint32_t>>();
  SigmaKind s = SigmaKind::frobenius;
  if (d.contains("sigma")) {
    const auto sk = d.at("sigma").get<std::string>();
    if (sk == "identity") s = SigmaKind::identity;
    else if (sk != "frobenius") throw parse_error("sigma must be \"identity\" or \"frobenius\"");
  }
  if (k == 1) modulus.clear();
  return FiniteField(p, k, modulus, s);
}

/// Short names: "Q", "F<q>" for prime powers with a built-in modulus.
inline AnyField field_from_name(const std::string& name) {
  if (name == "Q") return Rationals{};
  if (name.size() < 2 || name[0] != 'F') {
    if (!name.empty() && name[0] == '{') return field_from_json(json::parse(name));
    throw parse_error("unknown field name: " + name);
  }
  std::uint64_t q = 0;
  try {
    q = std::stoull(name.substr(1));
  } catch (const std::exception&) {
    throw parse_error("unknown field name: " + name);
  }
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (q % p) continue;
    if (!detail::is_prime(p)) throw parse_error("not a prime power: " + name);
    int k = 0;
    std::uint64_t t = q;
    while (t % p == 0) {
      t /= p;
      ++k;
    }
    if (t != 1) throw parse_error("not a prime power: " + name);
    return FiniteField(p, k);
  }
  throw parse_error("unknown field name: " + name);
}

inline json field_descriptor(const AnyField& f) {
  return std::visit([](const auto& k) { return k.descriptor(); }, f);
}

}  // namespace gpmod
