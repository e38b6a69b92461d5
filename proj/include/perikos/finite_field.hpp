#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padic.hpp"

namespace perikos {

namespace detail {

// Conway polynomials, coefficients low degree first, leading 1 included.
inline const std::map<std::pair<std::int64_t, int>, std::vector<std::int64_t>>& conway_table() {
  static const std::map<std::pair<std::int64_t, int>, std::vector<std::int64_t>> table = {
      {{2, 1}, {1, 1}},
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{3, 1}, {1, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{3, 5}, {1, 2, 0, 0, 0, 1}},
      {{3, 6}, {2, 2, 1, 0, 2, 0, 1}},
      {{5, 1}, {3, 1}},
      {{5, 2}, {2, 4, 1}},
      {{5, 3}, {3, 3, 0, 1}},
      {{5, 4}, {2, 1, 4, 0, 1}},
      {{5, 5}, {3, 4, 0, 0, 0, 1}},
      {{5, 6}, {2, 0, 1, 4, 1, 0, 1}},
      {{7, 1}, {4, 1}},
      {{7, 2}, {3, 6, 1}},
      {{7, 3}, {4, 0, 6, 1}},
      {{7, 4}, {3, 4, 5, 0, 1}},
      {{7, 5}, {4, 1, 0, 0, 0, 1}},
      {{7, 6}, {3, 6, 4, 5, 1, 0, 1}},
      {{11, 1}, {9, 1}},
      {{11, 2}, {2, 7, 1}},
      {{11, 3}, {9, 2, 0, 1}},
      {{11, 4}, {2, 10, 8, 0, 1}},
      {{13, 1}, {11, 1}},
      {{13, 2}, {2, 12, 1}},
      {{13, 3}, {11, 2, 0, 1}},
      {{13, 4}, {2, 12, 3, 0, 1}},
  };
  return table;
}

}  // namespace detail

/// F_{p^m} = F_p[x]/(f). Elements are coordinate vectors in the basis 1, x, ..., x^(m-1).
class FiniteField {
 public:
  using Elem = std::vector<std::int64_t>;

  FiniteField(std::int64_t p, int m) : p_(p), m_(m) {
    detail::check_prime(p);
    if (m < 1) throw std::invalid_argument("FiniteField: degree must be >= 1");
    const auto& table = detail::conway_table();
    if (auto it = table.find({p, m}); it != table.end()) {
      modulus_ = it->second;
    } else {
      modulus_ = first_irreducible(p, m);
    }
  }

  /// Uses an explicit monic modulus; it must be irreducible.
  FiniteField(std::int64_t p, std::vector<std::int64_t> modulus)
      : p_(p), m_(static_cast<int>(modulus.size()) - 1), modulus_(std::move(modulus)) {
    detail::check_prime(p);
    if (m_ < 1 || modulus_.back() != 1) throw std::invalid_argument("FiniteField: modulus must be monic");
    if (!is_irreducible(p_, modulus_)) throw std::invalid_argument("FiniteField: modulus is reducible");
  }

  std::int64_t prime() const { return p_; }
  int degree() const { return m_; }
  std::int64_t order() const {
    std::int64_t q = 1;
    for (int i = 0; i < m_; ++i) q *= p_;
    return q;
  }
  const std::vector<std::int64_t>& modulus() const { return modulus_; }

  Elem zero() const { return Elem(m_, 0); }
  Elem one() const {
    Elem e(m_, 0);
    e[0] = 1;
    return e;
  }
  /// The class of x, a root of the modulus.
  Elem generator() const {
    Elem e(m_, 0);
    if (m_ == 1) {
      e[0] = norm(-modulus_[0]);
    } else {
      e[1] = 1;
    }
    return e;
  }
  Elem from_int(std::int64_t a) const {
    Elem e(m_, 0);
    e[0] = norm(a);
    return e;
  }

  bool is_zero(const Elem& a) const {
    for (auto c : a)
      if (c != 0) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (int i = 0; i < m_; ++i) r[i] = norm(a[i] + b[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (int i = 0; i < m_; ++i) r[i] = norm(a[i] - b[i]);
    return r;
  }

  Elem mul(const Elem& a, const Elem& b) const {
    std::vector<std::int64_t> prod(2 * m_ - 1, 0);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) prod[i + j] = norm(prod[i + j] + a[i] * b[j]);
    for (int k = 2 * m_ - 2; k >= m_; --k) {
      const std::int64_t c = prod[k];
      if (c == 0) continue;
      for (int i = 0; i <= m_; ++i) prod[k - m_ + i] = norm(prod[k - m_ + i] - c * modulus_[i]);
    }
    prod.resize(m_);
    return prod;
  }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = one();
    while (e > 0) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }

  Elem frobenius(const Elem& a) const { return pow(a, static_cast<std::uint64_t>(p_)); }

  Elem inverse(const Elem& a) const {
    if (is_zero(a)) throw DomainError("FiniteField: inverse of zero");
    return pow(a, static_cast<std::uint64_t>(order() - 2));
  }

  /// Enumeration index in [0, q): little-endian base-p reading of the coordinates.
  Elem from_index(std::int64_t index) const {
    Elem e(m_, 0);
    for (int i = 0; i < m_; ++i) {
      e[i] = index % p_;
      index /= p_;
    }
    return e;
  }

  /// Rabin test over F_p.
  static bool is_irreducible(std::int64_t p, const std::vector<std::int64_t>& f) {
    const int m = static_cast<int>(f.size()) - 1;
    if (m < 1) return false;
    if (m == 1) return true;
    // x^(p^m) == x mod f, and gcd(x^(p^(m/q)) - x, f) == 1 for prime divisors q of m.
    auto xpow = [&](int k) {
      Poly x = {0, 1};
      Poly r = x;
      for (int i = 0; i < k; ++i) r = poly_powmod(r, p, f, p);
      return r;
    };
    Poly full = poly_sub(xpow(m), {0, 1}, p);
    if (!poly_mod(full, f, p).empty()) return false;
    for (int q = 2; q <= m; ++q) {
      if (m % q != 0) continue;
      bool prime_q = true;
      for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) prime_q = false;
      if (!prime_q) continue;
      Poly g = poly_gcd(poly_sub(xpow(m / q), {0, 1}, p), f, p);
      if (g.size() != 1) return false;
    }
    return true;
  }

  /// Whether x generates the multiplicative group.
  bool generator_is_primitive() const {
    const std::int64_t n = order() - 1;
    std::int64_t rest = n;
    for (std::int64_t q = 2; q <= rest; ++q) {
      if (rest % q != 0) continue;
      while (rest % q == 0) rest /= q;
      if (pow(generator(), static_cast<std::uint64_t>(n / q)) == one()) return false;
    }
    return true;
  }

 private:
  using Poly = std::vector<std::int64_t>;

  std::int64_t norm(std::int64_t a) const {
    a %= p_;
    return a < 0 ? a + p_ : a;
  }

  static std::int64_t nmod(std::int64_t a, std::int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
  }

  static void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }

  static Poly poly_sub(Poly a, const Poly& b, std::int64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = nmod(a[i] - b[i], p);
    trim(a);
    return a;
  }

  static Poly poly_mul(const Poly& a, const Poly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = nmod(r[i + j] + a[i] * b[j], p);
    trim(r);
    return r;
  }

  static Poly poly_mod(Poly a, const Poly& f, std::int64_t p) {
    Poly g = f;
    trim(g);
    trim(a);
    const std::int64_t lead_inv = inv_mod(g.back(), p);
    while (a.size() >= g.size()) {
      const std::int64_t c = nmod(a.back() * lead_inv, p);
      const std::size_t shift = a.size() - g.size();
      for (std::size_t i = 0; i < g.size(); ++i) a[shift + i] = nmod(a[shift + i] - c * g[i], p);
      trim(a);
    }
    return a;
  }

  static Poly poly_powmod(Poly a, std::int64_t e, const Poly& f, std::int64_t p) {
    Poly r = {1};
    a = poly_mod(a, f, p);
    while (e > 0) {
      if (e & 1) r = poly_mod(poly_mul(r, a, p), f, p);
      a = poly_mod(poly_mul(a, a, p), f, p);
      e >>= 1;
    }
    return r;
  }

  static Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
      Poly r = poly_mod(a, b, p);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  static std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    std::int64_t r = 1, base = nmod(a, p), e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return r;
  }

  // Deterministic fallback for (p, m) pairs absent from the table.
  static Poly first_irreducible(std::int64_t p, int m) {
    std::int64_t count = 1;
    for (int i = 0; i < m; ++i) count *= p;
    for (std::int64_t idx = 0; idx < count; ++idx) {
      Poly f(m + 1, 0);
      std::int64_t k = idx;
      for (int i = 0; i < m; ++i) {
        f[i] = k % p;
        k /= p;
      }
      f[m] = 1;
      if (f[0] != 0 && is_irreducible(p, f)) return f;
    }
    throw std::logic_error("FiniteField: no irreducible polynomial found");
  }

  std::int64_t p_;
  int m_;
  std::vector<std::int64_t> modulus_;
};

}  // namespace perikos
