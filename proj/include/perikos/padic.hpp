#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace perikos {

using Integer = mpz_class;

/// Absolute precisions saturate here. Only zeros ever carry a precision this large.
inline constexpr std::int64_t kMaxPrecision = std::int64_t{1} << 40;
inline constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();

namespace detail {

inline std::int64_t clamp_precision(std::int64_t n) {
  return std::clamp(n, -kMaxPrecision, kMaxPrecision);
}

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  return clamp_precision(clamp_precision(a) + clamp_precision(b));
}

inline std::int64_t sat_mul(std::int64_t a, const Integer& e) {
  Integer r = Integer(static_cast<long>(clamp_precision(a))) * e;
  if (r > kMaxPrecision) return kMaxPrecision;
  if (r < -kMaxPrecision) return -kMaxPrecision;
  return r.get_si();
}

inline Integer pow_int(std::int64_t p, std::int64_t e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

/// Strips factors of p from n (n != 0) and returns how many were removed.
inline std::int64_t remove_prime(Integer& n, std::int64_t p) {
  const Integer pp(static_cast<unsigned long>(p));
  return static_cast<std::int64_t>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

inline std::int64_t valuation_of(const Integer& n, std::int64_t p) {
  if (n == 0) return kInfiniteValuation;
  Integer m = n;
  return remove_prime(m, p);
}

/// Least nonnegative residue of n modulo m.
inline Integer mod(const Integer& n, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline void check_prime(std::int64_t p) {
  if (p < 2) throw std::invalid_argument("prime must be >= 2, got " + std::to_string(p));
  if (mpz_probab_prime_p(Integer(static_cast<unsigned long>(p)).get_mpz_t(), 25) == 0)
    throw std::invalid_argument(std::to_string(p) + " is not prime");
}

}  // namespace detail

class Padic;

/// Constant factory for Q_p at a default absolute precision.
struct PadicRing {
  std::int64_t p = 2;
  std::int64_t precision = 20;

  std::int64_t prime() const { return p; }

  Padic zero() const;
  Padic one() const;
  Padic from_integer(const Integer& n) const;
  Padic from_rational(const Integer& num, const Integer& den) const;
  Padic p_power(std::int64_t k) const;

  friend bool operator==(const PadicRing&, const PadicRing&) = default;
};

/**
 * Element of Q_p known modulo p^N (absolute precision N).
 *
 * A nonzero element is p^v * u with u a unit stored as its least residue modulo
 * p^(N - v). Zero is the unique element with infinite valuation; it still
 * carries N, meaning "divisible by p^N". Values are immutable.
 */
class Padic {
 public:
  using Ring = PadicRing;

  Padic() = default;

  static Padic zero(std::int64_t p, std::int64_t precision) {
    Padic r;
    r.prime_ = p;
    r.prec_ = detail::clamp_precision(precision);
    return r;
  }

  /// p^valuation * unit mod p^precision, normalised.
  static Padic make(std::int64_t p, std::int64_t valuation, Integer unit, std::int64_t precision) {
    precision = detail::clamp_precision(precision);
    if (unit == 0 || valuation >= precision) return zero(p, precision);
    valuation += detail::remove_prime(unit, p);
    if (valuation >= precision) return zero(p, precision);
    Padic r;
    r.prime_ = p;
    r.val_ = valuation;
    r.prec_ = precision;
    r.unit_ = detail::mod(unit, detail::pow_int(p, precision - valuation));
    return r;
  }

  static Padic from_integer(std::int64_t p, const Integer& n, std::int64_t precision) {
    return make(p, 0, n, precision);
  }

  static Padic from_rational(std::int64_t p, const Integer& num, const Integer& den,
                             std::int64_t precision) {
    if (den == 0) throw std::invalid_argument("Padic::from_rational: zero denominator");
    Integer d = den;
    const std::int64_t vd = detail::remove_prime(d, p);
    if (num == 0) return zero(p, precision);
    Integer n = num;
    const std::int64_t vn = detail::remove_prime(n, p);
    const std::int64_t v = vn - vd;
    if (v >= precision) return zero(p, precision);
    const Integer modulus = detail::pow_int(p, precision - v);
    Integer dinv;
    mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), modulus.get_mpz_t());
    return make(p, v, n * dinv, precision);
  }

  /// Little-endian base-p digits of the unit part.
  static Padic from_digits(std::int64_t p, std::int64_t valuation, const std::vector<std::int64_t>& digits,
                           std::int64_t precision) {
    Integer unit = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      if (*it < 0 || *it >= p) throw std::invalid_argument("Padic digit out of range");
      unit = unit * static_cast<long>(p) + static_cast<long>(*it);
    }
    return make(p, valuation, unit, precision);
  }

  std::int64_t prime() const { return prime_; }
  bool is_zero() const { return val_ == kInfiniteValuation; }
  /// kInfiniteValuation for zero.
  std::int64_t valuation() const { return val_; }
  std::int64_t precision() const { return prec_; }
  std::int64_t relative_precision() const { return is_zero() ? 0 : prec_ - val_; }
  const Integer& unit() const { return unit_; }
  Ring ring() const { return Ring{prime_, prec_}; }

  std::vector<std::int64_t> digits() const {
    std::vector<std::int64_t> out;
    if (is_zero()) return out;
    Integer u = unit_;
    const Integer pp(static_cast<long>(prime_));
    for (std::int64_t i = 0; i < relative_precision(); ++i) {
      Integer d = detail::mod(u, pp);
      out.push_back(d.get_si());
      u = (u - d) / pp;
    }
    return out;
  }

  /// Integer representative in [0, p^N); requires valuation >= 0 and N >= 0.
  Integer representative() const {
    if (is_zero()) return 0;
    if (val_ < 0) throw DomainError("Padic::representative: element is not integral");
    return unit_ * detail::pow_int(prime_, val_);
  }

  bool is_integral() const { return is_zero() ? prec_ >= 0 : val_ >= 0; }

  /// Same value, known only modulo p^n (never raises precision).
  Padic truncated(std::int64_t n) const {
    if (n >= prec_) return *this;
    if (is_zero()) return zero(prime_, n);
    return make(prime_, val_, unit_, n);
  }

  /// Exact multiplication by p^k; always legal since we work in Q_p.
  Padic shifted(std::int64_t k) const {
    if (is_zero()) return zero(prime_, detail::sat_add(prec_, k));
    Padic r = *this;
    r.val_ += k;
    r.prec_ += k;
    return r;
  }

  Padic times_integer(const Integer& n) const {
    if (n == 0) return zero(prime_, kMaxPrecision);
    Integer m = n;
    const std::int64_t k = detail::remove_prime(m, prime_);
    if (is_zero()) return zero(prime_, detail::sat_add(prec_, k));
    return make(prime_, val_ + k, unit_ * m, prec_ + k);
  }

  Padic operator-() const {
    if (is_zero()) return *this;
    return make(prime_, val_, -unit_, prec_);
  }

  friend Padic operator+(const Padic& a, const Padic& b) {
    check_same(a, b);
    const std::int64_t n = std::min(a.prec_, b.prec_);
    if (a.is_zero() && b.is_zero()) return zero(a.prime_, n);
    const std::int64_t m = std::min(a.val_, b.val_);
    if (m >= n) return zero(a.prime_, n);
    Integer sum = 0;
    for (const Padic* x : {&a, &b}) {
      if (x->is_zero() || x->val_ >= n) continue;
      sum += x->unit_ * detail::pow_int(a.prime_, x->val_ - m);
    }
    return make(a.prime_, m, std::move(sum), n);
  }

  friend Padic operator-(const Padic& a, const Padic& b) { return a + (-b); }

  friend Padic operator*(const Padic& a, const Padic& b) {
    check_same(a, b);
    const std::int64_t va = a.is_zero() ? a.prec_ : a.val_;
    const std::int64_t vb = b.is_zero() ? b.prec_ : b.val_;
    const std::int64_t n = std::min(detail::sat_add(va, b.prec_), detail::sat_add(vb, a.prec_));
    if (a.is_zero() || b.is_zero()) return zero(a.prime_, n);
    const std::int64_t v = a.val_ + b.val_;
    if (v >= n) return zero(a.prime_, n);
    return make(a.prime_, v, a.unit_ * b.unit_, n);
  }

  Padic& operator+=(const Padic& b) { return *this = *this + b; }
  Padic& operator-=(const Padic& b) { return *this = *this - b; }
  Padic& operator*=(const Padic& b) { return *this = *this * b; }

  /// Throws DomainError when the element is indistinguishable from zero.
  Padic inverse() const {
    if (is_zero())
      throw DomainError("Padic::inverse: element is zero modulo p^" + std::to_string(prec_));
    const std::int64_t r = relative_precision();
    const Integer modulus = detail::pow_int(prime_, r);
    Integer inv;
    mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), modulus.get_mpz_t());
    return make(prime_, -val_, inv, -val_ + r);
  }

  friend Padic operator/(const Padic& a, const Padic& b) { return a * b.inverse(); }

  /// a^e for e >= 0; a nonzero unit raised to e keeps r + v_p(e) digits.
  Padic pow(const Integer& e) const {
    if (e < 0) return inverse().pow(-e);
    if (e == 0) return make(prime_, 0, 1, is_zero() ? 1 : relative_precision());
    if (is_zero()) return zero(prime_, detail::sat_mul(prec_, e));
    const std::int64_t v = detail::sat_mul(val_, e);
    if (v >= kMaxPrecision) return zero(prime_, kMaxPrecision);
    const std::int64_t vpe = detail::valuation_of(e, prime_);
    const std::int64_t r = relative_precision() + vpe;
    const Integer modulus = detail::pow_int(prime_, r);
    Integer u;
    mpz_powm(u.get_mpz_t(), unit_.get_mpz_t(), e.get_mpz_t(), modulus.get_mpz_t());
    return make(prime_, v, u, v + r);
  }

  /// True when a - b is zero at the common precision.
  friend bool same_value(const Padic& a, const Padic& b) { return (a - b).is_zero(); }

  /// Structural (bit-for-bit) equality: same prime, valuation, digits and precision.
  friend bool operator==(const Padic& a, const Padic& b) {
    return a.prime_ == b.prime_ && a.val_ == b.val_ && a.prec_ == b.prec_ && a.unit_ == b.unit_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Padic& a) {
    if (a.is_zero()) return os << "O(" << a.prime_ << "^" << a.prec_ << ")";
    os << a.unit_.get_str();
    if (a.val_ != 0) os << "*" << a.prime_ << "^" << a.val_;
    return os << " + O(" << a.prime_ << "^" << a.prec_ << ")";
  }

 private:
  static void check_same(const Padic& a, const Padic& b) {
    if (a.prime_ != b.prime_)
      throw ParameterMismatch("Padic: prime mismatch (" + std::to_string(a.prime_) + " vs " +
                              std::to_string(b.prime_) + ")");
  }

  std::int64_t prime_ = 2;
  std::int64_t val_ = kInfiniteValuation;
  std::int64_t prec_ = 0;
  Integer unit_ = 0;
};

inline Padic PadicRing::zero() const { return Padic::zero(p, precision); }
inline Padic PadicRing::one() const { return Padic::from_integer(p, 1, precision); }
inline Padic PadicRing::from_integer(const Integer& n) const {
  return Padic::from_integer(p, n, precision);
}
inline Padic PadicRing::from_rational(const Integer& num, const Integer& den) const {
  return Padic::from_rational(p, num, den, precision);
}
inline Padic PadicRing::p_power(std::int64_t k) const { return Padic::make(p, k, 1, precision); }

}  // namespace perikos
