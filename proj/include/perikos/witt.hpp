#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "finite_field.hpp"
#include "padic.hpp"

namespace perikos {

/**
 * Structure of W(F_{p^m}) = Z_p[x]/(F), F the integer lift of the field's
 * fixed modulus. Shared (immutably) by all elements over the same field.
 *
 * The Frobenius sends x to the unique root of F congruent to x^p mod p; that
 * root is Hensel-lifted once at construction up to cached_precision digits and
 * recomputed locally when more are requested.
 */
class WittContext {
 public:
  using Coords = std::vector<Integer>;

  static std::shared_ptr<const WittContext> make(std::int64_t p, int m,
                                                 std::int64_t cached_precision = 96) {
    return std::shared_ptr<const WittContext>(new WittContext(p, m, cached_precision));
  }

  std::int64_t prime() const { return field_.prime(); }
  int degree() const { return field_.degree(); }
  const FiniteField& residue_field() const { return field_; }

  Integer modulus_power(std::int64_t r) const { return detail::pow_int(prime(), r); }

  Coords reduce(Coords a, std::int64_t r) const {
    const Integer mod = modulus_power(r);
    for (auto& c : a) c = detail::mod(c, mod);
    return a;
  }

  Coords mul(const Coords& a, const Coords& b, std::int64_t r) const {
    const int m = degree();
    if (m == 1) return {detail::mod(a[0] * b[0], modulus_power(r))};
    Coords prod(2 * m - 1, Integer(0));
    for (int i = 0; i < m; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < m; ++j) prod[i + j] += a[i] * b[j];
    }
    const auto& f = field_.modulus();
    for (int k = 2 * m - 2; k >= m; --k) {
      if (prod[k] == 0) continue;
      const Integer c = prod[k];
      for (int i = 0; i < m; ++i) prod[k - m + i] -= c * static_cast<long>(f[i]);
      prod[k] = 0;
    }
    prod.resize(m);
    return reduce(std::move(prod), r);
  }

  Coords one() const {
    Coords c(degree(), Integer(0));
    c[0] = 1;
    return c;
  }

  Coords pow(Coords a, Integer e, std::int64_t r) const {
    Coords result = one();
    a = reduce(std::move(a), r);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) result = mul(result, a, r);
      e >>= 1;
      if (e > 0) a = mul(a, a, r);
    }
    return reduce(std::move(result), r);
  }

  FiniteField::Elem residue(const Coords& a) const {
    FiniteField::Elem e(degree());
    const Integer pp(static_cast<long>(prime()));
    for (int i = 0; i < degree(); ++i) e[i] = detail::mod(a[i], pp).get_si();
    return e;
  }

  Coords lift(const FiniteField::Elem& e) const {
    Coords c(degree());
    for (int i = 0; i < degree(); ++i) c[i] = static_cast<long>(e[i]);
    return c;
  }

  /// Inverse of a unit modulo p^r by Newton iteration from the residue field.
  Coords unit_inverse(const Coords& a, std::int64_t r) const {
    Coords y = lift(field_.inverse(residue(a)));
    std::int64_t k = 1;
    while (k < r) {
      k = std::min<std::int64_t>(2 * k, r);
      Coords ay = mul(a, y, k);
      for (auto& c : ay) c = -c;
      ay[0] += 2;
      y = mul(y, ay, k);
    }
    return reduce(std::move(y), r);
  }

  /// Teichmuller representative of a residue-field element, modulo p^r.
  Coords teichmuller(const FiniteField::Elem& a, std::int64_t r) const {
    Coords t = lift(a);
    const Integer q(static_cast<long>(field_.order()));
    for (std::int64_t i = 1; i < r; ++i) t = pow(std::move(t), q, r);
    return reduce(std::move(t), r);
  }

  /// Image of x under the Frobenius, modulo p^r.
  Coords frobenius_of_x(std::int64_t r) const {
    if (r <= cached_precision_) return reduce(xi_, r);
    return lift_frobenius_root(r);
  }

  Coords frobenius(const Coords& a, std::int64_t r) const {
    const int m = degree();
    if (m == 1) return reduce(a, r);
    const Coords xi = frobenius_of_x(r);
    Coords acc(m, Integer(0));
    Coords xi_pow = one();
    for (int j = 0; j < m; ++j) {
      if (a[j] != 0)
        for (int i = 0; i < m; ++i) acc[i] += a[j] * xi_pow[i];
      if (j + 1 < m) xi_pow = mul(xi_pow, xi, r);
    }
    return reduce(std::move(acc), r);
  }

  friend bool operator==(const WittContext& a, const WittContext& b) {
    return a.prime() == b.prime() && a.field_.modulus() == b.field_.modulus();
  }

 private:
  WittContext(std::int64_t p, int m, std::int64_t cached_precision)
      : field_(p, m), cached_precision_(std::max<std::int64_t>(cached_precision, 1)) {
    xi_ = lift_frobenius_root(cached_precision_);
  }

  Coords eval_modulus(const Coords& t, std::int64_t r) const {
    const auto& f = field_.modulus();
    Coords acc(degree(), Integer(0));
    for (int k = degree(); k >= 0; --k) {
      acc = mul(acc, t, r);
      acc[0] += static_cast<long>(f[k]);
    }
    return reduce(std::move(acc), r);
  }

  Coords eval_modulus_derivative(const Coords& t, std::int64_t r) const {
    const auto& f = field_.modulus();
    Coords acc(degree(), Integer(0));
    for (int k = degree(); k >= 1; --k) {
      acc = mul(acc, t, r);
      acc[0] += static_cast<long>(f[k] * k);
    }
    return reduce(std::move(acc), r);
  }

  Coords lift_frobenius_root(std::int64_t r) const {
    const int m = degree();
    Coords x(m, Integer(0));
    if (m == 1) {
      x[0] = -static_cast<long>(field_.modulus()[0]);
      return reduce(x, r);
    }
    x[1] = 1;
    Coords xi = lift(field_.frobenius(residue(x)));
    std::int64_t k = 1;
    while (k < r) {
      k = std::min<std::int64_t>(2 * k, r);
      const Coords fx = eval_modulus(xi, k);
      const Coords dinv = unit_inverse(eval_modulus_derivative(xi, k), k);
      const Coords step = mul(fx, dinv, k);
      for (int i = 0; i < m; ++i) xi[i] -= step[i];
      xi = reduce(std::move(xi), k);
    }
    return reduce(std::move(xi), r);
  }

  FiniteField field_;
  std::int64_t cached_precision_;
  Coords xi_;
};

using WittContextPtr = std::shared_ptr<const WittContext>;

class WittElem;

/// Constant factory for W(F_{p^m})[1/p] at a default absolute precision.
struct WittRing {
  WittContextPtr context;
  std::int64_t precision = 20;

  std::int64_t prime() const { return context->prime(); }
  WittElem zero() const;
  WittElem one() const;
  WittElem from_integer(const Integer& n) const;
  WittElem from_rational(const Integer& num, const Integer& den) const;
  WittElem p_power(std::int64_t k) const;
  WittElem teichmuller(const FiniteField::Elem& a) const;

  friend bool operator==(const WittRing& a, const WittRing& b) {
    return *a.context == *b.context && a.precision == b.precision;
  }
};

/**
 * Element of W(F_{p^m})[1/p] known modulo p^N.
 *
 * Stored as p^v times a unit of Z_p[x]/(F) whose coordinates are reduced modulo
 * p^(N - v). Teichmuller digits are derived on request. Arithmetic follows the
 * same absolute-precision rules as Padic, and for m = 1 agrees with it exactly.
 */
class WittElem {
 public:
  using Ring = WittRing;
  using Coords = WittContext::Coords;

  WittElem() = default;

  static WittElem zero(WittContextPtr ctx, std::int64_t precision) {
    WittElem r;
    r.ctx_ = std::move(ctx);
    r.prec_ = detail::clamp_precision(precision);
    r.coords_.assign(r.ctx_->degree(), Integer(0));
    return r;
  }

  static WittElem make(WittContextPtr ctx, std::int64_t valuation, Coords coords, std::int64_t precision) {
    precision = detail::clamp_precision(precision);
    if (valuation >= precision) return zero(std::move(ctx), precision);
    const std::int64_t p = ctx->prime();
    std::int64_t k = kInfiniteValuation;
    for (const auto& c : coords)
      if (c != 0) k = std::min(k, detail::valuation_of(c, p));
    if (k == kInfiniteValuation) return zero(std::move(ctx), precision);
    valuation += k;
    if (valuation >= precision) return zero(std::move(ctx), precision);
    if (k > 0) {
      const Integer pk = detail::pow_int(p, k);
      for (auto& c : coords) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
    }
    WittElem r;
    r.coords_ = ctx->reduce(std::move(coords), precision - valuation);
    r.ctx_ = std::move(ctx);
    r.val_ = valuation;
    r.prec_ = precision;
    return r;
  }

  static WittElem from_integer(WittContextPtr ctx, const Integer& n, std::int64_t precision) {
    Coords c(ctx->degree(), Integer(0));
    c[0] = n;
    return make(std::move(ctx), 0, std::move(c), precision);
  }

  static WittElem from_padic(WittContextPtr ctx, const Padic& a) {
    if (a.prime() != ctx->prime()) throw ParameterMismatch("WittElem::from_padic: prime mismatch");
    if (a.is_zero()) return zero(std::move(ctx), a.precision());
    Coords c(ctx->degree(), Integer(0));
    c[0] = a.unit();
    return make(std::move(ctx), a.valuation(), std::move(c), a.precision());
  }

  static WittElem teichmuller(WittContextPtr ctx, const FiniteField::Elem& a, std::int64_t precision) {
    if (precision <= 0) return zero(std::move(ctx), precision);
    Coords c = ctx->teichmuller(a, precision);
    return make(std::move(ctx), 0, std::move(c), precision);
  }

  /// Sum of [a_i] p^(valuation + i) over the given Teichmuller digits.
  static WittElem from_teichmuller_digits(WittContextPtr ctx, std::int64_t valuation,
                                          const std::vector<FiniteField::Elem>& digits,
                                          std::int64_t precision) {
    const std::int64_t r = precision - valuation;
    if (r <= 0) return zero(std::move(ctx), precision);
    Coords acc(ctx->degree(), Integer(0));
    for (std::size_t i = 0; i < digits.size() && static_cast<std::int64_t>(i) < r; ++i) {
      const Coords t = ctx->teichmuller(digits[i], r - static_cast<std::int64_t>(i));
      const Integer pi = detail::pow_int(ctx->prime(), static_cast<std::int64_t>(i));
      for (int j = 0; j < ctx->degree(); ++j) acc[j] += t[j] * pi;
    }
    return make(std::move(ctx), valuation, std::move(acc), precision);
  }

  const WittContextPtr& context() const { return ctx_; }
  std::int64_t prime() const { return ctx_->prime(); }
  int degree() const { return ctx_->degree(); }
  bool is_zero() const { return val_ == kInfiniteValuation; }
  std::int64_t valuation() const { return val_; }
  std::int64_t precision() const { return prec_; }
  std::int64_t relative_precision() const { return is_zero() ? 0 : prec_ - val_; }
  /// Unit-part coordinates in the basis 1, x, ..., x^(m-1).
  const Coords& coords() const { return coords_; }
  Ring ring() const { return Ring{ctx_, prec_}; }

  /// Teichmuller digits of the unit part; length equals the relative precision.
  std::vector<FiniteField::Elem> teichmuller_digits() const {
    std::vector<FiniteField::Elem> out;
    if (is_zero()) return out;
    const std::int64_t r = relative_precision();
    const Integer pp(static_cast<long>(prime()));
    Coords w = coords_;
    for (std::int64_t i = 0; i < r; ++i) {
      const FiniteField::Elem a = ctx_->residue(w);
      out.push_back(a);
      if (i + 1 == r) break;
      const Coords t = ctx_->teichmuller(a, r - i);
      for (int j = 0; j < degree(); ++j) {
        w[j] -= t[j];
        mpz_divexact(w[j].get_mpz_t(), w[j].get_mpz_t(), pp.get_mpz_t());
      }
      w = ctx_->reduce(std::move(w), r - i - 1);
    }
    return out;
  }

  /// The element as a p-adic number; requires it to lie in Q_p.
  Padic to_padic() const {
    if (is_zero()) return Padic::zero(prime(), prec_);
    for (int j = 1; j < degree(); ++j)
      if (coords_[j] != 0) throw DomainError("WittElem::to_padic: element is not in Q_p");
    return Padic::make(prime(), val_, coords_[0], prec_);
  }

  WittElem truncated(std::int64_t n) const {
    if (n >= prec_) return *this;
    if (is_zero()) return zero(ctx_, n);
    return make(ctx_, val_, coords_, n);
  }

  WittElem shifted(std::int64_t k) const {
    if (is_zero()) return zero(ctx_, detail::sat_add(prec_, k));
    WittElem r = *this;
    r.val_ += k;
    r.prec_ += k;
    return r;
  }

  WittElem times_integer(const Integer& n) const {
    if (n == 0) return zero(ctx_, kMaxPrecision);
    Integer m = n;
    const std::int64_t k = detail::remove_prime(m, prime());
    if (is_zero()) return zero(ctx_, detail::sat_add(prec_, k));
    Coords c = coords_;
    for (auto& x : c) x *= m;
    return make(ctx_, val_ + k, std::move(c), prec_ + k);
  }

  /// sigma^k, where sigma lifts x -> x^p on the residue field; k may be negative.
  WittElem frobenius(std::int64_t k = 1) const {
    const std::int64_t m = degree();
    k = ((k % m) + m) % m;
    if (is_zero() || k == 0) return *this;
    Coords c = coords_;
    for (std::int64_t i = 0; i < k; ++i) c = ctx_->frobenius(c, relative_precision());
    return make(ctx_, val_, std::move(c), prec_);
  }

  WittElem operator-() const {
    if (is_zero()) return *this;
    Coords c = coords_;
    for (auto& x : c) x = -x;
    return make(ctx_, val_, std::move(c), prec_);
  }

  friend WittElem operator+(const WittElem& a, const WittElem& b) {
    check_same(a, b);
    const std::int64_t n = std::min(a.prec_, b.prec_);
    if (a.is_zero() && b.is_zero()) return zero(a.ctx_, n);
    const std::int64_t m = std::min(a.val_, b.val_);
    if (m >= n) return zero(a.ctx_, n);
    Coords sum(a.degree(), Integer(0));
    for (const WittElem* x : {&a, &b}) {
      if (x->is_zero() || x->val_ >= n) continue;
      const Integer scale = detail::pow_int(a.prime(), x->val_ - m);
      for (int j = 0; j < a.degree(); ++j) sum[j] += x->coords_[j] * scale;
    }
    return make(a.ctx_, m, std::move(sum), n);
  }

  friend WittElem operator-(const WittElem& a, const WittElem& b) { return a + (-b); }

  friend WittElem operator*(const WittElem& a, const WittElem& b) {
    check_same(a, b);
    const std::int64_t va = a.is_zero() ? a.prec_ : a.val_;
    const std::int64_t vb = b.is_zero() ? b.prec_ : b.val_;
    const std::int64_t n = std::min(detail::sat_add(va, b.prec_), detail::sat_add(vb, a.prec_));
    if (a.is_zero() || b.is_zero()) return zero(a.ctx_, n);
    const std::int64_t v = a.val_ + b.val_;
    if (v >= n) return zero(a.ctx_, n);
    return make(a.ctx_, v, a.ctx_->mul(a.coords_, b.coords_, n - v), n);
  }

  WittElem& operator+=(const WittElem& b) { return *this = *this + b; }
  WittElem& operator-=(const WittElem& b) { return *this = *this - b; }
  WittElem& operator*=(const WittElem& b) { return *this = *this * b; }

  WittElem inverse() const {
    if (is_zero())
      throw DomainError("WittElem::inverse: element is zero modulo p^" + std::to_string(prec_));
    const std::int64_t r = relative_precision();
    return make(ctx_, -val_, ctx_->unit_inverse(coords_, r), -val_ + r);
  }

  friend WittElem operator/(const WittElem& a, const WittElem& b) { return a * b.inverse(); }

  WittElem pow(const Integer& e) const {
    if (e < 0) return inverse().pow(-e);
    if (e == 0) return make(ctx_, 0, ctx_->one(), is_zero() ? 1 : relative_precision());
    if (is_zero()) return zero(ctx_, detail::sat_mul(prec_, e));
    const std::int64_t v = detail::sat_mul(val_, e);
    if (v >= kMaxPrecision) return zero(ctx_, kMaxPrecision);
    const std::int64_t r = relative_precision() + detail::valuation_of(e, prime());
    return make(ctx_, v, ctx_->pow(coords_, e, r), v + r);
  }

  friend bool same_value(const WittElem& a, const WittElem& b) { return (a - b).is_zero(); }

  friend bool operator==(const WittElem& a, const WittElem& b) {
    return *a.ctx_ == *b.ctx_ && a.val_ == b.val_ && a.prec_ == b.prec_ && a.coords_ == b.coords_;
  }

  friend std::ostream& operator<<(std::ostream& os, const WittElem& a) {
    if (a.is_zero()) return os << "O(" << a.prime() << "^" << a.prec_ << ")";
    os << "(";
    for (int j = 0; j < a.degree(); ++j) os << (j ? "," : "") << a.coords_[j].get_str();
    os << ")";
    if (a.val_ != 0) os << "*" << a.prime() << "^" << a.val_;
    return os << " + O(" << a.prime() << "^" << a.prec_ << ")";
  }

 private:
  static void check_same(const WittElem& a, const WittElem& b) {
    if (a.ctx_ != b.ctx_ && !(*a.ctx_ == *b.ctx_))
      throw ParameterMismatch("WittElem: operands live over different fields");
  }

  WittContextPtr ctx_;
  std::int64_t val_ = kInfiniteValuation;
  std::int64_t prec_ = 0;
  Coords coords_;
};

inline WittElem WittRing::zero() const { return WittElem::zero(context, precision); }
inline WittElem WittRing::one() const { return WittElem::from_integer(context, 1, precision); }
inline WittElem WittRing::from_integer(const Integer& n) const {
  return WittElem::from_integer(context, n, precision);
}
inline WittElem WittRing::from_rational(const Integer& num, const Integer& den) const {
  return WittElem::from_padic(context, Padic::from_rational(context->prime(), num, den, precision));
}
inline WittElem WittRing::p_power(std::int64_t k) const {
  return WittElem::make(context, k, context->one(), precision);
}
inline WittElem WittRing::teichmuller(const FiniteField::Elem& a) const {
  return WittElem::teichmuller(context, a, precision);
}

/// Digit-wise Frobenius on the Teichmuller expansion.
inline WittElem witt_frobenius(const WittElem& w) { return w.frobenius(1); }

}  // namespace perikos
