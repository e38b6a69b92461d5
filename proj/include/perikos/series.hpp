#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coefficient.hpp"

namespace perikos {

/// Exponent vector in at most three variables, ordered by total degree first.
class Monomial {
 public:
  static constexpr int kMaxVars = 3;
  static constexpr int kMaxDegree = 0xFFFF;

  Monomial() = default;

  Monomial(std::initializer_list<int> exps) {
    if (static_cast<int>(exps.size()) > kMaxVars) throw std::invalid_argument("Monomial: too many variables");
    int i = 0;
    for (int e : exps) set(i++, e);
  }

  explicit Monomial(std::span<const int> exps) {
    if (static_cast<int>(exps.size()) > kMaxVars) throw std::invalid_argument("Monomial: too many variables");
    for (std::size_t i = 0; i < exps.size(); ++i) set(static_cast<int>(i), exps[i]);
  }

  static Monomial variable(int i, int e = 1) {
    Monomial m;
    m.set(i, e);
    return m;
  }

  int exponent(int i) const { return static_cast<int>((key_ >> shift(i)) & 0xFFFFU); }
  int degree() const { return static_cast<int>(key_ >> 48U); }
  std::uint64_t key() const { return key_; }

  std::vector<int> exponents(int num_vars) const {
    std::vector<int> out(num_vars);
    for (int i = 0; i < num_vars; ++i) out[i] = exponent(i);
    return out;
  }

  friend Monomial operator*(Monomial a, Monomial b) {
    if (a.degree() + b.degree() > kMaxDegree) throw std::overflow_error("Monomial: degree overflow");
    Monomial r;
    r.key_ = a.key_ + b.key_;
    return r;
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  static unsigned shift(int i) { return 32U - 16U * static_cast<unsigned>(i); }

  void set(int i, int e) {
    if (i < 0 || i >= kMaxVars) throw std::invalid_argument("Monomial: variable index out of range");
    if (e < 0) throw std::invalid_argument("Monomial: negative exponent");
    const int old = exponent(i);
    const int deg = degree() - old + e;
    if (deg > kMaxDegree) throw std::overflow_error("Monomial: degree overflow");
    key_ &= ~((std::uint64_t{0xFFFF} << shift(i)) | (std::uint64_t{0xFFFF} << 48U));
    key_ |= (static_cast<std::uint64_t>(e) << shift(i)) | (static_cast<std::uint64_t>(deg) << 48U);
  }

  std::uint64_t key_ = 0;
};

/**
 * Truncated power series in up to three variables over a precision-tracked
 * coefficient ring. Monomials of total degree >= trunc_order are discarded.
 *
 * Coefficients that become zero at their precision are not stored; the least
 * precision of any such dropped coefficient is kept as precision_floor(), so an
 * absent monomial reads as "zero modulo p^floor".
 */
template <Coefficient C>
class Series {
 public:
  using Ring = typename C::Ring;
  using Terms = std::map<Monomial, C>;

  Series(Ring ring, int num_vars, int trunc_order) : ring_(std::move(ring)), nvars_(num_vars), order_(trunc_order) {
    if (num_vars < 1 || num_vars > Monomial::kMaxVars)
      throw std::invalid_argument("Series: num_vars must lie in [1, 3]");
    if (trunc_order < 1 || trunc_order > Monomial::kMaxDegree + 1)
      throw std::invalid_argument("Series: trunc_order out of range");
  }

  static Series variable(Ring ring, int num_vars, int trunc_order, int index) {
    Series s(std::move(ring), num_vars, trunc_order);
    s.set(Monomial::variable(index), s.ring_.one());
    return s;
  }

  static Series constant(Ring ring, int num_vars, int trunc_order, const C& c) {
    Series s(std::move(ring), num_vars, trunc_order);
    s.set(Monomial{}, c);
    return s;
  }

  const Ring& ring() const { return ring_; }
  int num_vars() const { return nvars_; }
  int trunc_order() const { return order_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::int64_t precision_floor() const { return floor_; }

  /// Stored coefficient, or the zero implied by the floor.
  C coefficient(const Monomial& m) const {
    if (auto it = terms_.find(m); it != terms_.end()) return it->second;
    return exact_zero().truncated(floor_);
  }

  bool has(const Monomial& m) const { return terms_.count(m) != 0; }

  /// Stores c at m unless m is truncated away; zeros only lower the floor.
  void set(const Monomial& m, C c) {
    if (m.degree() >= order_) return;
    if (c.is_zero()) {
      terms_.erase(m);
      lower_floor(c.precision());
      return;
    }
    terms_.insert_or_assign(m, std::move(c));
  }

  void lower_floor(std::int64_t n) {
    if (n < kExactThreshold) floor_ = std::min(floor_, n);
  }

  /// Least total degree present; trunc_order when empty.
  int min_degree() const { return terms_.empty() ? order_ : terms_.begin()->first.degree(); }

  /// Least absolute precision among stored coefficients and the floor.
  std::int64_t min_precision() const {
    std::int64_t n = floor_;
    for (const auto& [m, c] : terms_) n = std::min(n, c.precision());
    return n;
  }

  /// Least valuation among stored coefficients (zeros counted at their precision).
  std::int64_t min_valuation() const {
    std::int64_t v = kMaxPrecision;
    for (const auto& [m, c] : terms_) v = std::min(v, effective_valuation(c));
    return v;
  }

  /// True when every stored coefficient lies in the integral subring.
  bool is_integral() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.valuation() >= 0; });
  }

  Series truncated(int trunc_order) const {
    Series r(ring_, nvars_, std::min(order_, trunc_order));
    r.floor_ = floor_;
    for (const auto& [m, c] : terms_)
      if (m.degree() < r.order_) r.terms_.emplace(m, c);
    return r;
  }

  Series operator-() const {
    Series r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend Series operator+(const Series& a, const Series& b) {
    check_compatible(a, b);
    Series r(a.ring_, a.nvars_, std::min(a.order_, b.order_));
    r.floor_ = std::min(a.floor_, b.floor_);
    for (const auto& [m, c] : a.terms_)
      if (m.degree() < r.order_) r.terms_.emplace(m, c);
    for (const auto& [m, c] : b.terms_) {
      if (m.degree() >= r.order_) continue;
      auto it = r.terms_.find(m);
      if (it == r.terms_.end()) {
        r.terms_.emplace(m, c);
      } else {
        C sum = it->second + c;
        if (sum.is_zero()) {
          r.lower_floor(sum.precision());
          r.terms_.erase(it);
        } else {
          it->second = std::move(sum);
        }
      }
    }
    r.absorb_floor();
    return r;
  }

  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  friend Series operator*(const Series& a, const Series& b) { return multiply(a, b, std::min(a.order_, b.order_)); }

  static Series multiply(const Series& a, const Series& b, int trunc_order) {
    check_compatible(a, b);
    Series r(a.ring_, a.nvars_, std::min({trunc_order, a.order_, b.order_}));
    r.floor_ = product_floor(a, b);
    std::unordered_map<std::uint64_t, C> acc;
    acc.reserve(a.terms_.size() + b.terms_.size());
    for (const auto& [ma, ca] : a.terms_) {
      if (ma.degree() >= r.order_) break;
      for (const auto& [mb, cb] : b.terms_) {
        if (ma.degree() + mb.degree() >= r.order_) break;
        const std::uint64_t key = (ma * mb).key();
        auto it = acc.find(key);
        if (it == acc.end()) {
          acc.emplace(key, ca * cb);
        } else {
          it->second += ca * cb;
        }
      }
    }
    for (auto& [key, c] : acc) r.set(from_key(key), std::move(c));
    r.absorb_floor();
    return r;
  }

  Series scaled(const C& c) const {
    Series r(ring_, nvars_, order_);
    r.floor_ = floor_ >= kMaxPrecision ? kMaxPrecision : detail::sat_add(floor_, effective_valuation(c));
    for (const auto& [m, x] : terms_) r.set(m, x * c);
    r.absorb_floor();
    return r;
  }

  /// Multiplies every coefficient by p^k (k < 0 divides by p).
  Series shifted(std::int64_t k) const {
    Series r = *this;
    if (floor_ < kMaxPrecision) r.floor_ = detail::sat_add(floor_, k);
    r.absorb_floor();
    for (auto& [m, c] : r.terms_) c = c.shifted(k);
    return r;
  }

  /// Partial derivative in variable i.
  Series derivative(int i = 0) const {
    Series r(ring_, nvars_, order_);
    r.floor_ = floor_;
    for (const auto& [m, c] : terms_) {
      const int e = m.exponent(i);
      if (e == 0) continue;
      auto exps = m.exponents(nvars_);
      exps[i] -= 1;
      r.set(Monomial(std::span<const int>(exps)), c.times_integer(e));
    }
    return r;
  }

  /// Univariate substitution x -> x^k, truncated at the same order.
  Series substitute_power(int k) const {
    require_univariate("substitute_power");
    if (k < 1) throw std::invalid_argument("substitute_power: exponent must be >= 1");
    Series r(ring_, 1, order_);
    r.floor_ = floor_;
    for (const auto& [m, c] : terms_) {
      const std::int64_t d = static_cast<std::int64_t>(m.degree()) * k;
      if (d >= order_) break;
      r.terms_.emplace(Monomial{static_cast<int>(d)}, c);
    }
    return r;
  }

  /// Re-reads the variables of this series as variables `targets[i]` of a
  /// num_vars-variable ring.
  Series embed(int num_vars, std::span<const int> targets) const {
    if (static_cast<int>(targets.size()) != nvars_) throw ParameterMismatch("Series::embed: target count");
    Series r(ring_, num_vars, order_);
    r.floor_ = floor_;
    for (const auto& [m, c] : terms_) {
      std::vector<int> exps(num_vars, 0);
      for (int i = 0; i < nvars_; ++i) exps[targets[i]] += m.exponent(i);
      r.terms_.emplace(Monomial(std::span<const int>(exps)), c);
    }
    return r;
  }

  Series embed(int num_vars, std::initializer_list<int> targets) const {
    return embed(num_vars, std::span<const int>(targets.begin(), targets.size()));
  }

  /// Sum of c * prod(values[i]^e_i); absent coefficients count as zero.
  C evaluate(std::span<const C> values) const {
    if (static_cast<int>(values.size()) != nvars_) throw ParameterMismatch("Series::evaluate: arity");
    C acc = exact_zero();
    std::vector<std::map<int, C>> powers(nvars_);
    auto power = [&](int i, int e) -> const C& {
      auto& cache = powers[i];
      if (auto it = cache.find(e); it != cache.end()) return it->second;
      return cache.emplace(e, values[i].pow(Integer(e))).first->second;
    };
    for (const auto& [m, c] : terms_) {
      C term = c;
      for (int i = 0; i < nvars_; ++i)
        if (m.exponent(i) > 0) term = term * power(i, m.exponent(i));
      acc = acc + term;
    }
    return acc;
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.floor_ == b.floor_ && a.terms_ == b.terms_;
  }

  C exact_zero() const { return ring_.zero().times_integer(0); }

  void require_univariate(const char* what) const {
    if (nvars_ != 1) throw ParameterMismatch(std::string(what) + ": series must be univariate");
  }

  static Monomial from_key(std::uint64_t key) {
    Monomial m;
    std::array<int, Monomial::kMaxVars> exps{};
    for (int i = 0; i < Monomial::kMaxVars; ++i)
      exps[i] = static_cast<int>((key >> (32U - 16U * static_cast<unsigned>(i))) & 0xFFFFU);
    return Monomial(std::span<const int>(exps));
  }

 private:
  static void check_compatible(const Series& a, const Series& b) {
    if (a.nvars_ != b.nvars_) throw ParameterMismatch("Series: variable count mismatch");
    if (a.ring_.prime() != b.ring_.prime()) throw ParameterMismatch("Series: prime mismatch");
  }

  // Unknown-but-zero-mod-p^floor parts of one factor times the other factor.
  static std::int64_t product_floor(const Series& a, const Series& b) {
    std::int64_t f = kMaxPrecision;
    if (a.floor_ < kMaxPrecision) {
      f = std::min(f, detail::sat_add(a.floor_, std::min(b.min_valuation(), b.floor_)));
    }
    if (b.floor_ < kMaxPrecision) {
      f = std::min(f, detail::sat_add(b.floor_, std::min(a.min_valuation(), a.floor_)));
    }
    return f;
  }

  // Zeros this close to the precision cap only arise from exact zeros shifted
  // by a bounded amount, so absent terms stay exact.
  static constexpr std::int64_t kExactThreshold = kMaxPrecision / 2;

  void absorb_floor() {
    if (floor_ >= kExactThreshold) floor_ = kMaxPrecision;
  }

  Ring ring_;
  int nvars_;
  int order_;
  std::int64_t floor_ = kMaxPrecision;
  Terms terms_;
};

namespace detail {

// Memoised powers g^e, built from e-1 when available, else by squaring.
template <Coefficient C>
class PowerCache {
 public:
  PowerCache(const Series<C>& base, int trunc_order) : base_(base), order_(trunc_order) {}

  const Series<C>& get(int e) {
    if (auto it = cache_.find(e); it != cache_.end()) return it->second;
    Series<C> value = compute(e);
    return cache_.emplace(e, std::move(value)).first->second;
  }

 private:
  Series<C> compute(int e) {
    if (e == 0) {
      return Series<C>::constant(base_.ring(), base_.num_vars(), order_, base_.ring().one());
    }
    if (e == 1) return base_.truncated(order_);
    if (static_cast<std::int64_t>(base_.min_degree()) * e >= order_) {
      Series<C> z(base_.ring(), base_.num_vars(), order_);
      z.lower_floor(base_.precision_floor());
      return z;
    }
    if (cache_.count(e - 1)) return Series<C>::multiply(cache_.at(e - 1), base_, order_);
    const Series<C>& half = get(e / 2);
    Series<C> sq = Series<C>::multiply(half, half, order_);
    if (e % 2 == 1) sq = Series<C>::multiply(sq, base_, order_);
    return sq;
  }

  const Series<C>& base_;
  int order_;
  std::map<int, Series<C>> cache_;
};

}  // namespace detail

/// f(g_1, ..., g_n); every g_i must have zero constant term.
template <Coefficient C>
Series<C> compose(const Series<C>& f, std::span<const Series<C>> gs) {
  if (static_cast<int>(gs.size()) != f.num_vars())
    throw ParameterMismatch("compose: need one substitution per variable of f");
  const int k = gs.front().num_vars();
  int order = f.trunc_order();
  for (const auto& g : gs) {
    if (g.num_vars() != k) throw ParameterMismatch("compose: substitutions must share variables");
    if (g.has(Monomial{})) throw DomainError("compose: substituted series has a nonzero constant term");
    order = std::min(order, g.trunc_order());
  }
  std::vector<detail::PowerCache<C>> caches;
  caches.reserve(gs.size());
  for (const auto& g : gs) caches.emplace_back(g, order);

  Series<C> result(f.ring(), k, order);
  if (f.precision_floor() < kMaxPrecision) result.lower_floor(f.precision_floor());
  std::unordered_map<std::uint64_t, C> acc;
  std::int64_t floor = result.precision_floor();
  for (const auto& [m, c] : f.terms()) {
    if (m.degree() >= order) break;
    std::optional<Series<C>> term;
    for (int i = 0; i < f.num_vars(); ++i) {
      const int e = m.exponent(i);
      if (e == 0) continue;
      const Series<C>& pw = caches[i].get(e);
      term = term ? Series<C>::multiply(*term, pw, order) : pw;
    }
    if (!term) {
      acc.emplace(Monomial{}.key(), c);
      continue;
    }
    const Series<C> scaled = term->scaled(c);
    floor = std::min(floor, scaled.precision_floor());
    for (const auto& [mm, cc] : scaled.terms()) {
      auto it = acc.find(mm.key());
      if (it == acc.end()) {
        acc.emplace(mm.key(), cc);
      } else {
        it->second += cc;
      }
    }
  }
  result.lower_floor(floor);
  for (auto& [key, c] : acc) result.set(Series<C>::from_key(key), std::move(c));
  return result;
}

template <Coefficient C>
Series<C> compose(const Series<C>& f, const Series<C>& g) {
  return compose(f, std::span<const Series<C>>(&g, 1));
}

template <Coefficient C>
Series<C> compose(const Series<C>& f, std::initializer_list<Series<C>> gs) {
  return compose(f, std::span<const Series<C>>(gs.begin(), gs.size()));
}

/// 1/f for univariate f with unit constant term.
template <Coefficient C>
Series<C> inverse(const Series<C>& f) {
  f.require_univariate("inverse");
  const int order = f.trunc_order();
  std::vector<std::optional<C>> a(order);
  for (const auto& [m, c] : f.terms()) a[m.degree()] = c;
  if (f.precision_floor() < kMaxPrecision)
    for (auto& x : a)
      if (!x) x = f.exact_zero().truncated(f.precision_floor());
  if (!a[0] || a[0]->is_zero()) throw DomainError("inverse: constant term is not invertible");
  const C a0inv = a[0]->inverse();
  std::vector<C> b;
  b.reserve(order);
  b.push_back(a0inv);
  Series<C> r(f.ring(), 1, order);
  r.set(Monomial{0}, a0inv);
  for (int n = 1; n < order; ++n) {
    std::optional<C> s;
    for (int k = 1; k <= n; ++k) {
      if (!a[k]) continue;
      C t = *a[k] * b[n - k];
      s = s ? *s + t : t;
    }
    C bn = s ? -(*s * a0inv) : f.exact_zero();
    r.set(Monomial{n}, bn);
    b.push_back(std::move(bn));
  }
  return r;
}

/// Compositional inverse of a univariate f = c x + O(x^2), c a unit.
///
/// Uses Lagrange inversion, g_n = c^-n / n * [y^(n-1)] (1 + a(y))^-n where
/// f = c y (1 + a(y)); unlike a Newton iteration this never forms f(g) - x,
/// whose cancellation costs many digits when the coefficients have denominators.
template <Coefficient C>
Series<C> reverse(const Series<C>& f) {
  f.require_univariate("reverse");
  if (f.has(Monomial{0})) throw DomainError("reverse: series has a constant term");
  const int order = f.trunc_order();
  const C c = f.coefficient(Monomial{1});
  if (c.is_zero() || c.valuation() != 0) throw DomainError("reverse: linear coefficient is not a unit");
  const C cinv = c.inverse();
  // 1 + a(y) = f(y) / (c y), truncated so that [y^(n-1)] is available for n < order.
  Series<C> unit(f.ring(), 1, std::max(order - 1, 1));
  if (f.precision_floor() < kMaxPrecision) unit.lower_floor(f.precision_floor());
  for (const auto& [m, a] : f.terms()) unit.set(Monomial{m.degree() - 1}, a * cinv);
  const Series<C> inv = inverse(unit);
  Series<C> g(f.ring(), 1, order);
  Series<C> power = Series<C>::constant(f.ring(), 1, unit.trunc_order(), f.ring().one());
  C cpow = f.ring().one();
  for (int n = 1; n < order; ++n) {
    power = power * inv;
    cpow = cpow * cinv;
    const C coeff = power.coefficient(Monomial{n - 1});
    g.set(Monomial{n}, divide_by_integer(coeff * cpow, Integer(n)));
  }
  return g;
}

struct SeriesComparison {
  bool equal = true;
  /// Precision at which the comparison holds (least over compared coefficients).
  std::int64_t precision = kMaxPrecision;
  std::optional<Monomial> mismatch;
};

/// Coefficient-wise comparison at the propagated precision.
template <Coefficient C>
SeriesComparison compare(const Series<C>& a, const Series<C>& b) {
  if (a.num_vars() != b.num_vars()) throw ParameterMismatch("compare: variable count mismatch");
  const int order = std::min(a.trunc_order(), b.trunc_order());
  SeriesComparison out;
  out.precision = std::min(a.precision_floor(), b.precision_floor());
  auto visit = [&](const Monomial& m) {
    if (m.degree() >= order) return;
    const C d = a.coefficient(m) - b.coefficient(m);
    out.precision = std::min(out.precision, d.precision());
    if (!d.is_zero() && out.equal) {
      out.equal = false;
      out.mismatch = m;
    }
  };
  for (const auto& [m, c] : a.terms()) visit(m);
  for (const auto& [m, c] : b.terms())
    if (!a.has(m)) visit(m);
  return out;
}

}  // namespace perikos
