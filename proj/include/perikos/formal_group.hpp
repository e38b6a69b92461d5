#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "random.hpp"
#include "series.hpp"

namespace perikos {

/// One-dimensional formal group law F(x, y), optionally with its logarithm.
template <Coefficient C>
struct FormalGroupLaw {
  std::optional<int> height;  // intended height; nullopt means infinite
  Series<C> law;              // bivariate
  std::optional<Series<C>> log;

  int trunc_order() const { return law.trunc_order(); }
  const typename C::Ring& ring() const { return law.ring(); }
};

namespace detail {

inline std::int64_t checked_power(std::int64_t base, int e, std::int64_t cap) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

}  // namespace detail

/// l_0(x) = sum_k x^((p^h)^k) / p^k, truncated at degree M.
template <class Ring>
auto honda_log(const Ring& ring, int h, int M) {
  using C = decltype(ring.one());
  if (h < 1) throw DomainError("honda_log: height must be >= 1");
  if (M < 2) throw DomainError("honda_log: truncation order must be >= 2");
  Series<C> s(ring, 1, M);
  const std::int64_t q = detail::checked_power(ring.prime(), h, M);
  std::int64_t d = 1;
  for (int k = 0; d < M; ++k) {
    s.set(Monomial{static_cast<int>(d)}, ring.p_power(-k));
    if (d > (M - 1) / q) break;
    d *= q;
  }
  return s;
}

/// [l_0, ..., l_{h-1}] with l_i(x) = l_0(x^(p^i)) / p.
template <class Ring>
auto quasi_logs(const Ring& ring, int h, int M) {
  using C = decltype(ring.one());
  const Series<C> l0 = honda_log(ring, h, M);
  std::vector<Series<C>> out{l0};
  std::int64_t pi = 1;
  for (int i = 1; i < h; ++i) {
    pi *= ring.prime();
    if (pi >= M) {
      out.emplace_back(ring, 1, M);
      continue;
    }
    out.push_back(l0.substitute_power(static_cast<int>(pi)).shifted(-1));
  }
  return out;
}

/// F(x, y) = exp(log x + log y) with exp the compositional inverse of log.
template <Coefficient C>
FormalGroupLaw<C> fgl_from_log(const Series<C>& log, int M, std::optional<int> height = std::nullopt) {
  log.require_univariate("fgl_from_log");
  const Series<C> l = log.truncated(M);
  if (l.has(Monomial{0})) throw DomainError("fgl_from_log: logarithm has a constant term");
  if (!same_value(l.coefficient(Monomial{1}), l.ring().one()))
    throw DomainError("fgl_from_log: logarithm must start with x");
  const Series<C> exp = reverse(l);
  const Series<C> sum = l.embed(2, {0}) + l.embed(2, {1});
  return FormalGroupLaw<C>{height, compose(exp, sum), l};
}

template <Coefficient C>
FormalGroupLaw<C> additive_law(const typename C::Ring& ring, int M) {
  const Series<C> x = Series<C>::variable(ring, 1, M, 0);
  return FormalGroupLaw<C>{std::nullopt, x.embed(2, {0}) + x.embed(2, {1}), x};
}

/// x + y + xy, the law of log(1 + x).
template <Coefficient C>
FormalGroupLaw<C> multiplicative_law(const typename C::Ring& ring, int M) {
  Series<C> f(ring, 2, M);
  f.set(Monomial{1, 0}, ring.one());
  f.set(Monomial{0, 1}, ring.one());
  f.set(Monomial{1, 1}, ring.one());
  Series<C> log(ring, 1, M);
  for (int k = 1; k < M; ++k) log.set(Monomial{k}, ring.from_rational(k % 2 ? 1 : -1, k));
  return FormalGroupLaw<C>{1, std::move(f), std::move(log)};
}

enum class PSeriesMethod { iterated, logarithm };

/// [n](x) by repeated formal addition.
template <Coefficient C>
Series<C> multiplication_series(const FormalGroupLaw<C>& F, int n) {
  if (n < 1) throw DomainError("multiplication_series: n must be >= 1");
  const int M = F.trunc_order();
  const Series<C> x = Series<C>::variable(F.ring(), 1, M, 0);
  Series<C> acc = x;
  for (int i = 1; i < n; ++i) acc = compose(F.law, {x, acc});
  return acc;
}

/// [p](x), either as the p-fold formal sum or as exp(p log x).
template <Coefficient C>
Series<C> p_series(const FormalGroupLaw<C>& F, PSeriesMethod method = PSeriesMethod::iterated) {
  const std::int64_t p = F.ring().prime();
  if (method == PSeriesMethod::iterated) return multiplication_series(F, static_cast<int>(p));
  if (!F.log) throw DomainError("p_series: logarithm method needs a logarithm");
  const Series<C> l = F.log->truncated(F.trunc_order());
  return compose(reverse(l), l.scaled(F.ring().from_integer(p)));
}

/// exp(p log x) straight from a logarithm, without building the bivariate law.
template <Coefficient C>
Series<C> p_series_from_log(const Series<C>& log) {
  log.require_univariate("p_series_from_log");
  return compose(reverse(log), log.scaled(log.ring().from_integer(log.ring().prime())));
}

struct HeightResult {
  std::optional<int> height;  // nullopt: no unit coefficient below the truncation order
  int checked_below = 0;      // degrees < checked_below were inspected
  int h_max = 0;
};

/// Height of the reduction mod p, read off the [p]-series.
template <Coefficient C>
HeightResult height_mod_p(const Series<C>& pseries, int h_max) {
  pseries.require_univariate("height_mod_p");
  const std::int64_t p = pseries.ring().prime();
  const int M = pseries.trunc_order();
  if (h_max < 1) throw DomainError("height_mod_p: h_max must be >= 1");
  if (detail::checked_power(p, h_max, M) >= M)
    throw PrecisionError("height_mod_p: truncation order " + std::to_string(M) + " does not exceed p^" +
                             std::to_string(h_max),
                         M);
  if (pseries.precision_floor() < 1)
    throw PrecisionError("height_mod_p: coefficients unknown modulo p", pseries.precision_floor());
  for (const auto& [m, c] : pseries.terms()) {
    if (c.valuation() < 0) throw DomainError("height_mod_p: series is not integral");
    if (c.precision() < 1) throw PrecisionError("height_mod_p: coefficient unknown modulo p", c.precision());
  }
  HeightResult out{std::nullopt, M, h_max};
  for (const auto& [m, c] : pseries.terms()) {
    if (c.valuation() > 0) continue;
    std::int64_t d = m.degree();
    int h = 0;
    while (d % p == 0) {
      d /= p;
      ++h;
    }
    if (d != 1) throw DomainError("height_mod_p: leading term mod p is not in degree a power of p");
    if (h == 0) throw DomainError("height_mod_p: [p](x) has a unit linear term");
    out.height = h;
    return out;
  }
  return out;
}

/// The recursion p b_n = sum_{i=1}^{h} b_{n-i} u_i^(p^(n-i)), u_h = 1, b_0 = 1,
/// extended one term at a time.
template <Coefficient C>
class GhRecursion {
 public:
  GhRecursion(const typename C::Ring& ring, int h, std::vector<C> u) : h_(h), u_(std::move(u)) {
    if (h < 1) throw DomainError("gh_universal_coeffs: height must be >= 1");
    if (static_cast<int>(u_.size()) != h - 1)
      throw DomainError("gh_universal_coeffs: expected " + std::to_string(h - 1) + " parameters");
    for (const auto& x : u_)
      if (!x.is_zero() && x.valuation() <= 0)
        throw DomainError("gh_universal_coeffs: parameters must have positive valuation");
    b_.push_back(ring.one());
    // twists_[i][k] = u_{i+1}^(p^k)
    for (const auto& x : u_) twists_.push_back({x});
  }

  /// b_n, computing the recursion up to n as needed.
  const C& operator[](int n) {
    while (static_cast<int>(b_.size()) <= n) step();
    return b_[static_cast<std::size_t>(n)];
  }

  const std::vector<C>& computed() const { return b_; }

 private:
  const C& twist(std::size_t i, int k) {
    auto& t = twists_[i];
    while (static_cast<int>(t.size()) <= k) t.push_back(t.back().pow(Integer(t.back().prime())));
    return t[static_cast<std::size_t>(k)];
  }

  void step() {
    const int n = static_cast<int>(b_.size());
    std::optional<C> s;
    for (int i = 1; i <= h_ && i <= n; ++i) {
      C term = b_[static_cast<std::size_t>(n - i)];
      if (i < h_) term = term * twist(static_cast<std::size_t>(i - 1), n - i);
      s = s ? *s + term : term;
    }
    b_.push_back(s->shifted(-1));
  }

  int h_;
  std::vector<C> u_;
  std::vector<C> b_;
  std::vector<std::vector<C>> twists_;
};

/// Coefficients b_0..b_{n_max} of the universal deformation's logarithm
/// sum_n b_n x^(p^n), specialised at u.
template <Coefficient C>
std::vector<C> gh_universal_coeffs(const typename C::Ring& ring, int h, const std::vector<C>& u, int n_max) {
  GhRecursion<C> rec(ring, h, u);
  rec[n_max];
  return rec.computed();
}

/// sum_n b_n x^(p^n) truncated at degree M.
template <Coefficient C>
Series<C> gh_log(const typename C::Ring& ring, int h, const std::vector<C>& u, int M) {
  int n_max = 0;
  for (std::int64_t d = ring.prime(); d < M; d *= ring.prime()) ++n_max;
  const std::vector<C> b = gh_universal_coeffs<C>(ring, h, u, n_max);
  Series<C> s(ring, 1, M);
  std::int64_t d = 1;
  for (int n = 0; n <= n_max; ++n, d *= ring.prime()) s.set(Monomial{static_cast<int>(d)}, b[n]);
  return s;
}

/// Height-2 coefficients b_n as polynomials in u_1 (univariate series in u), for cross-checks.
template <Coefficient C>
std::vector<Series<C>> gh_symbolic_h2(const typename C::Ring& ring, int n_max) {
  if (n_max > 4) throw DomainError("gh_symbolic_h2: only small orders are supported");
  const std::int64_t p = ring.prime();
  int order = 1;
  for (int n = 0; n < n_max; ++n) order = static_cast<int>(order * p);
  order += 1;
  const Series<C> u = Series<C>::variable(ring, 1, order, 0);
  std::vector<Series<C>> b{Series<C>::constant(ring, 1, order, ring.one())};
  for (int n = 1; n <= n_max; ++n) {
    Series<C> s = b[n - 1] * u.substitute_power(static_cast<int>(detail::checked_power(p, n - 1, order)));
    if (n >= 2) s = s + b[n - 2];
    b.push_back(s.shifted(-1));
  }
  return b;
}

struct FglCheck {
  bool unit = true;
  bool commutative = true;
  std::optional<bool> associative;
  std::optional<bool> log_additive;
  std::int64_t precision = kMaxPrecision;  // least precision at which the identities were compared

  /// Identities compared to no p-adic digit at all do not count.
  bool ok() const {
    return precision > 0 && unit && commutative && associative.value_or(true) && log_additive.value_or(true);
  }
};

enum class AssociativityMode { skip, sampled, full };

template <Coefficient C>
FglCheck check_fgl(const FormalGroupLaw<C>& F, AssociativityMode assoc = AssociativityMode::sampled,
                   int samples = 8, std::uint64_t seed = 1) {
  const int M = F.trunc_order();
  const auto& ring = F.ring();
  using S = Series<C>;
  FglCheck out;
  auto note = [&](const SeriesComparison& c) {
    out.precision = std::min(out.precision, c.precision);
    return c.equal;
  };
  const S x1 = S::variable(ring, 1, M, 0);
  S fx0(ring, 1, M), f0y(ring, 1, M), swapped(ring, 2, M);
  fx0.lower_floor(F.law.precision_floor());
  f0y.lower_floor(F.law.precision_floor());
  swapped.lower_floor(F.law.precision_floor());
  for (const auto& [m, c] : F.law.terms()) {
    if (m.exponent(1) == 0) fx0.set(Monomial{m.exponent(0)}, c);
    if (m.exponent(0) == 0) f0y.set(Monomial{m.exponent(1)}, c);
    swapped.set(Monomial{m.exponent(1), m.exponent(0)}, c);
  }
  out.unit = note(compare(fx0, x1)) && note(compare(f0y, x1));
  out.commutative = note(compare(swapped, F.law));

  if (assoc == AssociativityMode::full) {
    const S x = S::variable(ring, 3, M, 0), y = S::variable(ring, 3, M, 1), z = S::variable(ring, 3, M, 2);
    const S fxy = F.law.embed(3, {0, 1});
    const S fyz = F.law.embed(3, {1, 2});
    out.associative = note(compare(compose(F.law, {fxy, z}), compose(F.law, {x, fyz})));
  } else if (assoc == AssociativityMode::sampled) {
    if (!F.law.is_integral()) throw DomainError("check_fgl: sampled associativity needs an integral law");
    Rng rng(seed);
    bool ok = true;
    for (int s = 0; s < samples; ++s) {
      std::vector<C> pt;
      for (int i = 0; i < 3; ++i) pt.push_back(ring.from_integer(rng.below(Integer(1) << 40)).shifted(1));
      auto eval = [&](const C& a, const C& b) {
        const std::vector<C> ab{a, b};
        // Omitted terms have degree >= M and the points have valuation >= 1.
        return F.law.evaluate(std::span<const C>(ab)).truncated(M);
      };
      const C lhs = eval(eval(pt[0], pt[1]), pt[2]);
      const C rhs = eval(pt[0], eval(pt[1], pt[2]));
      const C d = lhs - rhs;
      out.precision = std::min(out.precision, d.precision());
      ok = ok && d.is_zero();
    }
    out.associative = ok;
  }

  if (F.log) {
    const S l = F.log->truncated(M);
    out.log_additive = note(compare(compose(l, F.law), l.embed(2, {0}) + l.embed(2, {1})));
  }
  return out;
}

}  // namespace perikos
