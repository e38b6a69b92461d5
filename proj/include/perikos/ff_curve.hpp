#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "isocrystal.hpp"
#include "period_map.hpp"
#include "rational.hpp"

namespace perikos {

enum class PointTag { y_point, p_axis, w_axis, x_k };

inline std::string to_string(PointTag t) {
  switch (t) {
    case PointTag::y_point: return "Y-point";
    case PointTag::p_axis: return "p-axis";
    case PointTag::w_axis: return "w-axis";
    case PointTag::x_k: return "x_k";
  }
  return "?";
}

/// Rank-one point of Spa(W(O_{C^flat})) recorded by |p| = p^{-log_p} and
/// |w| = p^{-log_w}; an infinite log means the element vanishes there.
class AdicPoint {
 public:
  static AdicPoint make(std::int64_t p, ExtRational log_p, ExtRational log_w) {
    if (p < 2) throw DomainError("AdicPoint: prime must be >= 2");
    if (log_p <= ExtRational(0) || log_w <= ExtRational(0))
      throw DomainError("AdicPoint: log radii must be positive");
    AdicPoint x;
    x.p_ = p;
    x.log_p_ = log_p;
    x.log_w_ = log_w;
    return x;
  }

  /// The point x_C cut out by an untilt, kappa = 1.
  static AdicPoint untilt(std::int64_t p) { return make(p, Rational(1), Rational(1)); }
  static AdicPoint residue_point(std::int64_t p) { return make(p, ExtRational::infinity(), ExtRational::infinity()); }

  std::int64_t prime() const { return p_; }
  const ExtRational& log_p() const { return log_p_; }
  const ExtRational& log_w() const { return log_w_; }

  PointTag tag() const {
    if (log_p_.is_infinite() && log_w_.is_infinite()) return PointTag::x_k;
    if (log_p_.is_infinite()) return PointTag::p_axis;
    if (log_w_.is_infinite()) return PointTag::w_axis;
    return PointTag::y_point;
  }

  friend bool operator==(const AdicPoint&, const AdicPoint&) = default;

  friend std::ostream& operator<<(std::ostream& os, const AdicPoint& x) {
    return os << "(log_p=" << x.log_p_ << ", log_w=" << x.log_w_ << ", " << to_string(x.tag()) << ")";
  }

 private:
  std::int64_t p_ = 2;
  ExtRational log_p_ = Rational(1);
  ExtRational log_w_ = Rational(1);
};

namespace detail {

// p^|n| as a rational scale factor, refusing to overflow.
inline Rational prime_power_ratio(std::int64_t p, std::int64_t n) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i)
    if (__builtin_mul_overflow(r, p, &r)) throw DomainError("frobenius_move: p^n overflows 64 bits");
  return n < 0 ? Rational(1, r) : Rational(r);
}

inline Rational checked_mul(const Rational& a, const Rational& b) {
  // Cross-cancel first, then multiply with overflow checks.
  const std::int64_t g1 = std::gcd(a.numerator(), b.denominator());
  const std::int64_t g2 = std::gcd(b.numerator(), a.denominator());
  std::int64_t num = 0;
  std::int64_t den = 0;
  if (__builtin_mul_overflow(a.numerator() / g1, b.numerator() / g2, &num) ||
      __builtin_mul_overflow(a.denominator() / g2, b.denominator() / g1, &den))
    throw DomainError("rational product overflows 64 bits");
  return Rational(num, den);
}

}  // namespace detail

/// kappa = log|w| / log|p|. Zero on the p-axis, infinite on the w-axis.
inline ExtRational kappa(const AdicPoint& x) {
  switch (x.tag()) {
    case PointTag::x_k: throw DomainError("kappa: the non-analytic point x_k has no angle");
    case PointTag::p_axis: return Rational(0);
    case PointTag::w_axis: return ExtRational::infinity();
    case PointTag::y_point: break;
  }
  return x.log_w().value() / x.log_p().value();
}

/// Frobenius^n: scales log|w| by p^n, so kappa scales by p^n.
inline AdicPoint frobenius_move(const AdicPoint& x, std::int64_t n) {
  if (n == 0 || x.log_w().is_infinite()) return x;
  return AdicPoint::make(x.prime(), x.log_p(),
                         detail::checked_mul(x.log_w().value(), detail::prime_power_ratio(x.prime(), n)));
}

/// The representative of the Frobenius orbit with kappa in [1, p), and the
/// power n that reaches it.
inline std::pair<AdicPoint, std::int64_t> fundamental_domain(const AdicPoint& x) {
  if (x.tag() != PointTag::y_point) throw DomainError("fundamental_domain: only Y-points have an orbit in (0, inf)");
  const Rational k = kappa(x).value();
  const Rational p(x.prime());
  // e with p^e <= k < p^(e+1)
  std::int64_t e = 0;
  Rational scaled = k;
  while (scaled >= p) {
    scaled /= p;
    ++e;
  }
  while (scaled < Rational(1)) {
    scaled *= p;
    --e;
  }
  return {frobenius_move(x, -e), -e};
}

/// Vector bundle on the curve as a sum of stable O(d/r)^{mult}, slopes descending.
class BundleFF {
 public:
  using Summand = std::pair<Rational, std::int64_t>;

  BundleFF() = default;

  static BundleFF canonical(std::vector<Summand> raw) {
    std::sort(raw.begin(), raw.end(), [](const Summand& a, const Summand& b) { return a.first > b.first; });
    BundleFF out;
    for (const auto& [slope, mult] : raw) {
      if (mult <= 0) throw DomainError("BundleFF: multiplicities must be positive");
      if (!out.summands_.empty() && out.summands_.back().first == slope) {
        out.summands_.back().second += mult;
      } else {
        out.summands_.emplace_back(slope, mult);
      }
    }
    if (out.summands_.empty()) throw DomainError("BundleFF: rank must be >= 1");
    return out;
  }

  /// O(slope)^{mult}.
  static BundleFF line(Rational slope, std::int64_t mult = 1) { return canonical({{slope, mult}}); }
  static BundleFF trivial(std::int64_t rank) { return line(Rational(0), rank); }

  const std::vector<Summand>& summands() const { return summands_; }

  std::int64_t rank() const {
    std::int64_t r = 0;
    for (const auto& [s, m] : summands_) r += m * s.denominator();
    return r;
  }

  std::int64_t degree() const {
    std::int64_t d = 0;
    for (const auto& [s, m] : summands_) d += m * s.numerator();
    return d;
  }

  Rational slope() const { return Rational(degree(), rank()); }
  bool semistable() const { return summands_.size() == 1; }

  friend BundleFF operator+(const BundleFF& a, const BundleFF& b) {
    auto all = a.summands_;
    all.insert(all.end(), b.summands_.begin(), b.summands_.end());
    return canonical(std::move(all));
  }

  friend bool operator==(const BundleFF&, const BundleFF&) = default;

  friend std::ostream& operator<<(std::ostream& os, const BundleFF& e) {
    for (std::size_t i = 0; i < e.summands_.size(); ++i) {
      os << (i ? " + " : "") << "O(" << to_string(e.summands_[i].first) << ")";
      if (e.summands_[i].second != 1) os << "^" << e.summands_[i].second;
    }
    return os;
  }

 private:
  std::vector<Summand> summands_;
};

struct RankDegSlope {
  std::int64_t rank;
  std::int64_t degree;
  Rational slope;
  friend bool operator==(const RankDegSlope&, const RankDegSlope&) = default;
};

inline RankDegSlope bundle_rank_deg_slope(const BundleFF& e) { return {e.rank(), e.degree(), e.slope()}; }

inline BundleFF bundle_dual(const BundleFF& e) {
  std::vector<BundleFF::Summand> out;
  for (const auto& [s, m] : e.summands()) out.emplace_back(-s, m);
  return BundleFF::canonical(std::move(out));
}

inline BundleFF bundle_tensor(const BundleFF& a, const BundleFF& b) {
  std::vector<BundleFF::Summand> out;
  for (const auto& [s, m] : a.summands()) {
    for (const auto& [t, n] : b.summands()) {
      const Rational u = s + t;
      const std::int64_t total_rank = m * n * s.denominator() * t.denominator();
      out.emplace_back(u, total_rank / u.denominator());
    }
  }
  return BundleFF::canonical(std::move(out));
}

struct HnVertex {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(const HnVertex&, const HnVertex&) = default;
};

/// Harder-Narasimhan polygon: slopes taken in descending order from (0, 0).
inline std::vector<HnVertex> hn_polygon(const BundleFF& e) {
  std::vector<HnVertex> out{{0, 0}};
  for (const auto& [s, m] : e.summands()) {
    const HnVertex& last = out.back();
    out.push_back({last.x + m * s.denominator(), last.y + m * s.numerator()});
  }
  return out;
}

/// Sign convention for isocrystal slopes: lambda -> O(lambda) or O(-lambda).
enum class SlopeConvention { preserving, negating };

inline BundleFF bundle_from_isocrystal(const SlopeData& s, SlopeConvention conv = SlopeConvention::preserving) {
  if (s.empty()) throw DomainError("bundle_from_isocrystal: empty isocrystal");
  std::vector<BundleFF::Summand> out;
  for (const auto& [slope, mult] : s.pairs()) {
    const Rational l = conv == SlopeConvention::preserving ? slope : -slope;
    out.emplace_back(l, mult / l.denominator());
  }
  return BundleFF::canonical(std::move(out));
}

/// Inverse of bundle_from_isocrystal under the same convention.
inline SlopeData isocrystal_slopes(const BundleFF& e, SlopeConvention conv = SlopeConvention::preserving) {
  std::vector<SlopeData::Pair> out;
  for (const auto& [s, m] : e.summands())
    out.emplace_back(conv == SlopeConvention::preserving ? s : -s, m * s.denominator());
  return SlopeData::canonical(std::move(out));
}

/// E is a modification of F at `locus`, of total length `length`.
struct ModificationTriple {
  BundleFF E;
  BundleFF F;
  std::string locus = "inf";
  std::int64_t length = 0;
  friend bool operator==(const ModificationTriple&, const ModificationTriple&) = default;
};

class HeckeRankMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class HeckeDegreeMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

inline const ModificationTriple& hecke_validate(const ModificationTriple& t) {
  if (t.length < 0) throw DomainError("hecke_validate: length must be nonnegative");
  if (t.E.rank() != t.F.rank())
    throw HeckeRankMismatch("hecke_validate: rank(E) = " + std::to_string(t.E.rank()) +
                            " but rank(F) = " + std::to_string(t.F.rank()));
  if (t.E.degree() - t.F.degree() != t.length)
    throw HeckeDegreeMismatch("hecke_validate: deg(E) - deg(F) = " + std::to_string(t.E.degree() - t.F.degree()) +
                              " but length = " + std::to_string(t.length));
  return t;
}

/// The two legs of the Hecke correspondence.
inline const BundleFF& hecke_source(const ModificationTriple& t) { return t.E; }
inline const BundleFF& hecke_target(const ModificationTriple& t) { return t.F; }

/// E(G) for every one-dimensional height-h group up to isogeny.
inline std::vector<BundleFF> pdiv_bundle_classes(std::int64_t h) {
  if (h < 1) throw DomainError("pdiv_bundle_classes: h must be >= 1");
  std::vector<BundleFF> out;
  for (const auto& c : kottwitz_enumerate(h, 1, Rational(0), Rational(1))) out.push_back(bundle_from_isocrystal(c.slopes));
  return out;
}

struct PerdomFiber {
  BundleFF base;
  std::int64_t dimension;  // the fiber is P^dimension
  friend bool operator==(const PerdomFiber&, const PerdomFiber&) = default;
};

inline PerdomFiber perdom_fiber(const BundleFF& e) { return {e, e.rank() - 1}; }

template <Coefficient C>
struct GlobalPoint {
  ModificationTriple triple;
  BundleFF base;
  PerdomFiber fiber;
  ProjPoint<C> point;
};

/// Lubin-Tate point -> Hecke triple (E(G), O^h, 1) -> point of P(i_inf^* E(G)) over E(G).
template <Coefficient C>
GlobalPoint<C> global_point(const RigidPoint<C>& x, std::int64_t prec, const PeriodOptions& opts = {}) {
  ProjPoint<C> y = period_point(x, prec, opts);
  const BundleFF e = bundle_from_isocrystal(SlopeData::canonical({{Rational(1, x.h), x.h}}));
  ModificationTriple t = hecke_validate(ModificationTriple{e, BundleFF::trivial(x.h), "inf", 1});
  return GlobalPoint<C>{std::move(t), e, perdom_fiber(e), std::move(y)};
}

/// Both routes around the square agree: fiber from the base class, point from
/// the local period map.
template <Coefficient C>
bool global_commutes(const GlobalPoint<C>& g, const RigidPoint<C>& x, std::int64_t prec, const PeriodOptions& opts = {}) {
  return g.fiber == perdom_fiber(g.base) && g.base == g.triple.E && g.fiber.dimension == x.h - 1 &&
         g.point == period_point(x, prec, opts);
}

}  // namespace perikos
