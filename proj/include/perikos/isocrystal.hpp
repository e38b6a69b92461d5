#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "rational.hpp"
#include "witt.hpp"

namespace perikos {

/// Slope decomposition: ascending distinct slopes with multiplicities.
class SlopeData {
 public:
  using Pair = std::pair<Rational, std::int64_t>;

  SlopeData() = default;

  /// Sorts, merges equal slopes and checks that each slope's denominator
  /// divides its multiplicity.
  static SlopeData canonical(std::vector<Pair> raw) {
    std::sort(raw.begin(), raw.end(), [](const Pair& a, const Pair& b) { return a.first < b.first; });
    SlopeData out;
    for (const auto& [slope, mult] : raw) {
      if (mult <= 0) throw DomainError("SlopeData: multiplicities must be positive");
      if (!out.pairs_.empty() && out.pairs_.back().first == slope) {
        out.pairs_.back().second += mult;
      } else {
        out.pairs_.emplace_back(slope, mult);
      }
    }
    for (const auto& [slope, mult] : out.pairs_)
      if (mult % slope.denominator() != 0)
        throw DomainError("SlopeData: slope " + to_string(slope) + " has multiplicity " + std::to_string(mult) +
                          " not divisible by its denominator");
    return out;
  }

  const std::vector<Pair>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }

  std::int64_t rank() const {
    std::int64_t r = 0;
    for (const auto& [s, m] : pairs_) r += m;
    return r;
  }

  std::int64_t degree() const {
    Rational d(0);
    for (const auto& [s, m] : pairs_) d += s * Rational(m);
    return d.numerator();
  }

  std::int64_t multiplicity(const Rational& slope) const {
    for (const auto& [s, m] : pairs_)
      if (s == slope) return m;
    return 0;
  }

  bool slopes_within(const Rational& lo, const Rational& hi) const {
    return std::all_of(pairs_.begin(), pairs_.end(), [&](const Pair& x) { return lo <= x.first && x.first <= hi; });
  }

  friend bool operator==(const SlopeData&, const SlopeData&) = default;

  friend bool operator<(const SlopeData& a, const SlopeData& b) { return a.pairs_ < b.pairs_; }

  friend std::ostream& operator<<(std::ostream& os, const SlopeData& s) {
    os << "{";
    for (std::size_t i = 0; i < s.pairs_.size(); ++i)
      os << (i ? ", " : "") << "(" << to_string(s.pairs_[i].first) << "," << s.pairs_[i].second << ")";
    return os << "}";
  }

 private:
  std::vector<Pair> pairs_;
};

/// A sigma-conjugacy class in B(GL_h), recorded by its slopes.
struct KottwitzClass {
  SlopeData slopes;
  std::int64_t h = 0;

  /// Membership in B'(GL_h): all slopes in [0, 1].
  bool in_unit_interval() const { return slopes.slopes_within(Rational(0), Rational(1)); }
  friend bool operator==(const KottwitzClass&, const KottwitzClass&) = default;
};

/// Finite-rank module over W(F_{p^m})[1/p] with a sigma-semilinear bijection phi,
/// given by its matrix in a fixed basis.
class Isocrystal {
 public:
  Isocrystal(WittContextPtr ctx, Matrix<WittElem> phi) : ctx_(std::move(ctx)), phi_(std::move(phi)) {
    if (!phi_.square()) throw DomainError("Isocrystal: matrix of phi must be square");
    for (std::size_t i = 0; i < phi_.rows(); ++i)
      for (std::size_t j = 0; j < phi_.cols(); ++j)
        if (!(*phi_(i, j).context() == *ctx_)) throw ParameterMismatch("Isocrystal: entry over a different field");
    if (phi_.rows() > 0 && determinant(phi_).is_zero())
      throw DomainError("Isocrystal: matrix of phi is not invertible at its precision");
  }

  const WittContextPtr& context() const { return ctx_; }
  std::int64_t prime() const { return ctx_->prime(); }
  int field_degree() const { return ctx_->degree(); }
  std::size_t rank() const { return phi_.rows(); }
  const Matrix<WittElem>& phi() const { return phi_; }
  std::int64_t precision() const { return phi_.min_precision(); }

 private:
  WittContextPtr ctx_;
  Matrix<WittElem> phi_;
};

/// A sigma(A) ... sigma^(m-1)(A): the matrix of the linear map phi^m.
inline Matrix<WittElem> linearize(const Isocrystal& x) {
  Matrix<WittElem> acc = x.phi();
  for (int k = 1; k < x.field_degree(); ++k) acc = acc * x.phi().frobenius(k);
  return acc;
}

namespace detail {

struct HullPoint {
  std::int64_t x;
  std::int64_t y;
};

// Lower convex hull of points sorted by x.
inline std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
  std::vector<HullPoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b when it lies on or above the segment a-p.
      const __int128 lhs = static_cast<__int128>(b.y - a.y) * (p.x - a.x);
      const __int128 rhs = static_cast<__int128>(p.y - a.y) * (b.x - a.x);
      if (lhs >= rhs) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  return hull;
}

}  // namespace detail

/**
 * Slopes of the Newton polygon of T^n + c_1 T^(n-1) + ... + c_n, given
 * c_1..c_n, as valuations of the roots divided by `divisor`.
 *
 * A coefficient that is zero at precision N is accepted when N already lies on
 * or above the polygon drawn through the known coefficients.
 */
template <Coefficient C>
SlopeData newton_slopes(const std::vector<C>& c, std::int64_t divisor) {
  const std::int64_t n = static_cast<std::int64_t>(c.size());
  if (n == 0) return {};
  // a_k is the coefficient of T^k: a_n = 1, a_(n-i) = c_i.
  auto coeff = [&](std::int64_t k) -> const C& { return c[static_cast<std::size_t>(n - k - 1)]; };
  if (coeff(0).is_zero())
    throw PrecisionError("newton_polygon: constant coefficient is zero modulo p^" +
                             std::to_string(coeff(0).precision()),
                         coeff(0).precision());
  std::vector<detail::HullPoint> pts;
  for (std::int64_t k = 0; k < n; ++k)
    if (!coeff(k).is_zero()) pts.push_back({k, coeff(k).valuation()});
  pts.push_back({n, 0});
  const auto hull = detail::lower_hull(pts);
  auto hull_at = [&](std::int64_t k) {
    for (std::size_t i = 1; i < hull.size(); ++i)
      if (k <= hull[i].x) {
        const auto& a = hull[i - 1];
        const auto& b = hull[i];
        return Rational(a.y) + Rational(b.y - a.y, b.x - a.x) * Rational(k - a.x);
      }
    return Rational(hull.back().y);
  };
  for (std::int64_t k = 1; k < n; ++k) {
    if (!coeff(k).is_zero()) continue;
    if (Rational(coeff(k).precision()) < hull_at(k))
      throw PrecisionError("newton_polygon: coefficient of T^" + std::to_string(k) + " is zero modulo p^" +
                               std::to_string(coeff(k).precision()) + ", below the polygon",
                           coeff(k).precision());
  }
  std::vector<SlopeData::Pair> raw;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const std::int64_t len = hull[i].x - hull[i - 1].x;
    const Rational slope(hull[i - 1].y - hull[i].y, len * divisor);
    raw.emplace_back(slope, len);
  }
  return SlopeData::canonical(std::move(raw));
}

inline SlopeData newton_polygon(const Isocrystal& x) {
  return newton_slopes(charpoly(linearize(x)), x.field_degree());
}

/// Rank of the part on which phi^r = p^s, i.e. the multiplicity of slope s/r.
inline std::int64_t slope_projection_rank(const Isocrystal& x, std::int64_t r, std::int64_t s) {
  if (r < 1) throw DomainError("slope_projection_rank: r must be >= 1");
  return newton_polygon(x).multiplicity(Rational(s, r));
}

/// All slope data of rank h and degree d with slopes in [lo, hi], in
/// lexicographic order of their (slope, multiplicity) lists.
inline std::vector<KottwitzClass> kottwitz_enumerate(std::int64_t h, std::int64_t d, Rational lo, Rational hi) {
  if (h < 1) throw DomainError("kottwitz_enumerate: h must be >= 1");
  std::vector<KottwitzClass> out;
  std::vector<SlopeData::Pair> stack;
  // Each segment has integer length L and integer rise D, slope D/L.
  std::function<void(std::int64_t, std::int64_t, std::optional<Rational>)> descend =
      [&](std::int64_t h_left, std::int64_t d_left, std::optional<Rational> last) {
        if (h_left == 0) {
          if (d_left == 0) out.push_back({SlopeData::canonical(stack), h});
          return;
        }
        for (std::int64_t len = 1; len <= h_left; ++len) {
          const std::int64_t rise_lo = ceil_div(lo.numerator() * len, lo.denominator());
          const std::int64_t rise_hi = floor_div(hi.numerator() * len, hi.denominator());
          for (std::int64_t rise = rise_lo; rise <= rise_hi; ++rise) {
            const Rational slope(rise, len);
            if (last && slope <= *last) continue;
            // Remaining segments have slopes > slope and <= hi.
            const Rational rest_d(d_left - rise);
            const std::int64_t rest_h = h_left - len;
            if (rest_h == 0 && rest_d != Rational(0)) continue;
            if (rest_h > 0 && (rest_d <= slope * Rational(rest_h) || rest_d > hi * Rational(rest_h))) continue;
            stack.emplace_back(slope, len);
            descend(rest_h, d_left - rise, slope);
            stack.pop_back();
          }
        }
      };
  descend(h, d, std::nullopt);
  std::sort(out.begin(), out.end(), [](const KottwitzClass& a, const KottwitzClass& b) { return a.slopes < b.slopes; });
  return out;
}

/// Companion block e_i -> e_(i+1), e_r -> p^s e_1; its slope is s/r.
inline Matrix<WittElem> companion_block(const WittContextPtr& ctx, std::int64_t r, std::int64_t s,
                                        std::int64_t precision) {
  const WittRing ring{ctx, precision};
  Matrix<WittElem> m(ring, static_cast<std::size_t>(r), static_cast<std::size_t>(r));
  for (std::int64_t i = 0; i + 1 < r; ++i) m(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(i)) = ring.one();
  m(0, static_cast<std::size_t>(r - 1)) = ring.p_power(s);
  return m;
}

/// Dieudonne module of the connected one-dimensional group of height h, over
/// W(F_{p^h}); its only slope is 1/h.
inline Isocrystal dieudonne_of_onedim(std::int64_t p, std::int64_t h, std::int64_t precision = 20) {
  if (h < 1) throw DomainError("dieudonne_of_onedim: h must be >= 1");
  auto ctx = WittContext::make(p, static_cast<int>(h));
  return Isocrystal(ctx, companion_block(ctx, h, 1, precision));
}

/// Block-companion model over W(F_p) realizing the given slope data.
inline Isocrystal isocrystal_from_slopes(std::int64_t p, const SlopeData& slopes, std::int64_t precision = 20) {
  auto ctx = WittContext::make(p, 1);
  std::optional<Matrix<WittElem>> acc;
  for (const auto& [slope, mult] : slopes.pairs()) {
    const std::int64_t r = slope.denominator();
    for (std::int64_t b = 0; b < mult / r; ++b) {
      Matrix<WittElem> blk = companion_block(ctx, r, slope.numerator(), precision);
      acc = acc ? Matrix<WittElem>::block_diagonal(*acc, blk) : blk;
    }
  }
  if (!acc) throw DomainError("isocrystal_from_slopes: empty slope data");
  return Isocrystal(ctx, *acc);
}

inline Isocrystal direct_sum(const Isocrystal& a, const Isocrystal& b) {
  if (!(*a.context() == *b.context())) throw ParameterMismatch("direct_sum: isocrystals over different fields");
  return Isocrystal(a.context(), Matrix<WittElem>::block_diagonal(a.phi(), b.phi()));
}

/// The same isocrystal in the basis given by the columns of U: U^-1 A sigma(U).
inline Isocrystal change_basis(const Isocrystal& x, const Matrix<WittElem>& u) {
  return Isocrystal(x.context(), inverse(u) * x.phi() * u.frobenius(1));
}

}  // namespace perikos
