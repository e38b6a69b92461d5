#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "formal_group.hpp"
#include "rational.hpp"

namespace perikos {

/// Point of the rigid generic fibre of Lubin-Tate space: parameters u_1..u_{h-1}
/// together with their valuations (infinite for u_i = 0).
template <Coefficient C>
struct RigidPoint {
  using Ring = typename C::Ring;

  Ring ring;
  int h = 1;
  std::vector<C> u;
  std::vector<ExtRational> valuations;

  static RigidPoint make(Ring ring, int h, std::vector<C> u) {
    if (h < 1) throw DomainError("RigidPoint: h must be >= 1");
    if (static_cast<int>(u.size()) != h - 1)
      throw DomainError("RigidPoint: expected " + std::to_string(h - 1) + " parameters");
    RigidPoint x{std::move(ring), h, std::move(u), {}};
    for (const auto& c : x.u)
      x.valuations.push_back(c.is_zero() ? ExtRational::infinity() : ExtRational(Rational(c.valuation())));
    return x;
  }

  /// Tags agree with the stored values.
  bool consistent() const {
    if (valuations.size() != u.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].is_zero()) {
        if (!valuations[i].is_infinite() && valuations[i] < ExtRational(Rational(u[i].precision()))) return false;
      } else if (!(valuations[i] == ExtRational(Rational(u[i].valuation())))) {
        return false;
      }
    }
    return true;
  }
};

/// True iff every parameter lies strictly inside the open unit polydisc.
template <Coefficient C>
bool radius_check(const RigidPoint<C>& x) {
  return std::all_of(x.valuations.begin(), x.valuations.end(),
                     [](const ExtRational& v) { return ExtRational(Rational(0)) < v; });
}

/// Point of P^{h-1} in canonical form: the pivot coordinate is 1 and the others
/// are known modulo p^precision.
template <Coefficient C>
struct ProjPoint {
  int h = 1;
  std::vector<C> coords;
  std::size_t pivot = 0;
  std::int64_t precision = 0;

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    if (a.h != b.h || a.pivot != b.pivot || a.coords.size() != b.coords.size()) return false;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
      if (!same_value(a.coords[i], b.coords[i])) return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const ProjPoint& x) {
    os << "[";
    for (std::size_t i = 0; i < x.coords.size(); ++i) os << (i ? " : " : "") << x.coords[i];
    return os << "]";
  }
};

/// Scales raw coordinates so the least-valuation one (lowest index on ties)
/// becomes 1, and truncates the rest to target_prec.
template <Coefficient C>
ProjPoint<C> canonicalize(const std::vector<C>& raw, std::int64_t target_prec) {
  if (raw.empty()) throw DomainError("canonicalize: no coordinates");
  std::optional<std::size_t> pivot;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].is_zero()) continue;
    if (!pivot || raw[i].valuation() < raw[*pivot].valuation()) pivot = i;
  }
  if (!pivot) {
    std::int64_t best = kMaxPrecision;
    for (const auto& c : raw) best = std::min(best, c.precision());
    throw PrecisionError("canonicalize: every coordinate is zero at its precision", best);
  }
  const C inv = raw[*pivot].inverse();
  ProjPoint<C> out;
  out.h = static_cast<int>(raw.size());
  out.pivot = *pivot;
  out.precision = target_prec;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i == *pivot) {
      auto ring = raw[i].ring();
      ring.precision = target_prec;
      out.coords.push_back(ring.one());
      continue;
    }
    C c = (raw[i] * inv).truncated(target_prec);
    out.precision = std::min(out.precision, c.precision());
    out.coords.push_back(std::move(c));
  }
  return out;
}

struct PeriodOptions {
  int n_start = 2;  // first n with phi_i ~ p^n b_{nh+i}
  int n_cap = 64;   // give up after this many refinements
};

struct PeriodTrace {
  int n_used = 0;                // n at which two successive points agreed
  std::int64_t agreement = 0;    // p-adic agreement of the last two points
};

namespace detail {

// Agreement level of two canonical forms: the least valuation of the
// coordinate differences, capped by their precision.
template <Coefficient C>
std::int64_t agreement(const ProjPoint<C>& a, const ProjPoint<C>& b) {
  if (a.pivot != b.pivot) return std::numeric_limits<std::int64_t>::min();
  std::int64_t level = kMaxPrecision;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const C d = a.coords[i] - b.coords[i];
    level = std::min(level, d.is_zero() ? d.precision() : d.valuation());
  }
  return level;
}

}  // namespace detail

/// [phi_0 : ... : phi_{h-1}] with phi_i = lim_n p^n b_{nh+i}, n chosen adaptively
/// until two successive canonical forms agree modulo p^target_prec.
template <Coefficient C>
ProjPoint<C> period_point(const RigidPoint<C>& x, std::int64_t target_prec, const PeriodOptions& opts = {},
                          PeriodTrace* trace = nullptr) {
  if (!x.consistent()) throw DomainError("period_point: valuation tags disagree with the parameters");
  if (!radius_check(x)) throw DomainError("period_point: point lies outside the open unit polydisc");
  if (target_prec < 1) throw DomainError("period_point: target precision must be >= 1");
  const int h = x.h;
  if (h == 1) {
    auto ring = x.ring;
    ring.precision = target_prec;
    return ProjPoint<C>{1, {ring.one()}, 0, target_prec};
  }
  const int n0 = std::max(opts.n_start, 1);
  GhRecursion<C> b(x.ring, h, x.u);
  auto point_at = [&](int n) {
    std::vector<C> raw;
    for (int i = 0; i < h; ++i) raw.push_back(b[n * h + i].shifted(n));
    return canonicalize(raw, target_prec);
  };
  ProjPoint<C> prev = point_at(n0);
  std::int64_t level = 0;
  for (int n = n0 + 1; n <= opts.n_cap; ++n) {
    ProjPoint<C> cur = point_at(n);
    level = detail::agreement(prev, cur);
    if (level >= target_prec && cur.precision >= target_prec) {
      if (trace) *trace = PeriodTrace{n, level};
      return cur;
    }
    if (cur.precision < target_prec && level >= cur.precision) {
      throw PrecisionError("period_point: input precision supports only " + std::to_string(cur.precision) +
                               " digits of the period point",
                           cur.precision);
    }
    prev = std::move(cur);
  }
  throw ConvergenceError("period_point: no agreement to p^" + std::to_string(target_prec) + " within " +
                             std::to_string(opts.n_cap) + " refinements (reached p^" + std::to_string(level) + ")",
                         level);
}

/// The Hodge line of the deformation at x, as a point of P(D(G_0)); the same
/// computation as period_point.
template <Coefficient C>
ProjPoint<C> hodge_line(const RigidPoint<C>& x, std::int64_t target_prec, const PeriodOptions& opts = {}) {
  return period_point(x, target_prec, opts);
}

}  // namespace perikos
