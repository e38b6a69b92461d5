#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ff_curve.hpp"
#include "isocrystal.hpp"
#include "matrix.hpp"
#include "period_map.hpp"
#include "witt.hpp"

namespace perikos {

/// sum a_i Pi^i in the division algebra over W(F_{p^h})[1/p] with Pi^h = p and
/// Pi a = sigma(a) Pi.
class ODElem {
 public:
  ODElem(WittContextPtr ctx, std::vector<WittElem> coeffs) : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != ctx_->degree())
      throw ParameterMismatch("ODElem: need " + std::to_string(ctx_->degree()) + " coefficients over W(F_{p^" +
                              std::to_string(ctx_->degree()) + "})");
    for (const auto& a : coeffs_)
      if (!(*a.context() == *ctx_)) throw ParameterMismatch("ODElem: coefficient over a different field");
  }

  static ODElem scalar(const WittElem& a) {
    const WittRing ring{a.context(), a.precision()};
    std::vector<WittElem> c(static_cast<std::size_t>(a.degree()), ring.zero());
    c[0] = a;
    return ODElem(a.context(), std::move(c));
  }

  static ODElem one(const WittContextPtr& ctx, std::int64_t precision) {
    return scalar(WittRing{ctx, precision}.one());
  }

  /// The uniformizer Pi.
  static ODElem uniformizer(const WittContextPtr& ctx, std::int64_t precision) {
    const WittRing ring{ctx, precision};
    std::vector<WittElem> c(static_cast<std::size_t>(ctx->degree()), ring.zero());
    c[ctx->degree() > 1 ? 1 : 0] = ctx->degree() > 1 ? ring.one() : ring.p_power(1);
    return ODElem(ctx, std::move(c));
  }

  const WittContextPtr& context() const { return ctx_; }
  int h() const { return ctx_->degree(); }
  std::int64_t prime() const { return ctx_->prime(); }
  const std::vector<WittElem>& coeffs() const { return coeffs_; }
  const WittElem& coeff(std::size_t i) const { return coeffs_[i]; }

  std::int64_t precision() const {
    std::int64_t n = kMaxPrecision;
    for (const auto& a : coeffs_) n = std::min(n, a.precision());
    return n;
  }

  bool is_integral() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const WittElem& a) { return a.is_zero() || a.valuation() >= 0; });
  }

  friend ODElem operator+(const ODElem& a, const ODElem& b) {
    if (!(*a.ctx_ == *b.ctx_)) throw ParameterMismatch("ODElem: elements of different division algebras");
    std::vector<WittElem> c;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c.push_back(a.coeffs_[i] + b.coeffs_[i]);
    return ODElem(a.ctx_, std::move(c));
  }

  friend bool same_value(const ODElem& a, const ODElem& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      if (!same_value(a.coeffs_[i], b.coeffs_[i])) return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const ODElem& s) {
    for (std::size_t i = 0; i < s.coeffs_.size(); ++i) {
      os << (i ? " + " : "") << "(" << s.coeffs_[i] << ")";
      if (i) os << "*Pi^" << i;
    }
    return os;
  }

 private:
  WittContextPtr ctx_;
  std::vector<WittElem> coeffs_;
};

inline ODElem od_mul(const ODElem& a, const ODElem& b) {
  if (!(*a.context() == *b.context())) throw ParameterMismatch("od_mul: elements of different division algebras");
  const auto h = static_cast<std::size_t>(a.h());
  std::vector<std::optional<WittElem>> c(h);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      // a_i Pi^i b_j Pi^j = a_i sigma^i(b_j) Pi^(i+j)
      WittElem t = a.coeff(i) * b.coeff(j).frobenius(static_cast<std::int64_t>(i));
      if (i + j >= h) t = t.shifted(1);
      auto& slot = c[(i + j) % h];
      slot = slot ? *slot + t : t;
    }
  }
  std::vector<WittElem> out;
  for (auto& x : c) out.push_back(std::move(*x));
  return ODElem(a.context(), std::move(out));
}

/// Left multiplication by s on D viewed as a right W[1/p]-module with basis
/// 1, Pi, ..., Pi^(h-1). Right-linearity makes this an honest homomorphism:
/// matrix_of(s t) = matrix_of(s) matrix_of(t), no sigma-twist.
inline Matrix<WittElem> matrix_of(const ODElem& s) {
  const auto h = static_cast<std::size_t>(s.h());
  const WittRing ring{s.context(), s.precision()};
  Matrix<WittElem> m(ring, h, h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < h; ++i) {
      // a_i Pi^(i+j) = Pi^k sigma^(-k)(a_i) p^carry, k = (i+j) mod h
      const std::size_t k = (i + j) % h;
      WittElem e = s.coeff(i).frobenius(-static_cast<std::int64_t>(k));
      if (i + j >= h) e = e.shifted(1);
      m(k, j) = e;
    }
  }
  return m;
}

/// A unit of the maximal order: integral with unit reduced norm.
inline bool od_is_unit(const ODElem& s) {
  if (!s.is_integral()) return false;
  const WittElem d = determinant(matrix_of(s));
  return !d.is_zero() && d.valuation() == 0;
}

/// Element of the Weil group: Frob^n times a symbolic inertia part.
struct WeilElem {
  std::int64_t n = 0;
  std::vector<std::string> inertia;

  friend WeilElem operator*(const WeilElem& a, const WeilElem& b) {
    WeilElem c{a.n + b.n, a.inertia};
    c.inertia.insert(c.inertia.end(), b.inertia.begin(), b.inertia.end());
    return c;
  }
  friend bool operator==(const WeilElem&, const WeilElem&) = default;
};

/// (G, iota, alpha): G is a label with an optional deformation point, iota is
/// the Dieudonne matrix of the quasi-isogeny over W(F_{p^h})[1/p], alpha the
/// rational level structure over Q_p.
struct TowerPoint {
  std::string label = "G";
  std::optional<RigidPoint<Padic>> deformation;
  Matrix<WittElem> iota;
  Matrix<Padic> alpha;
  std::int64_t twist = 0;                 // accumulated Frobenius power of G^w
  std::vector<std::string> inertia;       // accumulated inertia labels
  std::optional<AdicPoint> locus;         // point of the curve carried along

  int h() const { return static_cast<int>(alpha.rows()); }

  /// Integral level: alpha and alpha^-1 both p-integral.
  bool integral_level() const {
    if (alpha.min_valuation() < 0) return false;
    return inverse(alpha).min_valuation() >= 0;
  }

  friend bool operator==(const TowerPoint& a, const TowerPoint& b) {
    if (a.label != b.label || a.twist != b.twist || a.inertia != b.inertia || a.locus != b.locus) return false;
    if (a.deformation.has_value() != b.deformation.has_value()) return false;
    if (a.deformation) {
      if (a.deformation->h != b.deformation->h) return false;
      for (std::size_t i = 0; i < a.deformation->u.size(); ++i)
        if (!same_value(a.deformation->u[i], b.deformation->u[i])) return false;
    }
    return same_value(a.iota, b.iota) && same_value(a.alpha, b.alpha);
  }
};

namespace detail {

template <Coefficient C>
void require_invertible(const Matrix<C>& m, const std::string& what) {
  if (!m.square()) throw DomainError(what + ": matrix is not square");
  const C d = determinant(m);
  if (d.is_zero()) throw DomainError(what + ": matrix is singular at precision " + std::to_string(d.precision()));
}

}  // namespace detail

inline TowerPoint make_tower_point(std::string label, std::optional<RigidPoint<Padic>> deformation,
                                   Matrix<WittElem> iota, Matrix<Padic> alpha) {
  detail::require_invertible(iota, "TowerPoint iota");
  detail::require_invertible(alpha, "TowerPoint alpha");
  if (iota.rows() != alpha.rows()) throw ParameterMismatch("TowerPoint: iota and alpha sizes differ");
  if (iota.ring().context->degree() != static_cast<int>(iota.rows()))
    throw ParameterMismatch("TowerPoint: iota must live over W(F_{p^h})");
  if (deformation && deformation->h != static_cast<int>(alpha.rows()))
    throw ParameterMismatch("TowerPoint: deformation height differs from the matrix size");
  return TowerPoint{std::move(label), std::move(deformation), std::move(iota), std::move(alpha), 0, {}, {}};
}

/// s . (G, iota, alpha) = (G, s o iota, alpha).
inline TowerPoint act_J(const ODElem& s, const TowerPoint& x) {
  if (s.h() != x.h()) throw ParameterMismatch("act_J: division algebra and tower point heights differ");
  if (!od_is_unit(s)) throw DomainError("act_J: element is not a unit of O_D");
  TowerPoint y = x;
  y.iota = matrix_of(s) * x.iota;
  return y;
}

/// g . (G, iota, alpha) = (G, iota, alpha o g); a right action.
inline TowerPoint act_GL(const Matrix<Padic>& g, const TowerPoint& x) {
  if (g.rows() != x.alpha.rows()) throw ParameterMismatch("act_GL: matrix size differs from the height");
  detail::require_invertible(g, "act_GL");
  TowerPoint y = x;
  y.alpha = x.alpha * g;
  return y;
}

/// The (G, iota, alpha) -> (G, iota, alpha o p) transition of the tower.
inline TowerPoint tower_transition(const TowerPoint& x) {
  const PadicRing ring = x.alpha.ring();
  return act_GL(Matrix<Padic>::identity(ring, x.alpha.rows()).scaled(ring.p_power(1)), x);
}

/// Frob^n of the standard Dieudonne model, as the cocycle M_n with
/// M_(m+n) = sigma^m(M_n) M_m and M_1 the slope-1/h companion matrix.
inline Matrix<WittElem> frobenius_power_matrix(const WittContextPtr& ctx, std::int64_t n, std::int64_t precision) {
  const auto h = static_cast<std::size_t>(ctx->degree());
  const Matrix<WittElem> phi = companion_block(ctx, ctx->degree(), 1, precision);
  const WittRing ring{ctx, precision};
  if (n == 0) return Matrix<WittElem>::identity(ring, h);
  if (n > 0) {
    Matrix<WittElem> m = phi;
    for (std::int64_t k = 1; k < n; ++k) m = phi.frobenius(k) * m;
    return m;
  }
  return inverse(frobenius_power_matrix(ctx, -n, precision).frobenius(n));
}

/// w . (G, iota, alpha) = (G^w, iota^w o Frob^n, alpha^w). Coefficients are
/// unramified, so inertia only leaves its label behind.
inline TowerPoint act_Weil(const WeilElem& w, const TowerPoint& x) {
  TowerPoint y = x;
  y.twist += w.n;
  y.inertia.insert(y.inertia.end(), w.inertia.begin(), w.inertia.end());
  if (w.n == 0) return y;
  if (y.deformation)
    for (auto& c : y.deformation->u) c = coeff_frobenius(c, w.n);
  y.alpha = x.alpha.frobenius(w.n);
  y.iota = x.iota.frobenius(w.n) * frobenius_power_matrix(x.iota.ring().context, w.n, x.iota.min_precision());
  if (y.locus) y.locus = frobenius_move(*y.locus, w.n);
  return y;
}

namespace detail {

inline WittElem to_witt(const WittContextPtr& ctx, const Padic& a) { return WittElem::from_padic(ctx, a); }

inline WittElem to_witt(const WittContextPtr& ctx, const WittElem& a) {
  if (!(*a.context() == *ctx)) throw ParameterMismatch("act_J_on_period: coordinates over a different field");
  return a;
}

}  // namespace detail

/// The linear action of matrix_of(s) on P(D(G_0)), read off in canonical form.
template <Coefficient C>
ProjPoint<WittElem> act_J_on_period(const ODElem& s, const ProjPoint<C>& y) {
  if (s.h() != y.h) throw ParameterMismatch("act_J_on_period: heights differ");
  if (!od_is_unit(s)) throw DomainError("act_J_on_period: element is not a unit of O_D");
  const Matrix<WittElem> m = matrix_of(s);
  std::vector<WittElem> v;
  for (const auto& c : y.coords) v.push_back(detail::to_witt(s.context(), c));
  std::vector<WittElem> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::optional<WittElem> acc;
    for (std::size_t j = 0; j < v.size(); ++j) {
      WittElem t = m(i, j) * v[j];
      acc = acc ? *acc + t : t;
    }
    out.push_back(std::move(*acc));
  }
  return canonicalize(out, y.precision);
}

/// act_J and act_GL commute on x.
inline bool commute_check(const ODElem& s, const Matrix<Padic>& g, const TowerPoint& x) {
  return act_J(s, act_GL(g, x)) == act_GL(g, act_J(s, x));
}

}  // namespace perikos
