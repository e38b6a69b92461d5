#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "actions.hpp"
#include "ff_curve.hpp"
#include "formal_group.hpp"
#include "isocrystal.hpp"
#include "matrix.hpp"
#include "period_map.hpp"

namespace perikos {

using Json = nlohmann::ordered_json;

/// Malformed or unexpected JSON input.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace json {

/// Rejects keys outside `allowed` and missing keys from `required`.
inline void check_keys(const Json& j, const std::string& what, std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw SchemaError(what + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw SchemaError(what + ": unknown field '" + key + "'");
  }
  for (const char* k : required)
    if (!j.contains(k)) throw SchemaError(what + ": missing field '" + std::string(k) + "'");
}

inline std::int64_t get_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw SchemaError(what + ": expected an integer");
  return j.get<std::int64_t>();
}

inline std::int64_t get_int(const Json& j, const char* key, const std::string& what) {
  return get_int(j.at(key), what + "." + key);
}

inline const Json& get_array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + ": expected an array");
  return j;
}

inline Json of(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return to_string(r);
}

/// Integer or "a/b".
inline Rational rational(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw SchemaError(what + ": expected an integer or a rational string 'a/b'");
}

inline Json of(const ExtRational& r) { return r.is_infinite() ? Json("inf") : of(r.value()); }

inline ExtRational ext_rational(const Json& j, const std::string& what) {
  if (j.is_string() && j.get<std::string>() == "inf") return ExtRational::infinity();
  return rational(j, what);
}

inline Json of(const Integer& n) { return n.fits_slong_p() ? Json(n.get_si()) : Json(n.get_str()); }

inline Json of(const Padic& a) {
  Json j;
  j["p"] = a.prime();
  j["valuation"] = a.is_zero() ? Json(nullptr) : Json(a.valuation());
  j["digits"] = a.digits();
  j["precision"] = a.precision();
  return j;
}

inline Padic padic(const Json& j, const std::string& what = "padic") {
  check_keys(j, what, {"p", "valuation", "digits", "precision"});
  const std::int64_t p = get_int(j, "p", what);
  const std::int64_t n = get_int(j, "precision", what);
  if (p < 2) throw SchemaError(what + ": p must be >= 2");
  if (j["valuation"].is_null()) {
    if (!get_array(j["digits"], what + ".digits").empty()) throw SchemaError(what + ": zero with digits");
    return Padic::zero(p, n);
  }
  std::vector<std::int64_t> digits;
  for (const auto& d : get_array(j["digits"], what + ".digits")) digits.push_back(get_int(d, what + ".digits"));
  const std::int64_t v = get_int(j, "valuation", what);
  if (static_cast<std::int64_t>(digits.size()) != n - v) throw SchemaError(what + ": need precision - valuation digits");
  if (digits.empty() || digits.front() == 0) throw SchemaError(what + ": leading digit must be nonzero");
  try {
    return Padic::from_digits(p, v, digits, n);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

/// One shared context per (p, m), built on first use.
inline WittContextPtr witt_context(std::int64_t p, int m) {
  static std::mutex mu;
  static std::map<std::pair<std::int64_t, int>, WittContextPtr> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) slot = WittContext::make(p, m);
  return slot;
}

inline Json of(const WittElem& a) {
  Json j;
  j["p"] = a.prime();
  j["m"] = a.degree();
  j["valuation"] = a.is_zero() ? Json(nullptr) : Json(a.valuation());
  j["digits"] = a.teichmuller_digits();
  j["precision"] = a.precision();
  return j;
}

inline WittElem witt(const Json& j, const std::string& what = "witt") {
  check_keys(j, what, {"p", "m", "valuation", "digits", "precision"});
  const std::int64_t p = get_int(j, "p", what);
  const std::int64_t m = get_int(j, "m", what);
  const std::int64_t n = get_int(j, "precision", what);
  if (p < 2 || m < 1 || m > 64) throw SchemaError(what + ": bad field parameters");
  const auto ctx = witt_context(p, static_cast<int>(m));
  if (j["valuation"].is_null()) return WittElem::zero(ctx, n);
  std::vector<FiniteField::Elem> digits;
  for (const auto& d : get_array(j["digits"], what + ".digits")) {
    FiniteField::Elem e;
    for (const auto& c : get_array(d, what + ".digits[]")) {
      const std::int64_t x = get_int(c, what + ".digits[]");
      if (x < 0 || x >= p) throw SchemaError(what + ": digit coordinate out of range");
      e.push_back(x);
    }
    if (static_cast<std::int64_t>(e.size()) != m) throw SchemaError(what + ": digit of the wrong length");
    digits.push_back(std::move(e));
  }
  const std::int64_t v = get_int(j, "valuation", what);
  if (static_cast<std::int64_t>(digits.size()) != n - v) throw SchemaError(what + ": need precision - valuation digits");
  return WittElem::from_teichmuller_digits(ctx, v, digits, n);
}

template <Coefficient C>
C coefficient(const Json& j, const std::string& what) {
  if constexpr (std::is_same_v<C, Padic>) {
    return padic(j, what);
  } else {
    return witt(j, what);
  }
}

template <Coefficient C>
Json of(const Series<C>& s) {
  Json j;
  j["p"] = s.ring().prime();
  j["num_vars"] = s.num_vars();
  j["order"] = s.trunc_order();
  j["precision_floor"] = s.precision_floor();
  Json terms = Json::array();
  for (const auto& [m, c] : s.terms()) terms.push_back(Json{{"exponents", m.exponents(s.num_vars())}, {"coeff", of(c)}});
  j["terms"] = std::move(terms);
  return j;
}

inline Series<Padic> padic_series(const Json& j, const std::string& what = "series") {
  check_keys(j, what, {"p", "num_vars", "order", "precision_floor", "terms"});
  const std::int64_t p = get_int(j, "p", what);
  const auto nv = get_int(j, "num_vars", what);
  const auto order = get_int(j, "order", what);
  if (nv < 1 || nv > Monomial::kMaxVars || order < 1 || order > Monomial::kMaxDegree)
    throw SchemaError(what + ": bad shape");
  const std::int64_t floor = get_int(j, "precision_floor", what);
  Series<Padic> s(PadicRing{p, floor}, static_cast<int>(nv), static_cast<int>(order));
  s.lower_floor(floor);
  for (const auto& t : get_array(j["terms"], what + ".terms")) {
    check_keys(t, what + ".terms[]", {"exponents", "coeff"});
    std::vector<int> e;
    for (const auto& x : get_array(t["exponents"], what + ".exponents")) e.push_back(static_cast<int>(get_int(x, what)));
    if (static_cast<std::int64_t>(e.size()) != nv) throw SchemaError(what + ": exponent vector of the wrong length");
    s.set(Monomial(std::span<const int>(e)), padic(t["coeff"], what + ".coeff"));
  }
  return s;
}

inline Json of(const SlopeData& s) {
  Json j = Json::array();
  for (const auto& [slope, mult] : s.pairs()) j.push_back({slope.numerator(), slope.denominator(), mult});
  return j;
}

// [[num, den, mult], ...]
inline std::vector<std::pair<Rational, std::int64_t>> slope_triples(const Json& j, const std::string& what) {
  std::vector<std::pair<Rational, std::int64_t>> out;
  for (const auto& t : get_array(j, what)) {
    if (!t.is_array() || t.size() != 3) throw SchemaError(what + ": expected [numerator, denominator, multiplicity]");
    const auto den = get_int(t[1], what);
    if (den <= 0) throw SchemaError(what + ": denominator must be positive");
    out.emplace_back(Rational(get_int(t[0], what), den), get_int(t[2], what));
  }
  return out;
}

inline SlopeData slope_data(const Json& j, const std::string& what = "slopes") {
  try {
    return SlopeData::canonical(slope_triples(j, what));
  } catch (const DomainError& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

inline Json of(const BundleFF& e) {
  Json j = Json::array();
  for (const auto& [slope, mult] : e.summands()) j.push_back({slope.numerator(), slope.denominator(), mult});
  return j;
}

inline BundleFF bundle(const Json& j, const std::string& what = "bundle") {
  try {
    return BundleFF::canonical(slope_triples(j, what));
  } catch (const DomainError& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

inline Json of(const KottwitzClass& c) { return Json{{"h", c.h}, {"slopes", of(c.slopes)}}; }

template <Coefficient C>
Json of(const ProjPoint<C>& y) {
  Json coords = Json::array();
  for (const auto& c : y.coords) coords.push_back(of(c));
  return Json{{"h", y.h}, {"pivot", y.pivot}, {"precision", y.precision}, {"coords", std::move(coords)}};
}

template <Coefficient C>
ProjPoint<C> proj_point(const Json& j, const std::string& what = "point") {
  check_keys(j, what, {"h", "pivot", "precision", "coords"});
  ProjPoint<C> y;
  y.h = static_cast<int>(get_int(j, "h", what));
  y.pivot = static_cast<std::size_t>(get_int(j, "pivot", what));
  y.precision = get_int(j, "precision", what);
  for (const auto& c : get_array(j["coords"], what + ".coords")) y.coords.push_back(coefficient<C>(c, what + ".coords"));
  if (static_cast<int>(y.coords.size()) != y.h || y.pivot >= y.coords.size())
    throw SchemaError(what + ": inconsistent shape");
  return y;
}

inline Json of(const AdicPoint& x) {
  return Json{{"p", x.prime()}, {"log_p", of(x.log_p())}, {"log_w", of(x.log_w())}, {"tag", to_string(x.tag())}};
}

inline AdicPoint adic_point(const Json& j, const std::string& what = "adic_point") {
  check_keys(j, what, {"p", "log_p", "log_w"}, {"tag"});
  try {
    const AdicPoint x = AdicPoint::make(get_int(j, "p", what), ext_rational(j["log_p"], what + ".log_p"),
                                        ext_rational(j["log_w"], what + ".log_w"));
    if (j.contains("tag") && j["tag"] != to_string(x.tag())) throw SchemaError(what + ": tag disagrees with the logs");
    return x;
  } catch (const DomainError& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

inline Json of(const ModificationTriple& t) {
  return Json{{"E", of(t.E)}, {"F", of(t.F)}, {"locus", t.locus}, {"length", t.length}};
}

inline ModificationTriple modification(const Json& j, const std::string& what = "triple") {
  check_keys(j, what, {"E", "F", "length"}, {"locus"});
  ModificationTriple t{bundle(j["E"], what + ".E"), bundle(j["F"], what + ".F"), "inf", get_int(j, "length", what)};
  if (j.contains("locus")) {
    if (!j["locus"].is_string()) throw SchemaError(what + ".locus: expected a string");
    t.locus = j["locus"].get<std::string>();
  }
  return t;
}

inline Json of(const PerdomFiber& f) { return Json{{"base", of(f.base)}, {"dimension", f.dimension}}; }

template <Coefficient C>
Json of(const Matrix<C>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(of(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Coefficient C>
Matrix<C> matrix(const Json& j, const typename C::Ring& ring, const std::string& what = "matrix") {
  std::vector<std::vector<C>> rows;
  for (const auto& r : get_array(j, what)) {
    rows.emplace_back();
    for (const auto& c : get_array(r, what + "[]")) rows.back().push_back(coefficient<C>(c, what + "[][]"));
  }
  try {
    return Matrix<C>::from_rows(ring, rows);
  } catch (const ParameterMismatch& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

inline Json of(const ODElem& s) {
  Json coeffs = Json::array();
  for (const auto& a : s.coeffs()) coeffs.push_back(of(a));
  return Json{{"p", s.prime()}, {"h", s.h()}, {"coeffs", std::move(coeffs)}};
}

inline ODElem od_elem(const Json& j, const std::string& what = "od") {
  check_keys(j, what, {"p", "h", "coeffs"});
  const std::int64_t p = get_int(j, "p", what);
  const std::int64_t h = get_int(j, "h", what);
  if (p < 2 || h < 1 || h > 64) throw SchemaError(what + ": bad parameters");
  std::vector<WittElem> coeffs;
  for (const auto& c : get_array(j["coeffs"], what + ".coeffs")) coeffs.push_back(witt(c, what + ".coeffs"));
  try {
    return ODElem(witt_context(p, static_cast<int>(h)), std::move(coeffs));
  } catch (const ParameterMismatch& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

inline Json of(const WeilElem& w) { return Json{{"n", w.n}, {"inertia", w.inertia}}; }

inline Json of(const TowerPoint& x) {
  Json j;
  j["label"] = x.label;
  if (x.deformation) {
    Json u = Json::array();
    for (const auto& c : x.deformation->u) u.push_back(of(c));
    j["deformation"] = Json{{"h", x.deformation->h}, {"u", std::move(u)}};
  } else {
    j["deformation"] = nullptr;
  }
  j["iota"] = of(x.iota);
  j["alpha"] = of(x.alpha);
  j["twist"] = x.twist;
  j["inertia"] = x.inertia;
  j["locus"] = x.locus ? of(*x.locus) : Json(nullptr);
  return j;
}

inline Json of(const HeightResult& r) {
  return Json{{"height", r.height ? Json(*r.height) : Json(nullptr)}, {"checked_below", r.checked_below},
              {"h_max", r.h_max}};
}

inline Json of(const FglCheck& c) {
  auto opt = [](const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); };
  return Json{{"unit", c.unit},
              {"commutative", c.commutative},
              {"associative", opt(c.associative)},
              {"log_additive", opt(c.log_additive)},
              {"precision", c.precision},
              {"ok", c.ok()}};
}

}  // namespace json
}  // namespace perikos
