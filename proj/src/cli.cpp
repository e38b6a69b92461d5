#include "perikos/cli.hpp"

#include <gmp.h>

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>

namespace perikos::cli {

PrecBlock prec_block(const Json& j, PrecBlock base) {
  json::check_keys(j, "prec", {}, {"p", "precision", "order"});
  if (j.contains("p")) base.p = json::get_int(j, "p", "prec");
  if (j.contains("precision")) base.precision = json::get_int(j, "precision", "prec");
  if (j.contains("order")) base.order = json::get_int(j, "order", "prec");
  if (base.p < 2 || base.precision < 1 || base.order < 2) throw SchemaError("prec: out of range");
  return base;
}

PrecBlock default_prec_block() {
  const char* env = std::getenv("PERIKOS_DEFAULT_PREC");
  if (env == nullptr || *env == '\0') return {};
  Json j;
  try {
    j = Json::parse(env);
  } catch (const Json::parse_error&) {
    throw SchemaError("PERIKOS_DEFAULT_PREC: not a JSON object");
  }
  return prec_block(j);
}

Json prec_json(const PrecBlock& b) { return Json{{"p", b.p}, {"precision", b.precision}, {"order", b.order}}; }

namespace {

struct Context {
  const Json& params;
  PrecBlock prec;
  std::uint64_t seed;
  Json provenance = Json::object();
};

std::int64_t int_param(const Json& params, const char* key, std::int64_t fallback, std::int64_t lo,
                              std::int64_t hi) {
  if (!params.contains(key)) return fallback;
  const std::int64_t v = json::get_int(params, key, "params");
  if (v < lo || v > hi)
    throw SchemaError(std::string("params.") + key + ": must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return v;
}

std::int64_t required_int(const Json& params, const char* key, std::int64_t lo, std::int64_t hi) {
  if (!params.contains(key)) throw SchemaError(std::string("params: missing field '") + key + "'");
  return int_param(params, key, 0, lo, hi);
}

std::int64_t prime_param(const Context& c) {
  const std::int64_t p = int_param(c.params, "p", c.prec.p, 2, 1'000'003);
  const Integer n(static_cast<long>(p));
  if (mpz_probab_prime_p(n.get_mpz_t(), 25) == 0) throw SchemaError("params.p: " + std::to_string(p) + " is not prime");
  return p;
}

/// Integer, "a/b" string, or a full serialized p-adic number.
Padic padic_value(const Json& j, const PadicRing& ring, const std::string& what) {
  if (j.is_object()) {
    Padic a = json::padic(j, what);
    if (a.prime() != ring.p) throw SchemaError(what + ": prime differs from p");
    return a;
  }
  const Rational r = json::rational(j, what);
  return ring.from_rational(Integer(static_cast<long>(r.numerator())), Integer(static_cast<long>(r.denominator())));
}

/// As padic_value, plus a list of m integers read as coordinates in the
/// polynomial basis of W(F_{p^m}).
WittElem witt_value(const Json& j, const WittRing& ring, const std::string& what) {
  if (j.is_object()) {
    WittElem a = json::witt(j, what);
    if (!(*a.context() == *ring.context)) throw SchemaError(what + ": element over a different field");
    return a;
  }
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != ring.context->degree())
      throw SchemaError(what + ": coordinate vector must have " + std::to_string(ring.context->degree()) + " entries");
    WittContext::Coords c;
    for (const auto& x : j) {
      if (x.is_number_integer()) {
        c.emplace_back(static_cast<long>(x.get<std::int64_t>()));
      } else if (x.is_string()) {
        try {
          c.emplace_back(x.get<std::string>(), 10);
        } catch (const std::invalid_argument&) {
          throw SchemaError(what + ": bad integer coordinate");
        }
      } else {
        throw SchemaError(what + ": coordinates must be integers");
      }
    }
    return WittElem::make(ring.context, 0, std::move(c), ring.precision);
  }
  const Rational r = json::rational(j, what);
  return ring.from_rational(Integer(static_cast<long>(r.numerator())), Integer(static_cast<long>(r.denominator())));
}

std::vector<Padic> padic_list(const Json& j, const PadicRing& ring, const std::string& what) {
  std::vector<Padic> out;
  for (const auto& x : json::get_array(j, what)) out.push_back(padic_value(x, ring, what + "[]"));
  return out;
}

std::vector<WittElem> witt_list(const Json& j, const WittRing& ring, const std::string& what) {
  std::vector<WittElem> out;
  for (const auto& x : json::get_array(j, what)) out.push_back(witt_value(x, ring, what + "[]"));
  return out;
}

template <Coefficient C, class Parse>
Matrix<C> matrix_value(const Json& j, const typename C::Ring& ring, std::size_t n, Parse parse,
                       const std::string& what) {
  if (!j.is_array() || j.size() != n) throw SchemaError(what + ": expected " + std::to_string(n) + " rows");
  Matrix<C> m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw SchemaError(what + ": expected " + std::to_string(n) + " columns");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = parse(j[i][k], ring, what);
  }
  return m;
}

RigidPoint<Padic> rigid_point(const Context& c, std::int64_t& input_precision) {
  const std::int64_t p = prime_param(c);
  const auto h = static_cast<int>(required_int(c.params, "h", 1, 64));
  input_precision = int_param(c.params, "input_precision", c.prec.precision, 1, 100000);
  const PadicRing ring{p, input_precision};
  std::vector<Padic> u;
  if (c.params.contains("u")) u = padic_list(c.params["u"], ring, "params.u");
  else if (h > 1) throw SchemaError("params: missing field 'u'");
  if (static_cast<int>(u.size()) != h - 1)
    throw SchemaError("params.u: expected " + std::to_string(h - 1) + " parameters for height " + std::to_string(h));
  return RigidPoint<Padic>::make(ring, h, std::move(u));
}

PeriodOptions period_options(const Context& c) {
  PeriodOptions o;
  o.n_start = static_cast<int>(int_param(c.params, "n_start", o.n_start, 1, 4096));
  o.n_cap = static_cast<int>(int_param(c.params, "n_cap", o.n_cap, 1, 4096));
  return o;
}

const std::vector<const char*> kPeriodKeys = {"h", "p", "u", "prec", "input_precision", "n_start", "n_cap"};

void check_params(const Json& params, const std::string& command, const std::vector<const char*>& allowed) {
  if (!params.is_object()) throw SchemaError(command + ": params must be an object");
  for (const auto& [key, value] : params.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || key == k;
    if (!known) throw SchemaError(command + ": unknown parameter '" + key + "'");
  }
}

// --- commands -------------------------------------------------------------

Json cmd_fgl_check(Context& c) {
  check_params(c.params, "fgl-check",
               {"h", "p", "u", "order", "precision", "associativity", "samples", "height", "emit_law"});
  const std::int64_t p = prime_param(c);
  const auto h = static_cast<int>(required_int(c.params, "h", 1, 16));
  const auto M = static_cast<int>(int_param(c.params, "order", c.prec.order, 2, 512));
  const std::int64_t n = int_param(c.params, "precision", c.prec.precision, 1, 100000);
  const PadicRing ring{p, n};
  // Omitted parameters mean the origin, exactly.
  std::vector<Padic> u(static_cast<std::size_t>(h - 1), Padic::zero(p, kMaxPrecision));
  if (c.params.contains("u")) u = padic_list(c.params["u"], ring, "params.u");
  if (static_cast<int>(u.size()) != h - 1) throw SchemaError("params.u: expected " + std::to_string(h - 1) + " entries");

  AssociativityMode mode = AssociativityMode::sampled;
  if (c.params.contains("associativity")) {
    const Json& a = c.params["associativity"];
    if (a == "skip") mode = AssociativityMode::skip;
    else if (a == "sampled") mode = AssociativityMode::sampled;
    else if (a == "full") mode = AssociativityMode::full;
    else throw SchemaError("params.associativity: expected skip, sampled or full");
  }
  const auto samples = static_cast<int>(int_param(c.params, "samples", 8, 1, 10000));
  bool want_height = true;
  bool emit_law = false;
  for (auto [key, flag] : {std::pair{"height", &want_height}, std::pair{"emit_law", &emit_law}}) {
    if (!c.params.contains(key)) continue;
    if (!c.params[key].is_boolean()) throw SchemaError(std::string("params.") + key + ": expected a boolean");
    *flag = c.params[key].get<bool>();
  }

  const auto F = fgl_from_log(gh_log(ring, h, u, M), M, h);
  const FglCheck check = check_fgl(F, mode, samples, c.seed);
  if (check.precision < 1)
    throw PrecisionError("fgl-check: the identities are known to no p-adic digit; raise params.precision",
                         check.precision);
  Json result;
  result["check"] = json::of(check);
  if (want_height) {
    const std::int64_t q = perikos::detail::checked_power(p, h, 4096);
    if (q >= 4096) throw DomainError("fgl-check: the height test needs truncation order p^h + 1 <= 4096");
    const auto px = p_series_from_log(gh_log(ring, h, u, static_cast<int>(q) + 1));
    result["height"] = json::of(height_mod_p(px, h));
    c.provenance["height_order"] = q + 1;
  }
  if (emit_law) result["law"] = json::of(F.law);
  c.provenance["precision_achieved"] = check.precision;
  c.provenance["order"] = M;
  return result;
}

Json cmd_period_eval(Context& c) {
  check_params(c.params, "period-eval", kPeriodKeys);
  std::int64_t input_precision = 0;
  const auto x = rigid_point(c, input_precision);
  const std::int64_t target = required_int(c.params, "prec", 1, 100000);
  PeriodTrace trace;
  const auto y = period_point(x, target, period_options(c), &trace);
  c.provenance["n_used"] = trace.n_used;
  c.provenance["agreement"] = trace.agreement;
  c.provenance["input_precision"] = input_precision;
  c.provenance["precision_achieved"] = y.precision;
  return Json{{"point", json::of(y)}, {"radius_ok", radius_check(x)}};
}

Json cmd_global_eval(Context& c) {
  check_params(c.params, "global-eval", kPeriodKeys);
  std::int64_t input_precision = 0;
  const auto x = rigid_point(c, input_precision);
  const std::int64_t target = required_int(c.params, "prec", 1, 100000);
  const auto opts = period_options(c);
  const auto g = global_point(x, target, opts);
  c.provenance["input_precision"] = input_precision;
  c.provenance["precision_achieved"] = g.point.precision;
  return Json{{"triple", json::of(g.triple)},
              {"base", json::of(g.base)},
              {"fiber", json::of(g.fiber)},
              {"point", json::of(g.point)},
              {"commutes", global_commutes(g, x, target, opts)}};
}

Json cmd_newton(Context& c) {
  check_params(c.params, "newton", {"p", "m", "precision", "matrix"});
  const std::int64_t p = prime_param(c);
  const auto m = static_cast<int>(int_param(c.params, "m", 1, 1, 16));
  const std::int64_t n = int_param(c.params, "precision", c.prec.precision, 1, 100000);
  if (!c.params.contains("matrix")) throw SchemaError("params: missing field 'matrix'");
  const Json& rows = c.params["matrix"];
  if (!rows.is_array() || rows.empty()) throw SchemaError("params.matrix: expected a nonempty square array");
  const WittRing ring{json::witt_context(p, m), n};
  const Isocrystal x(ring.context, matrix_value<WittElem>(rows, ring, rows.size(), witt_value, "params.matrix"));
  const SlopeData s = newton_polygon(x);
  Json vertices = Json::array({Json::array({0, 0})});
  std::int64_t vx = 0;
  Rational vy(0);
  for (const auto& [slope, mult] : s.pairs()) {
    vx += mult;
    vy += slope * Rational(mult);
    vertices.push_back(Json::array({vx, json::of(vy)}));
  }
  c.provenance["precision"] = x.precision();
  return Json{{"slopes", json::of(s)}, {"rank", s.rank()}, {"degree", s.degree()}, {"vertices", vertices}};
}

Json cmd_kottwitz(Context& c) {
  check_params(c.params, "kottwitz", {"h", "d", "lo", "hi"});
  const std::int64_t h = required_int(c.params, "h", 1, 64);
  const std::int64_t d = required_int(c.params, "d", -1000, 1000);
  const Rational lo = c.params.contains("lo") ? json::rational(c.params["lo"], "params.lo") : Rational(0);
  const Rational hi = c.params.contains("hi") ? json::rational(c.params["hi"], "params.hi") : Rational(1);
  Json classes = Json::array();
  for (const auto& k : kottwitz_enumerate(h, d, lo, hi)) classes.push_back(json::of(k));
  return Json{{"count", classes.size()}, {"classes", classes}};
}

Json bundle_record(const BundleFF& e) {
  Json poly = Json::array();
  for (const auto& v : hn_polygon(e)) poly.push_back(Json::array({v.x, v.y}));
  return Json{{"bundle", json::of(e)},
              {"rank", e.rank()},
              {"degree", e.degree()},
              {"slope", json::of(e.slope())},
              {"semistable", e.semistable()},
              {"hn_polygon", poly},
              {"fiber_dimension", perdom_fiber(e).dimension}};
}

Json cmd_bundles(Context& c) {
  check_params(c.params, "bundles", {"h"});
  const std::int64_t h = required_int(c.params, "h", 1, 64);
  Json classes = Json::array();
  for (const auto& e : pdiv_bundle_classes(h)) classes.push_back(bundle_record(e));
  return Json{{"count", classes.size()}, {"classes", classes}};
}

Json cmd_kappa(Context& c) {
  check_params(c.params, "kappa", {"p", "log_p", "log_w", "move"});
  const std::int64_t p = prime_param(c);
  for (const char* k : {"log_p", "log_w"})
    if (!c.params.contains(k)) throw SchemaError(std::string("params: missing field '") + k + "'");
  const AdicPoint x = AdicPoint::make(p, json::ext_rational(c.params["log_p"], "params.log_p"),
                                      json::ext_rational(c.params["log_w"], "params.log_w"));
  Json result{{"point", json::of(x)}, {"tag", to_string(x.tag())}, {"kappa", json::of(kappa(x))}};
  if (x.tag() == PointTag::y_point) {
    const auto [rep, k] = fundamental_domain(x);
    result["fundamental_domain"] = Json{{"point", json::of(rep)}, {"n", k}, {"kappa", json::of(kappa(rep))}};
  } else {
    result["fundamental_domain"] = nullptr;
  }
  if (c.params.contains("move")) {
    const std::int64_t n = int_param(c.params, "move", 0, -60, 60);
    const AdicPoint y = frobenius_move(x, n);
    result["moved"] = Json{{"n", n}, {"point", json::of(y)}, {"kappa", json::of(kappa(y))}};
  }
  return result;
}

Json cmd_hecke_check(Context& c) {
  check_params(c.params, "hecke-check", {"E", "F", "length", "locus"});
  const ModificationTriple t = json::modification(c.params, "params");
  Json result{{"triple", json::of(t)},
              {"rank_E", t.E.rank()},
              {"rank_F", t.F.rank()},
              {"degree_E", t.E.degree()},
              {"degree_F", t.F.degree()}};
  try {
    hecke_validate(t);
    result["valid"] = true;
    result["reason"] = nullptr;
  } catch (const HeckeRankMismatch& e) {
    result["valid"] = false;
    result["reason"] = "rank-mismatch";
  } catch (const HeckeDegreeMismatch& e) {
    result["valid"] = false;
    result["reason"] = "degree-mismatch";
  }
  return result;
}

struct ODSetting {
  std::int64_t p;
  std::int64_t h;
  WittRing ring;
};

ODSetting od_setting(const Context& c) {
  const std::int64_t p = prime_param(c);
  const std::int64_t h = required_int(c.params, "h", 1, 16);
  const std::int64_t n = int_param(c.params, "precision", c.prec.precision, 1, 100000);
  return {p, h, WittRing{json::witt_context(p, static_cast<int>(h)), n}};
}

ODElem od_value(const Json& j, const ODSetting& s, const std::string& what) {
  if (j.is_object()) {
    ODElem a = json::od_elem(j, what);
    if (!(*a.context() == *s.ring.context)) throw SchemaError(what + ": element of a different division algebra");
    return a;
  }
  auto coeffs = witt_list(j, s.ring, what);
  if (static_cast<std::int64_t>(coeffs.size()) != s.h)
    throw SchemaError(what + ": expected " + std::to_string(s.h) + " coefficients");
  return ODElem(s.ring.context, std::move(coeffs));
}

Json cmd_od_mul(Context& c) {
  check_params(c.params, "od-mul", {"p", "h", "precision", "a", "b"});
  const ODSetting s = od_setting(c);
  for (const char* k : {"a", "b"})
    if (!c.params.contains(k)) throw SchemaError(std::string("params: missing field '") + k + "'");
  const ODElem a = od_value(c.params["a"], s, "params.a");
  const ODElem b = od_value(c.params["b"], s, "params.b");
  const ODElem ab = od_mul(a, b);
  c.provenance["precision_achieved"] = ab.precision();
  return Json{{"product", json::of(ab)}, {"unit", od_is_unit(ab)}};
}

TowerPoint tower_value(const Json& j, const ODSetting& s) {
  json::check_keys(j, "params.point", {}, {"label", "u", "iota", "alpha", "locus"});
  const auto n = static_cast<std::size_t>(s.h);
  const PadicRing pr{s.p, s.ring.precision};
  Matrix<WittElem> iota = j.contains("iota")
                              ? matrix_value<WittElem>(j["iota"], s.ring, n, witt_value, "params.point.iota")
                              : Matrix<WittElem>::identity(s.ring, n);
  Matrix<Padic> alpha = j.contains("alpha")
                            ? matrix_value<Padic>(j["alpha"], pr, n, padic_value, "params.point.alpha")
                            : Matrix<Padic>::identity(pr, n);
  std::optional<RigidPoint<Padic>> def;
  if (j.contains("u")) {
    auto u = padic_list(j["u"], pr, "params.point.u");
    if (static_cast<std::int64_t>(u.size()) != s.h - 1) throw SchemaError("params.point.u: wrong number of parameters");
    def = RigidPoint<Padic>::make(pr, static_cast<int>(s.h), std::move(u));
  }
  std::string label = "G";
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw SchemaError("params.point.label: expected a string");
    label = j["label"].get<std::string>();
  }
  TowerPoint x = make_tower_point(label, std::move(def), std::move(iota), std::move(alpha));
  if (j.contains("locus")) {
    x.locus = json::adic_point(j["locus"], "params.point.locus");
    if (x.locus->prime() != s.p) throw SchemaError("params.point.locus: prime differs from p");
  }
  return x;
}

Json cmd_act(Context& c) {
  check_params(c.params, "act", {"action", "p", "h", "precision", "point", "s", "g", "n", "inertia", "coords", "prec"});
  if (!c.params.contains("action") || !c.params["action"].is_string())
    throw SchemaError("params.action: expected one of J, GL, Weil, transition, J-period");
  const std::string action = c.params["action"].get<std::string>();
  const ODSetting s = od_setting(c);
  auto need = [&](const char* k) -> const Json& {
    if (!c.params.contains(k)) throw SchemaError("act " + action + ": missing field '" + k + "'");
    return c.params[k];
  };
  if (action == "J-period") {
    const auto raw = witt_list(need("coords"), s.ring, "params.coords");
    if (static_cast<std::int64_t>(raw.size()) != s.h) throw SchemaError("params.coords: expected h coordinates");
    const std::int64_t target = int_param(c.params, "prec", s.ring.precision, 1, 100000);
    const auto y = canonicalize(raw, target);
    const auto z = act_J_on_period(od_value(need("s"), s, "params.s"), y);
    return Json{{"input", json::of(y)}, {"point", json::of(z)}};
  }
  const TowerPoint x = c.params.contains("point") ? tower_value(c.params["point"], s) : tower_value(Json::object(), s);
  TowerPoint y = x;
  if (action == "J") {
    y = act_J(od_value(need("s"), s, "params.s"), x);
  } else if (action == "GL") {
    const PadicRing pr{s.p, s.ring.precision};
    y = act_GL(matrix_value<Padic>(need("g"), pr, static_cast<std::size_t>(s.h), padic_value, "params.g"), x);
  } else if (action == "transition") {
    y = tower_transition(x);
  } else if (action == "Weil") {
    WeilElem w{int_param(c.params, "n", 0, -1000, 1000), {}};
    if (c.params.contains("inertia")) {
      for (const auto& t : json::get_array(c.params["inertia"], "params.inertia")) {
        if (!t.is_string()) throw SchemaError("params.inertia: expected strings");
        w.inertia.push_back(t.get<std::string>());
      }
    }
    y = act_Weil(w, x);
  } else {
    throw SchemaError("params.action: expected one of J, GL, Weil, transition, J-period");
  }
  return Json{{"input", json::of(x)}, {"point", json::of(y)}};
}

Json cmd_commute_check(Context& c) {
  check_params(c.params, "commute-check", {"p", "h", "precision", "trials"});
  const ODSetting s = od_setting(c);
  const std::int64_t trials = int_param(c.params, "trials", 100, 1, 1'000'000);
  const auto n = static_cast<std::size_t>(s.h);
  const std::int64_t prec = s.ring.precision;
  const PadicRing pr{s.p, prec};
  Rng rng(c.seed);
  std::int64_t passed = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    auto random_invertible = [&](auto ring, auto entry) {
      for (;;) {
        Matrix<std::decay_t<decltype(entry())>> m(ring, n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < n; ++k) m(i, k) = entry();
        if (!determinant(m).is_zero()) return m;
      }
    };
    const auto iota = random_invertible(s.ring, [&] { return random_witt(rng, s.ring.context, prec, 0, 2, true); });
    const auto alpha = random_invertible(pr, [&] { return random_padic(rng, s.p, prec, -1, 2, true); });
    const auto g = random_invertible(pr, [&] { return random_padic(rng, s.p, prec, -1, 2, true); });
    std::vector<WittElem> coeffs;
    for (std::size_t i = 0; i < n; ++i) coeffs.push_back(random_witt(rng, s.ring.context, prec, 0, i == 0 ? 0 : 2, i > 0));
    const ODElem unit(s.ring.context, std::move(coeffs));
    const TowerPoint x = make_tower_point("G", std::nullopt, iota, alpha);
    if (commute_check(unit, g, x)) ++passed;
  }
  return Json{{"trials", trials}, {"passed", passed}, {"all_passed", passed == trials}};
}

using Handler = std::function<Json(Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"fgl-check", cmd_fgl_check}, {"period-eval", cmd_period_eval}, {"global-eval", cmd_global_eval},
      {"newton", cmd_newton},       {"kottwitz", cmd_kottwitz},       {"bundles", cmd_bundles},
      {"kappa", cmd_kappa},         {"hecke-check", cmd_hecke_check}, {"od-mul", cmd_od_mul},
      {"act", cmd_act},             {"commute-check", cmd_commute_check},
  };
  return table;
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [name, h] : handlers()) out.push_back(name);
  return out;
}

Outcome run(const Json& job, const PrecBlock& defaults) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["version"] = kVersion;
  doc["command"] = job.is_object() && job.contains("command") ? job["command"] : Json(nullptr);
  auto fail = [&](int code, const std::string& kind, const std::string& message, std::optional<std::int64_t> achieved) {
    Json err{{"kind", kind}, {"message", message}};
    if (achieved) err["achieved"] = *achieved;
    doc["error"] = std::move(err);
    return Outcome{doc, code};
  };
  try {
    json::check_keys(job, "job", {"command"}, {"schema_version", "params", "seed", "prec"});
    if (job.contains("schema_version") && job["schema_version"] != kSchemaVersion)
      throw SchemaError("job.schema_version: only version " + std::to_string(kSchemaVersion) + " is understood");
    if (!job["command"].is_string()) throw SchemaError("job.command: expected a string");
    const auto& table = handlers();
    const auto it = table.find(job["command"].get<std::string>());
    if (it == table.end()) throw SchemaError("job.command: unknown command '" + job["command"].get<std::string>() + "'");
    const Json params = job.contains("params") ? job["params"] : Json::object();
    std::uint64_t seed = 1;
    if (job.contains("seed")) {
      if (!job["seed"].is_number_unsigned()) throw SchemaError("job.seed: expected a nonnegative integer");
      seed = job["seed"].get<std::uint64_t>();
    }
    const PrecBlock prec = job.contains("prec") ? prec_block(job["prec"], defaults) : defaults;
    // Keys sorted so the echo does not depend on how the job was written.
    const Json echoed = Json::parse(nlohmann::json::parse(params.dump()).dump());
    doc["input"] = Json{{"params", echoed}, {"seed", seed}, {"prec", prec_json(prec)}};
    Context ctx{params, prec, seed};
    Json result = it->second(ctx);
    doc["result"] = std::move(result);
    doc["provenance"] = std::move(ctx.provenance);
    return Outcome{doc, kOk};
  } catch (const SchemaError& e) {
    return fail(kSchema, "schema", e.what(), std::nullopt);
  } catch (const Json::exception& e) {
    return fail(kSchema, "schema", e.what(), std::nullopt);
  } catch (const ConvergenceError& e) {
    return fail(kPrecision, "convergence", e.what(), e.achieved());
  } catch (const PrecisionError& e) {
    return fail(kPrecision, "precision", e.what(), e.achieved());
  } catch (const DomainError& e) {
    return fail(kDomain, "domain", e.what(), std::nullopt);
  } catch (const ParameterMismatch& e) {
    return fail(kDomain, "domain", e.what(), std::nullopt);
  } catch (const std::invalid_argument& e) {
    return fail(kDomain, "domain", e.what(), std::nullopt);
  } catch (const std::domain_error& e) {
    return fail(kDomain, "domain", e.what(), std::nullopt);
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what(), std::nullopt);
  }
}

}  // namespace perikos::cli
