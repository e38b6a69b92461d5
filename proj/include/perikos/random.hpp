#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

#include "padic.hpp"
#include "witt.hpp"

namespace perikos {

/// Seeded generator whose draws are identical on every platform
/// (std::uniform_int_distribution is implementation-defined, so we avoid it).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  /// Uniform integer in [0, bound).
  Integer below(const Integer& bound) {
    if (bound <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 64;
    Integer x = 0;
    for (std::size_t b = 0; b < bits; b += 64) {
      x <<= 64;
      x += Integer(static_cast<unsigned long>(next()));
    }
    return detail::mod(x, bound);
  }

  bool coin() { return (next() & 1U) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Random element with valuation in [min_val, max_val] (or zero with small chance).
inline Padic random_padic(Rng& rng, std::int64_t p, std::int64_t precision, std::int64_t min_val = 0,
                          std::int64_t max_val = 0, bool allow_zero = false) {
  if (allow_zero && rng.uniform(0, 15) == 0) return Padic::zero(p, precision);
  const std::int64_t v = rng.uniform(min_val, max_val);
  const std::int64_t r = std::max<std::int64_t>(precision - v, 1);
  Integer u = rng.below(detail::pow_int(p, r));
  if (detail::mod(u, Integer(static_cast<long>(p))) == 0) u += 1;
  return Padic::make(p, v, u, v + r);
}

inline WittElem random_witt(Rng& rng, const WittContextPtr& ctx, std::int64_t precision, std::int64_t min_val = 0,
                            std::int64_t max_val = 0, bool allow_zero = false) {
  if (allow_zero && rng.uniform(0, 15) == 0) return WittElem::zero(ctx, precision);
  const std::int64_t v = rng.uniform(min_val, max_val);
  const std::int64_t r = std::max<std::int64_t>(precision - v, 1);
  const Integer modulus = detail::pow_int(ctx->prime(), r);
  WittContext::Coords c(ctx->degree());
  for (auto& x : c) x = rng.below(modulus);
  if (detail::mod(c[0], Integer(static_cast<long>(ctx->prime()))) == 0) c[0] += 1;
  return WittElem::make(ctx, v, std::move(c), v + r);
}

}  // namespace perikos
