#pragma once

#include <concepts>
#include <cstdint>

#include "padic.hpp"
#include "witt.hpp"

namespace perikos {

/// Precision-tracked elements of Q_p or W(F_{p^m})[1/p].
template <class C>
concept Coefficient = requires(const C& a, const C& b, const Integer& n, std::int64_t k) {
  typename C::Ring;
  { a + b } -> std::same_as<C>;
  { a - b } -> std::same_as<C>;
  { a * b } -> std::same_as<C>;
  { -a } -> std::same_as<C>;
  { a.inverse() } -> std::same_as<C>;
  { a.pow(n) } -> std::same_as<C>;
  { a.shifted(k) } -> std::same_as<C>;
  { a.truncated(k) } -> std::same_as<C>;
  { a.times_integer(n) } -> std::same_as<C>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.valuation() } -> std::convertible_to<std::int64_t>;
  { a.precision() } -> std::convertible_to<std::int64_t>;
  { a.prime() } -> std::convertible_to<std::int64_t>;
  { a.ring() } -> std::same_as<typename C::Ring>;
  { same_value(a, b) } -> std::convertible_to<bool>;
};

/// Valuation for precision bookkeeping: a zero counts as divisible by p^N.
template <Coefficient C>
std::int64_t effective_valuation(const C& a) {
  return a.is_zero() ? a.precision() : a.valuation();
}

/// Zero of the same ring that is exact (absent terms, identity padding).
template <Coefficient C>
C exact_zero_like(const C& a) {
  return a.times_integer(0);
}

/// a / n for a nonzero integer n, losing only the v_p(n) digits that division forces.
template <Coefficient C>
C divide_by_integer(const C& a, const Integer& n) {
  if (n == 0) throw DomainError("divide_by_integer: division by zero");
  Integer u = n;
  const std::int64_t k = detail::remove_prime(u, a.prime());
  if (a.is_zero()) return a.shifted(-k);
  auto ring = a.ring();
  ring.precision = std::max<std::int64_t>(a.relative_precision(), 1);
  return (a * ring.from_integer(u).inverse()).shifted(-k);
}

/// sigma^k on coefficients; the identity on Q_p.
inline Padic coeff_frobenius(const Padic& a, std::int64_t /*k*/) { return a; }
inline WittElem coeff_frobenius(const WittElem& a, std::int64_t k) { return a.frobenius(k); }

}  // namespace perikos
