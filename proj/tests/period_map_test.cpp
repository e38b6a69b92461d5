#include <gtest/gtest.h>

#include <gmpxx.h>

#include "perikos/period_map.hpp"
#include "perikos/random.hpp"

using namespace perikos;

namespace {

using Point = RigidPoint<Padic>;

Padic padic(std::int64_t p, long n, std::int64_t prec) { return Padic::from_integer(p, Integer(n), prec); }

Point point(std::int64_t p, std::int64_t prec, std::vector<Padic> u) {
  const int h = static_cast<int>(u.size()) + 1;
  return Point::make(PadicRing{p, prec}, h, std::move(u));
}

// p^n b_{nh+i} over Q with GMP, straight from the recursion.
std::vector<mpq_class> raw_oracle(long p, int h, const std::vector<mpq_class>& u, int n) {
  std::vector<mpq_class> b{1};
  auto qpow = [](const mpq_class& x, unsigned long e) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), e);
    return mpq_class(num, den);
  };
  for (int m = 1; m <= n * h + h - 1; ++m) {
    mpq_class s = 0;
    for (int i = 1; i <= h && i <= m; ++i) {
      unsigned long pe = 1;
      for (int k = 0; k < m - i; ++k) pe *= static_cast<unsigned long>(p);
      s += b[static_cast<std::size_t>(m - i)] * (i == h ? mpq_class(1) : qpow(u[static_cast<std::size_t>(i - 1)], pe));
    }
    s /= p;
    s.canonicalize();
    b.push_back(s);
  }
  std::vector<mpq_class> out;
  mpz_class pn;
  mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
  for (int i = 0; i < h; ++i) {
    mpq_class c = b[static_cast<std::size_t>(n * h + i)] * pn;
    c.canonicalize();
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST(RadiusCheck, Examples) {
  EXPECT_TRUE(radius_check(point(5, 20, {padic(5, 5, 20)})));
  EXPECT_FALSE(radius_check(point(5, 20, {padic(5, 2, 20)})));
  EXPECT_TRUE(radius_check(point(3, 20, {padic(3, 3, 20), padic(3, 9, 20)})));
  EXPECT_TRUE(radius_check(point(3, 20, {Padic::zero(3, 20)})));
}

TEST(RigidPoint, ValuationTags) {
  Point x = point(5, 20, {padic(5, 25, 20)});
  EXPECT_TRUE(x.consistent());
  EXPECT_EQ(x.valuations[0], ExtRational(Rational(2)));
  x.valuations[0] = ExtRational(Rational(1));
  EXPECT_FALSE(x.consistent());
  EXPECT_THROW(period_point(x, 4), DomainError);
  EXPECT_THROW(Point::make(PadicRing{5, 20}, 3, {padic(5, 5, 20)}), DomainError);
}

TEST(PeriodPoint, ZeroParametersGivePivotLine) {
  for (std::int64_t p : {2, 3, 5}) {
    for (int h = 1; h <= 4; ++h) {
      std::vector<Padic> u(static_cast<std::size_t>(h - 1), Padic::zero(p, 30));
      const auto y = period_point(point(p, 30, u), 8);
      ASSERT_EQ(y.coords.size(), static_cast<std::size_t>(h));
      EXPECT_EQ(y.pivot, 0U);
      EXPECT_TRUE(same_value(y.coords[0], padic(p, 1, 8)));
      for (int i = 1; i < h; ++i) EXPECT_TRUE(y.coords[static_cast<std::size_t>(i)].is_zero()) << p << " " << h;
      EXPECT_GE(y.precision, 8);
    }
  }
}

TEST(PeriodPoint, HeightOneIsAPoint) {
  const auto y = period_point(Point::make(PadicRing{7, 10}, 1, {}), 5);
  EXPECT_EQ(y.h, 1);
  ASSERT_EQ(y.coords.size(), 1U);
  EXPECT_TRUE(same_value(y.coords[0], padic(7, 1, 5)));
}

TEST(PeriodPoint, SelfConsistencyAtFive) {
  const Point x = point(5, 40, {padic(5, 5, 40)});
  PeriodTrace trace;
  const auto y = period_point(x, 6, {}, &trace);
  EXPECT_GE(y.precision, 6);
  PeriodOptions later;
  later.n_start = trace.n_used + 2;
  const auto z = period_point(x, 6, later);
  EXPECT_EQ(y, z);
}

TEST(PeriodPoint, MatchesRationalOracle) {
  struct Case {
    long p;
    std::vector<long> u;
  };
  for (const Case& c : {Case{2, {2}}, Case{3, {3}}, Case{2, {4}}, Case{5, {5}}, Case{3, {3, 9}}, Case{2, {2, 2}}}) {
    const int h = static_cast<int>(c.u.size()) + 1;
    std::vector<Padic> u;
    std::vector<mpq_class> uq;
    for (long v : c.u) {
      u.push_back(padic(c.p, v, 60));
      uq.emplace_back(v);
    }
    PeriodTrace trace;
    const auto y = period_point(point(c.p, 60, u), 6, {}, &trace);
    // Oracle points at successive n until two agree; exponents stay below 2^21.
    auto oracle_at = [&](int n) {
      std::vector<Padic> rawp;
      for (const auto& q : raw_oracle(c.p, h, uq, n)) rawp.push_back(Padic::from_rational(c.p, q.get_num(), q.get_den(), 60));
      return canonicalize(rawp, 6);
    };
    int n = 2;
    auto expect = oracle_at(n);
    for (;; ++n) {
      auto next = oracle_at(n + 1);
      if (next == expect) break;
      expect = next;
      ASSERT_LT(n, 8) << "oracle did not settle";
    }
    EXPECT_EQ(y, expect) << "p=" << c.p << " h=" << h << " got " << y << " want " << expect;
  }
}

TEST(PeriodPoint, DistinctParametersDistinctPoints) {
  const auto a = period_point(point(5, 40, {padic(5, 5, 40)}), 6);
  const auto b = period_point(point(5, 40, {padic(5, 25, 40)}), 6);
  EXPECT_FALSE(a == b);
}

TEST(PeriodPoint, HodgeLineIsAlias) {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const std::int64_t p = t % 2 ? 3 : 5;
    const int h = 2 + t % 2;
    std::vector<Padic> u;
    for (int i = 0; i < h - 1; ++i) u.push_back(random_padic(rng, p, 40, 1, 3));
    const Point x = point(p, 40, u);
    EXPECT_EQ(period_point(x, 6), hodge_line(x, 6));
  }
}

TEST(PeriodPoint, StableUnderLargerStart) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::int64_t p = t % 2 ? 3 : 5;
    const int h = 2 + (t / 2) % 2;
    std::vector<Padic> u;
    for (int i = 0; i < h - 1; ++i) u.push_back(random_padic(rng, p, 40, 1, 3, true));
    const Point x = point(p, 40, u);
    PeriodTrace trace;
    const auto y = period_point(x, 6, {}, &trace);
    PeriodOptions doubled;
    doubled.n_start = 2 * trace.n_used;
    doubled.n_cap = 4 * trace.n_used + 4;
    EXPECT_EQ(y, period_point(x, 6, doubled));
  }
}

TEST(PeriodPoint, PrecisionMonotone) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const std::int64_t p = 3;
    std::vector<Padic> u{random_padic(rng, p, 60, 1, 2)};
    const auto lo = period_point(point(p, 30, {u[0].truncated(30)}), 5);
    const auto hi = period_point(point(p, 60, u), 10);
    ASSERT_EQ(lo.pivot, hi.pivot);
    for (std::size_t i = 0; i < lo.coords.size(); ++i)
      EXPECT_TRUE(same_value(lo.coords[i], hi.coords[i].truncated(5)));
  }
}

TEST(PeriodPoint, Failures) {
  EXPECT_THROW(period_point(point(5, 20, {padic(5, 2, 20)}), 6), DomainError);
  EXPECT_THROW(period_point(point(5, 20, {padic(5, 5, 20)}), 0), DomainError);

  PeriodOptions tight;
  tight.n_start = 1;
  tight.n_cap = 2;
  try {
    period_point(point(2, 200, {padic(2, 2, 200), padic(2, 2, 200)}), 40, tight);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_LT(e.achieved(), 40);
  }

  EXPECT_THROW(period_point(point(5, 3, {padic(5, 5, 3)}), 20), PrecisionError);
}

TEST(Canonicalize, ScaleInvariant) {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::int64_t p = t % 3 == 0 ? 2 : (t % 3 == 1 ? 3 : 5);
    const int h = 2 + t % 3;
    std::vector<Padic> raw;
    for (int i = 0; i < h; ++i) raw.push_back(random_padic(rng, p, 30, 0, 4, true));
    if (std::all_of(raw.begin(), raw.end(), [](const Padic& c) { return c.is_zero(); })) raw[0] = padic(p, 1, 30);
    const Padic s = random_padic(rng, p, 40, -3, 3);
    std::vector<Padic> scaled;
    for (const auto& c : raw) scaled.push_back(c * s);
    EXPECT_EQ(canonicalize(raw, 8), canonicalize(scaled, 8));
  }
}

TEST(Canonicalize, AllZeroIsPrecisionError) {
  EXPECT_THROW(canonicalize(std::vector<Padic>{Padic::zero(3, 4), Padic::zero(3, 6)}, 4), PrecisionError);
}
