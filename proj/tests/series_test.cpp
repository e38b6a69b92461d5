#include <gtest/gtest.h>

#include <boost/rational.hpp>

#include "perikos/random.hpp"
#include "perikos/series.hpp"

using namespace perikos;

namespace {

using S = Series<Padic>;

S univariate(const PadicRing& R, int order, const std::vector<long>& coeffs) {
  S s(R, 1, order);
  for (std::size_t i = 0; i < coeffs.size(); ++i) s.set(Monomial{static_cast<int>(i)}, R.from_integer(coeffs[i]));
  return s;
}

S random_series(Rng& rng, const PadicRing& R, int order, bool linear_unit) {
  S s(R, 1, order);
  for (int d = 1; d < order; ++d) s.set(Monomial{d}, random_padic(rng, R.p, R.precision, 0, 2, true));
  if (linear_unit) s.set(Monomial{1}, random_padic(rng, R.p, R.precision, 0, 0));
  return s;
}

// Catalan numbers with alternating sign: the Lagrange-inversion coefficients of
// the reverse of x + x^2.
long signed_catalan(int n) {
  boost::rational<long> c(1);
  for (int k = 0; k < n - 1; ++k) c = c * boost::rational<long>(2 * (2 * k + 1), k + 2);
  return ((n - 1) % 2 ? -1 : 1) * c.numerator();
}

}  // namespace

TEST(Series, ComposeLinearSubstitution) {
  PadicRing R{5, 10};
  const S f = univariate(R, 6, {0, 1, 1});
  const S g = univariate(R, 6, {0, 2});
  EXPECT_TRUE(compare(compose(f, g), univariate(R, 6, {0, 2, 4})).equal);
  const S x = S::variable(R, 1, 6, 0);
  EXPECT_TRUE(compare(compose(f, x), f).equal);
}

TEST(Series, ComposeRejectsConstantTerm) {
  PadicRing R{5, 10};
  EXPECT_THROW(compose(univariate(R, 4, {0, 1}), univariate(R, 4, {1, 1})), DomainError);
}

TEST(Series, ExponentialIdentity) {
  // exp(x) * exp(-x) = 1 with the factorial denominators handled p-adically.
  for (std::int64_t p : {2, 3, 5}) {
    PadicRing R{p, 30};
    const int order = 12;
    S e(R, 1, order);
    Integer fact = 1;
    for (int k = 0; k < order; ++k) {
      if (k > 0) fact *= k;
      e.set(Monomial{k}, Padic::from_rational(p, 1, fact, 30));
    }
    const S neg = univariate(R, order, {0, -1});
    const S prod = e * compose(e, neg);
    const auto cmp = compare(prod, S::constant(R, 1, order, R.one()));
    EXPECT_TRUE(cmp.equal);
    EXPECT_GE(cmp.precision, 10);
  }
}

TEST(Series, ReverseLagrangeOracle) {
  PadicRing R{5, 20};
  const int order = 9;
  const S f = univariate(R, order, {0, 1, 1});
  const S g = reverse(f);
  for (int n = 1; n < order; ++n)
    EXPECT_TRUE(same_value(g.coefficient(Monomial{n}), R.from_integer(signed_catalan(n)))) << n;
  EXPECT_EQ(signed_catalan(4), -5);
  const S x = S::variable(R, 1, order, 0);
  EXPECT_TRUE(compare(compose(f, g), x).equal);
  EXPECT_TRUE(compare(reverse(x), x).equal);
}

TEST(Series, ReverseRejectsNonUnitLinearTerm) {
  PadicRing R{5, 20};
  EXPECT_THROW(reverse(univariate(R, 5, {0, 5, 1})), DomainError);
  EXPECT_THROW(reverse(univariate(R, 5, {0, 0, 1})), DomainError);
}

TEST(Series, DoubleReversal) {
  Rng rng(5);
  PadicRing R{5, 30};
  for (int trial = 0; trial < 10; ++trial) {
    const S f = random_series(rng, R, 12, true);
    const auto cmp = compare(reverse(reverse(f)), f);
    EXPECT_TRUE(cmp.equal);
  }
}

TEST(Series, ComposeIsAssociative) {
  Rng rng(6);
  PadicRing R{3, 25};
  for (int trial = 0; trial < 10; ++trial) {
    const S f = random_series(rng, R, 10, false);
    const S g = random_series(rng, R, 10, false);
    const S h = random_series(rng, R, 10, false);
    EXPECT_TRUE(compare(compose(compose(f, g), h), compose(f, compose(g, h))).equal);
  }
}

TEST(Series, InverseSeries) {
  Rng rng(7);
  PadicRing R{7, 20};
  for (int trial = 0; trial < 10; ++trial) {
    S f = random_series(rng, R, 10, false);
    f.set(Monomial{0}, random_padic(rng, 7, 20, 0, 0));
    const auto cmp = compare(f * inverse(f), S::constant(R, 1, 10, R.one()));
    EXPECT_TRUE(cmp.equal);
  }
}

TEST(Series, MultivariateTruncationAndEmbedding) {
  PadicRing R{2, 16};
  const S x = S::variable(R, 2, 4, 0);
  const S y = S::variable(R, 2, 4, 1);
  const S s = x + y;
  const S cube = s * s * s;
  EXPECT_EQ(cube.size(), 4U);
  EXPECT_TRUE(same_value(cube.coefficient(Monomial{2, 1}), R.from_integer(3)));
  EXPECT_TRUE((cube * s).empty());
  const S u = S::variable(R, 1, 4, 0);
  const S ux = u.embed(2, {1});
  EXPECT_EQ(ux, y);
}

TEST(Series, TruncationInvariant) {
  Rng rng(8);
  PadicRing R{3, 10};
  const S f = random_series(rng, R, 7, false);
  const S g = random_series(rng, R, 5, false);
  for (const auto& op : {f * g, f + g, compose(f, g)}) {
    EXPECT_EQ(op.trunc_order(), 5);
    for (const auto& [m, c] : op.terms()) {
      EXPECT_LT(m.degree(), op.trunc_order());
      EXPECT_FALSE(c.is_zero());
    }
  }
}

TEST(Series, EvaluateAtSmallPoint) {
  PadicRing R{5, 20};
  const S f = univariate(R, 6, {1, 2, 3});
  const Padic t = R.from_integer(5);
  const Padic val = f.evaluate(std::span<const Padic>(&t, 1));
  EXPECT_TRUE(same_value(val, R.from_integer(1 + 10 + 75)));
}

TEST(Series, PrecisionFloorTracksDroppedZeros) {
  PadicRing R{5, 10};
  S f(R, 1, 5);
  f.set(Monomial{1}, R.one());
  f.set(Monomial{2}, Padic::zero(5, 3));
  EXPECT_EQ(f.precision_floor(), 3);
  EXPECT_EQ(f.coefficient(Monomial{2}).precision(), 3);
  EXPECT_EQ(compare(f, f).precision, 3);
}
