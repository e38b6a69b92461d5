#include <gtest/gtest.h>

#include "perikos/random.hpp"
#include "perikos/witt.hpp"

using namespace perikos;

TEST(FiniteField, TableEntriesAreIrreducibleAndPrimitive) {
  for (const auto& [key, f] : detail::conway_table()) {
    EXPECT_TRUE(FiniteField::is_irreducible(key.first, f)) << key.first << "^" << key.second;
    FiniteField field(key.first, key.second);
    EXPECT_TRUE(field.generator_is_primitive()) << key.first << "^" << key.second;
  }
}

TEST(FiniteField, FallbackForUntabulatedDegree) {
  FiniteField field(2, 9);
  EXPECT_TRUE(FiniteField::is_irreducible(2, field.modulus()));
  const auto g = field.generator();
  EXPECT_EQ(field.pow(g, static_cast<std::uint64_t>(field.order() - 1)), field.one());
}

TEST(FiniteField, FieldAxiomsOnF9) {
  FiniteField f(3, 2);
  for (std::int64_t i = 1; i < 9; ++i) {
    const auto a = f.from_index(i);
    EXPECT_EQ(f.mul(a, f.inverse(a)), f.one());
    EXPECT_EQ(f.pow(a, 8), f.one());
  }
}

TEST(Witt, FrobeniusOnF4Digit) {
  auto ctx = WittContext::make(2, 2);
  const auto& k = ctx->residue_field();
  const auto alpha = k.generator();
  const WittElem w = WittElem::teichmuller(ctx, alpha, 6);
  const auto digits = witt_frobenius(w).teichmuller_digits();
  ASSERT_EQ(digits.size(), 6U);
  EXPECT_EQ(digits[0], k.mul(alpha, alpha));
  for (std::size_t i = 1; i < digits.size(); ++i) EXPECT_TRUE(k.is_zero(digits[i]));
}

TEST(Witt, FrobeniusIsIdentityForPrimeField) {
  auto ctx = WittContext::make(5, 1);
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const WittElem w = random_witt(rng, ctx, 8, -2, 3);
    EXPECT_EQ(witt_frobenius(w), w);
  }
}

TEST(Witt, FrobeniusPowerOfDegreeIsIdentity) {
  Rng rng(12);
  for (std::int64_t p : {2, 3, 5}) {
    auto ctx = WittContext::make(p, 3);
    for (int i = 0; i < 40; ++i) {
      const WittElem w = random_witt(rng, ctx, 10, -1, 3, true);
      WittElem x = w;
      for (int k = 0; k < 3; ++k) x = witt_frobenius(x);
      EXPECT_EQ(x, w);
      EXPECT_EQ(w.frobenius(-1).frobenius(1), w);
    }
  }
}

TEST(Witt, DigitwiseFrobeniusMatchesRingFrobenius) {
  // Oracle: raise each Teichmuller digit to the p-th power and reassemble.
  Rng rng(13);
  for (auto [p, m] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{5, 2}, std::pair{7, 3}}) {
    auto ctx = WittContext::make(p, m);
    const auto& k = ctx->residue_field();
    for (int i = 0; i < 30; ++i) {
      const WittElem w = random_witt(rng, ctx, 7, 0, 2);
      auto digits = w.teichmuller_digits();
      for (auto& d : digits) d = k.frobenius(d);
      const WittElem expected = WittElem::from_teichmuller_digits(ctx, w.valuation(), digits, w.precision());
      EXPECT_EQ(witt_frobenius(w), expected);
      // Valuation and precision are unchanged.
      EXPECT_EQ(witt_frobenius(w).valuation(), w.valuation());
      EXPECT_EQ(witt_frobenius(w).precision(), w.precision());
    }
  }
}

TEST(Witt, FrobeniusIsARingHomomorphism) {
  Rng rng(14);
  auto ctx = WittContext::make(3, 4);
  for (int i = 0; i < 50; ++i) {
    const WittElem a = random_witt(rng, ctx, 9, -1, 2, true);
    const WittElem b = random_witt(rng, ctx, 9, -1, 2, true);
    EXPECT_TRUE(same_value((a * b).frobenius(), a.frobenius() * b.frobenius()));
    EXPECT_TRUE(same_value((a + b).frobenius(), a.frobenius() + b.frobenius()));
  }
}

TEST(Witt, DigitsRoundTrip) {
  Rng rng(15);
  auto ctx = WittContext::make(3, 2);
  for (int i = 0; i < 50; ++i) {
    const WittElem w = random_witt(rng, ctx, 8, -2, 3);
    const auto digits = w.teichmuller_digits();
    EXPECT_EQ(static_cast<std::int64_t>(digits.size()), w.relative_precision());
    EXPECT_FALSE(ctx->residue_field().is_zero(digits.front()));
    EXPECT_EQ(WittElem::from_teichmuller_digits(ctx, w.valuation(), digits, w.precision()), w);
  }
}

TEST(Witt, TeichmullerIsMultiplicative) {
  auto ctx = WittContext::make(5, 2);
  const auto& k = ctx->residue_field();
  for (std::int64_t i = 1; i < 25; i += 3) {
    for (std::int64_t j = 1; j < 25; j += 5) {
      const auto a = k.from_index(i), b = k.from_index(j);
      EXPECT_EQ(WittElem::teichmuller(ctx, a, 10) * WittElem::teichmuller(ctx, b, 10),
                WittElem::teichmuller(ctx, k.mul(a, b), 10));
    }
  }
}

TEST(Witt, PrimeFieldAgreesWithPadic) {
  Rng rng(16);
  for (std::int64_t p : {2, 3, 5, 7}) {
    auto ctx = WittContext::make(p, 1);
    for (int i = 0; i < 125; ++i) {
      const Padic a = random_padic(rng, p, rng.uniform(1, 16), -3, 5, true);
      const Padic b = random_padic(rng, p, rng.uniform(1, 16), -3, 5, true);
      const WittElem wa = WittElem::from_padic(ctx, a);
      const WittElem wb = WittElem::from_padic(ctx, b);
      EXPECT_EQ((wa + wb).to_padic(), a + b);
      EXPECT_EQ((wa - wb).to_padic(), a - b);
      EXPECT_EQ((wa * wb).to_padic(), a * b);
      if (!b.is_zero()) EXPECT_EQ((wa / wb).to_padic(), a / b);
      EXPECT_EQ(wa.pow(7).to_padic(), a.pow(7));
    }
  }
}

TEST(Witt, RingAxioms) {
  Rng rng(17);
  auto ctx = WittContext::make(2, 3);
  for (int i = 0; i < 300; ++i) {
    const WittElem a = random_witt(rng, ctx, 12, -2, 3, true);
    const WittElem b = random_witt(rng, ctx, 12, -2, 3, true);
    const WittElem c = random_witt(rng, ctx, 12, -2, 3, true);
    EXPECT_TRUE(same_value((a * b) * c, a * (b * c)));
    EXPECT_TRUE(same_value(a * (b + c), a * b + a * c));
    EXPECT_EQ(a * b, b * a);
    if (!a.is_zero()) {
      const WittElem ai = a.inverse();
      EXPECT_TRUE(same_value(a * ai, WittElem::from_integer(ctx, 1, 1000)));
    }
  }
}

TEST(Witt, FieldMismatchThrows) {
  auto a = WittElem::from_integer(WittContext::make(2, 2), 1, 5);
  auto b = WittElem::from_integer(WittContext::make(2, 3), 1, 5);
  EXPECT_THROW(a + b, ParameterMismatch);
}
