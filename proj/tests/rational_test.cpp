#include <gtest/gtest.h>

#include <stdexcept>

#include "asymgen/rational.hpp"

using asymgen::Rational;

TEST(Rational, NormalizesSignAndGcd) {
  const Rational q(6, -4);
  EXPECT_EQ(q.num(), -3);
  EXPECT_EQ(q.den(), 2);
  EXPECT_EQ(Rational(0, -7), Rational(0));
  EXPECT_EQ(Rational(0, -7).den(), 1);
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational(1, 2) - Rational(1, 3), Rational(1, 6));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3).pow(-2), Rational(9, 4));
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_LT(Rational(5, 6), Rational(6, 7));
}

TEST(Rational, ZeroDenominatorThrows) {
  EXPECT_ANY_THROW(Rational(1, 0));
  EXPECT_ANY_THROW(Rational(0).reciprocal());
}

TEST(Rational, OverflowIsReported) {
  const Rational big(INT64_MAX / 2 + 1);
  EXPECT_THROW(big * Rational(4), std::overflow_error);
  EXPECT_THROW(asymgen::ipow(10, 30), std::overflow_error);
}

TEST(Rational, DecimalParsing) {
  EXPECT_EQ(*Rational::from_decimal("0.8333"), Rational(8333, 10000));
  EXPECT_EQ(*Rational::from_decimal("-12.5"), Rational(-25, 2));
  EXPECT_EQ(*Rational::from_double(0.25), Rational(1, 4));
  EXPECT_FALSE(Rational::from_decimal("1e5x").has_value());
}

TEST(Rational, Text) {
  EXPECT_EQ(Rational(-5, 6).str(), "-5/6");
  EXPECT_EQ(Rational(4).str(), "4");
}
