#include <gtest/gtest.h>

#include "hardylab/rational.hpp"

using hardylab::Rational;

TEST(Rational, ParsesFractionsIntegersAndBinaryDecimals) {
  EXPECT_EQ(Rational::parse("1/64"), Rational(1, 64));
  EXPECT_EQ(Rational::parse("4/256"), Rational(1, 64));
  EXPECT_EQ(Rational::parse("0.015625"), Rational(1, 64));
  EXPECT_EQ(Rational::parse("2"), Rational(2));
  EXPECT_EQ(Rational::parse("-3/6"), Rational(-1, 2));
}

TEST(Rational, RejectsMalformedInput) {
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("one/two"), std::invalid_argument);
}

TEST(Rational, PowersOfTwo) {
  EXPECT_TRUE(Rational(1, 64).is_power_of_two());
  EXPECT_EQ(Rational(1, 64).log2(), -6);
  EXPECT_EQ(Rational(8).log2(), 3);
  EXPECT_FALSE(Rational(3, 64).is_power_of_two());
  EXPECT_FALSE(Rational(1, 3).is_power_of_two());
  EXPECT_THROW(Rational(1, 3).log2(), std::domain_error);
}

TEST(Rational, ArithmeticAndOrder) {
  EXPECT_EQ(Rational(1, 4) * Rational(2, 3), Rational(1, 6));
  EXPECT_EQ(Rational(1, 4) / Rational(1, 2), Rational(1, 2));
  EXPECT_TRUE(Rational(1, 128) < Rational(1, 64));
  EXPECT_FALSE(Rational(1, 64) < Rational(1, 64));
  EXPECT_EQ(Rational(1, 64).str(), "1/64");
  EXPECT_EQ(Rational(2).str(), "2");
}
