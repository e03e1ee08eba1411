#include "recomb/rational.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

namespace recomb {
namespace {

TEST(Rational, ParseAndFormatRoundTrip) {
  EXPECT_EQ(format_rational(parse_rational("3/4")), "3/4");
  EXPECT_EQ(format_rational(parse_rational("7")), "7/1");
  EXPECT_EQ(format_rational(parse_rational("-2/6")), "-1/3");
  EXPECT_EQ(format_rational(parse_rational("0")), "0/1");
}

TEST(Rational, ParseRejectsGarbage) {
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/"), std::invalid_argument);
  EXPECT_THROW(parse_rational("/2"), std::invalid_argument);
  EXPECT_THROW(parse_rational("a/b"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1 /2"), std::invalid_argument);
}

TEST(Rational, ExactArithmeticHasNoDrift) {
  Rational sum = 0;
  for (int i = 1; i <= 10; ++i) sum += Rational(1, i);
  EXPECT_EQ(sum, Rational(7381, 2520));
}

TEST(Rational, ToDouble) {
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 4)), 0.25);
  EXPECT_DOUBLE_EQ(to_double(Rational(-3, 2)), -1.5);
}

TEST(Factorial, SmallValues) {
  EXPECT_EQ(factorial(0), BigInt(1));
  EXPECT_EQ(factorial(5), BigInt(120));
  EXPECT_EQ(factorial(20), BigInt("2432902008176640000"));
}

TEST(Binomial, MatchesPascalIdentity) {
  for (uint64_t n = 1; n <= 30; ++n)
    for (uint64_t k = 1; k < n; ++k)
      EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST(Binomial, EdgeCases) {
  EXPECT_EQ(binomial(0, 0), BigInt(1));
  EXPECT_EQ(binomial(5, 0), BigInt(1));
  EXPECT_EQ(binomial(5, 5), BigInt(1));
  EXPECT_EQ(binomial(5, 6), BigInt(0));
  EXPECT_EQ(binomial(52, 26), BigInt("495918532948104"));
}

TEST(PascalRows, MatchesBinomial) {
  const auto rows = pascal_rows(8);
  ASSERT_EQ(rows.size(), 9u);
  for (uint32_t n = 0; n <= 8; ++n) {
    ASSERT_EQ(rows[n].size(), n + 1);
    for (uint32_t k = 0; k <= n; ++k) EXPECT_EQ(rows[n][k], binomial(n, k));
  }
}

}  // namespace
}  // namespace recomb
