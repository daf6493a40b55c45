#include <gtest/gtest.h>

#include "vrm/errors.hpp"
#include "vrm/rational.hpp"

namespace vrm {
namespace {

TEST(Rational, ParsesDecimalFractionAndInteger) {
  EXPECT_EQ(parse_rational("-12.375"), Rational(-99, 8));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("22/7"), Rational(22, 7));
  EXPECT_EQ(parse_rational("0.0865"), Rational(865, 10000));
  EXPECT_EQ(parse_rational("007"), Rational(7));
  EXPECT_EQ(parse_rational("4/2"), Rational(2));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "1e3", "1.", ".5x", "1/0", "abc", "--1", "1/-2", "0x10", "nan"}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
}

TEST(Rational, FractionStringAlwaysHasDenominator) {
  EXPECT_EQ(to_fraction_string(Rational(4)), "4/1");
  EXPECT_EQ(to_fraction_string(Rational(-1, 3)), "-1/3");
  EXPECT_EQ(to_fraction_string(Rational(0)), "0/1");
}

TEST(Rational, ExactDecimalOnlyForTerminatingExpansions) {
  EXPECT_EQ(to_exact_decimal(Rational(1, 8)), "0.125");
  EXPECT_EQ(to_exact_decimal(Rational(12)), "12");
  EXPECT_EQ(to_exact_decimal(Rational(-3, 20)), "-0.15");
  EXPECT_EQ(to_exact_decimal(Rational(1, 3)), std::nullopt);
}

TEST(Rational, FixedDigitsRoundHalfAwayFromZero) {
  EXPECT_EQ(to_decimal_string(Rational(1, 3), 4), "0.3333");
  EXPECT_EQ(to_decimal_string(Rational(5, 8), 2), "0.63");
  EXPECT_EQ(to_decimal_string(Rational(-5, 8), 2), "-0.63");
  EXPECT_EQ(to_decimal_string(Rational(2), 0), "2");
  EXPECT_EQ(format_rational(Rational(3, 2), std::nullopt), "3/2");
  EXPECT_EQ(format_rational(Rational(3, 2), 3), "1.500");
}

TEST(Rational, RoundTripsThroughText) {
  for (const Rational& v : {Rational(0), Rational(-7, 3), Rational(123456789, 1000), Rational(1, 1024)}) {
    EXPECT_EQ(parse_rational(to_fraction_string(v)), v);
  }
}

}  // namespace
}  // namespace vrm
