#include "stackres/rational.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>

#include "stackres/errors.hpp"

namespace stackres {
namespace {

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(ExtendedRational::parse("7"), ExtendedRational(7));
  EXPECT_EQ(ExtendedRational::parse("-3"), ExtendedRational(-3));
  EXPECT_EQ(ExtendedRational::parse("2/6"), ExtendedRational(Rational(1, 3)));
  EXPECT_EQ(ExtendedRational::parse("0.125"), ExtendedRational(Rational(1, 8)));
  EXPECT_EQ(ExtendedRational::parse("0.1"), ExtendedRational(Rational(1, 10)));
  EXPECT_EQ(ExtendedRational::parse("-1.5"), ExtendedRational(Rational(-3, 2)));
}

TEST(Rational, ParsesInfinities) {
  EXPECT_EQ(ExtendedRational::parse("inf").kind(), ExtendedRational::Kind::kPosInf);
  EXPECT_EQ(ExtendedRational::parse("-inf").kind(), ExtendedRational::Kind::kNegInf);
}

TEST(Rational, RejectsGarbage) {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", "--1", "1e5", "0x10"}) {
    EXPECT_THROW(ExtendedRational::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(Rational, CanonicalText) {
  EXPECT_EQ(ExtendedRational(Rational(4, 8)).to_string(), "1/2");
  EXPECT_EQ(ExtendedRational(Rational(-6, 3)).to_string(), "-2");
  EXPECT_EQ(ExtendedRational(0).to_string(), "0");
  EXPECT_EQ(ExtendedRational::neg_inf().to_string(), "-inf");
  EXPECT_EQ(ExtendedRational::pos_inf().to_string(), "inf");
  std::ostringstream os;
  os << ExtendedRational(Rational(-7, 3));
  EXPECT_EQ(os.str(), "-7/3");
}

TEST(Rational, TextRoundTrip) {
  for (int p = -12; p <= 12; ++p) {
    for (int q = 1; q <= 7; ++q) {
      const ExtendedRational v(Rational(p, q));
      EXPECT_EQ(ExtendedRational::parse(v.to_string()), v);
    }
  }
}

TEST(Rational, OrderingWithInfinities) {
  const auto lo = ExtendedRational::neg_inf();
  const auto hi = ExtendedRational::pos_inf();
  EXPECT_LT(lo, ExtendedRational(-1000000));
  EXPECT_GT(hi, ExtendedRational(1000000));
  EXPECT_EQ(lo, ExtendedRational::neg_inf());
  EXPECT_LT(lo, hi);
  EXPECT_LT(ExtendedRational(Rational(1, 3)), ExtendedRational(Rational(1, 2)));
}

TEST(Rational, ExactArithmetic) {
  const ExtendedRational a(Rational(1, 10));
  const ExtendedRational b(Rational(2, 10));
  EXPECT_EQ(a + b, ExtendedRational(Rational(3, 10)));
  EXPECT_EQ(a - b, ExtendedRational(Rational(-1, 10)));
  EXPECT_EQ(a * b, ExtendedRational(Rational(1, 50)));
  EXPECT_EQ(a / b, ExtendedRational(Rational(1, 2)));
  EXPECT_EQ(-a, ExtendedRational(Rational(-1, 10)));
}

TEST(Rational, ArithmeticOnInfinityThrows) {
  const auto inf = ExtendedRational::pos_inf();
  EXPECT_THROW(inf + ExtendedRational(1), InfiniteArithmetic);
  EXPECT_THROW(ExtendedRational(1) - ExtendedRational::neg_inf(), InfiniteArithmetic);
  EXPECT_THROW(inf * ExtendedRational(0), InfiniteArithmetic);
  EXPECT_THROW(ExtendedRational::neg_inf().value(), InfiniteArithmetic);
}

TEST(Rational, NegationFlipsInfinities) {
  EXPECT_EQ(-ExtendedRational::pos_inf(), ExtendedRational::neg_inf());
  EXPECT_EQ(-ExtendedRational::neg_inf(), ExtendedRational::pos_inf());
}

TEST(Rational, DivisionByZeroThrows) {
  EXPECT_ANY_THROW(ExtendedRational(1) / ExtendedRational(0));
}

}  // namespace
}  // namespace stackres
