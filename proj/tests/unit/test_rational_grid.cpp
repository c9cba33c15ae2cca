#include <gtest/gtest.h>

#include <cmath>

#include "ipq/error.hpp"
#include "ipq/grid.hpp"
#include "ipq/rational.hpp"

using namespace ipq;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ipq::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Rational, ReducesToLowestTerms) {
  const Rational r(10, 100);
  EXPECT_EQ(r.num(), 1u);
  EXPECT_EQ(r.den(), 10u);
  EXPECT_EQ(r, Rational(1, 10));
  EXPECT_EQ(r.to_string(), "1/10");
}

TEST(Rational, RejectsZeroDenominatorAndOverflow) {
  EXPECT_EQ(code_of([] { Rational(1, 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { Rational(1ull << 33, 3); }), ErrorCode::InvalidArgument);
}

TEST(Rational, ParsesFractionsAndExactDecimals) {
  EXPECT_EQ(Rational::parse("1/10"), Rational(1, 10));
  EXPECT_EQ(Rational::parse("0.05"), Rational(1, 20));
  EXPECT_EQ(Rational::parse("0.01"), Rational(1, 100));
  EXPECT_EQ(Rational::parse("1"), Rational(1, 1));
  EXPECT_EQ(Rational::parse("2/4"), Rational(1, 2));
}

TEST(Rational, ParseErrors) {
  for (const char* bad : {"", "abc", "1/", "/2", "0.1.2", "-0.1", "1/0x"}) {
    EXPECT_EQ(code_of([&] { Rational::parse(bad); }), ErrorCode::ParseError) << bad;
  }
}

TEST(Rational, Ordering) {
  EXPECT_LT(Rational(1, 100), Rational(1, 10));
  EXPECT_GT(Rational(2, 3), Rational(3, 5));
}

TEST(Rational, FloorOfIsBelowAndTight) {
  for (double v : {0.1, 0.111803398874989485, 0.0707106781186547524, 1.0 / 3.0, 0.025, 1e-6}) {
    const Rational r = Rational::floor_of(v);
    // Exact comparison: num <= v·den in long double is enough at these magnitudes.
    EXPECT_LE(static_cast<long double>(r.num()), static_cast<long double>(v) * r.den()) << v;
    EXPECT_GE(r.to_double(), v * (1 - 0x1p-31)) << v;
  }
  EXPECT_EQ(Rational::floor_of(0.25), Rational(1, 4));
  EXPECT_EQ(Rational::floor_of(1.0), Rational(1, 1));
}

TEST(GridParams, BudgetIsExact) {
  struct Case {
    std::uint32_t d;
    Rational delta;
    std::uint64_t s;
  };
  for (const Case& c : {Case{1, {1, 1}, 1}, Case{2, {1, 2}, 5}, Case{4, {1, 2}, 10}, Case{128, {1, 10}, 1344},
                        Case{128, {1, 20}, 2624}, Case{128, {1, 100}, 12864}, Case{784, {1, 10}, 8232},
                        Case{784, {1, 100}, 78792}, Case{3, {2, 3}, 6}}) {
    EXPECT_EQ(GridParams(c.d, c.delta).budget(), c.s) << c.d << " " << c.delta.to_string();
  }
}

TEST(GridParams, Validation) {
  EXPECT_EQ(code_of([] { GridParams(0, Rational(1, 2)); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { GridParams(3, Rational(0, 1)); }), ErrorCode::InvalidDelta);
  EXPECT_EQ(code_of([] { GridParams(3, Rational(3, 2)); }), ErrorCode::InvalidDelta);
}

TEST(Errors, MessageCarriesCodeName) {
  const Error e(ErrorCode::GapViolated, "detail");
  EXPECT_EQ(e.code(), ErrorCode::GapViolated);
  EXPECT_EQ(std::string(e.what()), "GapViolated: detail");
}
