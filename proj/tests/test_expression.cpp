#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "cfp/expression.hpp"
#include "test_support.hpp"

using namespace cfp;

namespace {

double eval1(const std::string& src, double x, double y) {
  const double xs[] = {x};
  const double ys[] = {y};
  return Expression::parse(src).evaluate(xs, ys);
}

std::size_t error_column(const std::string& src) {
  try {
    (void)Expression::parse(src);
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_EQ(e.line(), 1u);
    return e.column();
  }
  ADD_FAILURE() << "'" << src << "' parsed";
  return 0;
}

}  // namespace

TEST(Expression, SumOverFive) {
  EXPECT_DOUBLE_EQ(eval1("(x+y)/5", 0.0, 1.0), 0.2);
  EXPECT_DOUBLE_EQ(eval1("(x+y)/5", 1.0, 0.0), 0.2);
  EXPECT_EQ(eval1("(x+y)/5", 0.0, 0.0), 0.0);
}

TEST(Expression, PrecedenceAndAssociativity) {
  EXPECT_EQ(eval1("1 + 2 * 3", 0, 0), 7.0);
  EXPECT_EQ(eval1("(1 + 2) * 3", 0, 0), 9.0);
  EXPECT_EQ(eval1("8 - 3 - 2", 0, 0), 3.0);
  EXPECT_EQ(eval1("16 / 4 / 2", 0, 0), 2.0);
  EXPECT_EQ(eval1("2 * x - y / 4", 3, 8), 4.0);
}

TEST(Expression, UnaryOperators) {
  EXPECT_EQ(eval1("-x", 2, 0), -2.0);
  EXPECT_EQ(eval1("--x", 2, 0), 2.0);
  EXPECT_EQ(eval1("+x", 2, 0), 2.0);
  EXPECT_DOUBLE_EQ(eval1("-(x+y)/5", 0, 1), -0.2);
  EXPECT_EQ(eval1("3 * -y", 0, 2), -6.0);
  EXPECT_EQ(eval1("x - -y", 1, 2), 3.0);
}

TEST(Expression, NumericLiterals) {
  EXPECT_EQ(eval1("0.25", 0, 0), 0.25);
  EXPECT_EQ(eval1(".5", 0, 0), 0.5);
  EXPECT_EQ(eval1("5.", 0, 0), 5.0);
  EXPECT_EQ(eval1("1e3", 0, 0), 1000.0);
  EXPECT_EQ(eval1("2.5E-1", 0, 0), 0.25);
  EXPECT_EQ(eval1("4e+1", 0, 0), 40.0);
}

TEST(Expression, IndexedComponents) {
  const auto e = Expression::parse("x1 + 2*y2 - x");
  EXPECT_EQ(e.max_index(), 2u);
  const double x[] = {1.0, 10.0};
  const double y[] = {100.0, 1000.0};
  EXPECT_EQ(e.evaluate(x, y, 0), 1.0 + 2000.0 - 1.0);
  EXPECT_EQ(e.evaluate(x, y, 1), 1.0 + 2000.0 - 10.0);
  EXPECT_EQ(Expression::parse("x + y").max_index(), 0u);
}

TEST(Expression, DivisionByZeroFollowsFloatingPoint) {
  EXPECT_TRUE(std::isinf(eval1("1/x", 0, 0)));
  EXPECT_TRUE(std::isnan(eval1("x/y", 0, 0)));
}

TEST(Expression, ErrorColumns) {
  EXPECT_EQ(error_column(""), 1u);
  EXPECT_EQ(error_column("x +"), 4u);
  EXPECT_EQ(error_column("(x + y"), 7u);
  EXPECT_EQ(error_column("x + z"), 5u);
  EXPECT_EQ(error_column("x y"), 3u);
  EXPECT_EQ(error_column("x0"), 1u);
  EXPECT_EQ(error_column("2 * $"), 5u);
  EXPECT_EQ(error_column("1..2"), 1u);
  EXPECT_EQ(error_column("sin(x)"), 1u);
}

TEST(Expression, EqualityBySource) {
  EXPECT_EQ(Expression::parse("x+y"), Expression::parse("x+y"));
  EXPECT_FALSE(Expression::parse("x+y") == Expression::parse("y+x"));
  EXPECT_EQ(Expression::parse(" (x) ").source(), " (x) ");
}

TEST(ExpressionSet, PlusMinusLiteral) {
  const auto set = parse_expression_set("{-(x+y)/5, (x+y)/5}");
  ASSERT_EQ(set.size(), 2u);
  const double x[] = {0.0};
  const double y[] = {1.0};
  EXPECT_DOUBLE_EQ(set[0].evaluate(x, y), -0.2);
  EXPECT_DOUBLE_EQ(set[1].evaluate(x, y), 0.2);
}

TEST(ExpressionSet, NestedCommasAndSpacing) {
  EXPECT_EQ(parse_expression_set("  { x }  ").size(), 1u);
  EXPECT_EQ(parse_expression_set("{(x+1)*(y-1), x, y}").size(), 3u);
}

TEST(ExpressionSet, Errors) {
  auto column = [](const std::string& src) -> std::size_t {
    try {
      (void)parse_expression_set(src);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  EXPECT_EQ(column("x, y"), 1u);
  EXPECT_EQ(column("{x, y"), 6u);
  EXPECT_EQ(column("{x, q}"), 5u);
  EXPECT_EQ(column("{x} z"), 5u);
  EXPECT_EQ(column("{}"), 2u);
}

TEST(Expression, RandomLinearFormsMatchDirectEvaluation) {
  test::Gen gen(31337);
  for (int trial = 0; trial < 500; ++trial) {
    const int a = static_cast<int>(gen.index(19)) - 9;
    const int b = static_cast<int>(gen.index(19)) - 9;
    const int c = 1 + static_cast<int>(gen.index(9));
    const std::string src = "(" + std::to_string(a) + "*x + " + std::to_string(b) + "*y)/" + std::to_string(c);
    const double x = gen.real(-10, 10);
    const double y = gen.real(-10, 10);
    EXPECT_EQ(eval1(src, x, y), (a * x + b * y) / c) << src;
  }
}
