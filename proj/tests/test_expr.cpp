#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "incluso/expr.hpp"

using namespace incluso;

namespace {

Interval eval1(const Expr& e, std::vector<Interval> x, std::vector<Interval> y = {}) {
  const std::vector<Expr> out{e};
  const Tape t(out);
  return t.evaluate(x, y)[0];
}

double eval_point(const Expr& e, const std::vector<double>& x) {
  const std::vector<Expr> out{e};
  const Tape t(out);
  return t.evaluate<double>(std::span<const double>(x), std::span<const double>(), [](const Interval& c) {
    return mid(c);
  })[0];
}

}  // namespace

TEST(Expr, ParsesPrecedenceAndUnaryMinus) {
  const Expr e = parse_expression("1 + 2*x1 - -x2/4", 2, 0);
  EXPECT_EQ(eval1(e, {Interval(3), Interval(8)}), Interval(9));
  EXPECT_EQ(eval1(parse_expression("-(x1 + x2) * 2", 2, 0), {Interval(1), Interval(2)}), Interval(-6));
  EXPECT_EQ(eval1(parse_expression("x1 * y2", 1, 2), {Interval(3)}, {Interval(0), Interval(-1, 2)}), Interval(-3, 6));
}

TEST(Expr, DecimalLiterals) {
  const Interval half = parse_expression("0.5", 0, 0).node().value;
  EXPECT_TRUE(is_thin(half));
  EXPECT_EQ(half, Interval(0.5));
  const Interval tenth = parse_expression("0.1", 0, 0).node().value;
  EXPECT_FALSE(is_thin(tenth));
  EXPECT_LE(tenth.hi(), std::nextafter(std::nextafter(tenth.lo(), 1.0), 1.0));
  // 1/10 lies strictly between the endpoints: 10·lo < 1 < 10·hi exactly.
  EXPECT_LT(std::fma(10.0, tenth.lo(), -1.0), 0.0);
  EXPECT_GT(std::fma(10.0, tenth.hi(), -1.0), 0.0);
  const Interval milli = parse_expression("1e-3", 0, 0).node().value;
  EXPECT_LE(std::fma(1000.0, milli.lo(), -1.0), 0.0);
  EXPECT_GE(std::fma(1000.0, milli.hi(), -1.0), 0.0);
  EXPECT_EQ(parse_expression("2.5e2", 0, 0).node().value, Interval(250));
  const Interval q = eval1(parse_expression("57/10", 0, 0), {});
  EXPECT_TRUE(contains(q, 5.7));
}

TEST(Expr, MalformedInputReportsPosition) {
  auto position = [](const char* text, std::size_t nx) {
    try {
      (void)parse_expression(text, nx, 0);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1L;
  };
  EXPECT_EQ(position("x1 + ", 1), 5);
  EXPECT_EQ(position("2*(x1", 1), 5);
  EXPECT_EQ(position("x1 $ 2", 1), 3);
  EXPECT_EQ(position("x1 x2", 2), 3);
  EXPECT_EQ(position("x3", 2), 0);
  EXPECT_EQ(position("", 1), 0);
  EXPECT_EQ(position("y1", 1), 0);
}

TEST(Expr, ConstantFolding) {
  const Expr x = Expr::x(0);
  EXPECT_TRUE((x * Expr::constant(Interval(0.0))).is_constant(0.0));
  EXPECT_EQ((x * Expr::constant(Interval(1.0))).ptr(), x.ptr());
  EXPECT_EQ((x + Expr::constant(Interval(0.0))).ptr(), x.ptr());
}

TEST(Expr, DerivativesMatchFiniteDifferences) {
  const Expr e = parse_expression("x1*x1*x2 - x2/(1 + x1*x1) + 3*x2", 2, 0);
  const Expr d1 = derivative(e, OpKind::var_x, 0);
  const Expr d2 = derivative(e, OpKind::var_x, 1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const double a = u(rng), b = u(rng), h = 1e-6;
    const double fd1 = (eval_point(e, {a + h, b}) - eval_point(e, {a - h, b})) / (2 * h);
    const double fd2 = (eval_point(e, {a, b + h}) - eval_point(e, {a, b - h})) / (2 * h);
    EXPECT_NEAR(eval_point(d1, {a, b}), fd1, 1e-6);
    EXPECT_NEAR(eval_point(d2, {a, b}), fd2, 1e-6);
  }
  EXPECT_TRUE(derivative(e, OpKind::var_y, 0).is_constant(0.0));
}

TEST(Expr, IntervalEvaluationEnclosesPointValues) {
  const Expr e = parse_expression("x1*x2 - x2/(2 + x1)", 2, 0);
  const std::vector<Interval> box{Interval(-1, 1), Interval(0.5, 2)};
  const Interval r = eval1(e, box);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const double a = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double b = std::uniform_real_distribution<double>(0.5, 2)(rng);
    EXPECT_TRUE(contains(r, eval_point(e, {a, b})));
  }
}

TEST(Expr, TapeSharesCommonSubtrees) {
  const Expr s = Expr::x(0) * Expr::x(1);
  const std::vector<Expr> out{s + s, s * s};
  const Tape t(out);
  // x1, x2, s, s+s, s*s
  EXPECT_EQ(t.size(), 5u);
  const auto v = t.evaluate(std::vector<Interval>{Interval(2), Interval(3)}, std::vector<Interval>{});
  EXPECT_EQ(v[0], Interval(12));
  EXPECT_EQ(v[1], Interval(36));
}

TEST(Expr, VariableExtent) {
  std::size_t nx = 0, ny = 0;
  variable_extent(parse_expression("x3 + y2", 3, 2), nx, ny);
  EXPECT_EQ(nx, 3u);
  EXPECT_EQ(ny, 2u);
}
