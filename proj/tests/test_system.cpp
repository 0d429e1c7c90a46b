#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "incluso/models.hpp"
#include "incluso/simulate.hpp"
#include "incluso/system.hpp"
#include "oracles.hpp"

using namespace incluso;

namespace {

IVector point(std::initializer_list<double> v) {
  IVector r(v.size());
  std::size_t i = 0;
  for (double x : v) r[i++] = Interval(x);
  return r;
}

PerturbedSystem exponential(double eps = 0.0) {
  return PerturbedSystem::additive({Expr::x(0)}, IVector{symmetric(eps)});
}

}  // namespace

TEST(System, OscillatorFieldAtRest) {
  const auto sys = models::harmonic_oscillator(0.1, 0.1);
  EXPECT_EQ(eval_field(sys, point({1, 0}), point({0, 0})), point({0, -1}));
  EXPECT_EQ(sys.kind(), FieldKind::additive);
  EXPECT_EQ(sys.dimension(), 2u);
}

TEST(System, RosslerFirstComponent) {
  const auto sys = models::rossler(5.7, 0.0);
  const IVector f = eval_field(sys, point({0, -10.3, 0.03}), point({0, 0, 0}));
  EXPECT_TRUE(contains(f[0], 10.27));
  EXPECT_LT(diam(f[0]), 1e-14);
}

TEST(System, AdditiveZeroFieldReturnsPerturbation) {
  const auto sys = PerturbedSystem::additive({Expr::constant(Interval(0.0)), Expr::constant(Interval(0.0))},
                                             IVector{symmetric(1), symmetric(1)});
  const IVector y{Interval(-0.25, 0.5), Interval(3)};
  EXPECT_EQ(eval_field(sys, IVector{Interval(-5, 5), Interval(2)}, y), y);
}

TEST(System, Jacobians) {
  const auto osc = models::harmonic_oscillator(0.1, 0.1);
  const IMatrix jx = jacobian_x(osc, IVector{Interval(-3, 3), Interval(-1, 2)}, IVector{symmetric(0.1), symmetric(0.1)});
  EXPECT_EQ(jx, (IMatrix{{Interval(0), Interval(1)}, {Interval(-1), Interval(0)}}));
  const IMatrix jy = jacobian_y(osc, point({1, 0}), point({0, 0}));
  EXPECT_EQ(jy, IMatrix::identity(2));

  const auto ros = models::rossler(5.7, 1e-4);
  const IMatrix jr = jacobian_x(ros, IVector{Interval(-0.1, 0.1), Interval(-10.3), Interval(0.02, 0.04)}, point({0, 0, 0}));
  EXPECT_TRUE(contains(jr(2, 0), 0.03));
}

TEST(System, JacobianEnclosesCentralDifferences) {
  const auto sys = PerturbedSystem::parse_general(std::vector<std::string>{"x1*x2 + y1*x1", "x2/(2 + y1*y1) - x1"}, 1, IVector{symmetric(0.5)});
  const IVector xbox{Interval(0.5, 1.5), Interval(-1, 1)};
  const IVector ybox{Interval(-0.5, 0.5)};
  const IMatrix jx = jacobian_x(sys, xbox, ybox);
  const IMatrix jy = jacobian_y(sys, xbox, ybox);
  const double h = 1e-6;
  const PVector xm{1.0, 0.0};
  const PVector ym{0.0};
  for (std::size_t j = 0; j < 2; ++j) {
    PVector a = xm, b = xm;
    a[j] += h;
    b[j] -= h;
    const PVector fa = field_at(sys, a, ym);
    const PVector fb = field_at(sys, b, ym);
    for (std::size_t i = 0; i < 2; ++i) {
      const double fd = (fa[i] - fb[i]) / (2 * h);
      EXPECT_GE(fd, jx(i, j).lo() - 1e-8);
      EXPECT_LE(fd, jx(i, j).hi() + 1e-8);
    }
  }
  const PVector fa = field_at(sys, xm, PVector{h});
  const PVector fb = field_at(sys, xm, PVector{-h});
  for (std::size_t i = 0; i < 2; ++i) {
    const double fd = (fa[i] - fb[i]) / (2 * h);
    EXPECT_GE(fd, jy(i, 0).lo() - 1e-8);
    EXPECT_LE(fd, jy(i, 0).hi() + 1e-8);
  }
}

TEST(System, TaylorCoefficientsOfExponential) {
  const TaylorCoeffs t = taylor_coefficients(exponential(), point({1}), PVector{0.0}, 3);
  EXPECT_EQ(t.order, 3u);
  EXPECT_EQ(t[0][0], Interval(1));
  EXPECT_EQ(t[1][0], Interval(1));
  EXPECT_TRUE(contains(t[2][0], 0.5));
  EXPECT_TRUE(contains(t[3][0], 1.0 / 6.0));
  EXPECT_LT(diam(t[3][0]), 1e-15);
  EXPECT_THROW((void)taylor_coefficients(exponential(), point({1}), PVector{0.0}, 0), DomainError);
}

TEST(System, TaylorCoefficientsOfOscillator) {
  const auto sys = models::harmonic_oscillator(0.1, 0.1);
  const TaylorCoeffs t = taylor_coefficients(sys, point({1, 0}), PVector{0.0, 0.0}, 2);
  EXPECT_EQ(t[0], point({1, 0}));
  EXPECT_EQ(t[1], point({0, -1}));
  EXPECT_TRUE(contains(t[2][0], -0.5));
  EXPECT_TRUE(contains(t[2][1], 0.0));
}

TEST(System, TaylorCoefficientsOfConstantField) {
  const auto sys = PerturbedSystem::additive({Expr::constant(Interval(2.0)), Expr::constant(Interval(-3.0))},
                                             IVector{symmetric(0.0), symmetric(0.0)});
  const TaylorCoeffs t = taylor_coefficients(sys, point({4, 5}), PVector{0.0, 0.0}, 5);
  EXPECT_EQ(t[1], point({2, -3}));
  for (std::size_t k = 2; k <= 5; ++k) EXPECT_EQ(t[k], point({0, 0}));
}

// Normalised derivatives of a Rössler solution from finite differences of a
// tight long-double RK4 solve.
TEST(System, TaylorCoefficientsMatchOracleDerivatives) {
  const auto sys = models::rossler(5.7, 0.0);
  const oracle::LVec x0{0.0L, -10.3L, 0.03L};
  const TaylorCoeffs t = taylor_coefficients(sys, point({0, -10.3, 0.03}), PVector{0.0, 0.0, 0.0}, 3);
  const oracle::Field f = [](long double, const oracle::LVec& x) { return oracle::rossler_field(x, {0, 0, 0}); };
  const long double h = 1e-3L;
  auto at = [&](long double s) { return s == 0 ? x0 : oracle::rk4(f, x0, 0, s, 200); };
  const auto m2 = at(-2 * h), m1 = at(-h), p1 = at(h), p2 = at(2 * h);
  for (std::size_t i = 0; i < 3; ++i) {
    const long double d1 = (p1[i] - m1[i]) / (2 * h);
    const long double d2 = (p1[i] - 2 * x0[i] + m1[i]) / (h * h);
    const long double d3 = (p2[i] - 2 * p1[i] + 2 * m1[i] - m2[i]) / (2 * h * h * h);
    EXPECT_NEAR(mid(t[1][i]), static_cast<double>(d1), 1e-4);
    EXPECT_NEAR(mid(t[2][i]), static_cast<double>(d2 / 2), 1e-3);
    EXPECT_NEAR(mid(t[3][i]), static_cast<double>(d3 / 6), 1e-2);
  }
}

TEST(System, DeltaSetExamples) {
  const auto osc = models::harmonic_oscillator(0.1, 0.1);
  const IVector d = delta_set(osc, point({1, 0}), PVector{0.0, 0.0});
  EXPECT_EQ(d, (IVector{symmetric(0.1), symmetric(0.1)}));

  const auto pinned = osc.with_perturbation(point({0.05, -0.02}));
  EXPECT_EQ(delta_set(pinned, IVector{Interval(-1, 1), Interval(-1, 1)}, PVector{0.05, -0.02}), point({0, 0}));

  const double eps = 0.1;
  const auto prod = PerturbedSystem::parse_general(std::vector<std::string>{"x1*y1"}, 1, IVector{symmetric(eps)});
  EXPECT_EQ(delta_set(prod, IVector{Interval(1, 2)}, PVector{0.0}), IVector{Interval(-2 * eps, 2 * eps)});

  EXPECT_THROW((void)delta_set(osc, point({1, 0}), PVector{0.2, 0.0}), DomainError);
}

TEST(SystemProperty, DeltaSetContainsPointDifferences) {
  const auto sys = PerturbedSystem::parse_general(std::vector<std::string>{"x1*y1 + x2", "x2*y2/(3 + x1) - y1*y2"}, 2,
                                                  IVector{Interval(-0.2, 0.3), Interval(0.1, 0.5)});
  const IVector xbox{Interval(-1, 2), Interval(0.5, 1.5)};
  const PVector yc = mid(sys.perturbation());
  const IVector d = delta_set(sys, xbox, yc);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10000; ++k) {
    const PVector x = random_point(xbox, rng);
    const PVector y = random_point(sys.perturbation(), rng);
    const PVector a = field_at(sys, x, yc);
    const PVector b = field_at(sys, x, y);
    for (std::size_t i = 0; i < 2; ++i) ASSERT_TRUE(contains(d[i], a[i] - b[i])) << i;
  }
}

TEST(System, DimensionChecks) {
  EXPECT_THROW((void)PerturbedSystem::additive({Expr::x(2)}, IVector{symmetric(1)}), DimensionMismatch);
  EXPECT_THROW((void)PerturbedSystem::additive({Expr::y(0)}, IVector{symmetric(1)}), DimensionMismatch);
  EXPECT_THROW((void)PerturbedSystem::additive({Expr::x(0)}, IVector{symmetric(1), symmetric(1)}), DimensionMismatch);
  const auto osc = models::harmonic_oscillator(0.1, 0.1);
  EXPECT_THROW((void)eval_field(osc, point({1}), point({0, 0})), DimensionMismatch);
  EXPECT_THROW((void)PerturbedSystem::additive({Expr::x(0)}, IVector{Interval::whole()}), DomainError);
  EXPECT_THROW((void)osc.with_perturbation(IVector{symmetric(1), Interval::whole()}), DomainError);
}
