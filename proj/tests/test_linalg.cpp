#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "incluso/linalg.hpp"

using namespace incluso;

namespace {

PMatrix random_matrix(std::size_t n, std::mt19937_64& rng, double scale = 3.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  PMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

// μ(A) = lim_{h→0+} (||I + hA|| - 1)/h, evaluated from the definition (max, sum).
long double lognorm_by_definition(const PMatrix& a, NormKind k) {
  const long double h = 1e-9L;
  const std::size_t n = a.rows();
  long double best = -1e300L;
  auto entry = [&](std::size_t i, std::size_t j) { return (i == j ? 1.0L : 0.0L) + h * a(i, j); };
  if (k == NormKind::euclid) {
    // Only used for 2x2; the limit is the top eigenvalue of the symmetric part.
    const long double p = a(0, 0), q = (static_cast<long double>(a(0, 1)) + a(1, 0)) / 2, s = a(1, 1);
    return (p + s) / 2 + std::sqrt((p - s) * (p - s) / 4 + q * q);
  }
  for (std::size_t i = 0; i < n; ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(k == NormKind::max ? entry(i, j) : entry(j, i));
    best = std::max(best, s);
  }
  return (best - 1) / h;
}

long double spectral_norm_2x2(const PMatrix& a) {
  const long double p = a(0, 0), q = a(0, 1), r = a(1, 0), s = a(1, 1);
  const long double t = p * p + q * q + r * r + s * s;
  const long double det = p * s - q * r;
  return std::sqrt((t + std::sqrt(std::max(0.0L, t * t - 4 * det * det))) / 2);
}

}  // namespace

TEST(Linalg, VectorAndMatrixArithmetic) {
  const IVector a{Interval(1), Interval(2)};
  const IVector b{Interval(3), Interval(-1, 1)};
  EXPECT_EQ(a + b, (IVector{Interval(4), Interval(1, 3)}));
  EXPECT_EQ(a - b, (IVector{Interval(-2), Interval(1, 3)}));
  const IMatrix m{{Interval(0), Interval(1)}, {Interval(-1), Interval(0)}};
  EXPECT_EQ(m * a, (IVector{Interval(2), Interval(-1)}));
  EXPECT_EQ(m * m, (IMatrix{{Interval(-1), Interval(0)}, {Interval(0), Interval(-1)}}));
  EXPECT_EQ(m.transpose()(0, 1), Interval(-1));
  EXPECT_THROW((void)(a + IVector(3)), DimensionMismatch);
  EXPECT_THROW((void)(m * IVector(3)), DimensionMismatch);
}

TEST(Linalg, VectorNormExamples) {
  const double eps = 0.1;
  const Interval n1 = vec_norm(IVector{Interval(0), Interval(eps)}, NormKind::euclid);
  EXPECT_TRUE(contains(n1, eps));
  EXPECT_LE(n1.hi() - n1.lo(), 4e-17);
  const Interval n2 = vec_norm(IVector{Interval(0.1), Interval(0.1)}, NormKind::euclid);
  EXPECT_NEAR(mid(n2), 0.141421356, 1e-9);
  EXPECT_TRUE(contains(n2, 0.1 * std::sqrt(2.0)));
  EXPECT_EQ(vec_norm(IVector{Interval(-3, 1), Interval(2)}, NormKind::max), Interval(2, 3));
  EXPECT_EQ(vec_norm(IVector{Interval(-3, 1), Interval(2)}, NormKind::sum), Interval(2, 5));
}

TEST(Linalg, MatrixNormExamples) {
  const IMatrix rot{{Interval(0), Interval(1)}, {Interval(-1), Interval(0)}};
  EXPECT_EQ(mat_norm(rot, NormKind::max), Interval(1));
  EXPECT_EQ(mat_norm(rot, NormKind::sum), Interval(1));
  EXPECT_TRUE(contains(mat_norm(rot, NormKind::euclid), 1.0));
}

TEST(Linalg, LognormExamples) {
  const IMatrix rot{{Interval(0), Interval(1)}, {Interval(-1), Interval(0)}};
  const Interval le = lognorm(rot, NormKind::euclid);
  EXPECT_TRUE(contains(le, 0.0));
  EXPECT_LE(le.hi(), 1e-12);
  for (NormKind k : {NormKind::max, NormKind::sum, NormKind::euclid})
    EXPECT_EQ(lognorm(IMatrix(3, 3), k), Interval(0));
  const IMatrix a{{Interval(-2), Interval(1)}, {Interval(0), Interval(-1)}};
  EXPECT_EQ(lognorm(a, NormKind::max), Interval(-1));
  EXPECT_THROW((void)lognorm(IMatrix(2, 3), NormKind::max), NonSquareMatrix);
}

TEST(LinalgProperty, LognormBoundedByNorm) {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 2000; ++n) {
    const std::size_t dim = 2 + static_cast<std::size_t>(n % 3);
    const IMatrix a = to_interval(random_matrix(dim, rng));
    for (NormKind k : {NormKind::max, NormKind::sum, NormKind::euclid}) {
      const double mu = right(lognorm(a, k));
      const double nrm = right(mat_norm(a, k));
      ASSERT_LE(mu, nrm);
      ASSERT_GE(mu, -nrm);
    }
  }
}

TEST(LinalgProperty, LognormEnclosesDefinition) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 500; ++n) {
    const std::size_t dim = (n % 2) ? 2 : 3;
    const PMatrix a = random_matrix(dim, rng);
    for (NormKind k : {NormKind::max, NormKind::sum, NormKind::euclid}) {
      if (k == NormKind::euclid && dim != 2) continue;
      const long double mu = lognorm_by_definition(a, k);
      ASSERT_GE(static_cast<long double>(right(lognorm(to_interval(a), k))), mu - 1e-5L) << to_string(k);
    }
  }
}

TEST(LinalgProperty, EntrywiseBoundForMaxAndSum) {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 2000; ++n) {
    const PMatrix a = random_matrix(3, rng);
    for (NormKind k : {NormKind::max, NormKind::sum}) {
      const double nrm = right(mat_norm(to_interval(a), k));
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) ASSERT_LE(std::abs(a(i, j)), nrm);
    }
  }
}

TEST(LinalgProperty, EuclidNormEnclosesSpectralNorm) {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 2000; ++n) {
    const PMatrix a = random_matrix(2, rng);
    const Interval r = mat_norm(to_interval(a), NormKind::euclid);
    const long double s = spectral_norm_2x2(a);
    ASSERT_GE(static_cast<long double>(r.hi()), s * (1 - 1e-15L));
    ASSERT_LE(static_cast<long double>(r.lo()), s * (1 + 1e-15L));
  }
}

TEST(Linalg, OrthogonalFactorIsOrthogonalAndOrdered) {
  std::mt19937_64 rng(8);
  const PMatrix a = random_matrix(3, rng);
  const PMatrix q = orthogonal_factor(a, PVector{0.0, 5.0, 1.0});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += q(k, i) * q(k, j);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-14);
    }
  }
  // The first column spans the column of `a` with the largest weight.
  double dot = 0.0, na = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    dot += q(k, 0) * a(k, 1);
    na += a(k, 1) * a(k, 1);
  }
  EXPECT_NEAR(std::abs(dot), std::sqrt(na), 1e-12);
}

TEST(Linalg, InverseEnclosure) {
  // b⁻¹ = [[1, -1], [0, 1]] exactly.
  const PMatrix b{{1.0, 1.0}, {0.0, 1.0}};
  const IMatrix exact = inverse_enclosure(b, PMatrix{{1.0, -1.0}, {0.0, 1.0}});
  EXPECT_EQ(exact(0, 1), Interval(-1.0));
  const IMatrix inv = inverse_enclosure(b, PMatrix{{1.01, -0.99}, {0.001, 1.0}});
  EXPECT_TRUE(contains(inv(0, 0), 1.0));
  EXPECT_TRUE(contains(inv(0, 1), -1.0));
  EXPECT_TRUE(contains(inv(1, 0), 0.0));
  EXPECT_TRUE(contains(inv(1, 1), 1.0));
  EXPECT_THROW((void)inverse_enclosure(PMatrix{{1.0, 1.0}, {1.0, 1.0}}, PMatrix::identity(2)), SingularBasis);
}
