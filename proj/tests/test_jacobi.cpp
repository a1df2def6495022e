#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mfent/jacobi.hpp"

using namespace mfent;

namespace {

std::vector<double> random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = g(rng);
  return a;
}

}  // namespace

TEST(Jacobi, DiagonalInputIsSorted) {
  const auto e = jacobi_eigen(std::vector<double>{3, 0, 0, 0, -1, 0, 0, 0, 2}, 3);
  EXPECT_EQ(e.values, (std::vector<double>{-1, 2, 3}));
  EXPECT_EQ(e.sweeps, 0);
}

TEST(Jacobi, TwoByTwo) {
  const auto e = jacobi_eigen(std::vector<double>{-0.5, 1, 1, -0.5}, 2);
  EXPECT_NEAR(e.values[0], -1.5, 1e-15);
  EXPECT_NEAR(e.values[1], 0.5, 1e-15);
  EXPECT_NEAR(std::abs(e.vector_entry(0, 0)), std::sqrt(0.5), 1e-15);
}

TEST(Jacobi, ReconstructsRandomMatrices) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 3u, 8u, 40u, 120u}) {
    const auto a = random_symmetric(n, rng);
    const auto e = jacobi_eigen(a, n);
    double trace = 0, sum = 0;
    for (std::size_t i = 0; i < n; ++i) trace += a[i * n + i];
    for (double v : e.values) sum += v;
    EXPECT_NEAR(trace, sum, 1e-10 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double rec = 0, ortho = 0;
        for (std::size_t k = 0; k < n; ++k) {
          rec += e.vector_entry(i, k) * e.values[k] * e.vector_entry(j, k);
          ortho += e.vector_entry(k, i) * e.vector_entry(k, j);
        }
        EXPECT_NEAR(rec, a[i * n + j], 1e-11);
        EXPECT_NEAR(ortho, i == j ? 1.0 : 0.0, 1e-12);
      }
    }
    for (std::size_t k = 1; k < n; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(Jacobi, DegenerateSpectrum) {
  // Projector onto a 2-D subspace of R^4 scaled by 5: eigenvalues {0,0,5,5}.
  const double s = 0.5;
  std::vector<double> a(16, 0.0);
  const double u[4] = {s, s, s, s}, v[4] = {s, -s, s, -s};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i * 4 + j] = 5 * (u[i] * u[j] + v[i] * v[j]);
  const auto e = jacobi_eigen(a, 4);
  EXPECT_NEAR(e.values[0], 0, 1e-14);
  EXPECT_NEAR(e.values[1], 0, 1e-14);
  EXPECT_NEAR(e.values[2], 5, 1e-14);
  EXPECT_NEAR(e.values[3], 5, 1e-14);
}

TEST(Jacobi, FloatInstantiation) {
  const auto e = jacobi_eigen(std::vector<float>{2, 1, 1, 2}, 2, {.off_tol = 1e-6});
  EXPECT_NEAR(e.values[0], 1.0f, 1e-5f);
  EXPECT_NEAR(e.values[1], 3.0f, 1e-5f);
}

TEST(Jacobi, ReportsNonConvergence) {
  std::mt19937_64 rng(3);
  EXPECT_THROW(jacobi_eigen(random_symmetric(30, rng), 30, {.max_sweeps = 1}), NumericalError);
}

TEST(Jacobi, SizeMismatch) { EXPECT_THROW(jacobi_eigen(std::vector<double>(5), 2), DomainError); }
