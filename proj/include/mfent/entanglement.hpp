#pragma once

// Two-site reduced state of an S_z-conserving, real, permutation-symmetric
// cluster and its pairwise entanglement.
//
// In the basis {|++>, |+->, |-+>, |-->} the state is
//
//   [ u+  0   0   0  ]
//   [ 0   w   z   0  ]
//   [ 0   z   w   0  ]
//   [ 0   0   0   u- ]
//
// with u+- = 1/4 +- mu + G_zz, w = 1/4 - G_zz and z = G_xx + G_yy.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "mfent/error.hpp"
#include "mfent/jacobi.hpp"
#include "mfent/thermo.hpp"

namespace mfent {

/// Row-major 4x4 real matrix over {|++>, |+->, |-+>, |-->}.
using Mat4 = std::array<double, 16>;

/// Tolerance on positivity and trace when a density matrix is validated.
inline constexpr double kDensityTol = 1e-10;

/// Rounding allowance for sqrt arguments that should be non-negative.
inline constexpr double kSqrtClampTol = 1e-12;

/// |z| - sqrt(u+ u-) at or below this is treated as zero. Zero-field and
/// anti-ferromagnetic ground mixtures sit exactly on the C = 0 boundary, where
/// the difference is pure rounding of order 1e-17.
inline constexpr double kConcurrenceFloor = 1e-14;

struct PairDensity {
  double u_plus = 0.0;
  double u_minus = 0.0;
  double w = 0.0;
  double z = 0.0;

  Mat4 matrix() const {
    Mat4 m{};
    m[0] = u_plus;
    m[5] = w;
    m[6] = z;
    m[9] = z;
    m[10] = w;
    m[15] = u_minus;
    return m;
  }
};

struct EntanglementPoint {
  double concurrence = 0.0;
  double rescaled = 0.0;
  double eof = 0.0;
};

namespace detail {

inline double clamped_sqrt(double x) {
  if (x < 0.0 && x >= -kSqrtClampTol) return 0.0;
  return std::sqrt(x);
}

}  // namespace detail

inline PairDensity pair_density(const Correlations& corr) {
  PairDensity pd;
  pd.u_plus = std::isnan(corr.p_up_up) ? 0.25 + corr.mu + corr.gzz : corr.p_up_up;
  pd.u_minus = std::isnan(corr.p_down_down) ? 0.25 - corr.mu + corr.gzz : corr.p_down_down;
  pd.w = std::isnan(corr.p_up_down) ? 0.25 - corr.gzz : corr.p_up_down;
  pd.z = corr.gplus;
  const bool psd = pd.u_plus >= -kDensityTol && pd.u_minus >= -kDensityTol &&
                   std::abs(pd.z) <= pd.w + kDensityTol;
  if (!psd)
    throw ConsistencyError("pair density not positive: u+=" + std::to_string(pd.u_plus) +
                           " u-=" + std::to_string(pd.u_minus) + " w=" + std::to_string(pd.w) +
                           " z=" + std::to_string(pd.z));
  return pd;
}

/// C = 2 max(0, |z| - sqrt(u+ u-)).
inline double concurrence(const PairDensity& pd) {
  const double margin = std::abs(pd.z) - detail::clamped_sqrt(pd.u_plus * pd.u_minus);
  if (!(margin > kConcurrenceFloor)) return 0.0;
  return std::min(1.0, 2.0 * margin);
}

/// Concurrence of an isotropic zero-field cluster in terms of x = epsilon/J.
inline double concurrence_xxx_zero_field(double x) {
  const double f = (2.0 / 3.0) * std::abs(x) - std::abs(0.25 + x / 3.0);
  if (!(f > kConcurrenceFloor)) return 0.0;
  return 2.0 * f;
}

/// Wootters concurrence of a general real symmetric two-qubit density matrix.
///
/// The lambda_i are square roots of the spectrum of rho * rho~, obtained from the
/// symmetric PSD matrix sqrt(rho) rho~ sqrt(rho), which has the same spectrum.
/// rho~ = (sy x sy) rho (sy x sy) is a signed reversal of the basis for real rho.
inline double wootters(const Mat4& rho) {
  double trace = 0.0;
  for (int i = 0; i < 4; ++i) trace += rho[i * 5];
  if (std::abs(trace - 1.0) > kDensityTol)
    throw DomainError("wootters: trace " + std::to_string(trace) + " != 1");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(rho[i * 4 + j] - rho[j * 4 + i]) > kDensityTol)
        throw DomainError("wootters: matrix not symmetric");

  const auto eig = jacobi_eigen(std::vector<double>(rho.begin(), rho.end()), 4);
  if (eig.values.front() < -kDensityTol)
    throw DomainError("wootters: matrix not positive semidefinite (min eigenvalue " +
                      std::to_string(eig.values.front()) + ")");

  Mat4 root{};
  for (int k = 0; k < 4; ++k) {
    const double r = std::sqrt(std::max(0.0, eig.values[k]));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) root[i * 4 + j] += r * eig.vector_entry(i, k) * eig.vector_entry(j, k);
  }

  // sqrt(rho) Y rho Y sqrt(rho) = M^2 with M = sqrt(rho) Y sqrt(rho) symmetric,
  // so the lambdas are |eig(M)|. Rounding in a null direction of rho that is
  // also a Y eigenvector then enters only at second order.
  static constexpr std::array<double, 4> sign{-1.0, 1.0, 1.0, -1.0};
  Mat4 m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) m[i * 4 + j] += root[i * 4 + k] * sign[k] * root[(3 - k) * 4 + j];
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m[i * 4 + j] = m[j * 4 + i] = 0.5 * (m[i * 4 + j] + m[j * 4 + i]);

  const auto spec = jacobi_eigen(std::vector<double>(m.begin(), m.end()), 4, {.want_vectors = false});
  std::array<double, 4> lambda{};
  for (int k = 0; k < 4; ++k) lambda[k] = std::abs(spec.values[k]);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  const double margin = lambda[0] - lambda[1] - lambda[2] - lambda[3];
  if (!(margin > kConcurrenceFloor)) return 0.0;
  return std::min(1.0, margin);
}

/// Entanglement of formation in ebits from the concurrence.
inline double eof(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("eof: concurrence must lie in [0,1], got " + std::to_string(c));
  const double lambda = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - c * c)));
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(lambda) + term(1.0 - lambda);
}

/// Concurrence scaled by the number of neighbours, (n - 1) C.
inline double rescaled_concurrence(double c, int n) { return (n - 1) * c; }

inline EntanglementPoint entanglement_of(double c, int n) {
  return {c, rescaled_concurrence(c, n), eof(c)};
}

/// Full engine path: spectrum -> correlations -> pair density -> C, C_r, Eof.
inline EntanglementPoint evaluate(const ClusterSpec& spec, Temperature t) {
  return entanglement_of(concurrence(pair_density(correlations(spec, t))), spec.n());
}

}  // namespace mfent
