#pragma once

// Thermal averages over the exact (S, m) spectrum.
//
// Observables are explicit Boltzmann-weighted sums rather than derivatives of
// ln Z. The derivative forms hold as identities and are exercised in tests:
//
//   d lnZ / dB     = -beta N mu
//   d lnZ / dDelta = -beta J/(N-1) <S_z^2 - N/4> = -beta J N G_zz
//
// The second identity carries no -1/(4(N-1)) correction because the -N/4
// constant is kept in the spectrum; dropping it shifts <S_z^2> by N/4 and
// reintroduces exactly that term.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mfent/error.hpp"
#include "mfent/sectors.hpp"

namespace mfent {

/// Levels closer than this to the minimum energy form the T = 0 ground manifold.
inline constexpr double kEnergyDegeneracyTol = 1e-9;

/// Temperature in units with k_B = 1. Zero selects the ground-manifold limit;
/// +infinity is allowed and means beta = 0.
class Temperature {
 public:
  explicit Temperature(double value) : value_(value) {
    if (std::isnan(value) || value < 0.0)
      throw InvalidCluster("temperature must be >= 0, got " + std::to_string(value));
  }

  static Temperature zero() { return Temperature(0.0); }
  static Temperature infinite() { return Temperature(std::numeric_limits<double>::infinity()); }

  double value() const { return value_; }
  bool is_zero() const { return value_ == 0.0; }
  double beta() const { return 1.0 / value_; }

 private:
  double value_;
};

struct Moments {
  double log_z_shifted = 0.0;  ///< ln sum g exp(-beta (E - e_min)); 0 at T = 0 is not meaningful
  double e_min = 0.0;
  double z1 = 0.0;      ///< <S_z>
  double z2 = 0.0;      ///< <S_z^2>
  double s2 = 0.0;      ///< <S^2>
  double h_mean = 0.0;  ///< <H>
  // Ordered-pair counts <n_up(n_up-1)>, <n_dn(n_dn-1)>, <n_up n_dn>. Summed
  // directly so that vanishing pair probabilities stay exactly zero.
  double up_pairs = 0.0;
  double down_pairs = 0.0;
  double mixed_pairs = 0.0;
};

struct Correlations {
  double mu = 0.0;       ///< magnetization per site
  double gzz = 0.0;      ///< <s_iz s_jz>
  double gplus = 0.0;    ///< G_xx + G_yy
  double epsilon = 0.0;  ///< energy per site
  // <P_up P_up>, <P_dn P_dn>, <P_up P_dn> for one pair; NaN when unknown, in
  // which case they follow from mu and gzz.
  double p_up_up = std::numeric_limits<double>::quiet_NaN();
  double p_down_down = std::numeric_limits<double>::quiet_NaN();
  double p_up_down = std::numeric_limits<double>::quiet_NaN();
};

struct LogPartition {
  double log_z_shifted = 0.0;
  double e_min = 0.0;

  /// ln Z at inverse temperature beta.
  double log_z(double beta) const { return log_z_shifted - beta * e_min; }
};

namespace detail {

inline double min_energy(std::span<const EnergyLevel> levels) {
  double e = std::numeric_limits<double>::infinity();
  for (const auto& lv : levels) e = std::min(e, lv.energy);
  return e;
}

// Weighted moments; weight(level) must be non-negative and not all zero.
template <class Weight>
Moments accumulate(int n, std::span<const EnergyLevel> levels, double e_min, Weight weight) {
  const double half_n = 0.5 * n;
  double z = 0.0, a1 = 0.0, a2 = 0.0, as = 0.0, ah = 0.0, uu = 0.0, dd = 0.0, ud = 0.0;
  for (const auto& lv : levels) {
    const double w = weight(lv);
    if (w == 0.0) continue;
    const double m = lv.m.value();
    const double s = lv.s.value();
    z += w;
    a1 += w * m;
    a2 += w * m * m;
    as += w * s * (s + 1.0);
    ah += w * lv.energy;
    const double up = half_n + m;
    const double dn = half_n - m;
    uu += w * up * (up - 1.0);
    dd += w * dn * (dn - 1.0);
    ud += w * up * dn;
  }
  Moments out;
  out.log_z_shifted = std::log(z);
  out.e_min = e_min;
  out.z1 = a1 / z;
  out.z2 = a2 / z;
  out.s2 = as / z;
  out.h_mean = ah / z;
  out.up_pairs = uu / z;
  out.down_pairs = dd / z;
  out.mixed_pairs = ud / z;
  return out;
}

}  // namespace detail

/// ln Z with the minimum energy factored out; requires T > 0.
inline LogPartition log_partition(const ClusterSpec& spec, Temperature t) {
  if (t.is_zero()) throw DomainError("log_partition needs T > 0; use moments() for T = 0");
  const auto levels = enumerate_levels(spec);
  const double e_min = detail::min_energy(levels);
  const double beta = t.beta();
  double z = 0.0;
  for (const auto& lv : levels)
    z += static_cast<double>(lv.multiplicity) * std::exp(-beta * (lv.energy - e_min));
  return {std::log(z), e_min};
}

inline Moments moments(const ClusterSpec& spec, Temperature t) {
  const auto levels = enumerate_levels(spec);
  const double e_min = detail::min_energy(levels);
  if (t.is_zero()) {
    return detail::accumulate(spec.n(), levels, e_min, [&](const EnergyLevel& lv) {
      return lv.energy - e_min <= kEnergyDegeneracyTol ? static_cast<double>(lv.multiplicity) : 0.0;
    });
  }
  const double beta = t.beta();
  return detail::accumulate(spec.n(), levels, e_min, [&](const EnergyLevel& lv) {
    return static_cast<double>(lv.multiplicity) * std::exp(-beta * (lv.energy - e_min));
  });
}

inline Correlations correlations_from(const ClusterSpec& spec, const Moments& mo) {
  const double n = spec.n();
  const double pairs = n * (n - 1.0);
  Correlations c;
  c.mu = mo.z1 / n;
  c.gzz = (mo.z2 - 0.25 * n) / pairs;
  c.gplus = (mo.s2 - mo.z2 - 0.5 * n) / pairs;
  c.epsilon = spec.j() * (c.gplus + (1.0 + spec.delta()) * c.gzz) + c.mu * spec.b();
  c.p_up_up = mo.up_pairs / pairs;
  c.p_down_down = mo.down_pairs / pairs;
  c.p_up_down = mo.mixed_pairs / pairs;
  return c;
}

inline Correlations correlations(const ClusterSpec& spec, Temperature t) {
  return correlations_from(spec, moments(spec, t));
}

}  // namespace mfent
