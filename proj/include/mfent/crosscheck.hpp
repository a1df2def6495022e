#pragma once

// Engine vs. exact-diagonalization comparison on pseudo-random parameter points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mfent/entanglement.hpp"
#include "mfent/oracle.hpp"
#include "mfent/scans.hpp"

namespace mfent {

inline constexpr std::array<double, 6> kCrossCheckTemperatures{0.0, 0.1, 0.5, 1.0, 2.0, 10.0};

struct CrossCheckPoint {
  PointParams params;
  double c_engine = 0.0;
  double c_oracle = 0.0;
  double spectrum_dev = 0.0;  ///< max |oracle eigenvalue - sector level|, sorted multisets
  double trace_dev = 0.0;     ///< |tr rho - 1| of the oracle pair state
  double min_pair_eig = 0.0;  ///< smallest eigenvalue of the engine pair density

  double c_diff() const { return std::abs(c_engine - c_oracle); }
};

struct CrossCheckSummary {
  std::vector<CrossCheckPoint> points;
  double max_c_diff = 0.0;
  double max_spectrum_dev = 0.0;
  double max_trace_dev = 0.0;
  double min_pair_eig = 0.0;
};

/// N uniform in [2, n_max], J = +-1, Delta in [-3, 3], B in [0, 3], T from
/// kCrossCheckTemperatures.
inline std::vector<PointParams> random_points(int n_max, std::size_t count, std::uint64_t seed) {
  oracle::detail::check_capacity(n_max);
  if (n_max < 2) throw InvalidCluster("n_max must be >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nd(2, n_max);
  std::uniform_int_distribution<int> jd(0, 1);
  std::uniform_real_distribution<double> dd(-3.0, 3.0);
  std::uniform_real_distribution<double> bd(0.0, 3.0);
  std::uniform_int_distribution<std::size_t> td(0, kCrossCheckTemperatures.size() - 1);
  std::vector<PointParams> out(count);
  for (auto& p : out) {
    p.n = nd(rng);
    p.j = jd(rng) ? 1.0 : -1.0;
    p.delta = dd(rng);
    p.b = bd(rng);
    p.t = kCrossCheckTemperatures[td(rng)];
  }
  return out;
}

inline double max_sorted_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline CrossCheckPoint cross_check_point(const PointParams& p) {
  const ClusterSpec spec = p.spec();
  const Temperature t = p.temperature();
  CrossCheckPoint out{p};

  const PairDensity pd = pair_density(correlations(spec, t));
  out.c_engine = concurrence(pd);
  out.min_pair_eig = std::min({pd.u_plus, pd.u_minus, pd.w - std::abs(pd.z)});

  const auto blocks = oracle::solve_all(spec);
  std::vector<double> eigs;
  for (const auto& sb : blocks) eigs.insert(eigs.end(), sb.eig.values.begin(), sb.eig.values.end());
  std::sort(eigs.begin(), eigs.end());
  out.spectrum_dev = max_sorted_deviation(eigs, oracle::level_spectrum(spec));

  const auto rho = oracle::thermal_pair_state(spec, blocks, t).rho;
  out.trace_dev = std::abs(rho[0] + rho[5] + rho[10] + rho[15] - 1.0);
  out.c_oracle = wootters(rho);
  return out;
}

inline CrossCheckSummary cross_check(const std::vector<PointParams>& pts, unsigned threads = 1) {
  CrossCheckSummary s;
  s.points = parallel_map(pts.size(), threads, [&](std::size_t i) { return cross_check_point(pts[i]); });
  s.min_pair_eig = std::numeric_limits<double>::infinity();
  for (const auto& c : s.points) {
    s.max_c_diff = std::max(s.max_c_diff, c.c_diff());
    s.max_spectrum_dev = std::max(s.max_spectrum_dev, c.spectrum_dev);
    s.max_trace_dev = std::max(s.max_trace_dev, c.trace_dev);
    s.min_pair_eig = std::min(s.min_pair_eig, c.min_pair_eig);
  }
  return s;
}

}  // namespace mfent
