#pragma once

// Parameter sweeps over (B, Delta, T, N), C = 0 boundaries and the summary
// quantities built on them.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mfent/entanglement.hpp"
#include "mfent/error.hpp"
#include "mfent/sectors.hpp"
#include "mfent/thermo.hpp"

namespace mfent {

/// Operating point used for "very low temperature" curves.
inline constexpr double kLowTemperature = 0.01;

enum class AxisName { B, Delta, T, N };

inline std::string to_string(AxisName a) {
  switch (a) {
    case AxisName::B: return "B";
    case AxisName::Delta: return "delta";
    case AxisName::T: return "T";
    case AxisName::N: return "N";
  }
  return "?";
}

inline AxisName parse_axis_name(const std::string& s) {
  if (s == "B" || s == "b") return AxisName::B;
  if (s == "delta" || s == "Delta" || s == "D") return AxisName::Delta;
  if (s == "T" || s == "t") return AxisName::T;
  if (s == "N" || s == "n") return AxisName::N;
  throw InvalidCluster("unknown axis name '" + s + "' (expected B, delta, T or N)");
}

/// `steps` evenly spaced values from lo to hi inclusive; one step means {lo}.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  void validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidCluster("range bounds must be finite");
    if (lo > hi) throw InvalidCluster("range needs lo <= hi");
    if (steps < 1) throw InvalidCluster("range needs steps >= 1");
  }
  double at(int i) const { return steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1); }
  double spacing() const { return steps == 1 ? 0.0 : (hi - lo) / (steps - 1); }
  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) v[i] = at(i);
    return v;
  }
};

struct Axis {
  AxisName name = AxisName::B;
  Range range;
};

/// Raw point parameters; validated only when turned into a ClusterSpec.
struct PointParams {
  int n = 2;
  double j = 1.0;
  double delta = 0.0;
  double b = 0.0;
  double t = kLowTemperature;

  void set(AxisName a, double v) {
    switch (a) {
      case AxisName::B: b = v; break;
      case AxisName::Delta: delta = v; break;
      case AxisName::T: t = v; break;
      case AxisName::N: n = static_cast<int>(std::lround(v)); break;
    }
  }
  ClusterSpec spec() const { return {n, j, delta, b}; }
  Temperature temperature() const { return Temperature(t); }
};

struct GridSpec {
  Axis axis1;
  std::optional<Axis> axis2;
  PointParams fixed;

  void validate() const {
    axis1.range.validate();
    if (axis2) {
      axis2->range.validate();
      if (axis2->name == axis1.name) throw InvalidCluster("axis names must be distinct");
    }
  }
  std::size_t steps2() const { return axis2 ? static_cast<std::size_t>(axis2->range.steps) : 1; }
  std::size_t size() const { return static_cast<std::size_t>(axis1.range.steps) * steps2(); }

  /// Parameters of grid point `idx`, row-major with axis1 outermost.
  PointParams point(std::size_t idx) const {
    PointParams p = fixed;
    const std::size_t s2 = steps2();
    p.set(axis1.name, axis1.range.at(static_cast<int>(idx / s2)));
    if (axis2) p.set(axis2->name, axis2->range.at(static_cast<int>(idx % s2)));
    return p;
  }
};

struct ScanRecord {
  int n = 0;
  double j = 0.0;
  double delta = 0.0;
  double b = 0.0;
  double t = 0.0;
  double c = 0.0;
  double c_r = 0.0;
  double eof = 0.0;
  bool valid = true;
  std::string error;

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

struct BoundaryPoint {
  double control = 0.0;
  std::optional<double> t_threshold;
};

struct Boundary {
  AxisName control_name = AxisName::B;
  std::vector<BoundaryPoint> points;
};

struct MaxRescaled {
  double value = 0.0;
  double b = 0.0;
  double t = 0.0;
};

struct LimitPoint {
  double delta = 0.0;
  int n = 0;
  double c_r = 0.0;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Results are stored by index.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  constexpr std::size_t chunk = 64;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  return out;
}

inline ScanRecord evaluate_record(const PointParams& p) {
  ScanRecord r;
  r.n = p.n;
  r.j = p.j;
  r.delta = p.delta;
  r.b = p.b;
  r.t = p.t;
  try {
    const EntanglementPoint e = evaluate(p.spec(), p.temperature());
    r.c = e.concurrence;
    r.c_r = e.rescaled;
    r.eof = e.eof;
  } catch (const Error& ex) {
    r.valid = false;
    r.error = ex.what();
    r.c = r.c_r = r.eof = std::nan("");
  }
  return r;
}

inline std::vector<ScanRecord> scan(const GridSpec& grid, unsigned threads = 1) {
  grid.validate();
  return parallel_map(grid.size(), threads, [&](std::size_t i) { return evaluate_record(grid.point(i)); });
}

struct ThresholdOptions {
  int coarse_points = 256;
  double tolerance = 1e-6;
};

inline double concurrence_at(const ClusterSpec& spec, double t) {
  return concurrence(pair_density(correlations(spec, Temperature(t))));
}

/// Largest T <= t_max with C(T) > 0. The coarse grid t_max*(i+1)/points is
/// scanned for the last positive sample, so re-entrant regions report their
/// upper edge. Returns nullopt when every sample is zero.
inline std::optional<double> threshold_temperature(const ClusterSpec& spec, double t_max,
                                                   const ThresholdOptions& opt = {}) {
  if (!(t_max > 0.0)) throw InvalidCluster("t_max must be > 0");
  const int pts = std::max(2, opt.coarse_points);
  auto grid_t = [&](int i) { return t_max * (i + 1) / pts; };
  int last = -1;
  for (int i = pts - 1; i >= 0; --i) {
    if (concurrence_at(spec, grid_t(i)) > 0.0) {
      last = i;
      break;
    }
  }
  if (last < 0) return std::nullopt;
  if (last == pts - 1) return t_max;
  double lo = grid_t(last);
  double hi = grid_t(last + 1);
  while (hi - lo > opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    (concurrence_at(spec, mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

/// Threshold temperature per control value; `control` is B or Delta.
inline Boundary boundary(AxisName control, const std::vector<double>& control_grid,
                         const ClusterSpec& spec_template, double t_max, unsigned threads = 1,
                         const ThresholdOptions& opt = {}) {
  if (control != AxisName::B && control != AxisName::Delta)
    throw InvalidCluster("boundary control must be B or delta");
  Boundary out{control, {}};
  out.points = parallel_map(control_grid.size(), threads, [&](std::size_t i) {
    const double v = control_grid[i];
    const ClusterSpec spec = control == AxisName::B ? spec_template.with_b(v) : spec_template.with_delta(v);
    return BoundaryPoint{v, threshold_temperature(spec, t_max, opt)};
  });
  return out;
}

/// Maximum of (N-1) C over the isotropic anti-ferromagnetic (B, T) plane,
/// refined twice on a 3x3 stencil of halving spacing around the grid argmax.
inline MaxRescaled max_rescaled(int n, const Range& b_grid, const Range& t_grid, unsigned threads = 1) {
  b_grid.validate();
  t_grid.validate();
  const ClusterSpec base(n, 1.0, 0.0, 0.0);
  auto value = [&](double b, double t) {
    return rescaled_concurrence(concurrence_at(base.with_b(b), t), n);
  };

  const std::size_t nt = static_cast<std::size_t>(t_grid.steps);
  const auto vals = parallel_map(static_cast<std::size_t>(b_grid.steps) * nt, threads, [&](std::size_t i) {
    return value(b_grid.at(static_cast<int>(i / nt)), t_grid.at(static_cast<int>(i % nt)));
  });
  const auto best_it = std::max_element(vals.begin(), vals.end());
  const std::size_t best = static_cast<std::size_t>(best_it - vals.begin());
  MaxRescaled out{*best_it, b_grid.at(static_cast<int>(best / nt)), t_grid.at(static_cast<int>(best % nt))};
  if (out.value <= 0.0) return out;

  double db = b_grid.spacing();
  double dt = t_grid.spacing();
  for (int level = 0; level < 2; ++level) {
    db *= 0.5;
    dt *= 0.5;
    const double cb = out.b;
    const double ct = out.t;
    for (int ib = -1; ib <= 1; ++ib) {
      for (int it = -1; it <= 1; ++it) {
        const double b = std::clamp(cb + ib * db, b_grid.lo, b_grid.hi);
        const double t = std::clamp(ct + it * dt, t_grid.lo, t_grid.hi);
        if (t <= 0.0) continue;
        const double v = value(b, t);
        if (v > out.value) out = {v, b, t};
      }
    }
  }
  return out;
}

/// C_r(Delta; N) for the zero-field ferromagnetic xxz cluster at temperature t,
/// ordered by N (as given) and then by Delta.
inline std::vector<LimitPoint> limit_curve(const std::vector<double>& delta_grid, double t,
                                           const std::vector<int>& n_list, unsigned threads = 1) {
  const std::size_t nd = delta_grid.size();
  return parallel_map(n_list.size() * nd, threads, [&](std::size_t i) {
    const int n = n_list[i / nd];
    const double d = delta_grid[i % nd];
    const double c = concurrence_at(ClusterSpec(n, -1.0, d, 0.0), t);
    return LimitPoint{d, n, rescaled_concurrence(c, n)};
  });
}

}  // namespace mfent
