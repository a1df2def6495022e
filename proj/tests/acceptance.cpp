// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion K   run criterion K only
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mfent/crosscheck.hpp"
#include "mfent/oracle.hpp"
#include "mfent/scans.hpp"

using namespace mfent;

namespace {

constexpr double kMatrixTol = 1e-12;
constexpr double kGoldenConcurrenceTol = 1e-12;
constexpr double kThresholdTol = 1e-6;
constexpr double kOracleTol = 1e-8;
constexpr double kSpectrumTol = 1e-9;
constexpr double kPositivity = 1e-9;
constexpr double kEvenOddGap = 0.05;
constexpr double kIdentityTol = 1e-6;
constexpr double kInvariantTol = 1e-12;
constexpr double kFiniteStep = 1e-5;
constexpr double kBracket = 1e-4;  // relative offset around the two-spin threshold

constexpr int kCrossCheckPoints = 200;
constexpr int kCrossCheckMaxN = 10;
constexpr unsigned kCrossCheckSeed = 42;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int n) { return Range{lo, hi, n}.values(); }

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

// |z| - sqrt(u+ u-) before the zero floor is applied.
double raw_margin(const ClusterSpec& spec, double t) {
  const auto pd = pair_density(correlations(spec, Temperature(t)));
  return std::abs(pd.z) - std::sqrt(std::max(0.0, pd.u_plus * pd.u_minus));
}

Mat4 sixths(std::initializer_list<double> e) {
  Mat4 m{};
  std::size_t i = 0;
  for (double x : e) m[i++] = x / 6;
  return m;
}

double max_entry_diff(const Mat4& a, const Mat4& b) {
  double d = 0;
  for (int i = 0; i < 16; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Two-spin Gibbs state in closed form for J = 1: H = 2 s1.s2, so the singlet
// lies 2 below the triplet. C = 2 max(0, -x - 1/4) with x = <s1.s2>.
double two_spin_concurrence(double t) {
  const double w_singlet = std::exp(2.0 / t);
  const double x = (-0.75 * w_singlet + 0.25 * 3.0) / (w_singlet + 3.0);
  return 2.0 * std::max(0.0, -x - 0.25);
}

void criterion1(Outcome& o) {
  const auto af = oracle::thermal_pair_state(ClusterSpec(3, 1, 0, 0), Temperature::zero()).rho;
  const auto fm = oracle::thermal_pair_state(ClusterSpec(3, -1, -0.5, 0), Temperature::zero()).rho;
  const double d_af = max_entry_diff(af, sixths({1, 0, 0, 0, 0, 2, -1, 0, 0, -1, 2, 0, 0, 0, 0, 1}));
  const double d_fm = max_entry_diff(fm, sixths({1, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 1}));
  const double c_af = wootters(af);
  const double c_fm = wootters(fm);
  const double e_af = evaluate(ClusterSpec(3, 1, 0, 0), Temperature::zero()).concurrence;
  const double e_fm = evaluate(ClusterSpec(3, -1, -0.5, 0), Temperature::zero()).concurrence;
  o.detail << "matrix dev " << g(d_af) << " / " << g(d_fm) << ", C " << g(c_af) << " / " << g(c_fm)
           << ", engine C " << g(e_af) << " / " << g(e_fm);
  o.require(d_af <= kMatrixTol && d_fm <= kMatrixTol, "matrices");
  o.require(std::abs(c_af) <= kGoldenConcurrenceTol && std::abs(e_af) <= kGoldenConcurrenceTol, "C = 0");
  o.require(std::abs(c_fm - 1.0 / 3) <= kGoldenConcurrenceTol && std::abs(e_fm - 1.0 / 3) <= kGoldenConcurrenceTol,
            "C = 1/3");
}

void criterion2(Outcome& o) {
  const auto temps = logspace(1e-3, 50, 100);
  int nonzero = 0;
  double worst_margin = -1e300;
  for (int n = 3; n <= 30; ++n)
    for (double j : {1.0, -1.0})
      for (double t : temps) {
        const ClusterSpec spec(n, j, 0, 0);
        if (concurrence_at(spec, t) != 0.0) ++nonzero;
        worst_margin = std::max(worst_margin, raw_margin(spec, t));
      }
  const double exact = 2.0 / std::log(3.0);
  const auto found = threshold_temperature(ClusterSpec(2, 1, 0, 0), 3.0);
  const ClusterSpec pair(2, 1, 0, 0);
  const double below = exact * (1 - kBracket), above = exact * (1 + kBracket);
  const double ed_below = oracle::oracle_concurrence(pair, Temperature(below));
  const double ed_above = oracle::oracle_concurrence(pair, Temperature(above));
  o.detail << nonzero << " nonzero of " << 28 * 2 * 100 << " (largest raw margin " << g(worst_margin)
           << "), threshold " << (found ? g(*found) : "none") << " vs 2/ln3 = " << g(exact) << ", ED C "
           << g(ed_below) << " below / " << g(ed_above) << " above, closed form "
           << g(two_spin_concurrence(below)) << " / " << g(two_spin_concurrence(above));
  o.require(nonzero == 0, "C = 0 for N >= 3");
  o.require(found && std::abs(*found - exact) <= kThresholdTol, "threshold");
  o.require(ed_below > 0 && ed_above == 0, "oracle bracket");
  o.require(two_spin_concurrence(below) > 0 && two_spin_concurrence(above) == 0, "closed-form bracket");
}

// Criteria 3 and 8 share the random grid.
const std::vector<PointParams>& cross_check_grid() {
  static const auto pts = random_points(kCrossCheckMaxN, kCrossCheckPoints, kCrossCheckSeed);
  return pts;
}

void criterion3(Outcome& o) {
  const auto s = cross_check(cross_check_grid(), 0);
  o.detail << s.points.size() << " points, max |dC| " << g(s.max_c_diff) << ", max spectrum dev "
           << g(s.max_spectrum_dev);
  o.require(s.points.size() == static_cast<std::size_t>(kCrossCheckPoints), "point count");
  o.require(s.max_c_diff <= kOracleTol, "concurrence");
  o.require(s.max_spectrum_dev <= kSpectrumTol, "spectrum");
}

void criterion4(Outcome& o) {
  const auto bs = linspace(0, 3, 100);
  const auto ts = linspace(0.01, 2, 100);
  int nonzero = 0;
  for (int n = 2; n <= 12; ++n)
    for (double b : bs)
      for (double t : ts)
        if (concurrence_at(ClusterSpec(n, -1, 0, b), t) != 0.0) ++nonzero;
  const double control = concurrence_at(ClusterSpec(3, 1, 0, 1), kLowTemperature);
  o.detail << nonzero << " nonzero of " << 11 * 100 * 100 << "; anti-ferromagnetic N=3 control at B=1, T=0.01: C "
           << g(control);
  o.require(nonzero == 0, "ferromagnet entangled");
  o.require(control > 0, "N=3 region empty");
}

void criterion5(Outcome& o) {
  const Range b_grid{0, 3, 200};
  const Range t_grid{0.005, 2, 200};
  std::vector<double> m(29, 0.0);
  for (int n = 2; n <= 28; ++n) m[n] = max_rescaled(n, b_grid, t_grid, 0).value;
  std::vector<int> not_positive, not_zero, rises;
  for (int n = 2; n <= 23; ++n)
    if (!(m[n] > kPositivity)) not_positive.push_back(n);
  for (int n = 24; n <= 28; ++n)
    if (m[n] > kPositivity) not_zero.push_back(n);
  for (int n = 4; n <= 28; ++n)
    if (m[n] > m[n - 1]) rises.push_back(n);
  o.detail << "max C_r:";
  for (int n : {2, 3, 4, 8, 12, 16, 20, 23, 24, 26, 28}) o.detail << " N" << n << "=" << g(m[n]);
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (int n : v) s += (s.empty() ? "" : ",") + std::to_string(n);
    return s.empty() ? std::string("none") : s;
  };
  o.detail << "; not positive: " << list(not_positive) << "; nonzero above 23: " << list(not_zero)
           << "; increases at: " << list(rises);
  o.require(not_positive.empty(), "positivity for N <= 23");
  o.require(not_zero.empty(), "vanishing for N >= 24");
  o.require(rises.empty(), "monotone for N >= 3");
}

void criterion6(Outcome& o) {
  const auto ds = linspace(-4, 4, 81);
  const auto ts = linspace(0.01, 3, 50);
  int nonzero = 0;
  double worst_margin = -1e300;
  for (int n = 3; n <= 12; ++n)
    for (double d : ds)
      for (double t : ts) {
        const ClusterSpec spec(n, 1, d, 0);
        if (concurrence_at(spec, t) != 0.0) ++nonzero;
        worst_margin = std::max(worst_margin, raw_margin(spec, t));
      }
  o.detail << nonzero << " nonzero of " << 10 * 81 * 50 << " (largest raw margin " << g(worst_margin) << ")";
  o.require(nonzero == 0, "anti-ferromagnet entangled");
}

void criterion7(Outcome& o) {
  std::vector<int> even, odd;
  for (int n = 2; n <= 20; n += 2) even.push_back(n);
  for (int n = 3; n <= 21; n += 2) odd.push_back(n);
  const auto e = limit_curve({-1.0}, kLowTemperature, even);
  const auto d = limit_curve({-1.0}, kLowTemperature, odd);
  const auto tail = limit_curve({-1.0}, kLowTemperature, {40, 41});
  bool even_ok = true, odd_ok = true;
  for (std::size_t i = 1; i < e.size(); ++i) even_ok = even_ok && e[i].c_r <= e[i - 1].c_r;
  for (std::size_t i = 1; i < d.size(); ++i) odd_ok = odd_ok && d[i].c_r >= d[i - 1].c_r;
  const double gap = std::abs(tail[0].c_r - tail[1].c_r);
  o.detail << "even " << g(e.front().c_r) << " -> " << g(e.back().c_r) << ", odd " << g(d.front().c_r) << " -> "
           << g(d.back().c_r) << ", |C_r(40) - C_r(41)| " << g(gap);
  o.require(even_ok, "even sequence rises");
  o.require(odd_ok, "odd sequence falls");
  o.require(gap < kEvenOddGap, "even/odd gap");
}

void criterion8(Outcome& o) {
  double gzz_dev = 0, mu_dev = 0, trace_dev = 0, min_eig = 1e300;
  int derivative_points = 0;
  for (const auto& p : cross_check_grid()) {
    const ClusterSpec spec = p.spec();
    const Temperature t = p.temperature();
    const Correlations c = correlations(spec, t);
    const PairDensity pd = pair_density(c);
    trace_dev = std::max(trace_dev, std::abs(pd.u_plus + pd.u_minus + 2 * pd.w - 1.0));
    min_eig = std::min({min_eig, pd.u_plus, pd.u_minus, pd.w - std::abs(pd.z)});
    const auto rho = oracle::thermal_pair_state(spec, t).rho;
    trace_dev = std::max(trace_dev, std::abs(rho[0] + rho[5] + rho[10] + rho[15] - 1.0));
    const auto e = jacobi_eigen(std::vector<double>(rho.begin(), rho.end()), 4, {.want_vectors = false});
    min_eig = std::min(min_eig, e.values.front());

    if (t.is_zero()) continue;  // ln Z derivatives need beta finite
    ++derivative_points;
    const double beta = t.beta();
    const double h = kFiniteStep;
    auto ln_z = [&](const ClusterSpec& s) { return log_partition(s, t).log_z(beta); };
    const double dz_dd = (ln_z(spec.with_delta(p.delta + h)) - ln_z(spec.with_delta(p.delta - h))) / (2 * h);
    const double dz_db = (ln_z(spec.with_b(p.b + h)) - ln_z(spec.with_b(p.b - h))) / (2 * h);
    const double gzz_fd = -dz_dd / (beta * spec.j() * spec.n());
    const double mu_fd = -dz_db / (beta * spec.n());
    gzz_dev = std::max(gzz_dev, std::abs(gzz_fd - c.gzz));
    mu_dev = std::max(mu_dev, std::abs(mu_fd - c.mu));
  }
  o.detail << derivative_points << " finite-T points: max |Gzz route diff| " << g(gzz_dev) << ", max |mu diff| "
           << g(mu_dev) << "; all points: trace dev " << g(trace_dev) << ", min pair eigenvalue " << g(min_eig);
  o.require(gzz_dev <= kIdentityTol, "Gzz routes");
  o.require(mu_dev <= kIdentityTol, "mu derivative");
  o.require(trace_dev <= kInvariantTol, "trace");
  o.require(min_eig >= -kInvariantTol, "positivity");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Outcome&)>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      const int k = std::atoi(argv[++i]);
      if (k < 1 || k > static_cast<int>(criteria.size())) {
        std::cerr << "unknown criterion " << argv[i] << '\n';
        return 2;
      }
      selected.push_back(k);
    } else {
      std::cerr << "usage: acceptance [--criterion K]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k - 1](o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " (" << g(secs) << " s) "
              << o.detail.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
