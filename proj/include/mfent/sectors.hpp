#pragma once

// Total-spin decomposition of N spin-1/2 particles and the exact spectrum of
// the mean-field xxz Hamiltonian
//
//   H = J/(N-1) sum_{i != j} (s_i . s_j + Delta s_iz s_jz) + B sum_i s_iz
//     = J/(N-1) (S.S - 3N/4 + Delta (S_z^2 - N/4)) + B S_z
//
// The additive constants are kept so that <H>/N is the true energy per site.

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "mfent/error.hpp"

namespace mfent {

/// Largest cluster for which multiplicities stay exact in 64 bits.
inline constexpr int kMaxClusterSize = 64;

/// A half-integer stored as twice its value.
struct HalfInt {
  int twice = 0;

  constexpr double value() const { return 0.5 * twice; }
  static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
};

class ClusterSpec {
 public:
  ClusterSpec(int n, double j, double delta, double b) : n_(n), j_(j), delta_(delta), b_(b) {
    if (n < 2) throw InvalidCluster("cluster size n must be >= 2, got " + std::to_string(n));
    if (n > kMaxClusterSize)
      throw InvalidCluster("cluster size n must be <= " + std::to_string(kMaxClusterSize) +
                           ", got " + std::to_string(n));
    if (!std::isfinite(j) || j == 0.0) throw InvalidCluster("coupling j must be finite and nonzero");
    if (!std::isfinite(delta)) throw InvalidCluster("anisotropy delta must be finite");
    if (!std::isfinite(b)) throw InvalidCluster("field b must be finite");
  }

  int n() const { return n_; }
  double j() const { return j_; }
  double delta() const { return delta_; }
  double b() const { return b_; }

  ClusterSpec with_n(int n) const { return {n, j_, delta_, b_}; }
  ClusterSpec with_j(double j) const { return {n_, j, delta_, b_}; }
  ClusterSpec with_delta(double delta) const { return {n_, j_, delta, b_}; }
  ClusterSpec with_b(double b) const { return {n_, j_, delta_, b}; }

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;

 private:
  int n_;
  double j_;
  double delta_;
  double b_;
};

struct SpinSector {
  HalfInt s;
  std::uint64_t g = 0;
};

struct EnergyLevel {
  HalfInt s;
  HalfInt m;
  double energy = 0.0;
  std::uint64_t multiplicity = 0;
};

namespace detail {

inline void check_size(int n) {
  if (n < 2 || n > kMaxClusterSize)
    throw InvalidCluster("cluster size n must lie in [2, " + std::to_string(kMaxClusterSize) +
                         "], got " + std::to_string(n));
}

// Exact binomial coefficient; every intermediate product i*C(n,i-1)/... is
// integral, so the running value never leaves the integers.
inline unsigned __int128 binomial128(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return c;
}

}  // namespace detail

/// Total spins present in the decomposition, ascending: 0..N/2 (even N) or
/// 1/2..N/2 (odd N).
inline std::vector<HalfInt> sector_spins(int n) {
  detail::check_size(n);
  std::vector<HalfInt> out;
  out.reserve(static_cast<std::size_t>(n / 2 + 1));
  for (int t = n % 2; t <= n; t += 2) out.push_back(HalfInt{t});
  return out;
}

/// Number of times the spin-S irrep appears in the N-fold product of spin 1/2:
/// g(N,S) = binom(N, N/2 - S) (2S+1) / (N/2 + S + 1).
inline std::uint64_t degeneracy(int n, HalfInt s) {
  detail::check_size(n);
  if (s.twice < 0 || s.twice > n || (s.twice - n) % 2 != 0)
    throw DomainError("spin S=" + std::to_string(s.value()) + " does not occur for N=" +
                      std::to_string(n));
  const int k = (n - s.twice) / 2;
  const unsigned __int128 num = detail::binomial128(n, k) * static_cast<unsigned>(s.twice + 1);
  const unsigned den = static_cast<unsigned>((n + s.twice) / 2 + 1);
  if (num % den != 0) throw ConsistencyError("non-integral multiplicity");
  return static_cast<std::uint64_t>(num / den);
}

inline std::vector<SpinSector> sectors(int n) {
  std::vector<SpinSector> out;
  for (HalfInt s : sector_spins(n)) out.push_back({s, degeneracy(n, s)});
  return out;
}

/// E_{S,m} including the additive constants of the site Hamiltonian.
inline double level_energy(const ClusterSpec& spec, HalfInt s, HalfInt m) {
  const double n = spec.n();
  const double sv = s.value();
  const double mv = m.value();
  return spec.j() / (n - 1.0) * (sv * (sv + 1.0) - 0.75 * n + spec.delta() * (mv * mv - 0.25 * n)) +
         spec.b() * mv;
}

/// Every (S, m) level, ascending S then ascending m.
inline std::vector<EnergyLevel> enumerate_levels(const ClusterSpec& spec) {
  std::vector<EnergyLevel> out;
  for (const SpinSector& sec : sectors(spec.n())) {
    for (int tm = -sec.s.twice; tm <= sec.s.twice; tm += 2) {
      const HalfInt m{tm};
      out.push_back({sec.s, m, level_energy(spec, sec.s, m), sec.g});
    }
  }
  return out;
}

}  // namespace mfent
