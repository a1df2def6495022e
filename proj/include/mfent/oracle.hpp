#pragma once

// Brute-force reference: the full 2^N Hamiltonian in the computational basis,
// block-diagonalized by the number of up spins, with the two-site state
// obtained by an explicit partial trace.
//
// Basis convention: site i is bit (N-1-i) of the configuration, a set bit is
// spin up. Site 0 is the most significant bit.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mfent/entanglement.hpp"
#include "mfent/error.hpp"
#include "mfent/jacobi.hpp"
#include "mfent/sectors.hpp"
#include "mfent/thermo.hpp"

namespace mfent::oracle {

inline constexpr int kOracleMaxN = 12;

struct SectorBasis {
  int n = 0;
  int k = 0;                          ///< number of up spins
  std::vector<std::uint32_t> states;  ///< ascending
};

struct DenseBlock {
  int k = 0;
  std::size_t dim = 0;
  std::vector<double> entries;  ///< row-major dim x dim

  double operator()(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
};

struct ReducedPairState {
  Mat4 rho{};
};

/// One diagonalized block with its basis.
struct SolvedBlock {
  SectorBasis basis;
  SymmetricEigen<double> eig;
};

namespace detail {

inline void check_capacity(int n) {
  if (n > kOracleMaxN)
    throw CapacityError("oracle supports n <= " + std::to_string(kOracleMaxN) + ", got n=" +
                        std::to_string(n));
}

inline bool spin_up(std::uint32_t state, int n, int site) {
  return (state >> (n - 1 - site)) & 1u;
}

}  // namespace detail

inline SectorBasis sector_basis(int n, int k) {
  detail::check_capacity(n);
  if (k < 0 || k > n) throw DomainError("sector_basis: k out of range");
  SectorBasis b{n, k, {}};
  const std::uint32_t full = 1u << n;
  for (std::uint32_t s = 0; s < full; ++s)
    if (std::popcount(s) == k) b.states.push_back(s);
  return b;
}

/// Matrix of H restricted to the sector with k up spins.
inline DenseBlock build_block(const ClusterSpec& spec, int k) {
  const int n = spec.n();
  detail::check_capacity(n);
  const SectorBasis basis = sector_basis(n, k);
  const std::size_t dim = basis.states.size();
  const double coupling = spec.j() / (n - 1);

  std::vector<std::uint32_t> index(std::size_t{1} << n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t a = 0; a < dim; ++a) index[basis.states[a]] = static_cast<std::uint32_t>(a);

  DenseBlock blk{k, dim, std::vector<double>(dim * dim, 0.0)};
  for (std::size_t a = 0; a < dim; ++a) {
    const std::uint32_t st = basis.states[a];
    double zz = 0.0;  // sum over ordered pairs i != j of s_iz s_jz
    double sz = 0.0;
    for (int i = 0; i < n; ++i) {
      const double si = detail::spin_up(st, n, i) ? 0.5 : -0.5;
      sz += si;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        zz += si * (detail::spin_up(st, n, j) ? 0.5 : -0.5);
      }
    }
    blk.entries[a * dim + a] = coupling * (1.0 + spec.delta()) * zz + spec.b() * sz;

    // (s_i+ s_j- + s_i- s_j+)/2 has element 1/2 between |..+..-..> and
    // |..-..+..>; the ordered-pair sum counts each unordered pair twice.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (detail::spin_up(st, n, i) == detail::spin_up(st, n, j)) continue;
        const std::uint32_t flipped = st ^ (1u << (n - 1 - i)) ^ (1u << (n - 1 - j));
        blk.entries[a * dim + index[flipped]] += coupling;
      }
    }
  }
  return blk;
}

inline SolvedBlock solve_block(const ClusterSpec& spec, int k) {
  DenseBlock blk = build_block(spec, k);
  try {
    return {sector_basis(spec.n(), k), jacobi_eigen(std::move(blk.entries), blk.dim)};
  } catch (const NumericalError& e) {
    throw NumericalError("oracle block k=" + std::to_string(k) + ": " + e.what());
  }
}

inline std::vector<SolvedBlock> solve_all(const ClusterSpec& spec) {
  detail::check_capacity(spec.n());
  std::vector<SolvedBlock> out;
  for (int k = 0; k <= spec.n(); ++k) out.push_back(solve_block(spec, k));
  return out;
}

/// All 2^N eigenvalues, ascending.
inline std::vector<double> spectrum(const ClusterSpec& spec) {
  std::vector<double> out;
  for (const auto& sb : solve_all(spec)) out.insert(out.end(), sb.eig.values.begin(), sb.eig.values.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// The (S, m) spectrum expanded by multiplicity, ascending; the counterpart of
/// spectrum() computed from the sector decomposition.
inline std::vector<double> level_spectrum(const ClusterSpec& spec) {
  std::vector<double> out;
  for (const auto& lv : enumerate_levels(spec)) out.insert(out.end(), lv.multiplicity, lv.energy);
  std::sort(out.begin(), out.end());
  return out;
}

/// Reduced state of sites (site_a, site_b) from already diagonalized blocks.
inline ReducedPairState thermal_pair_state(const ClusterSpec& spec, const std::vector<SolvedBlock>& blocks,
                                           Temperature t, int site_a = 0, int site_b = 1) {
  const int n = spec.n();
  if (site_a < 0 || site_b < 0 || site_a >= n || site_b >= n || site_a == site_b)
    throw DomainError("thermal_pair_state: invalid site pair");

  double e_min = std::numeric_limits<double>::infinity();
  for (const auto& sb : blocks) e_min = std::min(e_min, sb.eig.values.front());

  auto weight = [&](double e) {
    if (t.is_zero()) return e - e_min <= kEnergyDegeneracyTol ? 1.0 : 0.0;
    return std::exp(-t.beta() * (e - e_min));
  };

  const std::uint32_t bit_a = 1u << (n - 1 - site_a);
  const std::uint32_t bit_b = 1u << (n - 1 - site_b);
  // local pair index: 0=|++>, 1=|+->, 2=|-+>, 3=|-->
  auto local = [&](std::uint32_t st) { return ((st & bit_a) ? 0 : 2) + ((st & bit_b) ? 0 : 1); };
  auto with_local = [&](std::uint32_t rest, int l) {
    return rest | ((l & 2) ? 0u : bit_a) | ((l & 1) ? 0u : bit_b);
  };

  std::vector<std::uint32_t> index(std::size_t{1} << n, std::numeric_limits<std::uint32_t>::max());
  Mat4 acc{};
  double z = 0.0;
  for (const auto& sb : blocks) {
    const auto& states = sb.basis.states;
    const std::size_t dim = states.size();
    for (std::size_t a = 0; a < dim; ++a) index[states[a]] = static_cast<std::uint32_t>(a);
    for (std::size_t k = 0; k < dim; ++k) {
      const double p = weight(sb.eig.values[k]);
      if (p == 0.0) continue;
      z += p;
      for (std::size_t a = 0; a < dim; ++a) {
        const std::uint32_t st = states[a];
        const double amp = sb.eig.vector_entry(a, k);
        if (amp == 0.0) continue;
        const int la = local(st);
        const std::uint32_t rest = st & ~(bit_a | bit_b);
        for (int lb = 0; lb < 4; ++lb) {
          const std::uint32_t other = with_local(rest, lb);
          if (std::popcount(other) != sb.basis.k) continue;
          acc[la * 4 + lb] += p * amp * sb.eig.vector_entry(index[other], k);
        }
      }
    }
  }
  ReducedPairState out;
  for (int i = 0; i < 16; ++i) out.rho[i] = acc[i] / z;
  return out;
}

inline ReducedPairState thermal_pair_state(const ClusterSpec& spec, Temperature t, int site_a = 0,
                                           int site_b = 1) {
  return thermal_pair_state(spec, solve_all(spec), t, site_a, site_b);
}

inline double oracle_concurrence(const ClusterSpec& spec, Temperature t) {
  return wootters(thermal_pair_state(spec, t).rho);
}

}  // namespace mfent::oracle
