#pragma once

// Cyclic Jacobi eigensolver for dense real symmetric matrices.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mfent/error.hpp"

namespace mfent {

struct JacobiOptions {
  double off_tol = 1e-13;  ///< stop when ||offdiag||_F <= off_tol * max(1, ||A||_F)
  int max_sweeps = 64;
  bool want_vectors = true;
};

template <std::floating_point T>
struct SymmetricEigen {
  std::size_t n = 0;
  std::vector<T> values;   ///< ascending
  std::vector<T> vectors;  ///< row-major n x n, column k is the eigenvector of values[k]
  int sweeps = 0;

  T vector_entry(std::size_t row, std::size_t k) const { return vectors[row * n + k]; }
};

/// Diagonalizes the symmetric row-major n x n matrix `a`. Only symmetry up to
/// rounding is assumed; the upper triangle drives the rotations.
template <std::floating_point T>
SymmetricEigen<T> jacobi_eigen(std::vector<T> a, std::size_t n, const JacobiOptions& opt = {}) {
  if (a.size() != n * n) throw DomainError("jacobi_eigen: matrix size mismatch");
  auto at = [&](std::size_t r, std::size_t c) -> T& { return a[r * n + c]; };

  // Accumulated rotations, stored transposed: row k is the k-th vector.
  std::vector<T> v;
  if (opt.want_vectors) {
    v.assign(n * n, T(0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = T(1);
  }

  T norm2 = 0;
  for (T x : a) norm2 += x * x;
  const T tol = static_cast<T>(opt.off_tol) * std::max(T(1), std::sqrt(norm2));

  auto off_norm = [&] {
    T s = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += at(p, q) * at(p, q);
    return std::sqrt(2 * s);
  };

  int sweep = 0;
  for (; off_norm() > tol; ++sweep) {
    if (sweep >= opt.max_sweeps)
      throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(opt.max_sweeps) +
                           " sweeps (n=" + std::to_string(n) + ")");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T apq = at(p, q);
        if (apq == T(0)) continue;
        const T app = at(p, p);
        const T aqq = at(q, q);
        // Skip rotations that cannot change the diagonal in working precision.
        if (std::abs(apq) < std::numeric_limits<T>::epsilon() * 1e-3 * (std::abs(app) + std::abs(aqq)))
        {
          at(p, q) = at(q, p) = T(0);
          continue;
        }
        const T theta = (aqq - app) / (2 * apq);
        T t = T(1) / (std::abs(theta) + std::sqrt(theta * theta + T(1)));
        if (theta < 0) t = -t;
        const T c = T(1) / std::sqrt(t * t + T(1));
        const T s = t * c;
        const T tau = s / (T(1) + c);

        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = at(q, p) = T(0);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const T arp = at(r, p);
          const T arq = at(r, q);
          const T nrp = arp - s * (arq + tau * arp);
          const T nrq = arq + s * (arp - tau * arq);
          at(r, p) = at(p, r) = nrp;
          at(r, q) = at(q, r) = nrq;
        }
        if (opt.want_vectors) {
          T* vp = v.data() + p * n;
          T* vq = v.data() + q * n;
          for (std::size_t r = 0; r < n; ++r) {
            T& vrp = vp[r];
            T& vrq = vq[r];
            const T x = vrp;
            const T y = vrq;
            vrp = x - s * (y + tau * x);
            vrq = y + s * (x - tau * y);
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return at(i, i) < at(j, j); });

  SymmetricEigen<T> out;
  out.n = n;
  out.sweeps = sweep;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = at(order[k], order[k]);
  if (opt.want_vectors) {
    out.vectors.resize(n * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) out.vectors[r * n + k] = v[order[k] * n + r];
  }
  return out;
}

}  // namespace mfent
