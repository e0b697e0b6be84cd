#pragma once

// Small dense linear algebra over generic scalars (exact rationals, doubles,
// high-precision floats).  Pivoting is by magnitude for float scalars and by
// first-nonzero for exact ones.

#include <stdexcept>
#include <vector>

#include "sawtooth/numeric.hpp"

namespace sawtooth {

template <class S>
using DenseMatrix = std::vector<std::vector<S>>;

namespace detail {

template <class S>
std::size_t pick_pivot(const DenseMatrix<S>& m, std::size_t col, std::size_t from) {
  const std::size_t n = m.size();
  if constexpr (is_exact_scalar_v<S>) {
    for (std::size_t i = from; i < n; ++i)
      if (m[i][col] != S(0)) return i;
    return n;
  } else {
    std::size_t best = n;
    S best_abs(0);
    for (std::size_t i = from; i < n; ++i) {
      S a = scalar_abs(m[i][col]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    return best;
  }
}

}  // namespace detail

template <class S>
S dense_det(DenseMatrix<S> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("dense_det: matrix not square");
  S det(1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t piv = detail::pick_pivot(m, k, k);
    if (piv >= n || m[piv][k] == S(0)) return S(0);
    if (piv != k) {
      std::swap(m[piv], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      S f = m[i][k] / m[k][k];
      if (f == S(0)) continue;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

// Gauss-Jordan inverse.  Throws std::domain_error when singular.
template <class S>
DenseMatrix<S> dense_inverse(DenseMatrix<S> m) {
  const std::size_t n = m.size();
  DenseMatrix<S> inv(n, std::vector<S>(n, S(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = S(1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t piv = detail::pick_pivot(m, k, k);
    if (piv >= n || m[piv][k] == S(0)) throw std::domain_error("dense_inverse: singular matrix");
    if (piv != k) {
      std::swap(m[piv], m[k]);
      std::swap(inv[piv], inv[k]);
    }
    const S p = m[k][k];
    for (std::size_t j = 0; j < n; ++j) {
      m[k][j] /= p;
      inv[k][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const S f = m[i][k];
      if (f == S(0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }
  return inv;
}

// Solve A X = Y for X where Y has arbitrary column count.
template <class S>
DenseMatrix<S> dense_solve(DenseMatrix<S> a, DenseMatrix<S> y) {
  const std::size_t n = a.size();
  if (y.size() != n) throw std::invalid_argument("dense_solve: dimension mismatch");
  const std::size_t w = y.empty() ? 0 : y[0].size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t piv = detail::pick_pivot(a, k, k);
    if (piv >= n || a[piv][k] == S(0)) throw std::domain_error("dense_solve: singular matrix");
    if (piv != k) {
      std::swap(a[piv], a[k]);
      std::swap(y[piv], y[k]);
    }
    const S p = a[k][k];
    for (std::size_t j = 0; j < n; ++j) a[k][j] /= p;
    for (std::size_t j = 0; j < w; ++j) y[k][j] /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const S f = a[i][k];
      if (f == S(0)) continue;
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[k][j];
      for (std::size_t j = 0; j < w; ++j) y[i][j] -= f * y[k][j];
    }
  }
  return y;
}

}  // namespace sawtooth
