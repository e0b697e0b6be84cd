#pragma once

// Order-D truncated power series ("jets") over exact rationals or floats,
// with exp/log and determinants of series matrices.
//
// Division by a series whose constant term vanishes is only available through
// shift_divide, which divides by z^m after checking that the first m
// coefficients vanish (exactly in exact mode, below a relative threshold in
// float mode).  Determinants of matrices that are singular at z = 0 vanish to
// positive order and flow through exactly this path.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sawtooth/numeric.hpp"

namespace sawtooth {

template <class S>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order) : c_(static_cast<std::size_t>(order) + 1, S(0)) {
    if (order < 0) throw std::invalid_argument("TruncatedSeries: negative order");
  }

  static TruncatedSeries constant(const S& value, int order) {
    TruncatedSeries s(order);
    s.c_[0] = value;
    return s;
  }

  static TruncatedSeries variable(int order) {
    TruncatedSeries s(order);
    if (order >= 1) s.c_[1] = S(1);
    return s;
  }

  static TruncatedSeries from_coeffs(std::vector<S> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("TruncatedSeries: empty coefficient list");
    TruncatedSeries s(static_cast<int>(coeffs.size()) - 1);
    s.c_ = std::move(coeffs);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const S& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  S& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<S>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const S& v : c_)
      if (v != S(0)) return false;
    return true;
  }

  // Index of the first nonzero coefficient; order()+1 when identically zero.
  int valuation() const {
    for (int i = 0; i <= order(); ++i)
      if (c_[static_cast<std::size_t>(i)] != S(0)) return i;
    return order() + 1;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }

  TruncatedSeries operator-() const {
    TruncatedSeries r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_same(b);
    const int D = a.order();
    TruncatedSeries r(D);
    for (int i = 0; i <= D; ++i) {
      if (a.c_[static_cast<std::size_t>(i)] == S(0)) continue;
      for (int j = 0; i + j <= D; ++j)
        r.c_[static_cast<std::size_t>(i + j)] +=
            a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
    }
    return r;
  }

  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  TruncatedSeries scaled(const S& k) const {
    TruncatedSeries r(*this);
    for (auto& v : r.c_) v *= k;
    return r;
  }

  // Division by a series with nonzero constant term.
  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_same(b);
    if (b.c_[0] == S(0))
      throw std::domain_error("TruncatedSeries: division by series with zero constant term");
    const int D = a.order();
    TruncatedSeries q(D);
    for (int n = 0; n <= D; ++n) {
      S acc = a.c_[static_cast<std::size_t>(n)];
      for (int k = 1; k <= n; ++k)
        acc -= b.c_[static_cast<std::size_t>(k)] * q.c_[static_cast<std::size_t>(n - k)];
      q.c_[static_cast<std::size_t>(n)] = acc / b.c_[0];
    }
    return q;
  }

  // Divide by z^m.  The first m coefficients must vanish: exactly in exact
  // mode, below 1e-12 * max|coeff| in float mode.  The top m coefficients of
  // the result are unknown and set to zero; callers are expected to have
  // built in enough working order.
  TruncatedSeries shift_divide(int m) const {
    if (m < 0 || m > order() + 1)
      throw std::invalid_argument("shift_divide: bad power");
    for (int i = 0; i < m; ++i) {
      if constexpr (is_exact_scalar_v<S>) {
        if (c_[static_cast<std::size_t>(i)] != S(0))
          throw std::domain_error("shift_divide: leading coefficient does not vanish");
      } else {
        S mx(0);
        for (const S& v : c_) mx = std::max(mx, scalar_abs(v));
        if (scalar_abs(c_[static_cast<std::size_t>(i)]) > S(1e-12) * mx)
          throw std::domain_error("shift_divide: leading coefficient does not vanish (float)");
      }
    }
    TruncatedSeries r(order());
    for (int i = m; i <= order(); ++i) r.c_[static_cast<std::size_t>(i - m)] = c_[static_cast<std::size_t>(i)];
    return r;
  }

  // exp of a series with zero constant term: e_n = (1/n) sum k s_k e_{n-k}.
  TruncatedSeries exp() const {
    if (c_[0] != S(0)) throw std::domain_error("series exp: constant term must be 0");
    const int D = order();
    TruncatedSeries e(D);
    e.c_[0] = S(1);
    for (int n = 1; n <= D; ++n) {
      S acc(0);
      for (int k = 1; k <= n; ++k)
        acc += S(k) * c_[static_cast<std::size_t>(k)] * e.c_[static_cast<std::size_t>(n - k)];
      e.c_[static_cast<std::size_t>(n)] = acc / S(n);
    }
    return e;
  }

  // log of a series with unit constant term: l_n = s_n - (1/n) sum_{k<n} k l_k s_{n-k}.
  TruncatedSeries log() const {
    if (c_[0] != S(1)) throw std::domain_error("series log: constant term must be 1");
    const int D = order();
    TruncatedSeries l(D);
    for (int n = 1; n <= D; ++n) {
      S acc(0);
      for (int k = 1; k < n; ++k)
        acc += S(k) * l.c_[static_cast<std::size_t>(k)] * c_[static_cast<std::size_t>(n - k)];
      l.c_[static_cast<std::size_t>(n)] = c_[static_cast<std::size_t>(n)] - acc / S(n);
    }
    return l;
  }

  TruncatedSeries truncated(int new_order) const {
    if (new_order > order()) throw std::invalid_argument("truncated: cannot extend");
    TruncatedSeries r(new_order);
    for (int i = 0; i <= new_order; ++i) r.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.c_ == b.c_; }

 private:
  void check_same(const TruncatedSeries& o) const {
    if (order() != o.order())
      throw std::invalid_argument("TruncatedSeries: mixed orders in one expression");
  }

  std::vector<S> c_;
};

namespace detail {

// Exact division of truncated series valid when the division is exact in the
// underlying polynomial ring: shift out the divisor's valuation (numerator
// must vanish to the same order), then unit-divide.  The top val(b)
// coefficients of the result are unknown; Bareiss callers account for this.
template <class S>
TruncatedSeries<S> exact_quotient(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  const int v = b.valuation();
  if (v > b.order()) throw std::domain_error("exact_quotient: division by zero series");
  if (v == 0) return a / b;
  return a.shift_divide(v) / b.shift_divide(v);
}

}  // namespace detail

// Determinant of a matrix of series that is nonsingular at z = 0: ordinary
// elimination, dividing only by unit series, so no truncation order is lost.
// Each step's pivot exists because the z=0 Schur complements of a matrix with
// invertible constant term are invertible.
template <class S>
TruncatedSeries<S> series_det_unit(std::vector<std::vector<TruncatedSeries<S>>> m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("series_det_unit: empty matrix");
  const int D = m[0][0].order();
  TruncatedSeries<S> det = TruncatedSeries<S>::constant(S(1), D);
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    if constexpr (is_exact_scalar_v<S>) {
      for (std::size_t i = k; i < n && piv == n; ++i)
        if (m[i][k][0] != S(0)) piv = i;
    } else {
      S best(0);
      for (std::size_t i = k; i < n; ++i)
        if (scalar_abs(m[i][k][0]) > best) {
          best = scalar_abs(m[i][k][0]);
          piv = i;
        }
    }
    if (piv == n)
      throw std::domain_error("series_det_unit: matrix singular at z=0");
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      auto factor = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= factor * m[k][j];
    }
  }
  return sign < 0 ? -det : det;
}

// Determinant of a square matrix of series.
//
// Exact mode: fraction-free Bareiss.  Every division is an exact polynomial
// division by the previous pivot; pivots are chosen by minimal valuation so
// that matrices singular at z = 0 (valuation grows along the elimination) are
// handled.  With inputs of order D the result is correct to order
// D - loss, where loss is bounded by the pivot valuations encountered;
// callers working with z=0-singular matrices must pad the working order
// (see the orbital-transform series code for the padding rule).
//
// Float mode: ordinary elimination with partial pivoting on the constant
// term.
template <class S>
TruncatedSeries<S> series_det(std::vector<std::vector<TruncatedSeries<S>>> m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("series_det: empty matrix");
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("series_det: matrix not square");
  const int D = m[0][0].order();
  for (const auto& row : m)
    for (const auto& e : row)
      if (e.order() != D) throw std::invalid_argument("series_det: mixed orders");

  if (n == 1) return m[0][0];

  int sign = 1;
  if constexpr (is_exact_scalar_v<S>) {
    TruncatedSeries<S> prev = TruncatedSeries<S>::constant(S(1), D);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      // Pivot: minimal valuation in column k at or below row k.
      std::size_t piv = n;
      int best_val = D + 2;
      for (std::size_t i = k; i < n; ++i) {
        const int v = m[i][k].valuation();
        if (v < best_val) {
          best_val = v;
          piv = i;
        }
      }
      if (piv == n || best_val > D) return TruncatedSeries<S>(D);  // singular to stored order
      if (piv != k) {
        std::swap(m[piv], m[k]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j)
          m[i][j] = detail::exact_quotient(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      prev = m[k][k];
    }
    auto det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
  } else {
    TruncatedSeries<S> det = TruncatedSeries<S>::constant(S(1), D);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (scalar_abs(m[i][k][0]) > scalar_abs(m[piv][k][0])) piv = i;
      if (m[piv][k][0] == S(0))
        throw std::domain_error("series_det: float mode requires pivots nonsingular at z=0");
      if (piv != k) {
        std::swap(m[piv], m[k]);
        sign = -sign;
      }
      det *= m[k][k];
      for (std::size_t i = k + 1; i < n; ++i) {
        auto factor = m[i][k] / m[k][k];
        for (std::size_t j = k; j < n; ++j) m[i][j] -= factor * m[k][j];
      }
    }
    return sign < 0 ? -det : det;
  }
}

}  // namespace sawtooth
