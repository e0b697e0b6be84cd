#pragma once

// Unitary-group orbital integrals: exact evaluation for distinct and
// confluent spectra, exact Maclaurin coefficients of the log-integral, and
// the comparison of those coefficients against genus-indexed monotone walk
// series.
//
// Conventions (pinned by the convention test in the unit suite):
//   Vandermonde V(x) = prod_{i<j} (x_i - x_j), paired with det[x_i^{N-j}].
//
// For distinct spectra and coupling z,
//   I(z; a, b) = (prod_{p<N} p!) det[e^{z a_i b_j}]
//                / (z^{N(N-1)/2} V(a) V(b)),        I(0) = 1.
//
// The series route used for coefficient extraction applies divided-difference
// row operations over the a-nodes first.  Divided differences of monomials
// are complete homogeneous polynomials, so row k of the reduced matrix is
//   R_{kj} = sum_t z^t h_t(a_1..a_k) b_j^{t+k-1} / (t+k-1)!,
// which absorbs the z^{N(N-1)/2} vanishing of the raw determinant row by row
// and stays valid when entries of a coincide.  The raw route (entry jets,
// series determinant, shift-divide) is kept and cross-checked at small rank.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sawtooth/combinat.hpp"
#include "sawtooth/hurwitz.hpp"
#include "sawtooth/jets.hpp"
#include "sawtooth/linalg.hpp"
#include "sawtooth/numeric.hpp"
#include "sawtooth/rng.hpp"
#include "json.hpp"

namespace sawtooth {

struct SpectrumPair {
  std::vector<Rational> a;  // may contain repeats
  std::vector<int> b;       // strictly decreasing integers

  void validate() const {
    if (a.size() != b.size()) throw std::invalid_argument("SpectrumPair: size mismatch");
    for (std::size_t i = 1; i < b.size(); ++i)
      if (b[i - 1] <= b[i]) throw std::invalid_argument("SpectrumPair: b must strictly decrease");
  }
};

// Number of triangular interlacing arrays below the particle configuration b,
// as the product form prod_{i<j} (b_i - b_j)/(j - i).  Always a positive
// integer for strictly decreasing integer b; integrality is asserted.
inline BigInt dimension(const std::vector<int>& b) {
  const int n = static_cast<int>(b.size());
  for (int i = 1; i < n; ++i)
    if (b[i - 1] <= b[i]) throw std::invalid_argument("dimension: b must be strictly decreasing");
  BigInt num = 1, den = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      num *= b[i] - b[j];
      den *= j - i;
    }
  if (num % den != 0) throw std::logic_error("dimension: product form not integral");
  BigInt d = num / den;
  if (d <= 0) throw std::logic_error("dimension: nonpositive value");
  return d;
}

namespace detail {

template <class S>
S int_pow(const S& x, long long e) {
  if (e < 0) return S(1) / int_pow(x, -e);
  S r(1), base = x;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Falling factorial b (b-1) ... (b-l+1); valid for negative b.
template <class S>
S falling(long long b, int l) {
  S r(1);
  for (int i = 0; i < l; ++i) r *= S(b - i);
  return r;
}

template <class S>
S vandermonde(const std::vector<S>& x) {
  S v(1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) v *= x[i] - x[j];
  return v;
}

}  // namespace detail

// Exact-form value of the orbital integral with coupling z for distinct
// spectra.  Repeated entries in a must go through orbital_laplace instead.
template <class S>
S hciz_value(const S& z, const std::vector<S>& a, const std::vector<S>& b) {
  const int n = static_cast<int>(a.size());
  if (n == 0 || b.size() != a.size()) throw std::invalid_argument("hciz_value: bad spectra");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (a[i] == a[j])
        throw std::invalid_argument("hciz_value: repeated a entries; use orbital_laplace");
      if (b[i] == b[j])
        throw std::invalid_argument("hciz_value: repeated b entries; use orbital_laplace");
    }
  if (z == S(0)) return S(1);

  using std::exp;
  DenseMatrix<S> m(n, std::vector<S>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = exp(z * a[i] * b[j]);
  S det = dense_det(std::move(m));

  S pref(1);
  for (int p = 1; p < n; ++p) pref *= scalar_from_rational<S>(Rational(factorial(p)));
  return pref * det /
         (detail::int_pow(z, static_cast<long long>(n) * (n - 1) / 2) * detail::vandermonde(a) *
          detail::vandermonde(b));
}

// Orbital integral at z = 1 for arbitrary a (repeats allowed) and a strictly
// decreasing integer particle configuration b, evaluated as a confluent
// character ratio.  Rows at a node of multiplicity m carry successive
// derivatives in x = e^a of x^{b_j} (falling-factorial weights), numerator
// and denominator alike; the confluent-limit factorials cancel in the ratio.
// The Vandermonde correction prod (e^{a_i} - e^{a_j})/(a_i - a_j) degenerates
// to e^{a_i} on coincident pairs.
template <class S>
S orbital_laplace(const std::vector<S>& a, const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  if (n == 0 || b.size() != a.size()) throw std::invalid_argument("orbital_laplace: bad spectra");
  for (int i = 1; i < n; ++i)
    if (b[i - 1] <= b[i])
      throw std::invalid_argument("orbital_laplace: b must strictly decrease");

  using std::exp;

  // Cluster a by exact equality, in order of first occurrence.
  std::vector<std::pair<S, int>> clusters;
  for (const S& v : a) {
    bool found = false;
    for (auto& [cv, cm] : clusters)
      if (cv == v) {
        ++cm;
        found = true;
        break;
      }
    if (!found) clusters.emplace_back(v, 1);
  }

  DenseMatrix<S> num, den;
  for (const auto& [v, mult] : clusters) {
    const S x = exp(v);
    for (int l = 0; l < mult; ++l) {
      std::vector<S> nrow(n), drow(n);
      for (int j = 0; j < n; ++j) {
        nrow[j] = detail::falling<S>(b[static_cast<std::size_t>(j)], l) *
                  detail::int_pow(x, b[static_cast<std::size_t>(j)] - l);
        const long long e = n - 1 - j;  // exponents N-j with j 1-indexed
        drow[j] = detail::falling<S>(e, l) * detail::int_pow(x, e - l);
      }
      num.push_back(std::move(nrow));
      den.push_back(std::move(drow));
    }
  }

  const S dn = dense_det(std::move(den));
  if (dn == S(0)) throw std::domain_error("orbital_laplace: degenerate character denominator");
  const S ratio = dense_det(std::move(num)) / dn;

  S corr(1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (a[i] == a[j])
        corr *= exp(a[i]);
      else
        corr *= (exp(a[i]) - exp(a[j])) / (a[i] - a[j]);
    }

  const S dim = scalar_from_rational<S>(Rational(dimension(b)));
  return ratio / dim * corr;
}

enum class SeriesRoute { divided_difference, raw_determinant };

// Exact Maclaurin coefficients of log I(z; a, b) up to order D.
inline TruncatedSeries<Rational> hciz_log_series(const std::vector<Rational>& a,
                                                 const std::vector<int>& b, int D,
                                                 SeriesRoute route = SeriesRoute::divided_difference) {
  const int n = static_cast<int>(a.size());
  if (n < 1 || b.size() != a.size()) throw std::invalid_argument("hciz_log_series: bad spectra");
  if (D < 1 || D > 16) throw std::invalid_argument("hciz_log_series: need 1 <= D <= 16");
  if (n > 16) throw std::invalid_argument("hciz_log_series: rank too large");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (b[i] == b[j]) throw std::invalid_argument("hciz_log_series: b entries must be distinct");

  const long long m2 = static_cast<long long>(n) * (n - 1) / 2;
  TruncatedSeries<Rational> F(D);

  if (route == SeriesRoute::divided_difference) {
    // h[k][t] = complete homogeneous polynomial h_t(a_1..a_k).
    std::vector<std::vector<Rational>> h(static_cast<std::size_t>(n + 1),
                                         std::vector<Rational>(static_cast<std::size_t>(D + 1), Rational(0)));
    for (int k = 0; k <= n; ++k) h[k][0] = 1;
    for (int k = 1; k <= n; ++k)
      for (int t = 1; t <= D; ++t)
        h[k][t] = h[k - 1][t] + a[static_cast<std::size_t>(k - 1)] * h[k][t - 1];

    std::vector<std::vector<TruncatedSeries<Rational>>> R(
        static_cast<std::size_t>(n),
        std::vector<TruncatedSeries<Rational>>(static_cast<std::size_t>(n), TruncatedSeries<Rational>(D)));
    for (int k = 1; k <= n; ++k) {
      Rational fact = Rational(factorial(k - 1));
      for (int j = 0; j < n; ++j) {
        Rational bpow = detail::int_pow(Rational(b[static_cast<std::size_t>(j)]), k - 1);
        Rational f = fact;
        for (int t = 0; t <= D; ++t) {
          R[k - 1][j][t] = h[k][t] * bpow / f;
          bpow *= b[static_cast<std::size_t>(j)];
          f *= t + k;
        }
      }
    }
    F = series_det_unit(std::move(R));

    std::vector<Rational> brat(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) brat[i] = b[i];
    Rational scale(1);
    for (int p = 1; p < n; ++p) scale *= Rational(factorial(p));
    scale /= detail::vandermonde(brat);
    if (m2 % 2 != 0) scale = -scale;
    F = F.scaled(scale);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (a[i] == a[j])
          throw std::invalid_argument("hciz_log_series: raw route needs distinct a");
    // Working order: D + valuation of the determinant + slack consumed by the
    // valuation-shifting divisions inside Bareiss.
    const long long slack = n >= 3 ? static_cast<long long>(n - 2) * (n - 3) / 2 : 0;
    const int Dwork = static_cast<int>(D + m2 + slack);
    std::vector<std::vector<TruncatedSeries<Rational>>> E(
        static_cast<std::size_t>(n), std::vector<TruncatedSeries<Rational>>(
                                         static_cast<std::size_t>(n), TruncatedSeries<Rational>(Dwork)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Rational c = a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
        Rational term(1);
        for (int t = 0; t <= Dwork; ++t) {
          E[i][j][t] = term;
          term = term * c / (t + 1);
        }
      }
    auto det = series_det(std::move(E)).shift_divide(static_cast<int>(m2));

    std::vector<Rational> brat(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) brat[i] = b[i];
    Rational scale(1);
    for (int p = 1; p < n; ++p) scale *= Rational(factorial(p));
    scale /= detail::vandermonde(a) * detail::vandermonde(brat);
    F = det.scaled(scale).truncated(D);
  }

  if (F[0] != Rational(1))
    throw std::logic_error("hciz_log_series: constant term is not 1 (convention bug)");
  return F.log();
}

// Exact coefficients C_N(alpha, beta) of the log-integral expansion
//   log I = sum_d z^d/d! sum_{alpha,beta |- d} C_N(alpha,beta) p_alpha(a) p_beta(b),
// recovered from order-d log-series values on deterministic sample spectra by
// a Kronecker-structured exact linear solve.
struct CoeffTable {
  int N = 0;
  int d = 0;
  std::map<std::pair<Partition, Partition>, Rational> entries;

  const Rational& at(const Partition& alpha, const Partition& beta) const {
    auto it = entries.find({alpha, beta});
    if (it == entries.end()) throw std::invalid_argument("CoeffTable: missing entry");
    return it->second;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["N"] = N;
    j["d"] = d;
    nlohmann::json e = nlohmann::json::object();
    for (const auto& [key, val] : entries) e[key.first.key() + "|" + key.second.key()] = rational_to_string(val);
    j["entries"] = std::move(e);
    return j;
  }
};

inline CoeffTable extract_coeffs(int N, int d) {
  if (d < 1 || d > 5) throw std::invalid_argument("extract_coeffs: need 1 <= d <= 5");
  if (N < d) throw std::invalid_argument("extract_coeffs: need N >= d");
  if (N > 16) throw std::invalid_argument("extract_coeffs: rank too large");

  const auto parts = partitions_of(d);
  const int P = static_cast<int>(parts.size());

  for (int attempt = 0; attempt < 5; ++attempt) {
    // Deterministic small-integer sample spectra; a new attempt reshuffles.
    CounterRng rng(9176, static_cast<std::uint64_t>(attempt));
    auto draw_distinct = [&](int count, int lo, int hi) {
      std::vector<int> vals;
      while (static_cast<int>(vals.size()) < count) {
        int v = static_cast<int>(rng.uniform_int(lo, hi));
        if (v == 0) continue;
        bool dup = false;
        for (int w : vals) dup |= (w == v);
        if (!dup) vals.push_back(v);
      }
      return vals;
    };

    std::vector<std::vector<Rational>> asamp(static_cast<std::size_t>(P));
    std::vector<std::vector<int>> bsamp(static_cast<std::size_t>(P));
    for (int s = 0; s < P; ++s) {
      auto av = draw_distinct(N, -9, 9);
      asamp[static_cast<std::size_t>(s)].assign(av.begin(), av.end());
      auto bv = draw_distinct(N, -12, 12);
      std::sort(bv.rbegin(), bv.rend());
      bsamp[static_cast<std::size_t>(s)] = std::move(bv);
    }

    DenseMatrix<Rational> A(static_cast<std::size_t>(P), std::vector<Rational>(static_cast<std::size_t>(P)));
    DenseMatrix<Rational> B(static_cast<std::size_t>(P), std::vector<Rational>(static_cast<std::size_t>(P)));
    for (int s = 0; s < P; ++s)
      for (int i = 0; i < P; ++i) {
        A[s][i] = power_sum<Rational>(parts[static_cast<std::size_t>(i)], asamp[static_cast<std::size_t>(s)]);
        std::vector<Rational> brat(bsamp[static_cast<std::size_t>(s)].begin(),
                                   bsamp[static_cast<std::size_t>(s)].end());
        B[s][i] = power_sum<Rational>(parts[static_cast<std::size_t>(i)], brat);
      }
    if (dense_det(A) == Rational(0) || dense_det(B) == Rational(0)) continue;

    Rational dfact = Rational(factorial(d));
    DenseMatrix<Rational> Y(static_cast<std::size_t>(P), std::vector<Rational>(static_cast<std::size_t>(P)));
    for (int s = 0; s < P; ++s)
      for (int t = 0; t < P; ++t) {
        auto ls = hciz_log_series(asamp[static_cast<std::size_t>(s)], bsamp[static_cast<std::size_t>(t)], d);
        Y[s][t] = ls[d] * dfact;
      }

    // Y = A C B^T: solve A Z = Y, then B C^T = Z^T.
    auto Z = dense_solve(A, Y);
    DenseMatrix<Rational> Zt(static_cast<std::size_t>(P), std::vector<Rational>(static_cast<std::size_t>(P)));
    for (int i = 0; i < P; ++i)
      for (int j = 0; j < P; ++j) Zt[j][i] = Z[i][j];
    auto Ct = dense_solve(B, Zt);

    CoeffTable table;
    table.N = N;
    table.d = d;
    for (int i = 0; i < P; ++i)
      for (int j = 0; j < P; ++j)
        table.entries[{parts[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(j)]}] = Ct[j][i];
    return table;
  }
  throw std::runtime_error("extract_coeffs: no nonsingular sample design after 5 attempts");
}

// Comparison of exact C_N(alpha,beta) against genus-truncated partial sums of
// the signed walk-count series
//   C_N = (-1)^{l(a)+l(b)} N^{2-d-l(a)-l(b)} sum_g H_g(alpha,beta) / N^{2g}.
struct GenusSeriesReport {
  struct Entry {
    Partition alpha, beta;
    Rational exact;
    std::vector<Rational> partial;   // partial sums for g = 0..g_max
    std::vector<double> abs_error;   // |exact - partial(g)|
    double rel_error_final = 0.0;
    bool error_decreased = false;    // |err(g_max)| < |err(0)| or err(0) == 0
  };
  int N = 0, d = 0, g_max = 0;
  std::vector<Entry> entries;

  bool pass(double rel_tol) const {
    for (const auto& e : entries) {
      if (!(e.rel_error_final < rel_tol)) return false;
      if (!e.error_decreased) return false;
    }
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["N"] = N;
    j["d"] = d;
    j["g_max"] = g_max;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
      nlohmann::json je;
      je["alpha"] = e.alpha.key();
      je["beta"] = e.beta.key();
      je["exact"] = rational_to_string(e.exact);
      je["abs_error"] = e.abs_error;
      je["rel_error_final"] = e.rel_error_final;
      je["error_decreased"] = e.error_decreased;
      arr.push_back(std::move(je));
    }
    j["pairs"] = std::move(arr);
    return j;
  }
};

inline GenusSeriesReport verify_genus_expansion(int N, int d, int g_max,
                                                HurwitzTable* table = nullptr,
                                                const WalkBudget& budget = {},
                                                const CoeffTable* precomputed = nullptr) {
  if (d < 1 || d > 4) throw std::invalid_argument("verify_genus_expansion: need 1 <= d <= 4");
  if (N < d) throw std::invalid_argument("verify_genus_expansion: need N >= d");
  if (g_max < 0) throw std::invalid_argument("verify_genus_expansion: g_max must be >= 0");

  CoeffTable local;
  const CoeffTable* coeffs = precomputed;
  if (!coeffs) {
    local = extract_coeffs(N, d);
    coeffs = &local;
  }

  GenusSeriesReport report;
  report.N = N;
  report.d = d;
  report.g_max = g_max;

  const auto parts = partitions_of(d);
  for (const auto& alpha : parts)
    for (const auto& beta : parts) {
      GenusSeriesReport::Entry entry;
      entry.alpha = alpha;
      entry.beta = beta;
      entry.exact = coeffs->at(alpha, beta);

      const int la = alpha.length(), lb = beta.length();
      Rational prefactor = detail::int_pow(Rational(N), 2 - d - la - lb);
      if ((la + lb) % 2 != 0) prefactor = -prefactor;

      Rational partial(0);
      for (int g = 0; g <= g_max; ++g) {
        const std::uint64_t hg = monotone_by_genus(g, alpha, beta, table, budget);
        partial += Rational(static_cast<long long>(hg)) /
                   detail::int_pow(Rational(N), 2LL * g);
        entry.partial.push_back(prefactor * partial);
        Rational err = entry.exact - entry.partial.back();
        entry.abs_error.push_back(std::abs(to_double(err)));
      }
      const double exact_abs = std::abs(to_double(entry.exact));
      entry.rel_error_final = exact_abs > 0 ? entry.abs_error.back() / exact_abs : entry.abs_error.back();
      entry.error_decreased = entry.abs_error.front() == 0.0 ||
                              entry.abs_error.back() < entry.abs_error.front();
      report.entries.push_back(std::move(entry));
    }
  return report;
}

}  // namespace sawtooth
