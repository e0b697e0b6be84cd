#pragma once

// Free cumulants from moments, the genus-zero one-part walk combination K_d,
// and the classical cumulants of uniform measure on [0,1].
//
// free_cumulants inverts psi_d = sum over noncrossing partitions of prod
// kappa_{|block|} through the functional equation M(z) = 1 + sum_k kappa_k
// z^k M(z)^k (block-of-the-first-element removal), which costs O(D^3) scalar
// operations instead of a sum over all pairs of noncrossing partitions.
//
// monotone_K computes K_d = sum over beta of (-1)^{1+len(beta)}
// H_0(d,beta) psi_beta from genus-zero monotone walk counts.  The identity
// K_d = (d-1)! kappa_d is asserted by the test suite, never assumed here:
// the two sides come from independent machinery.

#include <vector>

#include "sawtooth/combinat.hpp"
#include "sawtooth/hurwitz.hpp"
#include "sawtooth/jets.hpp"
#include "sawtooth/numeric.hpp"

namespace sawtooth {

// psi[m-1] is the m-th moment.
template <class S>
using MomentVector = std::vector<S>;

// kappa[m-1] is the m-th free cumulant.
template <class S>
std::vector<S> free_cumulants(const MomentVector<S>& psi) {
  const int D = static_cast<int>(psi.size());
  if (D < 1) throw std::invalid_argument("free_cumulants: need at least one moment");
  if (D > 10) throw std::invalid_argument("free_cumulants: D must be <= 10");

  TruncatedSeries<S> M(D);
  M[0] = S(1);
  for (int m = 1; m <= D; ++m) M[m] = psi[static_cast<std::size_t>(m - 1)];

  // Powers M^k for k = 1..D-1.
  std::vector<TruncatedSeries<S>> Mpow;
  Mpow.push_back(M);
  for (int k = 2; k < D; ++k) Mpow.push_back(Mpow.back() * M);

  std::vector<S> kappa(static_cast<std::size_t>(D), S(0));
  for (int n = 1; n <= D; ++n) {
    S acc = psi[static_cast<std::size_t>(n - 1)];
    for (int k = 1; k < n; ++k)
      acc -= kappa[static_cast<std::size_t>(k - 1)] * Mpow[static_cast<std::size_t>(k - 1)][n - k];
    kappa[static_cast<std::size_t>(n - 1)] = acc;
  }
  return kappa;
}

// K_d from genus-zero monotone walk counts with one-part left profile.
template <class S>
S monotone_K(int d, const MomentVector<S>& psi, HurwitzTable* table = nullptr,
             const WalkBudget& budget = {}) {
  if (d < 1 || d > 6) throw std::invalid_argument("monotone_K: need 1 <= d <= 6");
  if (static_cast<int>(psi.size()) < d)
    throw std::invalid_argument("monotone_K: need at least d moments");
  const Partition one_part{std::vector<int>{d}};
  S result(0);
  for (const auto& beta : partitions_of(d)) {
    const std::uint64_t h0 = monotone_by_genus(0, one_part, beta, table, budget);
    if (h0 == 0) continue;
    S term = S(static_cast<long long>(h0));
    for (int part : beta.parts) term *= psi[static_cast<std::size_t>(part - 1)];
    if (beta.length() % 2 == 0) term = -term;  // sign (-1)^{1+len(beta)}
    result += term;
  }
  return result;
}

// Classical cumulants c_1..c_D of uniform measure on [0,1], exact:
// log((e^a - 1)/a) = sum c_d a^d / d!.
inline std::vector<Rational> uniform01_cumulants(int D) {
  if (D < 1 || D > 20) throw std::invalid_argument("uniform01_cumulants: need 1 <= D <= 20");
  // (e^a - 1)/a has coefficients 1/(n+1)!.
  TruncatedSeries<Rational> s(D);
  Rational fact(1);
  for (int n = 0; n <= D; ++n) {
    fact *= n + 1;
    s[n] = Rational(1) / fact;
  }
  const auto l = s.log();
  std::vector<Rational> c(static_cast<std::size_t>(D));
  Rational dfact(1);
  for (int d = 1; d <= D; ++d) {
    dfact *= d;
    c[static_cast<std::size_t>(d - 1)] = l[d] * dfact;
  }
  return c;
}

}  // namespace sawtooth
