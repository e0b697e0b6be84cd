#pragma once

// GUE sampling, Hermitian eigenvalues, and two-sample comparisons.
//
// Normalization: diagonal entries are standard real Gaussians, off-diagonal
// real and imaginary parts are independent Gaussians of variance 1/2, so
// E|X_ij|^2 = 1 and log E[e^{Tr AX}] = Tr A^2 / 2.  This is the matrix the
// rescaled bead vectors are compared against, so the normalization is pinned
// here and nowhere else.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sawtooth/rng.hpp"
#include "json.hpp"

namespace sawtooth {

// Hermitian matrix stored as strict lower triangle plus real diagonal, so
// Hermitian symmetry is exact by construction.
struct HermitianMatrix {
  int k = 0;
  std::vector<double> diag;                  // k real entries
  std::vector<std::complex<double>> lower;   // row-major strict lower triangle

  static HermitianMatrix zero(int k) {
    HermitianMatrix h;
    h.k = k;
    h.diag.assign(static_cast<std::size_t>(k), 0.0);
    h.lower.assign(static_cast<std::size_t>(k) * (k - 1) / 2, {0.0, 0.0});
    return h;
  }

  std::complex<double>& at_lower(int i, int j) {
    // requires i > j
    return lower[static_cast<std::size_t>(i) * (i - 1) / 2 + j];
  }
  const std::complex<double>& at_lower(int i, int j) const {
    return lower[static_cast<std::size_t>(i) * (i - 1) / 2 + j];
  }

  Eigen::MatrixXcd full() const {
    Eigen::MatrixXcd m(k, k);
    for (int i = 0; i < k; ++i) {
      m(i, i) = diag[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) {
        m(i, j) = at_lower(i, j);
        m(j, i) = std::conj(at_lower(i, j));
      }
    }
    return m;
  }

  double trace() const {
    double t = 0;
    for (double d : diag) t += d;
    return t;
  }

  double frobenius_sq() const {
    double t = 0;
    for (double d : diag) t += d * d;
    for (const auto& z : lower) t += 2.0 * std::norm(z);
    return t;
  }
};

inline HermitianMatrix sample_gue(int k, CounterRng& rng) {
  if (k < 1) throw std::invalid_argument("sample_gue: k must be >= 1");
  HermitianMatrix h = HermitianMatrix::zero(k);
  const double off_sigma = std::sqrt(0.5);
  for (int i = 0; i < k; ++i) {
    h.diag[static_cast<std::size_t>(i)] = rng.gaussian();
    for (int j = 0; j < i; ++j)
      h.at_lower(i, j) = {off_sigma * rng.gaussian(), off_sigma * rng.gaussian()};
  }
  return h;
}

inline HermitianMatrix sample_gue(int k, std::uint64_t seed, std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  return sample_gue(k, rng);
}

// Eigenvalues sorted decreasing, accurate to 1e-10 absolute.
inline std::vector<double> eigenvalues_sorted(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.full(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues_sorted: eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(static_cast<std::size_t>(h.k));
  for (int i = 0; i < h.k; ++i) out[static_cast<std::size_t>(i)] = ev(h.k - 1 - i);
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i - 1] < out[i]) throw std::logic_error("eigenvalues_sorted: ordering violated");
  return out;
}

// Asymptotic Kolmogorov distribution Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
inline double kolmogorov_pvalue(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

inline KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    // Advance both sides through ties so the CDFs are compared at the value.
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_pvalue(d * std::sqrt(nx * ny / (nx + ny)));
  return r;
}

// Per-coordinate two-sample KS between two batches of ordered k-vectors,
// plus first and second power-sum means with standard errors.
struct CompareReport {
  struct Coordinate {
    int index = 0;  // 1-based
    double ks_statistic = 0.0;
    double p_value = 0.0;
  };
  struct PowerSumStats {
    double mean_a = 0.0, se_a = 0.0;
    double mean_b = 0.0, se_b = 0.0;
  };
  std::vector<Coordinate> coordinates;
  PowerSumStats p1, p2;

  nlohmann::json to_json() const {
    nlohmann::json j;
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& c : coordinates)
      coords.push_back({{"coordinate", c.index}, {"ks_statistic", c.ks_statistic}, {"p_value", c.p_value}});
    j["coordinates"] = std::move(coords);
    j["p1"] = {{"mean_a", p1.mean_a}, {"se_a", p1.se_a}, {"mean_b", p1.mean_b}, {"se_b", p1.se_b}};
    j["p2"] = {{"mean_a", p2.mean_a}, {"se_a", p2.se_a}, {"mean_b", p2.mean_b}, {"se_b", p2.se_b}};
    return j;
  }
};

inline CompareReport compare_samples(const std::vector<std::vector<double>>& a,
                                     const std::vector<std::vector<double>>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("compare_samples: empty batch");
  const std::size_t k = a.front().size();
  for (const auto& v : a)
    if (v.size() != k) throw std::invalid_argument("compare_samples: ragged batch A");
  for (const auto& v : b)
    if (v.size() != k) throw std::invalid_argument("compare_samples: dimension mismatch");

  CompareReport report;
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<double> xs, ys;
    xs.reserve(a.size());
    ys.reserve(b.size());
    for (const auto& v : a) xs.push_back(v[l]);
    for (const auto& v : b) ys.push_back(v[l]);
    const auto ks = ks_two_sample(std::move(xs), std::move(ys));
    report.coordinates.push_back({static_cast<int>(l) + 1, ks.statistic, ks.p_value});
  }

  auto stats = [&](const std::vector<std::vector<double>>& batch, int power, double& mean, double& se) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& v : batch) {
      double p = 0.0;
      for (double x : v) p += power == 1 ? x : x * x;
      sum += p;
      sumsq += p * p;
    }
    const double n = static_cast<double>(batch.size());
    mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    se = std::sqrt(var / n);
  };
  stats(a, 1, report.p1.mean_a, report.p1.se_a);
  stats(b, 1, report.p1.mean_b, report.p1.se_b);
  stats(a, 2, report.p2.mean_a, report.p2.se_a);
  stats(b, 2, report.p2.mean_b, report.p2.se_b);
  return report;
}

}  // namespace sawtooth
