#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "sawtooth/rmt.hpp"

using namespace sawtooth;

namespace {

Eigen::MatrixXcd fixed_unitary(int k) {
  Eigen::MatrixXcd m(k, k);
  // Deterministic complex entries, then orthonormalize.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m(i, j) = std::complex<double>(std::sin(1.7 * i + 0.3 * j + 0.2), std::cos(0.9 * i - 1.1 * j));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("scalar GUE is a standard normal") {
  const int n = 100000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const auto h = sample_gue(1, 12345, static_cast<std::uint64_t>(i));
    sum += h.diag[0];
    sumsq += h.diag[0] * h.diag[0];
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var > 0.97);
  CHECK(var < 1.03);
}

TEST_CASE("trace moments match the second-moment normalization") {
  const int n = 100000, k = 3;
  double tr = 0, tr2 = 0;
  for (int i = 0; i < n; ++i) {
    const auto h = sample_gue(k, 777, static_cast<std::uint64_t>(i));
    tr += h.trace();
    tr2 += h.frobenius_sq();  // Tr X^2 for Hermitian X
  }
  CHECK(std::abs(tr / n) < 3.0 * std::sqrt(static_cast<double>(k)) / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(tr2 / n - k * k) < 0.02 * k * k);
}

TEST_CASE("eigenvalues of fixed matrices") {
  HermitianMatrix d = HermitianMatrix::zero(3);
  d.diag = {3.0, 1.0, 2.0};
  const auto ev = eigenvalues_sorted(d);
  CHECK(ev == std::vector<double>{3.0, 2.0, 1.0});

  HermitianMatrix x = HermitianMatrix::zero(2);
  x.at_lower(1, 0) = {1.0, 0.0};
  const auto ev2 = eigenvalues_sorted(x);
  CHECK(std::abs(ev2[0] - 1.0) < 1e-12);
  CHECK(std::abs(ev2[1] + 1.0) < 1e-12);
}

TEST_CASE("eigenvalue sums reproduce trace and Frobenius norm") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = sample_gue(5, 999, static_cast<std::uint64_t>(trial));
    const auto ev = eigenvalues_sorted(h);
    double sum = 0, sumsq = 0;
    for (double v : ev) {
      sum += v;
      sumsq += v * v;
    }
    CHECK(std::abs(sum - h.trace()) < 1e-9);
    CHECK(std::abs(sumsq - h.frobenius_sq()) < 1e-9);
    for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i - 1] >= ev[i]);
  }
}

TEST_CASE("spectrum is invariant under conjugation by a fixed unitary") {
  const int k = 3, n = 10000;
  const Eigen::MatrixXcd u = fixed_unitary(k);
  std::vector<std::vector<double>> plain, conjugated;
  for (int i = 0; i < n; ++i) {
    plain.push_back(eigenvalues_sorted(sample_gue(k, 31, static_cast<std::uint64_t>(i))));
    const auto h = sample_gue(k, 32, static_cast<std::uint64_t>(i));
    const Eigen::MatrixXcd m = u * h.full() * u.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    std::vector<double> ev(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) ev[static_cast<std::size_t>(j)] = solver.eigenvalues()(k - 1 - j);
    conjugated.push_back(std::move(ev));
  }
  const auto report = compare_samples(plain, conjugated);
  for (const auto& c : report.coordinates) CHECK(c.p_value > 0.001);
}

TEST_CASE("ordered means have the expected signs") {
  const int k = 3, n = 10000;
  double top = 0, bottom = 0;
  for (int i = 0; i < n; ++i) {
    const auto ev = eigenvalues_sorted(sample_gue(k, 4141, static_cast<std::uint64_t>(i)));
    top += ev.front();
    bottom += ev.back();
  }
  CHECK(top / n > 0.5);
  CHECK(bottom / n < -0.5);
}

TEST_CASE("two-sample KS: identical batches and independent normals") {
  std::vector<std::vector<double>> a;
  CounterRng rng(717);
  for (int i = 0; i < 2000; ++i) a.push_back({rng.gaussian(), rng.gaussian()});
  const auto same = compare_samples(a, a);
  for (const auto& c : same.coordinates) {
    CHECK(c.ks_statistic == 0.0);
    CHECK(c.p_value == 1.0);
  }

  std::vector<std::vector<double>> b;
  CounterRng rng2(718);
  for (int i = 0; i < 10000; ++i) b.push_back({rng2.gaussian()});
  std::vector<std::vector<double>> c;
  CounterRng rng3(719);
  for (int i = 0; i < 10000; ++i) c.push_back({rng3.gaussian()});
  const auto indep = compare_samples(b, c);
  CHECK(indep.coordinates[0].p_value > 0.001);

  CHECK_THROWS_AS(compare_samples(a, b), std::invalid_argument);
}

TEST_CASE("power-sum statistics in the comparison report") {
  std::vector<std::vector<double>> a, b;
  CounterRng rng(720);
  for (int i = 0; i < 50000; ++i) {
    a.push_back({rng.gaussian(), rng.gaussian()});
    b.push_back({rng.gaussian() + 0.5, rng.gaussian() + 0.5});
  }
  const auto report = compare_samples(a, b);
  CHECK(std::abs(report.p1.mean_a) < 4 * report.p1.se_a);
  CHECK(std::abs(report.p1.mean_b - 1.0) < 4 * report.p1.se_b);
  CHECK(std::abs(report.p2.mean_a - 2.0) < 4 * report.p2.se_a);
}

TEST_CASE("Kolmogorov tail values") {
  CHECK(kolmogorov_pvalue(0.0) == 1.0);
  // Known quantile: Q(1.358) is about 0.05.
  CHECK(kolmogorov_pvalue(1.358) > 0.045);
  CHECK(kolmogorov_pvalue(1.358) < 0.055);
  CHECK(kolmogorov_pvalue(2.0) < 0.001);
  for (double l = 0.1; l < 3.0; l += 0.1)
    CHECK(kolmogorov_pvalue(l + 0.1) <= kolmogorov_pvalue(l));
}

TEST_CASE("GUE sampling is deterministic per seed and stream") {
  const auto a = sample_gue(4, 5, 9);
  const auto b = sample_gue(4, 5, 9);
  CHECK(a.diag == b.diag);
  CHECK(a.lower == b.lower);
  const auto c = sample_gue(4, 5, 10);
  CHECK(a.diag != c.diag);
}
