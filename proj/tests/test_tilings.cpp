#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "sawtooth/tilings.hpp"
#include "sawtooth/verify.hpp"

using namespace sawtooth;

namespace {

SawtoothSpec random_spec(CounterRng& rng, int n_max, int gap_max = 4) {
  return detail::random_small_spec(rng, n_max, gap_max);
}

}  // namespace

TEST_CASE("pattern counts for small specs") {
  CHECK(count_patterns(SawtoothSpec(1, {5})) == 1);
  CHECK(count_patterns(SawtoothSpec(2, {1, 0})) == 1);
  CHECK(count_patterns(SawtoothSpec(2, {2, 0})) == 2);
  CHECK(count_patterns(SawtoothSpec(3, {3, 1, 0})) == 3);
}

TEST_CASE("enumeration matches counting on random specs") {
  CounterRng rng(2201);
  for (int trial = 0; trial < 50; ++trial) {
    const SawtoothSpec spec = random_spec(rng, 5);
    const auto patterns = enumerate_patterns(spec);
    CHECK(BigInt(patterns.size()) == count_patterns(spec));
    std::set<std::vector<std::vector<int>>> dedup;
    for (const auto& p : patterns) {
      p.validate_against(spec);
      dedup.insert(p.rows);
    }
    CHECK(dedup.size() == patterns.size());
  }
}

TEST_CASE("enumeration examples") {
  const auto one = enumerate_patterns(SawtoothSpec(1, {3}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].rows == std::vector<std::vector<int>>{{3}});

  const auto two = enumerate_patterns(SawtoothSpec(2, {2, 0}));
  REQUIRE(two.size() == 2);
  std::set<int> bottoms;
  for (const auto& p : two) bottoms.insert(p.rows[0][0]);
  CHECK(bottoms == std::set<int>{0, 1});
}

TEST_CASE("enumeration respects its budget") {
  // top (2N-2, ..., 0) has 2^{N(N-1)/2} patterns; N=9 exceeds 10^6.
  std::vector<int> top;
  for (int i = 0; i < 9; ++i) top.push_back(2 * (8 - i));
  CHECK_THROWS_AS(enumerate_patterns(SawtoothSpec(9, top)), budget_error);
}

TEST_CASE("pattern count equals the representation dimension (cross-module)") {
  CounterRng rng(2202);
  for (int trial = 0; trial < 100; ++trial) {
    const SawtoothSpec spec = random_spec(rng, 8, 6);
    CHECK(dimension(spec.top) == count_patterns(spec));
  }
}

TEST_CASE("row marginal DP matches enumeration") {
  CounterRng rng(2203);
  for (int trial = 0; trial < 20; ++trial) {
    const SawtoothSpec spec = random_spec(rng, 5);
    const auto patterns = enumerate_patterns(spec);
    for (int k = 1; k <= spec.N; ++k) {
      std::map<std::vector<int>, BigInt> expected;
      for (const auto& p : patterns) expected[p.rows[static_cast<std::size_t>(k - 1)]] += 1;
      CHECK(row_marginal(spec, k) == expected);
    }
  }
}

TEST_CASE("conditional distribution examples") {
  auto c1 = conditional_row_distribution({1, 0});
  CHECK(c1.joint_probability({0}) == Rational(1));

  auto c2 = conditional_row_distribution({2, 0});
  CHECK(c2.joint_probability({0}) == Rational(1, 2));
  CHECK(c2.joint_probability({1}) == Rational(1, 2));

  // x = (4,2,0): weights y1 - y2 over y1 in {2,3}, y2 in {0,1}, total 8.
  auto c3 = conditional_row_distribution({4, 2, 0});
  CHECK(c3.joint_probability({2, 0}) == Rational(2, 8));
  CHECK(c3.joint_probability({2, 1}) == Rational(1, 8));
  CHECK(c3.joint_probability({3, 0}) == Rational(3, 8));
  CHECK(c3.joint_probability({3, 1}) == Rational(2, 8));
}

TEST_CASE("sequential conditionals equal enumeration conditionals on random specs") {
  const auto result = sampler_exactness_check(8, 5, 97531, 20000);
  INFO(result.details.dump());
  CHECK(result.passed());
}

TEST_CASE("sampler marginal of every level matches enumeration exactly") {
  // Propagate the sampler's rational row distributions down the levels and
  // compare with enumeration-derived marginals.
  CounterRng rng(2204);
  for (int trial = 0; trial < 8; ++trial) {
    const SawtoothSpec spec = random_spec(rng, 4);
    const BigInt total = count_patterns(spec);
    std::map<std::vector<int>, Rational> level_dist;
    level_dist[spec.top] = 1;
    for (int level = spec.N; level >= 2; --level) {
      std::map<std::vector<int>, Rational> next;
      for (const auto& [x, prob] : level_dist) {
        auto cond = conditional_row_distribution(x);
        for_each_lower_row(x, [&](const std::vector<int>& y) {
          next[y] += prob * cond.joint_probability(y);
        });
      }
      level_dist = std::move(next);
      const auto expected = row_marginal(spec, level - 1);
      for (const auto& [row, cnt] : expected)
        CHECK(level_dist.at(row) == Rational(cnt, total));
    }
  }
}

TEST_CASE("translation equivariance of the row conditionals") {
  CounterRng rng(2205);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(2, 5));
    std::vector<int> x;
    int cur = static_cast<int>(rng.uniform_int(-5, 5));
    for (int i = 0; i < n; ++i) {
      x.push_back(cur);
      cur += static_cast<int>(rng.uniform_int(1, 4));
    }
    std::sort(x.rbegin(), x.rend());
    const int t = static_cast<int>(rng.uniform_int(-7, 7));
    std::vector<int> xs = x;
    for (auto& v : xs) v += t;
    auto cond = conditional_row_distribution(x);
    auto conds = conditional_row_distribution(xs);
    for_each_lower_row(x, [&](const std::vector<int>& y) {
      std::vector<int> ys = y;
      for (auto& v : ys) v += t;
      CHECK(cond.joint_probability(y) == conds.joint_probability(ys));
    });
  }
}

TEST_CASE("float-arithmetic sampler agrees with exact probabilities on small rows") {
  CounterRng rng(2206);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(2, 6));
    std::vector<int> x;
    int cur = static_cast<int>(rng.uniform_int(-4, 4));
    for (int i = 0; i < n; ++i) {
      x.push_back(cur);
      cur += static_cast<int>(rng.uniform_int(1, 5));
    }
    std::sort(x.rbegin(), x.rend());
    RowConditional<Rational> exact(x);
    RowConditional<double> approx(x);
    for_each_lower_row(x, [&](const std::vector<int>& y) {
      CHECK(std::abs(approx.joint_probability(y) - to_double(exact.joint_probability(y))) < 1e-9);
    });
  }
}

TEST_CASE("exact sampling at rank above the rational cutoff stays valid") {
  std::vector<int> top;
  const int N = 50;
  for (int i = 0; i < N; ++i) top.push_back(2 * (N - 1 - i));
  const SawtoothSpec spec(N, top);
  const BeadArray p = sample_pattern(spec, 77);
  p.validate_against(spec);
}

TEST_CASE("sampling is deterministic per seed and method") {
  const SawtoothSpec spec(4, {6, 4, 2, 0});
  CHECK(sample_pattern(spec, 5).rows == sample_pattern(spec, 5).rows);
  CHECK(sample_pattern(spec, 5, SampleMethod::glauber, {2000}).rows ==
        sample_pattern(spec, 5, SampleMethod::glauber, {2000}).rows);
}

TEST_CASE("glauber chain stays on valid patterns and is roughly uniform on a tiny case") {
  const SawtoothSpec spec(2, {2, 0});
  glauber_initial(spec).validate_against(spec);

  GlauberChain chain(spec);
  CounterRng rng(99);
  int at_zero = 0;
  const int sweeps = 20000;
  for (int i = 0; i < sweeps; ++i) {
    chain.step(3, rng);
    chain.state().validate_against(spec);
    at_zero += chain.state().rows[0][0] == 0 ? 1 : 0;
  }
  const double freq = static_cast<double>(at_zero) / sweeps;
  CHECK(freq > 0.45);
  CHECK(freq < 0.55);
}

TEST_CASE("glauber preconditions") {
  const SawtoothSpec spec(2, {2, 0});
  CHECK_THROWS_AS(sample_pattern(spec, 1, SampleMethod::glauber, {0}), std::invalid_argument);
}

TEST_CASE("bottom-bead mean identity fixes the centering convention") {
  // E[b_11] = p1(top)/N - (N-1)/2 exactly; with psi1 taken at the centroid
  // abscissas top_i + 1/2 this equals N (psi1 - 1/2).
  CounterRng rng(2207);
  for (int trial = 0; trial < 12; ++trial) {
    const SawtoothSpec spec = random_spec(rng, 5);
    const auto patterns = enumerate_patterns(spec);
    Rational mean(0);
    for (const auto& p : patterns) mean += Rational(p.rows[0][0]);
    mean /= BigInt(patterns.size());

    Rational p1(0);
    for (int b : spec.top) p1 += b;
    const Rational identity = p1 / spec.N - Rational(spec.N - 1, 2);
    CHECK(mean == identity);

    const MomentEstimate m = moment_estimate(spec);
    const double centering = spec.N * (m.psi1 - 0.5);
    CHECK(std::abs(to_double(mean) - centering) < 1e-9);
  }
}

TEST_CASE("rescale_thread centering, affine shift, and error path") {
  MomentEstimate m;
  m.psi1 = 0.9;
  m.psi2 = 0.9 * 0.9 + 1.0 / 12.0 + 0.25;  // variance parameter 0.25
  const int N = 16;
  const int centered = static_cast<int>(N * (m.psi1 - 0.5));  // 6.4 -> 6: use exact psi1
  m.psi1 = static_cast<double>(centered) / N + 0.5;
  m.psi2 = m.psi1 * m.psi1 + 1.0 / 12.0 + 0.25;
  const auto out = rescale_thread({centered}, N, m);
  CHECK(std::abs(out[0]) < 1e-12);

  // b -> b + t moves each output by exactly t/(sqrt(N) * s).
  const auto base = rescale_thread({3, 1}, N, m);
  const auto shifted = rescale_thread({3 + 7, 1 + 7}, N, m);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(shifted[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(i)] -
                   7.0 / (std::sqrt(16.0) * 0.5)) < 1e-12);

  // Plain normalizer divides by s^2 instead of s.
  const auto plain = rescale_thread({3}, N, m, Normalizer::plain_variance);
  CHECK(std::abs(plain[0] - base[0] / 0.5) < 1e-12);

  MomentEstimate bad;
  bad.psi1 = 0.0;
  bad.psi2 = 0.0;
  CHECK_THROWS_AS(rescale_thread({0}, 4, bad), std::invalid_argument);
}

TEST_CASE("mixture transform: normalization, determinism at k=N, small worked case") {
  const SawtoothSpec spec(3, {3, 1, 0});
  std::vector<Float50> zeros{Float50(0)};
  CHECK(static_cast<double>(laplace_L(spec, 1, zeros)) == Catch::Approx(1.0).epsilon(1e-30));

  std::vector<Float50> a3{Float50(0.3), Float50(-0.2), Float50(0.1)};
  CHECK(static_cast<double>(scalar_abs(Float50(laplace_L(spec, 3, a3) -
                                                orbital_laplace(a3, spec.top)))) < 1e-40);

  // k=1: (1/3) sum of e^{t b} over the three bottom beads 0, 0, 1.
  const Float50 t(0.37);
  const auto patterns = enumerate_patterns(spec);
  Float50 expected(0);
  for (const auto& p : patterns) expected += exp(t * p.rows[0][0]);
  expected /= 3;
  CHECK(static_cast<double>(scalar_abs(Float50(laplace_L(spec, 1, std::vector<Float50>{t}) -
                                               expected))) < 1e-40);
}

TEST_CASE("mixture transform is symmetric in the a variables") {
  const SawtoothSpec spec(4, {5, 3, 2, 0});
  std::vector<Float50> a{Float50(0.4), Float50(-0.25)};
  std::vector<Float50> swapped{a[1], a[0]};
  CHECK(static_cast<double>(scalar_abs(Float50(laplace_L(spec, 2, a) - laplace_L(spec, 2, swapped)))) <
        1e-40);
}

TEST_CASE("factorized transform equals the mixture transform (small grid)") {
  for (int N = 1; N <= 4; ++N) {
    const SawtoothSpec spec = default_spec(N);
    for (int k = 1; k <= N; ++k) {
      for (const auto& av : laplace_test_grid(k)) {
        std::vector<Float50> a;
        for (double v : av) a.emplace_back(v);
        const Float50 lhs = laplace_L(spec, k, a);
        const Float50 rhs = laplace_L_char(spec, k, a);
        CHECK(static_cast<double>(scalar_abs(Float50(lhs - rhs)) / scalar_abs(lhs)) < 1e-9);
      }
    }
  }
}

TEST_CASE("factorized transform edge cases") {
  const SawtoothSpec spec(3, {4, 2, 0});
  std::vector<Float50> zeros{Float50(0), Float50(0)};
  CHECK(static_cast<double>(laplace_L_char(spec, 2, zeros)) == Catch::Approx(1.0).epsilon(1e-30));
  std::vector<Float50> a3{Float50(0.2), Float50(0.1), Float50(-0.3)};
  CHECK(static_cast<double>(scalar_abs(Float50(laplace_L_char(spec, 3, a3) -
                                                orbital_laplace(a3, spec.top)))) < 1e-40);
}

TEST_CASE("lozenge decomposition: thread counts and interior disjointness") {
  CounterRng rng(2208);
  for (int trial = 0; trial < 10; ++trial) {
    const SawtoothSpec spec = random_spec(rng, 6, 5);
    const BeadArray p = sample_pattern(spec, 1000 + trial);
    const auto tiles = pattern_to_lozenges(p);

    std::map<int, int> vertical_per_thread;
    for (const auto& t : tiles)
      if (t.kind == Tile::Kind::vertical) ++vertical_per_thread[t.v + 1];
    for (int k = 1; k <= spec.N; ++k) CHECK(vertical_per_thread[k] == k);
  }
}

TEST_CASE("lozenge decomposition: the two rank-2 tilings differ") {
  const SawtoothSpec spec(2, {2, 0});
  const auto patterns = enumerate_patterns(spec);
  REQUIRE(patterns.size() == 2);
  const auto t0 = pattern_to_lozenges(patterns[0]);
  const auto t1 = pattern_to_lozenges(patterns[1]);
  CHECK(t0 != t1);
  CHECK(t0.size() == t1.size());
}

TEST_CASE("rank-1 pattern decomposes into one vertical tile plus strip fill") {
  const auto tiles = pattern_to_lozenges(BeadArray{{{4}}});
  int vertical = 0;
  for (const auto& t : tiles) vertical += t.kind == Tile::Kind::vertical ? 1 : 0;
  CHECK(vertical == 1);
  CHECK(tiles.size() > 1);
}

TEST_CASE("spec JSON round trip and validation") {
  const SawtoothSpec spec(3, {4, 2, 0});
  CHECK(SawtoothSpec::from_json(spec.to_json()).top == spec.top);
  CHECK_THROWS_AS(SawtoothSpec(2, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SawtoothSpec(2, {1}), std::invalid_argument);

  const BeadArray p = sample_pattern(spec, 3);
  CHECK(BeadArray::from_json(p.to_json()).rows == p.rows);
}
