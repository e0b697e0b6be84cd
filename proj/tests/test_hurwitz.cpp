#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <queue>

#include "sawtooth/hurwitz.hpp"

using namespace sawtooth;

namespace {

// Independent walk-count oracle: odometer enumeration over all r-tuples of
// transpositions, transitivity via breadth-first search on the graph whose
// edges come from the steps plus the cycles of the chosen endpoint set.
// include_end toggles between seeding with {start} and {start, end}; the two
// must agree because the end is the product of start and steps.
std::uint64_t oracle_count(int d, int r, const Partition& alpha, const Partition& beta,
                           bool monotone, bool include_end) {
  std::vector<std::pair<int, int>> trans;
  for (int t = 1; t < d; ++t)
    for (int s = 0; s < t; ++s) trans.emplace_back(s, t);
  const int T = static_cast<int>(trans.size());
  if (r > 0 && T == 0) return 0;

  auto transitive = [&](const std::vector<int>& odo, const Permutation& start,
                        const Permutation& end) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(d));
    auto add_edge = [&](int a, int b) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    };
    for (int i = 0; i < r; ++i) {
      auto [s, t] = trans[static_cast<std::size_t>(odo[static_cast<std::size_t>(i)])];
      add_edge(s, t);
    }
    for (const auto& cyc : cycles_of(start))
      for (std::size_t i = 1; i < cyc.size(); ++i) add_edge(cyc[0], cyc[i]);
    if (include_end)
      for (const auto& cyc : cycles_of(end))
        for (std::size_t i = 1; i < cyc.size(); ++i) add_edge(cyc[0], cyc[i]);
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      ++reached;
      for (int w : adj[static_cast<std::size_t>(v)])
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          q.push(w);
        }
    }
    return reached == d;
  };

  std::uint64_t total = 0;
  for (const auto& start : permutations_of_cycle_type(alpha)) {
    std::vector<int> odo(static_cast<std::size_t>(r), 0);
    while (true) {
      bool mono_ok = true;
      for (int i = 1; i < r && mono_ok; ++i)
        mono_ok = trans[static_cast<std::size_t>(odo[static_cast<std::size_t>(i - 1)])].second <=
                  trans[static_cast<std::size_t>(odo[static_cast<std::size_t>(i)])].second;
      if (mono_ok || !monotone) {
        Permutation perm = start;
        for (int i = 0; i < r; ++i) {
          auto [s, t] = trans[static_cast<std::size_t>(odo[static_cast<std::size_t>(i)])];
          perm.apply_transposition(s, t);
        }
        if (cycle_type(perm) == beta && transitive(odo, start, perm)) ++total;
      }
      int i = 0;
      for (; i < r; ++i) {
        if (++odo[static_cast<std::size_t>(i)] < T) break;
        odo[static_cast<std::size_t>(i)] = 0;
      }
      if (i == r) break;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("monotone genus-zero base values") {
  CHECK(monotone_by_genus(0, Partition{1}, Partition{1}) == 1);
  CHECK(monotone_by_genus(0, Partition{2}, Partition{2}) == 1);
  CHECK(monotone_by_genus(0, Partition{2}, Partition{1, 1}) == 1);
}

TEST_CASE("zero-step walks from 3-cycles") {
  CHECK(count_walks({3, 0, Partition{3}, Partition{3}, true}) == 2);
}

TEST_CASE("genus formula") {
  CHECK(genus(0, Partition{1}, Partition{1}) == 0);
  CHECK(genus(1, Partition{2}, Partition{1, 1}) == 0);
  CHECK(genus(1, Partition{2}, Partition{2}) == std::nullopt);
  CHECK(genus(2, Partition{1}, Partition{1}) == 1);
  CHECK_THROWS_AS(genus(0, Partition{2}, Partition{1}), std::invalid_argument);
}

TEST_CASE("monotone_by_genus maps genus to step count") {
  CHECK(monotone_by_genus(1, Partition{1}, Partition{1}) == 0);  // r=2, S(1) has no transpositions
  CHECK(monotone_by_genus(0, Partition{3}, Partition{1, 1, 1}) ==
        count_walks({3, 2, Partition{3}, Partition{1, 1, 1}, true}));
  CHECK_THROWS_AS(monotone_by_genus(-1, Partition{1}, Partition{1}), std::invalid_argument);
}

TEST_CASE("degree-1 walks: 1 iff r=0") {
  for (int r = 0; r <= 4; ++r)
    CHECK(count_walks({1, r, Partition{1}, Partition{1}, true}) == (r == 0 ? 1u : 0u));
}

TEST_CASE("S(2) walk counts follow the parity pattern") {
  for (int r = 0; r <= 9; ++r) {
    CHECK(count_walks({2, r, Partition{2}, Partition{2}, true}) == (r % 2 == 0 ? 1u : 0u));
    CHECK(count_walks({2, r, Partition{2}, Partition{1, 1}, true}) == (r % 2 == 1 ? 1u : 0u));
    CHECK(count_walks({2, r, Partition{1, 1}, Partition{1, 1}, true}) ==
          (r % 2 == 0 && r >= 2 ? 1u : 0u));
    CHECK(count_walks({2, r, Partition{1, 1}, Partition{2}, true}) == (r % 2 == 1 ? 1u : 0u));
  }
}

TEST_CASE("walk counts match the odometer oracle, both transitivity definitions") {
  for (int d = 1; d <= 4; ++d) {
    const auto parts = partitions_of(d);
    for (const auto& alpha : parts)
      for (const auto& beta : parts)
        for (int r = 0; r <= 4; ++r)
          for (bool monotone : {true, false}) {
            const auto mine = count_walks({d, r, alpha, beta, monotone});
            CHECK(mine == oracle_count(d, r, alpha, beta, monotone, false));
            CHECK(mine == oracle_count(d, r, alpha, beta, monotone, true));
          }
  }
}

TEST_CASE("parity vanishing, monotone bound, classical symmetry, crude upper bound") {
  for (int d = 2; d <= 5; ++d) {
    const auto parts = partitions_of(d);
    for (const auto& alpha : parts)
      for (const auto& beta : parts)
        for (int r = 0; r <= 4; ++r) {
          const auto mono = count_walks({d, r, alpha, beta, true});
          const auto classical = count_walks({d, r, alpha, beta, false});
          if (!genus(r, alpha, beta).has_value()) {
            CHECK(mono == 0);
            CHECK(classical == 0);
          }
          CHECK(mono <= classical);
          CHECK(classical == count_walks({d, r, beta, alpha, false}));
          if (auto g = genus(r, alpha, beta)) {
            // crude bound (d!)^{2g + l(alpha) + l(beta)}
            BigInt bound = 1;
            const BigInt dfact = factorial(d);
            for (int e = 0; e < 2 * *g + alpha.length() + beta.length(); ++e) bound *= dfact;
            CHECK(BigInt(mono) <= bound);
          }
        }
  }
}

TEST_CASE("enumeration budget produces a resource error naming the bound") {
  WalkBudget tiny;
  tiny.max_extensions = 10;
  try {
    count_walks({5, 4, Partition{5}, Partition{5}, false}, nullptr, tiny);
    FAIL("expected budget_error");
  } catch (const budget_error& e) {
    CHECK(std::string(e.what()).find("10") != std::string::npos);
  }
}

TEST_CASE("memo table stores, serializes and restores counts") {
  HurwitzTable table;
  const WalkQuery q{3, 2, Partition{3}, Partition{1, 1, 1}, true};
  const auto count = count_walks(q, &table);
  CHECK(table.lookup(q) == count);
  CHECK(q.key() == "3/2/3/1+1+1/1");

  const auto j = table.to_json();
  const auto restored = HurwitzTable::from_json(j);
  CHECK(restored.lookup(q) == count);

  const std::string path = "hurwitz_cache_test.json";
  table.save(path);
  const auto loaded = HurwitzTable::load(path);
  CHECK(loaded.lookup(q) == count);
  std::remove(path.c_str());

  // Cached values short-circuit enumeration: a poisoned entry is returned as is.
  HurwitzTable poisoned;
  poisoned.store(q, 999);
  CHECK(count_walks(q, &poisoned) == 999);
}
