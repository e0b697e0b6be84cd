#pragma once

// Walk counts on the Cayley graph of S(d) generated by transpositions, with
// the larger-swapped-element edge labelling.  count_walks enumerates r-step
// walks from a permutation of cycle type alpha to cycle type beta; in
// monotone mode the label sequence must be weakly increasing.  A walk counts
// only if it is transitive: its steps and endpoints together generate a
// transitive subgroup.  Since the end permutation is the product of the start
// and the steps, it lies in the group generated by start and steps, so
// seeding the transitivity check with the start's cycles and the steps'
// supports is equivalent to including both endpoints (tested explicitly).

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "sawtooth/combinat.hpp"
#include "sawtooth/numeric.hpp"
#include "json.hpp"

namespace sawtooth {

struct WalkQuery {
  int d = 1;
  int r = 0;
  Partition alpha;
  Partition beta;
  bool monotone = true;

  void validate() const {
    if (alpha.sum() != d || beta.sum() != d)
      throw std::invalid_argument("WalkQuery: alpha and beta must be partitions of d");
    if (r < 0) throw std::invalid_argument("WalkQuery: r must be >= 0");
  }

  friend auto operator<=>(const WalkQuery&, const WalkQuery&) = default;

  std::string key() const {
    return std::to_string(d) + "/" + std::to_string(r) + "/" + alpha.key() + "/" + beta.key() +
           "/" + (monotone ? "1" : "0");
  }
};

struct WalkBudget {
  // Counts walk-extension operations (one per transposition applied), so
  // failure is deterministic rather than time-dependent.
  std::uint64_t max_extensions = 100'000'000;
};

// Memo table for walk counts, persistable as a JSON map
// "d/r/alpha/beta/monotone" -> decimal count string.  Concurrent reads,
// serialized writes.
class HurwitzTable {
 public:
  HurwitzTable() = default;
  HurwitzTable(const HurwitzTable& other) {
    std::shared_lock lock(other.mutex_);
    counts_ = other.counts_;
  }
  HurwitzTable& operator=(const HurwitzTable& other) {
    if (this != &other) {
      auto copy = [&] {
        std::shared_lock lock(other.mutex_);
        return other.counts_;
      }();
      std::unique_lock lock(mutex_);
      counts_ = std::move(copy);
    }
    return *this;
  }

  std::optional<std::uint64_t> lookup(const WalkQuery& q) const {
    std::shared_lock lock(mutex_);
    auto it = counts_.find(q);
    if (it == counts_.end()) return std::nullopt;
    return it->second;
  }

  void store(const WalkQuery& q, std::uint64_t count) {
    std::unique_lock lock(mutex_);
    counts_[q] = count;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return counts_.size();
  }

  nlohmann::json to_json() const {
    std::shared_lock lock(mutex_);
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [q, c] : counts_) j[q.key()] = std::to_string(c);
    return j;
  }

  static HurwitzTable from_json(const nlohmann::json& j) {
    HurwitzTable t;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = it.key();
      std::vector<std::string> parts;
      std::size_t pos = 0;
      while (pos <= key.size()) {
        auto next = key.find('/', pos);
        if (next == std::string::npos) next = key.size();
        parts.push_back(key.substr(pos, next - pos));
        pos = next + 1;
      }
      if (parts.size() != 5) throw std::invalid_argument("HurwitzTable: bad key " + key);
      WalkQuery q;
      q.d = std::stoi(parts[0]);
      q.r = std::stoi(parts[1]);
      q.alpha = Partition::from_key(parts[2]);
      q.beta = Partition::from_key(parts[3]);
      q.monotone = parts[4] == "1";
      t.counts_[q] = std::stoull(it.value().get<std::string>());
    }
    return t;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("HurwitzTable: cannot write " + path);
    out << to_json().dump(1) << "\n";
  }

  static HurwitzTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("HurwitzTable: cannot read " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

 private:
  std::map<WalkQuery, std::uint64_t> counts_;
  mutable std::shared_mutex mutex_;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  int components() {
    int c = 0;
    for (int i = 0; i < static_cast<int>(parent.size()); ++i)
      if (find(i) == i) ++c;
    return c;
  }
};

}  // namespace detail

// Exact count of r-step (monotone) transitive walks from cycle type alpha to
// cycle type beta in S(d).  Depth-first extension over transpositions (s t),
// s < t; monotone mode restricts the next label to t >= last label.
inline std::uint64_t count_walks(const WalkQuery& q, HurwitzTable* table = nullptr,
                                 const WalkBudget& budget = {}) {
  q.validate();
  if (q.d > 7) throw std::invalid_argument("count_walks: d must be <= 7");
  if (table) {
    if (auto hit = table->lookup(q)) return *hit;
  }

  const int d = q.d;
  const Partition target = q.beta;
  std::uint64_t extensions = 0;
  std::uint64_t total = 0;

  std::vector<std::pair<int, int>> steps;  // 0-indexed (s, t), s < t
  steps.reserve(static_cast<std::size_t>(q.r));

  auto transitive = [&](const Permutation& start) {
    detail::UnionFind uf(d);
    for (const auto& cyc : cycles_of(start))
      for (std::size_t i = 1; i < cyc.size(); ++i) uf.unite(cyc[0], cyc[i]);
    for (auto [s, t] : steps) uf.unite(s, t);
    return uf.components() == 1;
  };

  auto dfs = [&](auto&& self, Permutation& perm, const Permutation& start, int remaining,
                 int min_label) -> void {
    if (remaining == 0) {
      if (cycle_type(perm) == target && transitive(start)) ++total;
      return;
    }
    for (int t = std::max(min_label, 1); t < d; ++t) {
      for (int s = 0; s < t; ++s) {
        if (++extensions > budget.max_extensions)
          throw budget_error("count_walks: extension budget " +
                             std::to_string(budget.max_extensions) + " exceeded for " + q.key());
        perm.apply_transposition(s, t);
        steps.emplace_back(s, t);
        self(self, perm, start, remaining - 1, q.monotone ? t : 1);
        steps.pop_back();
        perm.apply_transposition(s, t);
      }
    }
  };

  for (const auto& start : permutations_of_cycle_type(q.alpha)) {
    Permutation perm = start;
    dfs(dfs, perm, start, q.r, 1);
  }

  if (table) table->store(q, total);
  return total;
}

// g = (r + 2 - len(alpha) - len(beta)) / 2 when that is a nonnegative
// integer; empty otherwise.
inline std::optional<int> genus(int r, const Partition& alpha, const Partition& beta) {
  if (alpha.sum() != beta.sum())
    throw std::invalid_argument("genus: alpha and beta must partition the same d");
  const int num = r + 2 - alpha.length() - beta.length();
  if (num < 0 || num % 2 != 0) return std::nullopt;
  return num / 2;
}

// Monotone count indexed by genus: the walk count at r = 2g - 2 + len(alpha)
// + len(beta).
inline std::uint64_t monotone_by_genus(int g, const Partition& alpha, const Partition& beta,
                                       HurwitzTable* table = nullptr, const WalkBudget& budget = {}) {
  if (g < 0) throw std::invalid_argument("monotone_by_genus: genus must be >= 0");
  const int r = 2 * g - 2 + alpha.length() + beta.length();
  if (r < 0) throw std::invalid_argument("monotone_by_genus: implied step count is negative");
  WalkQuery q{alpha.sum(), r, alpha, beta, true};
  return count_walks(q, table, budget);
}

}  // namespace sawtooth
