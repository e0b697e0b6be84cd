#pragma once

// Partitions, permutations, cycle types, power sums and noncrossing
// partitions: the combinatorial substrate shared by the walk counter, the
// coefficient tables and the cumulant machinery.

#include <algorithm>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sawtooth/numeric.hpp"

namespace sawtooth {

// Integer partition with cycle-type semantics: parts weakly decreasing, all
// parts >= 1.  Immutable after construction.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p) : parts(std::move(p)) { validate(); }
  Partition(std::initializer_list<int> p) : parts(p) { validate(); }

  void validate() const {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] < 1) throw std::invalid_argument("Partition: parts must be >= 1");
      if (i > 0 && parts[i] > parts[i - 1])
        throw std::invalid_argument("Partition: parts must be weakly decreasing");
    }
  }

  int sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  int length() const { return static_cast<int>(parts.size()); }

  // Canonical rendering used as a key in all tables and JSON output: "3+1+1".
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += '+';
      s += std::to_string(parts[i]);
    }
    return s;
  }

  static Partition from_key(const std::string& s) {
    std::vector<int> parts;
    std::size_t pos = 0;
    while (pos < s.size()) {
      auto next = s.find('+', pos);
      if (next == std::string::npos) next = s.size();
      parts.push_back(std::stoi(s.substr(pos, next - pos)));
      pos = next + 1;
    }
    return Partition(std::move(parts));
  }

  friend auto operator<=>(const Partition&, const Partition&) = default;
};

// All partitions of d in reverse lexicographic order: (d), (d-1,1), ..., (1^d).
// This order is the canonical one for every table in the project.
inline std::vector<Partition> partitions_of(int d) {
  if (d < 1 || d > 12) throw std::invalid_argument("partitions_of: need 1 <= d <= 12");
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.emplace_back(Partition(cur));
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, d, d);
  return out;
}

// Permutation of {1..d}; images stored 0-indexed, serialized 1-indexed.
struct Permutation {
  std::vector<int> images;

  Permutation() = default;
  explicit Permutation(std::vector<int> im) : images(std::move(im)) { validate(); }

  static Permutation identity(int d) {
    std::vector<int> im(d);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  // From 1-indexed images, the serialized form.
  static Permutation from_one_indexed(const std::vector<int>& im) {
    std::vector<int> v(im.size());
    for (std::size_t i = 0; i < im.size(); ++i) v[i] = im[i] - 1;
    return Permutation(std::move(v));
  }

  void validate() const {
    const int d = static_cast<int>(images.size());
    std::vector<char> seen(d, 0);
    for (int x : images) {
      if (x < 0 || x >= d || seen[x]) throw std::invalid_argument("Permutation: images not a bijection");
      seen[x] = 1;
    }
  }

  int degree() const { return static_cast<int>(images.size()); }

  // Right-multiplication by the transposition (s t), 0-indexed, applied as
  // "this, then swap values at positions of s and t in image space":
  // (p * (s t))(x) = (s t)(p(x)).
  void apply_transposition(int s, int t) {
    for (auto& x : images) {
      if (x == s)
        x = t;
      else if (x == t)
        x = s;
    }
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

inline Partition cycle_type(const Permutation& p) {
  const int d = p.degree();
  std::vector<char> seen(d, 0);
  std::vector<int> lens;
  for (int i = 0; i < d; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = p.images[j];
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.rbegin(), lens.rend());
  return Partition(std::move(lens));
}

// Cycles of p as lists of 0-indexed elements (used to seed transitivity checks).
inline std::vector<std::vector<int>> cycles_of(const Permutation& p) {
  const int d = p.degree();
  std::vector<char> seen(d, 0);
  std::vector<std::vector<int>> cycles;
  for (int i = 0; i < d; ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    int j = i;
    while (!seen[j]) {
      seen[j] = 1;
      cyc.push_back(j);
      j = p.images[j];
    }
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

// All permutations of S(d) with the given cycle type.  d <= 8 enumeration.
inline std::vector<Permutation> permutations_of_cycle_type(const Partition& type) {
  const int d = type.sum();
  if (d > 8) throw std::invalid_argument("permutations_of_cycle_type: d too large");
  std::vector<int> im(d);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    Permutation p{std::vector<int>(im)};
    if (cycle_type(p) == type) out.push_back(std::move(p));
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

// Product of power sums: prod_i (sum_j x_j^{beta_i}).  Exact when S is exact.
template <class S>
S power_sum(const Partition& beta, const std::vector<S>& x) {
  if (x.empty()) throw std::invalid_argument("power_sum: empty variable list");
  S result(1);
  for (int part : beta.parts) {
    S acc(0);
    for (const S& v : x) {
      S pw(1);
      for (int e = 0; e < part; ++e) pw *= v;
      acc += pw;
    }
    result *= acc;
  }
  return result;
}

// Single power sum p_m(x).
template <class S>
S power_sum_single(int m, const std::vector<S>& x) {
  return power_sum<S>(Partition{std::vector<int>{m}}, x);
}

// Set partition of {1..d} with the noncrossing property: no a<b<c<e with
// a,c in one block and b,e in another.  Blocks sorted by minimum element.
struct NoncrossingPartition {
  std::vector<std::vector<int>> blocks;

  Partition block_type() const {
    std::vector<int> lens;
    lens.reserve(blocks.size());
    for (const auto& b : blocks) lens.push_back(static_cast<int>(b.size()));
    std::sort(lens.rbegin(), lens.rend());
    return Partition(std::move(lens));
  }
};

// All noncrossing partitions of {1..d}, generated by the nesting recursion:
// the block of the smallest element splits the rest into independent gaps.
// Count equals the d-th Catalan number.
inline std::vector<NoncrossingPartition> noncrossing_partitions(int d) {
  if (d < 1 || d > 10) throw std::invalid_argument("noncrossing_partitions: need 1 <= d <= 10");

  // Partitions of a contiguous interval [lo, hi].
  auto gen = [](auto&& self, int lo, int hi) -> std::vector<std::vector<std::vector<int>>> {
    if (lo > hi) return {{}};
    std::vector<std::vector<std::vector<int>>> result;
    const int n = hi - lo + 1;
    // Choose the block of `lo` as lo plus a subset of (lo, hi], bitmask over
    // the remaining n-1 elements; elements between consecutive block members
    // form independent sub-instances.
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
      std::vector<int> block{lo};
      for (int i = 0; i < n - 1; ++i)
        if (mask & (1u << i)) block.push_back(lo + 1 + i);
      std::vector<std::pair<int, int>> gaps;
      for (std::size_t i = 0; i + 1 < block.size(); ++i) gaps.emplace_back(block[i] + 1, block[i + 1] - 1);
      gaps.emplace_back(block.back() + 1, hi);
      std::vector<std::vector<std::vector<int>>> partial{{block}};
      for (auto [glo, ghi] : gaps) {
        auto subs = self(self, glo, ghi);
        std::vector<std::vector<std::vector<int>>> next;
        for (const auto& head : partial)
          for (const auto& tail : subs) {
            auto combined = head;
            combined.insert(combined.end(), tail.begin(), tail.end());
            next.push_back(std::move(combined));
          }
        partial = std::move(next);
      }
      for (auto& p : partial) result.push_back(std::move(p));
    }
    return result;
  };

  auto raw = gen(gen, 1, d);
  std::vector<NoncrossingPartition> out;
  out.reserve(raw.size());
  for (auto& blocks : raw) {
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    out.push_back(NoncrossingPartition{std::move(blocks)});
  }
  return out;
}

}  // namespace sawtooth
