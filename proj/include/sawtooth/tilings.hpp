#pragma once

// Sawtooth domains and their tilings in bead coordinates.
//
// A tiling of the rank-N domain is stored as a triangular array of integer
// rows (thread k holds k strictly decreasing bead positions) with the
// interlacing x_{k+1,i} > x_{k,i} >= x_{k+1,i+1}.  These are particle
// coordinates: the candidate range of bead i below an upper row x is the
// interval [x_{i+1}, x_i - 1], and ranges of distinct coordinates are
// disjoint, which is what makes the determinantal row sampler work.
//
// Row sampling: conditioned on an upper row x of length n, the lower row y is
// distributed as P(y) = V(y)/Z with V(y) = prod_{i<j} (y_i - y_j), because
// V(y) is proportional to the number of completions below y; sampling rows
// top-down therefore yields an exactly uniform tiling.  Z and all coordinate
// marginals are determinants whose rows are power sums of basis functions
// over the candidate ranges (the determinant is multilinear and the ranges
// are disjoint).  Coordinates are fixed left to right; each marginal needs
// one cofactor vector, i.e. one column of the maintained matrix inverse, and
// fixing a coordinate is a rank-one row update of that inverse.
//
// Arithmetic: exact big rationals with the monomial basis up to rank 40 and
// for every oracle test; above that, doubles with a Newton basis anchored at
// the range midpoints, factors scaled by the mean node spacing (raw monomial
// powers overflow near rank 150), rows max-norm rescaled.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sawtooth/hciz.hpp"
#include "sawtooth/linalg.hpp"
#include "sawtooth/numeric.hpp"
#include "sawtooth/rng.hpp"
#include "json.hpp"

namespace sawtooth {

struct SawtoothSpec {
  int N = 1;
  std::vector<int> top;  // strictly decreasing, length N

  SawtoothSpec() = default;
  SawtoothSpec(int n, std::vector<int> t) : N(n), top(std::move(t)) { validate(); }

  void validate() const {
    if (N < 1) throw std::invalid_argument("SawtoothSpec: N must be >= 1");
    if (static_cast<int>(top.size()) != N)
      throw std::invalid_argument("SawtoothSpec: top row must have N entries");
    for (int i = 1; i < N; ++i)
      if (top[i - 1] <= top[i])
        throw std::invalid_argument("SawtoothSpec: top row must strictly decrease");
  }

  nlohmann::json to_json() const { return {{"N", N}, {"top", top}}; }

  static SawtoothSpec from_json(const nlohmann::json& j) {
    return SawtoothSpec(j.at("N").get<int>(), j.at("top").get<std::vector<int>>());
  }

  static SawtoothSpec load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("SawtoothSpec: cannot read " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

struct BeadArray {
  // rows[k] is thread k+1: k+1 strictly decreasing bead positions.
  std::vector<std::vector<int>> rows;

  int rank() const { return static_cast<int>(rows.size()); }

  void validate() const {
    const int N = rank();
    if (N < 1) throw std::invalid_argument("BeadArray: empty");
    for (int k = 0; k < N; ++k) {
      if (static_cast<int>(rows[k].size()) != k + 1)
        throw std::invalid_argument("BeadArray: row length mismatch");
      for (int i = 1; i <= k; ++i)
        if (rows[k][i - 1] <= rows[k][i])
          throw std::invalid_argument("BeadArray: row must strictly decrease");
    }
    for (int k = 1; k < N; ++k)
      for (int i = 0; i < k; ++i)
        if (!(rows[k][i] > rows[k - 1][i] && rows[k - 1][i] >= rows[k][i + 1]))
          throw std::invalid_argument("BeadArray: interlacing violated");
  }

  void validate_against(const SawtoothSpec& spec) const {
    validate();
    if (rank() != spec.N || rows.back() != spec.top)
      throw std::invalid_argument("BeadArray: top row does not match spec");
  }

  nlohmann::json to_json() const { return {{"N", rank()}, {"rows", rows}}; }

  static BeadArray from_json(const nlohmann::json& j) {
    BeadArray p;
    p.rows = j.at("rows").get<std::vector<std::vector<int>>>();
    p.validate();
    return p;
  }
};

// Number of bead arrays with the given top row, as the exact integer product
// prod_{i<j} (top_i - top_j)/(j - i).
inline BigInt count_patterns(const SawtoothSpec& spec) {
  spec.validate();
  if (spec.N > 300) throw std::invalid_argument("count_patterns: N must be <= 300");
  BigInt num = 1, den = 1;
  for (int i = 0; i < spec.N; ++i)
    for (int j = i + 1; j < spec.N; ++j) {
      num *= spec.top[i] - spec.top[j];
      den *= j - i;
    }
  if (num % den != 0) throw std::logic_error("count_patterns: non-integral product");
  return num / den;
}

// All interlacing lower rows of x, in lexicographic order of the coordinate
// choices.
inline void for_each_lower_row(const std::vector<int>& x,
                               const std::function<void(const std::vector<int>&)>& f) {
  const int m = static_cast<int>(x.size()) - 1;
  std::vector<int> y(static_cast<std::size_t>(m));
  auto rec = [&](auto&& self, int i) -> void {
    if (i == m) {
      f(y);
      return;
    }
    for (int t = x[static_cast<std::size_t>(i)] - 1; t >= x[static_cast<std::size_t>(i) + 1]; --t) {
      y[static_cast<std::size_t>(i)] = t;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

// Exhaustive enumeration, bounded by the pattern count.
inline std::vector<BeadArray> enumerate_patterns(const SawtoothSpec& spec,
                                                 std::uint64_t limit = 1'000'000) {
  spec.validate();
  const BigInt count = count_patterns(spec);
  if (count > limit)
    throw budget_error("enumerate_patterns: " + count.str() + " patterns exceeds limit " +
                       std::to_string(limit));
  std::vector<BeadArray> out;
  out.reserve(count.convert_to<std::size_t>());

  std::vector<std::vector<int>> rows(static_cast<std::size_t>(spec.N));
  rows[static_cast<std::size_t>(spec.N - 1)] = spec.top;
  auto rec = [&](auto&& self, int level) -> void {
    if (level == 0) {
      BeadArray p;
      p.rows = rows;
      out.push_back(std::move(p));
      return;
    }
    for_each_lower_row(rows[static_cast<std::size_t>(level)], [&](const std::vector<int>& y) {
      rows[static_cast<std::size_t>(level - 1)] = y;
      self(self, level - 1);
    });
  };
  rec(rec, spec.N - 1);
  return out;
}

// Distribution of thread k under the uniform measure: row -> number of
// patterns through that row.  Computed by a level DP from the top (counting
// chains down to level k) times the closed-form count below each row.
inline std::map<std::vector<int>, BigInt> row_marginal(const SawtoothSpec& spec, int k,
                                                       std::uint64_t state_limit = 1'000'000) {
  spec.validate();
  if (k < 1 || k > spec.N) throw std::invalid_argument("row_marginal: k out of range");
  std::map<std::vector<int>, BigInt> above;
  above[spec.top] = 1;
  for (int level = spec.N; level > k; --level) {
    std::map<std::vector<int>, BigInt> next;
    for (const auto& [x, cnt] : above)
      for_each_lower_row(x, [&](const std::vector<int>& y) { next[y] += cnt; });
    if (next.size() > state_limit) throw budget_error("row_marginal: state limit exceeded");
    above = std::move(next);
  }
  for (auto& [row, cnt] : above) cnt *= dimension(row);
  return above;
}

namespace detail {

// Basis functions used by the row sampler.  Exact mode: monomials.  Float
// mode: Newton products anchored at the candidate-range midpoints, each
// factor divided by a quarter of the row span.
template <class S>
struct SamplerBasis {
  std::vector<double> nodes;  // empty in exact mode
  double scale = 1.0;

  // phi_0..phi_{count-1} evaluated at integer t.
  void evaluate(int t, std::vector<S>& out) const {
    if constexpr (is_exact_scalar_v<S>) {
      S cur(1);
      for (auto& v : out) {
        v = cur;
        cur *= t;
      }
    } else {
      S cur(1);
      for (std::size_t p = 0; p < out.size(); ++p) {
        out[p] = cur;
        if (p < nodes.size()) cur *= (static_cast<double>(t) - nodes[p]) / scale;
      }
    }
  }
};

}  // namespace detail

// Sequential sampler for the conditional distribution of the row below a
// given strictly decreasing row x: coordinates are fixed left to right, and
// the exact marginal of the next coordinate given the fixed prefix is
// available at every step.
template <class S>
class RowConditional {
 public:
  explicit RowConditional(std::vector<int> upper) : x_(std::move(upper)) {
    const int n = static_cast<int>(x_.size());
    if (n < 2) throw std::invalid_argument("RowConditional: upper row must have length >= 2");
    for (int i = 1; i < n; ++i)
      if (x_[i - 1] <= x_[i]) throw std::invalid_argument("RowConditional: row must strictly decrease");
    m_ = n - 1;
    lo_.resize(m_);
    hi_.resize(m_);
    bool all_singleton = true;
    for (int i = 0; i < m_; ++i) {
      lo_[i] = x_[i + 1];
      hi_[i] = x_[i] - 1;
      all_singleton &= lo_[i] == hi_[i];
    }
    forced_ = all_singleton;
    if constexpr (!is_exact_scalar_v<S>) {
      basis_.nodes.resize(static_cast<std::size_t>(std::max(0, m_ - 1)));
      for (int q = 0; q + 1 < m_; ++q) basis_.nodes[q] = 0.5 * (lo_[q] + hi_[q]);
      // Scale factors by the mean node spacing: divided-difference weights
      // then stay bounded (binomial/p! sized) instead of growing like
      // (span/spacing)^p / p!, and basis values stay below overflow for the
      // supported ranks.
      basis_.scale = 1.0;
      if (m_ >= 3)
        basis_.scale = std::max(1.0, (basis_.nodes.front() - basis_.nodes.back()) /
                                         static_cast<double>(m_ - 2));
    }
    reset();
  }

  int size() const { return m_; }
  std::pair<int, int> range(int i) const { return {lo_[i], hi_[i]}; }
  int next_index() const { return next_; }
  bool done() const { return next_ == m_; }

  void reset() {
    next_ = 0;
    fixed_.clear();
    if (forced_) return;
    M_.assign(static_cast<std::size_t>(m_), std::vector<S>(static_cast<std::size_t>(m_), S(0)));
    std::vector<S> phi(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      for (int t = lo_[i]; t <= hi_[i]; ++t) {
        basis_.evaluate(t, phi);
        for (int p = 0; p < m_; ++p) M_[i][p] += phi[static_cast<std::size_t>(p)];
      }
      if constexpr (!is_exact_scalar_v<S>) {
        S mx(0);
        for (const S& v : M_[i]) mx = std::max(mx, scalar_abs(v));
        if (mx > S(0))
          for (S& v : M_[i]) v /= mx;
      }
    }
    inv_ = dense_inverse(M_);
    fixes_since_refresh_ = 0;
  }

  // Conditional probabilities of the next coordinate over its range, given
  // the prefix fixed so far.
  std::vector<S> next_marginal() const {
    if (done()) throw std::logic_error("RowConditional: all coordinates fixed");
    const int i = next_;
    const int width = hi_[i] - lo_[i] + 1;
    std::vector<S> f(static_cast<std::size_t>(width));
    if (width == 1) {
      // Singleton ranges are forced; no linear algebra needed.
      f[0] = S(1);
      return f;
    }
    std::vector<S> w(static_cast<std::size_t>(m_));
    for (int p = 0; p < m_; ++p) w[static_cast<std::size_t>(p)] = inv_[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
    std::vector<S> phi(static_cast<std::size_t>(m_));
    S total(0);
    for (int t = lo_[i]; t <= hi_[i]; ++t) {
      basis_.evaluate(t, phi);
      S v(0);
      for (int p = 0; p < m_; ++p) v += phi[static_cast<std::size_t>(p)] * w[static_cast<std::size_t>(p)];
      f[static_cast<std::size_t>(t - lo_[i])] = v;
      total += v;
    }
    if (total == S(0)) throw std::logic_error("RowConditional: vanishing marginal mass");
    for (auto& v : f) {
      v /= total;
      if constexpr (is_exact_scalar_v<S>) {
        if (v < S(0)) throw std::logic_error("RowConditional: negative exact probability");
      } else {
        if (v < S(-1e-6)) throw std::runtime_error("RowConditional: negative probability beyond noise");
        if (v < S(0)) v = S(0);
      }
    }
    return f;
  }

  void fix_next(int value) {
    if (done()) throw std::logic_error("RowConditional: all coordinates fixed");
    const int i = next_;
    if (value < lo_[i] || value > hi_[i])
      throw std::invalid_argument("RowConditional: value outside candidate range");
    ++next_;
    fixed_.push_back(value);
    if (forced_ || lo_[i] == hi_[i]) return;  // power sum over a singleton already equals phi(value)

    std::vector<S> phi(static_cast<std::size_t>(m_));
    basis_.evaluate(value, phi);

    if constexpr (!is_exact_scalar_v<S>) {
      if (++fixes_since_refresh_ >= 40) {
        M_[static_cast<std::size_t>(i)] = phi;
        inv_ = dense_inverse(M_);
        fixes_since_refresh_ = 0;
        return;
      }
    }

    // Rank-one update of the inverse for replacing row i with phi.
    std::vector<S> u(static_cast<std::size_t>(m_));
    for (int p = 0; p < m_; ++p)
      u[static_cast<std::size_t>(p)] = phi[static_cast<std::size_t>(p)] - M_[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
    S denom(1);
    for (int p = 0; p < m_; ++p)
      denom += u[static_cast<std::size_t>(p)] * inv_[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
    if (denom == S(0)) throw std::logic_error("RowConditional: singular rank-one update");
    std::vector<S> vrow(static_cast<std::size_t>(m_), S(0));  // u^T inv
    for (int p = 0; p < m_; ++p) {
      const S& up = u[static_cast<std::size_t>(p)];
      if (up == S(0)) continue;
      for (int c = 0; c < m_; ++c) vrow[static_cast<std::size_t>(c)] += up * inv_[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)];
    }
    std::vector<S> col(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) col[static_cast<std::size_t>(r)] = inv_[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
    for (int r = 0; r < m_; ++r) {
      const S factor = col[static_cast<std::size_t>(r)] / denom;
      if (factor == S(0)) continue;
      for (int c = 0; c < m_; ++c)
        inv_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -= factor * vrow[static_cast<std::size_t>(c)];
    }
    M_[static_cast<std::size_t>(i)] = phi;
  }

  // Complete the remaining coordinates at random; returns the full row
  // (already-fixed prefix included).
  std::vector<int> sample(CounterRng& rng) {
    while (!done()) {
      const int i = next_;
      const auto probs = next_marginal();
      const double u = rng.uniform01();
      double cum = 0.0;
      int chosen = hi_[i];
      for (int t = lo_[i]; t <= hi_[i]; ++t) {
        cum += static_cast<double>(probs[static_cast<std::size_t>(t - lo_[i])]);
        if (u < cum) {
          chosen = t;
          break;
        }
      }
      fix_next(chosen);
    }
    return fixed_;
  }

  // Probability of a complete lower row as the product of the sequential
  // conditionals (resets the sampler).
  S joint_probability(const std::vector<int>& y) {
    if (static_cast<int>(y.size()) != m_) throw std::invalid_argument("joint_probability: bad row size");
    reset();
    S p(1);
    for (int i = 0; i < m_; ++i) {
      if (y[static_cast<std::size_t>(i)] < lo_[i] || y[static_cast<std::size_t>(i)] > hi_[i]) return S(0);
      const auto probs = next_marginal();
      p *= probs[static_cast<std::size_t>(y[static_cast<std::size_t>(i)] - lo_[i])];
      fix_next(y[static_cast<std::size_t>(i)]);
    }
    return p;
  }

 private:
  std::vector<int> x_;
  int m_ = 0;
  bool forced_ = false;
  std::vector<int> lo_, hi_;
  detail::SamplerBasis<S> basis_;
  DenseMatrix<S> M_;
  DenseMatrix<S> inv_;
  int next_ = 0;
  std::vector<int> fixed_;
  int fixes_since_refresh_ = 0;
};

// The exact conditional distribution of the row below x, as a sequential
// sampler over exact rationals.
inline RowConditional<Rational> conditional_row_distribution(const std::vector<int>& x) {
  return RowConditional<Rational>(x);
}

struct GlauberParams {
  std::uint64_t steps = 0;
};

// Deterministic initial state for the Glauber chain: every bead pushed to the
// top of its range, cascaded down.
inline BeadArray glauber_initial(const SawtoothSpec& spec) {
  BeadArray p;
  p.rows.resize(static_cast<std::size_t>(spec.N));
  p.rows[static_cast<std::size_t>(spec.N - 1)] = spec.top;
  for (int k = spec.N - 1; k >= 1; --k) {
    const auto& x = p.rows[static_cast<std::size_t>(k)];
    std::vector<int> y(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - 1;
    p.rows[static_cast<std::size_t>(k - 1)] = std::move(y);
  }
  return p;
}

// Single-bead +-1 Metropolis moves on the interlacing polytope (row N is
// frozen).  Uniform stationary distribution; mixing-time defaults are the
// caller's business.
class GlauberChain {
 public:
  explicit GlauberChain(const SawtoothSpec& spec) : spec_(spec), state_(glauber_initial(spec)) {}

  const BeadArray& state() const { return state_; }

  void step(std::uint64_t proposals, CounterRng& rng) {
    const int N = spec_.N;
    if (N == 1) return;
    // Number of movable beads: threads 1..N-1.
    const int movable = N * (N - 1) / 2;
    for (std::uint64_t s = 0; s < proposals; ++s) {
      int idx = static_cast<int>(rng.uniform_int(0, movable - 1));
      int k = 1;
      while (idx >= k) {
        idx -= k;
        ++k;
      }
      const int i = idx;  // bead i of thread k (0-indexed within rows[k-1])
      const int delta = rng.uniform01() < 0.5 ? 1 : -1;
      auto& row = state_.rows[static_cast<std::size_t>(k - 1)];
      const int proposed = row[static_cast<std::size_t>(i)] + delta;
      if (allowed(k, i, proposed)) row[static_cast<std::size_t>(i)] = proposed;
    }
  }

 private:
  bool allowed(int k, int i, int value) const {
    const auto& above = state_.rows[static_cast<std::size_t>(k)];  // thread k+1, length k+1
    if (!(above[static_cast<std::size_t>(i)] > value && value >= above[static_cast<std::size_t>(i) + 1]))
      return false;
    if (k >= 2) {
      const auto& below = state_.rows[static_cast<std::size_t>(k - 2)];  // thread k-1, length k-1
      if (i < k - 1 && !(value > below[static_cast<std::size_t>(i)])) return false;
      if (i >= 1 && !(below[static_cast<std::size_t>(i) - 1] >= value)) return false;
    }
    return true;
  }

  SawtoothSpec spec_;
  BeadArray state_;
};

enum class SampleMethod { exact, glauber };

namespace detail {

template <class S>
BeadArray sample_pattern_typed(const SawtoothSpec& spec, CounterRng& rng) {
  BeadArray p;
  p.rows.resize(static_cast<std::size_t>(spec.N));
  p.rows[static_cast<std::size_t>(spec.N - 1)] = spec.top;
  for (int level = spec.N; level >= 2; --level) {
    RowConditional<S> cond(p.rows[static_cast<std::size_t>(level - 1)]);
    p.rows[static_cast<std::size_t>(level - 2)] = cond.sample(rng);
  }
  return p;
}

}  // namespace detail

// Exactly uniform sample (sequential determinantal sampler) or Glauber
// approximation.  Deterministic given (spec, seed, method).
inline BeadArray sample_pattern(const SawtoothSpec& spec, std::uint64_t seed,
                                SampleMethod method = SampleMethod::exact,
                                const GlauberParams& glauber = {}) {
  spec.validate();
  CounterRng rng(seed);
  if (method == SampleMethod::exact) {
    if (spec.N > 120) throw std::invalid_argument("sample_pattern: exact method needs N <= 120");
    if (spec.N <= 40) return detail::sample_pattern_typed<Rational>(spec, rng);
    return detail::sample_pattern_typed<double>(spec, rng);
  }
  if (spec.N > 500) throw std::invalid_argument("sample_pattern: glauber needs N <= 500");
  if (glauber.steps == 0) throw std::invalid_argument("sample_pattern: glauber needs a step count");
  GlauberChain chain(spec);
  chain.step(glauber.steps, rng);
  return chain.state();
}

// Laplace transform of the thread-k bead mixture: the exact finite sum over
// the row-k marginal of the orbital transform at the row's particle
// configuration.
template <class S>
S laplace_L(const SawtoothSpec& spec, int k, const std::vector<S>& a,
            std::uint64_t enum_limit = 1'000'000) {
  spec.validate();
  if (k < 1 || k > spec.N) throw std::invalid_argument("laplace_L: k out of range");
  if (static_cast<int>(a.size()) != k) throw std::invalid_argument("laplace_L: a must have k entries");
  if (k == spec.N) return orbital_laplace(a, spec.top);  // bead locations deterministic
  const BigInt total = count_patterns(spec);
  if (total > enum_limit)
    throw budget_error("laplace_L: pattern count " + total.str() + " exceeds exhaustive budget");
  const auto marginal = row_marginal(spec, k, enum_limit);
  S acc(0);
  const S tot = scalar_from_rational<S>(Rational(total));
  for (const auto& [row, weight] : marginal)
    acc += scalar_from_rational<S>(Rational(weight)) / tot * orbital_laplace(a, row);
  return acc;
}

// The same transform computed through the rank-N orbital transform on the
// padded spectrum (a_1..a_k, 0..0) with the cumulant prefactor
// prod_i (a_i/(e^{a_i}-1))^{N-k}; a_i = 0 contributes the removable value 1.
template <class S>
S laplace_L_char(const SawtoothSpec& spec, int k, const std::vector<S>& a) {
  spec.validate();
  if (k < 1 || k > spec.N) throw std::invalid_argument("laplace_L_char: k out of range");
  if (static_cast<int>(a.size()) != k) throw std::invalid_argument("laplace_L_char: a must have k entries");
  using std::exp;
  std::vector<S> padded = a;
  padded.resize(static_cast<std::size_t>(spec.N), S(0));
  S value = orbital_laplace(padded, spec.top);
  for (int i = 0; i < k; ++i) {
    if (a[static_cast<std::size_t>(i)] == S(0)) continue;
    S factor = a[static_cast<std::size_t>(i)] / (exp(a[static_cast<std::size_t>(i)]) - S(1));
    for (int e = 0; e < spec.N - k; ++e) value *= factor;
  }
  return value;
}

// Moments psi_1, psi_2 of the empirical measure of the top boundary, taken at
// the tile-centroid abscissas top_i + 1/2.  With centroid abscissas the
// finite-rank mean of the rescaled bottom bead vanishes identically:
// E[b_{11}] = p_1(top)/N - (N-1)/2 exactly, which equals
// N(psi1 - 1/2) for this psi1 (identity exercised by the unit tests).
struct MomentEstimate {
  double psi1 = 0.0;
  double psi2 = 0.0;
};

inline MomentEstimate moment_estimate(const SawtoothSpec& spec) {
  spec.validate();
  MomentEstimate m;
  const double n = spec.N;
  for (int b : spec.top) {
    const double v = (b + 0.5) / n;
    m.psi1 += v;
    m.psi2 += v * v;
  }
  m.psi1 /= n;
  m.psi2 /= n;
  if (m.psi2 < m.psi1 * m.psi1 - 1e-12) throw std::logic_error("moment_estimate: psi2 < psi1^2");
  return m;
}

enum class Normalizer { sqrt_variance, plain_variance };

// Rescaled bead coordinates of one thread:
//   (b/sqrt(N) - (psi1 - 1/2) sqrt(N)) / sqrt(psi2 - psi1^2 - 1/12).
// The plain_variance variant divides by psi2 - psi1^2 - 1/12 without the
// square root; it exists so reports can show both readings side by side.
inline std::vector<double> rescale_thread(const std::vector<int>& row, int N,
                                          const MomentEstimate& m,
                                          Normalizer normalizer = Normalizer::sqrt_variance) {
  const double var = m.psi2 - m.psi1 * m.psi1 - 1.0 / 12.0;
  if (!(var > 0)) throw std::invalid_argument("rescale_thread: psi2 - psi1^2 - 1/12 must be positive");
  const double denom = normalizer == Normalizer::sqrt_variance ? std::sqrt(var) : var;
  const double sqn = std::sqrt(static_cast<double>(N));
  std::vector<double> out;
  out.reserve(row.size());
  for (int b : row) out.push_back((b / sqn - (m.psi1 - 0.5) * sqn) / denom);
  return out;
}

// Lozenge tiles of a pattern in 120-degree lattice coordinates.  The anchor
// (u, v) is the lattice point at the tile's lower-left corner:
//   vertical: (u,v), (u,v+1), (u+1,v+2), (u+1,v+1)   [bead b on thread k: u=b, v=k-1]
//   left:     (u,v), (u+1,v), (u+1,v+1), (u,v+1)
//   right:    (u,v), (u+1,v), (u+2,v+1), (u+1,v+1)
// Horizontal strips between bead halves are filled deterministically; the
// fill window spans the top row widened by one unit on each side.
struct Tile {
  enum class Kind { left, right, vertical };
  Kind kind;
  int u = 0;
  int v = 0;

  friend bool operator==(const Tile&, const Tile&) = default;
};

inline const char* tile_kind_name(Tile::Kind k) {
  switch (k) {
    case Tile::Kind::left: return "left";
    case Tile::Kind::right: return "right";
    default: return "vertical";
  }
}

inline std::vector<Tile> pattern_to_lozenges(const BeadArray& p) {
  p.validate();
  const int N = p.rank();
  const int lo = p.rows.back().back() - 1;
  const int hi = p.rows.back().front() + 1;

  std::vector<Tile> tiles;
  for (int k = 1; k <= N; ++k)
    for (int b : p.rows[static_cast<std::size_t>(k - 1)])
      tiles.push_back(Tile{Tile::Kind::vertical, b, k - 1});

  // Strip s holds the lower halves of thread s+1 beads (down-triangles at
  // their positions) and the upper halves of thread s beads (up-triangles).
  // Free triangles pair deterministically: adjacent (down, up) at one index
  // is a left tile, (up at m, down at m+1) is a right tile.
  for (int s = 0; s < N; ++s) {
    const auto& dpos = p.rows[static_cast<std::size_t>(s)];
    static const std::vector<int> empty;
    const auto& upos = s >= 1 ? p.rows[static_cast<std::size_t>(s - 1)] : empty;
    auto contains = [](const std::vector<int>& v, int m) {
      return std::binary_search(v.rbegin(), v.rend(), m);
    };
    std::optional<int> held_down, held_up;
    for (int m = lo; m <= hi; ++m) {
      if (contains(dpos, m)) {
        if (held_down || held_up) throw std::logic_error("pattern_to_lozenges: fill out of sync");
      } else if (held_up) {
        tiles.push_back(Tile{Tile::Kind::right, *held_up, s});
        held_up.reset();
      } else {
        held_down = m;
      }
      if (contains(upos, m)) {
        if (held_down || held_up) throw std::logic_error("pattern_to_lozenges: fill out of sync");
      } else if (held_down) {
        tiles.push_back(Tile{Tile::Kind::left, m, s});
        held_down.reset();
      } else {
        held_up = m;
      }
    }
    if (held_up) tiles.push_back(Tile{Tile::Kind::right, *held_up, s});
    if (held_down) throw std::logic_error("pattern_to_lozenges: dangling down triangle");
  }
  return tiles;
}

inline nlohmann::json tiles_to_json(const std::vector<Tile>& tiles) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tiles) arr.push_back({{"type", tile_kind_name(t.kind)}, {"u", t.u}, {"v", t.v}});
  return arr;
}

}  // namespace sawtooth
