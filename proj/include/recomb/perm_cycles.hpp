#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "recomb/rational.hpp"

namespace recomb::cyc {

// A permutation of {0..n-1} (external interfaces are 1-based).
class Permutation {
 public:
  explicit Permutation(std::vector<uint32_t> mapping) : map_(std::move(mapping)) {
    std::vector<bool> seen(map_.size(), false);
    for (uint32_t v : map_) {
      if (v >= map_.size() || seen[v])
        throw std::invalid_argument("permutation mapping is not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(uint32_t n) {
    std::vector<uint32_t> m(n);
    for (uint32_t i = 0; i < n; ++i) m[i] = i;
    return Permutation(std::move(m));
  }

  static Permutation from_one_based(const std::vector<uint64_t>& img) {
    std::vector<uint32_t> m;
    m.reserve(img.size());
    for (uint64_t v : img) {
      if (v == 0 || v > img.size())
        throw std::invalid_argument("one-based permutation image out of range");
      m.push_back(uint32_t(v - 1));
    }
    return Permutation(std::move(m));
  }

  uint32_t n() const { return uint32_t(map_.size()); }
  uint32_t apply(uint32_t i) const { return map_.at(i); }
  const std::vector<uint32_t>& mapping() const { return map_; }

 private:
  std::vector<uint32_t> map_;
};

struct CycleDecomposition {
  std::vector<std::vector<uint32_t>> cycles;  // each starts at its smallest element
  uint32_t count = 0;
  uint32_t first_cycle_length = 0;  // length of the cycle containing element 0
};

// Canonical decomposition: sweep elements in ascending order, so each cycle
// begins at its smallest member and cycles are ordered by those members. The
// first cycle therefore contains element 0.
inline CycleDecomposition cycle_decompose(const Permutation& p) {
  const uint32_t n = p.n();
  CycleDecomposition out;
  std::vector<bool> visited(n, false);
  for (uint32_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::vector<uint32_t> cycle;
    uint32_t cur = start;
    do {
      visited[cur] = true;
      cycle.push_back(cur);
      cur = p.apply(cur);
    } while (cur != start);
    out.cycles.push_back(std::move(cycle));
  }
  out.count = uint32_t(out.cycles.size());
  out.first_cycle_length = n == 0 ? 0 : uint32_t(out.cycles.front().size());
  return out;
}

// Exact raw moments mu[n][s] = E[(cycle count of a uniform n-permutation)^s],
// filled by the recursion that conditions on the length of the cycle through
// element 1:
//   mu_{n,s} = 1 + (1/n) * sum_{r=1..s} C(s,r) * sum_{j=1..n-1} mu_{j,r}
// Prefix sums over j make the fill O(n_max * s_max^2) rational operations.
struct MomentTable {
  uint32_t n_max = 0, s_max = 0;
  std::vector<std::vector<Rational>> values;  // values[n][s-1], n in 0..n_max

  const Rational& at(uint32_t n, uint32_t s) const {
    if (n == 0 || n > n_max || s == 0 || s > s_max)
      throw std::out_of_range("moment table lookup out of range");
    return values[n][s - 1];
  }
};

inline MomentTable moment_table(uint32_t n_max, uint32_t s_max) {
  if (n_max == 0 || s_max == 0)
    throw std::invalid_argument("moment_table needs n_max >= 1 and s_max >= 1");
  MomentTable t;
  t.n_max = n_max;
  t.s_max = s_max;
  t.values.assign(n_max + 1, std::vector<Rational>(s_max, Rational(0)));
  const auto binom = pascal_rows(s_max);
  std::vector<Rational> prefix(s_max, Rational(0));  // prefix[r-1] = sum_{j<n} mu_{j,r}
  for (uint32_t n = 1; n <= n_max; ++n) {
    for (uint32_t s = 1; s <= s_max; ++s) {
      Rational acc = 0;
      for (uint32_t r = 1; r <= s; ++r) acc += Rational(binom[s][r]) * prefix[r - 1];
      t.values[n][s - 1] = Rational(1) + acc / n;
    }
    for (uint32_t r = 1; r <= s_max; ++r) prefix[r - 1] += t.values[n][r - 1];
  }
  return t;
}

inline Rational harmonic(uint32_t n) {
  Rational h = 0;
  for (uint32_t i = 1; i <= n; ++i) h += Rational(1, i);
  return h;
}

// E[N_n] = H_n.
inline Rational mean_cycles(uint32_t n) {
  if (n == 0) throw std::invalid_argument("mean_cycles needs n >= 1");
  return harmonic(n);
}

// Var[N_n] = H_n - sum_{i<=n} 1/i^2.
inline Rational variance_cycles(uint32_t n) {
  if (n == 0) throw std::invalid_argument("variance_cycles needs n >= 1");
  Rational v = harmonic(n);
  for (uint32_t i = 1; i <= n; ++i) v -= Rational(1, uint64_t(i) * i);
  return v;
}

// Unsigned Stirling numbers of the first kind, row n: c(n,k) counts
// n-permutations with exactly k cycles; c(n,k) = c(n-1,k-1) + (n-1)c(n-1,k).
inline std::vector<BigInt> stirling_row(uint32_t n) {
  std::vector<BigInt> row{BigInt(1)};  // row 0: c(0,0) = 1
  for (uint32_t i = 1; i <= n; ++i) {
    std::vector<BigInt> next(i + 1, BigInt(0));
    for (uint32_t k = 0; k < row.size(); ++k) {
      if (row[k] == 0) continue;
      next[k + 1] += row[k];
      next[k] += BigInt(i - 1) * row[k];
    }
    row = std::move(next);
  }
  return row;
}

// P(N_n = k) = c(n,k) / n! for k = 1..n.
inline std::map<uint32_t, Rational> stirling_distribution(uint32_t n) {
  if (n == 0) throw std::invalid_argument("stirling_distribution needs n >= 1");
  if (n > 200)
    throw std::invalid_argument("stirling_distribution limited to n <= 200");
  const std::vector<BigInt> row = stirling_row(n);
  const BigInt nf = factorial(n);
  std::map<uint32_t, Rational> out;
  for (uint32_t k = 1; k <= n; ++k) out[k] = Rational(row[k], nf);
  return out;
}

// --- deterministic sampling ---------------------------------------------

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform draw from [0, bound) by rejection from the top of the 64-bit range;
// unbiased and fully determined by the mt19937_64 stream (which the standard
// pins down bit-for-bit, unlike std::uniform_int_distribution).
inline uint64_t bounded_uniform(std::mt19937_64& rng, uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bounded_uniform needs bound >= 1");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Unbiased in-place shuffle (backward Fisher-Yates).
inline void shuffle_in_place(std::vector<uint32_t>& a, std::mt19937_64& rng) {
  for (size_t i = a.size(); i > 1; --i) {
    const uint64_t j = bounded_uniform(rng, i);
    std::swap(a[i - 1], a[j]);
  }
}

// Rank of a permutation in lexicographic order of mappings (factorial base);
// n <= 20 to fit 64 bits.
inline uint64_t lehmer_rank(const Permutation& p) {
  const uint32_t n = p.n();
  if (n > 20) throw std::invalid_argument("lehmer_rank limited to n <= 20");
  uint64_t rank = 0;
  uint64_t fact = 1;
  for (uint32_t i = 2; i <= n; ++i) fact *= i;
  for (uint32_t i = 0; i < n; ++i) {
    if (n - i > 0) fact /= (n - i);
    uint32_t smaller = 0;
    for (uint32_t j = i + 1; j < n; ++j)
      if (p.apply(j) < p.apply(i)) ++smaller;
    rank += smaller * fact;
  }
  return rank;
}

// Removes the cycle through element 0 and relabels the survivors in
// ascending order; the result is the permutation the survivors induce.
inline Permutation induced_permutation(const Permutation& p) {
  const uint32_t n = p.n();
  CycleDecomposition dec = cycle_decompose(p);
  if (dec.first_cycle_length >= n)
    throw std::invalid_argument("induced_permutation: the first cycle covers everything");
  std::vector<bool> removed(n, false);
  for (uint32_t v : dec.cycles.front()) removed[v] = true;
  std::vector<uint32_t> survivors;
  std::vector<uint32_t> rank(n, 0);
  for (uint32_t i = 0; i < n; ++i) {
    if (removed[i]) continue;
    rank[i] = uint32_t(survivors.size());
    survivors.push_back(i);
  }
  std::vector<uint32_t> induced(survivors.size());
  for (uint32_t l = 0; l < survivors.size(); ++l)
    induced[l] = rank[p.apply(survivors[l])];
  return Permutation(std::move(induced));
}

// Beyond this dimension the induced-permutation histogram in SampleSummary
// stays empty ((n-1)! buckets grow too fast to tally meaningfully).
inline constexpr uint32_t kInducedCheckMaxN = 6;

struct SampleSummary {
  uint32_t n = 0;
  uint64_t trials = 0;
  uint64_t seed = 0;
  uint64_t cycle_count_sum = 0;
  uint64_t cycle_count_sq_sum = 0;
  std::vector<uint64_t> first_cycle_counts;  // index k-1: trials with L_1 = k
  // induced_counts[k-1][rank]: trials with L_1 = k whose induced permutation
  // has the given Lehmer rank; filled only for n <= kInducedCheckMaxN, k < n
  std::vector<std::vector<uint64_t>> induced_counts;

  Rational empirical_mean() const { return Rational(cycle_count_sum, trials); }
  Rational empirical_variance() const {
    Rational mean = empirical_mean();
    return Rational(cycle_count_sq_sum, trials) - mean * mean;
  }
};

// Samples `trials` uniform n-permutations and tallies cycle count moments,
// the first-cycle-length histogram and (for tiny n) the induced-permutation
// histogram. Trials are processed in fixed 2^16 chunks, each with its own
// splitmix64-derived generator, so results are reproducible and independent
// of any threading or batching concerns.
inline SampleSummary sample_cycles(uint32_t n, uint64_t trials, uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_cycles needs n >= 1");
  if (trials == 0) throw std::invalid_argument("sample_cycles needs trials >= 1");
  SampleSummary out;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  out.first_cycle_counts.assign(n, 0);
  const bool track_induced = n <= kInducedCheckMaxN && n >= 2;
  if (track_induced) {
    uint64_t fact = 1;
    for (uint32_t i = 2; i < n; ++i) fact *= i;  // (n-1)! buckets at most
    out.induced_counts.assign(n - 1, std::vector<uint64_t>());
    for (uint32_t k = 1; k < n; ++k) {
      uint64_t buckets = 1;
      for (uint32_t i = 2; i <= n - k; ++i) buckets *= i;
      out.induced_counts[k - 1].assign(buckets, 0);
    }
    (void)fact;
  }

  constexpr uint64_t kChunk = uint64_t(1) << 16;
  std::vector<uint32_t> perm(n);
  std::vector<uint32_t> stamp(n, 0);
  uint32_t stamp_now = 0;

  for (uint64_t done = 0; done < trials; done += kChunk) {
    const uint64_t batch = std::min(kChunk, trials - done);
    std::mt19937_64 rng(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (done / kChunk + 1)));
    for (uint64_t t = 0; t < batch; ++t) {
      for (uint32_t i = 0; i < n; ++i) perm[i] = i;
      shuffle_in_place(perm, rng);

      ++stamp_now;
      uint32_t cycles = 0;
      uint32_t first_len = 0;
      for (uint32_t start = 0; start < n; ++start) {
        if (stamp[start] == stamp_now) continue;
        ++cycles;
        uint32_t len = 0;
        uint32_t cur = start;
        do {
          stamp[cur] = stamp_now;
          ++len;
          cur = perm[cur];
        } while (cur != start);
        if (start == 0) first_len = len;
      }
      out.cycle_count_sum += cycles;
      out.cycle_count_sq_sum += uint64_t(cycles) * cycles;
      out.first_cycle_counts[first_len - 1] += 1;

      if (track_induced && first_len < n) {
        Permutation p{std::vector<uint32_t>(perm)};
        const uint64_t rank = lehmer_rank(induced_permutation(p));
        out.induced_counts[first_len - 1][rank] += 1;
      }
    }
  }
  return out;
}

}  // namespace recomb::cyc
