#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recomb/rational.hpp"

namespace recomb {

// Default cap on elementary checks (word scans, subset probes) for the
// enumeration-heavy operations. Override per call or via RECOMB_WORK_BUDGET
// in the CLI.
inline constexpr uint64_t kDefaultWorkBudget = 100'000'000;

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tracks elementary-operation spend against a hard cap.
struct WorkMeter {
  uint64_t budget = kDefaultWorkBudget;
  uint64_t used = 0;
  void charge(uint64_t units, const char* site) {
    used = (units > std::numeric_limits<uint64_t>::max() - used)
               ? std::numeric_limits<uint64_t>::max()
               : used + units;
    if (used > budget) {
      throw BudgetExceededError(std::string(site) + ": work budget of " +
                                std::to_string(budget) +
                                " elementary checks exceeded");
    }
  }
};

namespace codes {

// A symbol alphabet. Symbols are arbitrary distinct tokens; internally words
// store symbol *indices*, and linear-code semantics (when claimed) treat the
// index of a symbol as its value in Z_q.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2) throw std::invalid_argument("alphabet needs at least 2 symbols");
    if (symbols_.size() > 256) throw std::invalid_argument("alphabet larger than 256 symbols is unsupported");
    for (size_t i = 0; i < symbols_.size(); ++i)
      for (size_t j = i + 1; j < symbols_.size(); ++j)
        if (symbols_[i] == symbols_[j])
          throw std::invalid_argument("alphabet symbols must be distinct: '" + symbols_[i] + "'");
  }

  static Alphabet binary() { return Alphabet({"0", "1"}); }

  static Alphabet integers(uint32_t q) {
    std::vector<std::string> s;
    s.reserve(q);
    for (uint32_t i = 0; i < q; ++i) s.push_back(std::to_string(i));
    return Alphabet(std::move(s));
  }

  uint32_t q() const { return uint32_t(symbols_.size()); }
  const std::string& symbol(uint32_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  std::optional<uint32_t> index_of(std::string_view token) const {
    for (size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i] == token) return uint32_t(i);
    return std::nullopt;
  }

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<std::string> symbols_;
};

// A word is a vector of symbol indices (q <= 256 so one byte per symbol).
using Word = std::vector<uint8_t>;

// A sorted, duplicate-free set of 0-based positions. External interfaces are
// 1-based; the conversion happens only at the I/O boundary.
class PositionSet {
 public:
  PositionSet() = default;
  explicit PositionSet(std::vector<uint32_t> zero_based) : idx_(std::move(zero_based)) {
    std::sort(idx_.begin(), idx_.end());
    if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end())
      throw std::invalid_argument("position set contains a duplicate");
  }

  static PositionSet from_one_based(const std::vector<uint64_t>& one_based) {
    std::vector<uint32_t> v;
    v.reserve(one_based.size());
    for (uint64_t p : one_based) {
      if (p == 0 || p > std::numeric_limits<uint32_t>::max())
        throw std::invalid_argument("positions are 1-based and must fit in 32 bits");
      v.push_back(uint32_t(p - 1));
    }
    return PositionSet(std::move(v));
  }

  static PositionSet range(uint32_t count) {
    std::vector<uint32_t> v(count);
    for (uint32_t i = 0; i < count; ++i) v[i] = i;
    return PositionSet(std::move(v));
  }

  std::vector<uint64_t> to_one_based() const {
    std::vector<uint64_t> v;
    v.reserve(idx_.size());
    for (uint32_t p : idx_) v.push_back(uint64_t(p) + 1);
    return v;
  }

  bool contains(uint32_t p) const { return std::binary_search(idx_.begin(), idx_.end(), p); }
  size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }
  const std::vector<uint32_t>& values() const { return idx_; }

  PositionSet union_with(const PositionSet& o) const {
    std::vector<uint32_t> v;
    v.reserve(idx_.size() + o.idx_.size());
    std::set_union(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(), std::back_inserter(v));
    PositionSet r;
    r.idx_ = std::move(v);
    return r;
  }

  PositionSet minus(const PositionSet& o) const {
    std::vector<uint32_t> v;
    std::set_difference(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(), std::back_inserter(v));
    PositionSet r;
    r.idx_ = std::move(v);
    return r;
  }

  PositionSet intersect(const PositionSet& o) const {
    std::vector<uint32_t> v;
    std::set_intersection(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(), std::back_inserter(v));
    PositionSet r;
    r.idx_ = std::move(v);
    return r;
  }

  bool subset_of(const PositionSet& o) const {
    return std::includes(o.idx_.begin(), o.idx_.end(), idx_.begin(), idx_.end());
  }

  auto operator<=>(const PositionSet&) const = default;

 private:
  std::vector<uint32_t> idx_;
};

inline std::string to_string(const PositionSet& s) {
  std::string out = "{";
  bool first = true;
  for (uint64_t p : s.to_one_based()) {
    if (!first) out += ",";
    out += std::to_string(p);
    first = false;
  }
  return out + "}";
}

// A block code: a set of distinct length-n words over an alphabet. Words are
// kept sorted so every downstream enumeration is deterministic.
class Code {
 public:
  Code(Alphabet alphabet, uint32_t n, std::vector<Word> words,
       std::optional<bool> linear = std::nullopt,
       std::optional<uint32_t> declared_k = std::nullopt)
      : alphabet_(std::move(alphabet)),
        n_(n),
        words_(std::move(words)),
        linear_(linear),
        declared_k_(declared_k) {
    if (n_ == 0) throw std::invalid_argument("code length must be positive");
    if (words_.empty()) throw std::invalid_argument("a code must contain at least one word");
    const uint32_t q = alphabet_.q();
    for (const Word& w : words_) {
      if (w.size() != n_) throw std::invalid_argument("word length differs from code length");
      for (uint8_t s : w)
        if (s >= q) throw std::invalid_argument("word symbol index out of alphabet range");
    }
    std::sort(words_.begin(), words_.end());
    auto dup = std::adjacent_find(words_.begin(), words_.end());
    if (dup != words_.end()) throw std::invalid_argument("duplicate words in code");
    if (declared_k_) {
      BigInt expect = 1;
      for (uint32_t i = 0; i < *declared_k_; ++i) expect *= q;
      if (expect != BigInt(words_.size()))
        throw std::invalid_argument("declared k inconsistent with word count: q^k != #words");
    }
  }

  uint32_t n() const { return n_; }
  uint32_t q() const { return alphabet_.q(); }
  const Alphabet& alphabet() const { return alphabet_; }
  uint64_t size() const { return words_.size(); }
  const std::vector<Word>& words() const { return words_; }
  std::optional<bool> linear() const { return linear_; }
  std::optional<uint32_t> declared_k() const { return declared_k_; }

  // log_q of the word count; exact integer when q^k matches, else fractional.
  double k() const { return std::log(double(size())) / std::log(double(q())); }

  std::optional<uint32_t> k_exact() const {
    if (declared_k_) return declared_k_;
    BigInt p = 1;
    const uint64_t m = size();
    for (uint32_t e = 0; e <= 64; ++e) {
      if (p == BigInt(m)) return e;
      if (p > BigInt(m)) break;
      p *= q();
    }
    return std::nullopt;
  }

  bool contains(const Word& w) const {
    return std::binary_search(words_.begin(), words_.end(), w);
  }

 private:
  Alphabet alphabet_;
  uint32_t n_;
  std::vector<Word> words_;
  std::optional<bool> linear_;
  std::optional<uint32_t> declared_k_;
};

inline uint32_t hamming_distance(const Word& x, const Word& y) {
  if (x.size() != y.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  uint32_t d = 0;
  for (size_t i = 0; i < x.size(); ++i) d += (x[i] != y[i]);
  return d;
}

// Exhaustive pairwise minimum distance. Refuses up front when the pair scan
// would exceed the budget.
inline uint32_t min_distance(const Code& code, uint64_t work_budget = kDefaultWorkBudget) {
  const uint64_t m = code.size();
  if (m < 2) throw std::invalid_argument("min_distance needs at least 2 words");
  BigInt estimate = BigInt(m) * (m - 1) / 2 * code.n();
  if (estimate > work_budget) {
    throw BudgetExceededError(
        "min_distance: #words*(#words-1)/2*n = " + estimate.str() +
        " exceeds the work budget of " + std::to_string(work_budget));
  }
  const auto& ws = code.words();
  uint32_t best = code.n() + 1;
  for (size_t i = 0; i < ws.size(); ++i) {
    for (size_t j = i + 1; j < ws.size(); ++j) {
      uint32_t d = 0;
      const Word& a = ws[i];
      const Word& b = ws[j];
      for (size_t p = 0; p < a.size() && d < best; ++p) d += (a[p] != b[p]);
      if (d < best) best = d;
      if (best == 1) return 1;  // cannot get lower for distinct words
    }
  }
  return best;
}

// Minimum Hamming weight over nonzero words; requires the all-zero word to be
// present (i.e. the code is at least a coset through the origin).
inline uint32_t min_nonzero_weight(const Code& code) {
  const Word zero(code.n(), 0);
  if (!code.contains(zero))
    throw std::invalid_argument("min_nonzero_weight: code does not contain the zero word");
  if (code.size() < 2)
    throw std::invalid_argument("min_nonzero_weight needs at least 2 words");
  uint32_t best = code.n() + 1;
  for (const Word& w : code.words()) {
    uint32_t wt = 0;
    for (uint8_t s : w) wt += (s != 0);
    if (wt != 0 && wt < best) best = wt;
  }
  return best;
}

inline bool is_prime(uint32_t v) {
  if (v < 2) return false;
  for (uint32_t p = 2; uint64_t(p) * p <= v; ++p)
    if (v % p == 0) return false;
  return true;
}

// Checks closure of the word set under coordinatewise addition mod q (with q
// prime), which for a set containing zero is equivalent to Z_q-linearity.
inline bool verify_linear(const Code& code, uint64_t work_budget = kDefaultWorkBudget) {
  const uint32_t q = code.q();
  if (!is_prime(q)) return false;
  const Word zero(code.n(), 0);
  if (!code.contains(zero)) return false;
  const uint64_t m = code.size();
  BigInt estimate = BigInt(m) * m * code.n();
  if (estimate > work_budget) {
    throw BudgetExceededError("verify_linear: #words^2*n = " + estimate.str() +
                              " exceeds the work budget of " + std::to_string(work_budget));
  }
  const auto& ws = code.words();
  Word sum(code.n());
  for (size_t i = 0; i < ws.size(); ++i) {
    for (size_t j = i; j < ws.size(); ++j) {
      for (uint32_t p = 0; p < code.n(); ++p)
        sum[p] = uint8_t((ws[i][p] + ws[j][p]) % q);
      if (!code.contains(sum)) return false;
    }
    // prime q: closure under addition of the finite set implies closure under
    // scalar multiples (repeated addition), so pair sums suffice.
  }
  return true;
}

// True iff every pair of codewords agreeing on all positions of `u` also
// agrees at position `j`; i.e. the projection to u determines coordinate j
// extensionally. Empty u means "j is constant across the code".
inline bool is_determined(const Code& code, const PositionSet& u, uint32_t j,
                          WorkMeter* meter = nullptr) {
  const uint32_t n = code.n();
  if (j >= n) throw std::invalid_argument("is_determined: target position out of range");
  for (uint32_t p : u)
    if (p >= n) throw std::invalid_argument("is_determined: conditioning position out of range");
  if (u.contains(j))
    throw std::invalid_argument("is_determined: target position lies inside the conditioning set");

  const auto& words = code.words();
  const size_t nu = u.size();
  const uint32_t q = code.q();
  const double bits = double(nu) * std::log2(double(q));

  if (bits <= 12.0) {
    // flat table over all q^|u| projection states
    size_t states = 1;
    for (size_t i = 0; i < nu; ++i) states *= q;
    std::vector<int16_t> seen(states, -1);
    uint64_t scanned = 0;
    for (const Word& w : words) {
      ++scanned;
      size_t key = 0;
      for (uint32_t p : u) key = key * q + w[p];
      int16_t& slot = seen[key];
      if (slot < 0) {
        slot = int16_t(w[j]);
      } else if (slot != int16_t(w[j])) {
        if (meter) meter->charge(scanned, "is_determined");
        return false;
      }
    }
    if (meter) meter->charge(scanned, "is_determined");
    return true;
  }

  if (bits <= 63.0) {
    // mixed-radix 64-bit key per projection
    std::unordered_map<uint64_t, uint8_t> seen;
    seen.reserve(words.size() * 2);
    uint64_t scanned = 0;
    for (const Word& w : words) {
      ++scanned;
      uint64_t key = 0;
      for (uint32_t p : u) key = key * q + w[p];
      auto [it, fresh] = seen.emplace(key, w[j]);
      if (!fresh && it->second != w[j]) {
        if (meter) meter->charge(scanned, "is_determined");
        return false;
      }
    }
    if (meter) meter->charge(scanned, "is_determined");
    return true;
  }

  // conditioning sets too wide for a packed key: exact byte-string keys
  std::map<std::vector<uint8_t>, uint8_t> seen;
  uint64_t scanned = 0;
  for (const Word& w : words) {
    ++scanned;
    std::vector<uint8_t> key;
    key.reserve(nu);
    for (uint32_t p : u) key.push_back(w[p]);
    auto [it, fresh] = seen.emplace(std::move(key), w[j]);
    if (!fresh && it->second != w[j]) {
      if (meter) meter->charge(scanned, "is_determined");
      return false;
    }
  }
  if (meter) meter->charge(scanned, "is_determined");
  return true;
}

// All positions outside u that u determines.
inline PositionSet reach(const Code& code, const PositionSet& u, WorkMeter* meter = nullptr) {
  std::vector<uint32_t> out;
  for (uint32_t j = 0; j < code.n(); ++j) {
    if (u.contains(j)) continue;
    if (is_determined(code, u, j, meter)) out.push_back(j);
  }
  return PositionSet(std::move(out));
}

// Visits every k-subset of `pool` in lexicographic order. `fn` returns false
// to abort; the function returns false iff aborted.
template <typename Fn>
inline bool for_each_subset(const std::vector<uint32_t>& pool, uint32_t k, Fn&& fn) {
  const size_t n = pool.size();
  if (k > n) return true;
  std::vector<uint32_t> idx(k);
  for (uint32_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<uint32_t> chosen(k);
  while (true) {
    for (uint32_t i = 0; i < k; ++i) chosen[i] = pool[idx[i]];
    if (!fn(chosen)) return false;
    // advance the combination
    if (k == 0) return true;
    size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) break;
      if (i == 0) return true;
    }
    if (idx[i] == i + n - k) return true;
    ++idx[i];
    for (size_t l = i + 1; l < k; ++l) idx[l] = idx[l - 1] + 1;
  }
}

// Largest reach cardinality over all w-subsets of positions. Refuses when the
// scan estimate C(n,w) * #words exceeds the budget.
inline uint32_t max_reach(const Code& code, uint32_t w, uint64_t work_budget = kDefaultWorkBudget) {
  if (w > code.n()) throw std::invalid_argument("max_reach: subset size exceeds code length");
  BigInt estimate = binomial(code.n(), w) * code.size();
  if (estimate > work_budget) {
    throw BudgetExceededError(
        "max_reach: C(n,w)*#words = " + estimate.str() +
        " exceeds the work budget of " + std::to_string(work_budget));
  }
  std::vector<uint32_t> pool;
  for (uint32_t i = 0; i < code.n(); ++i) pool.push_back(i);
  uint32_t best = 0;
  for_each_subset(pool, w, [&](const std::vector<uint32_t>& sub) {
    PositionSet u{std::vector<uint32_t>(sub)};
    uint32_t r = uint32_t(reach(code, u).size());
    if (r > best) best = r;
    return true;
  });
  return best;
}

// A cardinality that may saturate to "infinite" once past a ceiling; used for
// the fiber-count bound q^w (linear) vs q^(q^w) (general), whose nonlinear
// branch overflows any fixed-width integer almost immediately.
struct ExtendedCount {
  bool is_infinite = false;
  uint64_t value = 0;

  static ExtendedCount finite(uint64_t v) { return {false, v}; }
  static ExtendedCount infinite() { return {true, 0}; }

  std::string str() const { return is_infinite ? "inf" : std::to_string(value); }
};

inline constexpr uint64_t kDefaultCountCeiling = 1'000'000'000'000'000'000ULL;  // 10^18

// q^e, saturating to infinite once the value would exceed `ceiling`.
// Requires q >= 2, so the loop terminates within ~60 iterations regardless
// of e.
inline ExtendedCount pow_saturating(uint64_t q, uint64_t e, uint64_t ceiling = kDefaultCountCeiling) {
  if (q < 2) throw std::invalid_argument("pow_saturating requires base >= 2");
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) {
    if (r > ceiling / q) return ExtendedCount::infinite();
    r *= q;
    if (r > ceiling) return ExtendedCount::infinite();
  }
  return ExtendedCount::finite(r);
}

// Upper bound on the number of distinct fibers a w-subset can induce: q^w for
// linear codes, q^(q^w) in general.
inline ExtendedCount delta_bound(uint32_t q, uint64_t w, bool linear,
                                 uint64_t ceiling = kDefaultCountCeiling) {
  if (q < 2) throw std::invalid_argument("delta_bound requires q >= 2");
  ExtendedCount inner = pow_saturating(q, w, ceiling);
  if (linear) return inner;
  if (inner.is_infinite) return ExtendedCount::infinite();
  return pow_saturating(q, inner.value, ceiling);
}

// a + delta <= c over the extended count, with c allowed to be negative.
inline bool plus_delta_leq(uint64_t a, const ExtendedCount& delta, int64_t c) {
  if (c < 0) return false;
  if (delta.is_infinite) return false;
  // a <= ~1e10 and delta.value <= 1e18 in practice; the sum fits uint64_t,
  // but guard anyway.
  if (delta.value > std::numeric_limits<uint64_t>::max() - a) return false;
  return a + delta.value <= uint64_t(c);
}

// Smallest e >= 0 with q^e >= m (m >= 1).
inline uint32_t ceil_log(uint32_t q, uint64_t m) {
  if (q < 2) throw std::invalid_argument("ceil_log requires q >= 2");
  if (m == 0) throw std::invalid_argument("ceil_log requires m >= 1");
  uint32_t e = 0;
  BigInt p = 1;
  while (p < m) {
    p *= q;
    ++e;
  }
  return e;
}

// Largest e >= 0 with q^e <= m (m >= 1).
inline uint32_t floor_log(uint32_t q, uint64_t m) {
  if (q < 2) throw std::invalid_argument("floor_log requires q >= 2");
  if (m == 0) throw std::invalid_argument("floor_log requires m >= 1");
  uint32_t e = 0;
  BigInt p = q;
  while (p <= m) {
    p *= q;
    ++e;
  }
  return e;
}

}  // namespace codes
}  // namespace recomb
