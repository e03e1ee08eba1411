#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "recomb/code_core.hpp"
#include "recomb/lattice_rep.hpp"
#include "recomb/lrc_partial.hpp"
#include "recomb/perm_cycles.hpp"

// Deterministic generators for experiment corpora: random codes with derived
// locality profiles and random monotone weight grids. Everything is driven by
// an explicit mt19937_64 so corpora are reproducible across platforms.
namespace recomb::gen {

using codes::Code;
using codes::PositionSet;
using codes::Word;
using cyc::bounded_uniform;

// Systematic random binary linear code: G = [I_k | A] with uniform A, words =
// all 2^k row combinations. Always rank k.
inline Code random_linear_code(std::mt19937_64& rng, uint32_t n, uint32_t k) {
  if (k == 0 || k > 16 || k > n) throw std::invalid_argument("need 1 <= k <= min(n,16)");
  std::vector<Word> rows(k, Word(n, 0));
  for (uint32_t i = 0; i < k; ++i) {
    rows[i][i] = 1;
    for (uint32_t j = k; j < n; ++j) rows[i][j] = uint8_t(bounded_uniform(rng, 2));
  }
  std::vector<Word> words;
  words.reserve(size_t(1) << k);
  for (uint64_t msg = 0; msg < (uint64_t(1) << k); ++msg) {
    Word w(n, 0);
    for (uint32_t i = 0; i < k; ++i) {
      if (!((msg >> i) & 1)) continue;
      for (uint32_t j = 0; j < n; ++j) w[j] ^= rows[i][j];
    }
    words.push_back(std::move(w));
  }
  return Code(codes::Alphabet::binary(), n, std::move(words), true, k);
}

// Uniformly sampled set of 2^k distinct binary words (rarely linear; the
// linear flag is left false).
inline Code random_word_code(std::mt19937_64& rng, uint32_t n, uint32_t k) {
  if (n == 0 || n > 63) throw std::invalid_argument("need 1 <= n <= 63");
  const uint64_t want = uint64_t(1) << k;
  if (want > (uint64_t(1) << n) / 2)
    throw std::invalid_argument("word count too close to the full space");
  std::vector<uint64_t> picked;
  while (picked.size() < want) {
    uint64_t w = bounded_uniform(rng, uint64_t(1) << n);
    if (std::find(picked.begin(), picked.end(), w) == picked.end()) picked.push_back(w);
  }
  std::vector<Word> words;
  for (uint64_t bits : picked) {
    Word w(n, 0);
    for (uint32_t j = 0; j < n; ++j) w[j] = uint8_t((bits >> j) & 1);
    words.push_back(std::move(w));
  }
  return Code(codes::Alphabet::binary(), n, std::move(words), false, k);
}

// XOR a fixed random nonzero offset onto every word: preserves distances and
// every determination relation, but breaks closure, so the result exercises
// the nonlinear fiber bound.
inline Code affine_shift(std::mt19937_64& rng, const Code& code) {
  if (code.q() != 2) throw std::invalid_argument("affine_shift is binary-only");
  Word offset(code.n(), 0);
  for (uint32_t attempt = 0;; ++attempt) {
    if (attempt > 1000)
      throw std::invalid_argument("affine_shift: no offset outside the code found");
    for (auto& s : offset) s = uint8_t(bounded_uniform(rng, 2));
    if (!code.contains(offset)) break;  // shifted set must differ from the code
  }
  std::vector<Word> words;
  words.reserve(code.size());
  for (const Word& w : code.words()) {
    Word shifted(w);
    for (uint32_t j = 0; j < code.n(); ++j) shifted[j] ^= offset[j];
    words.push_back(std::move(shifted));
  }
  return Code(code.alphabet(), code.n(), std::move(words), false, code.declared_k());
}

// Direct sum: concatenate the two codes over all word pairs.
inline Code direct_sum(const Code& a, const Code& b) {
  if (!(a.alphabet() == b.alphabet()))
    throw std::invalid_argument("direct_sum needs a common alphabet");
  std::vector<Word> words;
  words.reserve(a.size() * b.size());
  for (const Word& wa : a.words()) {
    for (const Word& wb : b.words()) {
      Word w(wa);
      w.insert(w.end(), wb.begin(), wb.end());
      words.push_back(std::move(w));
    }
  }
  std::optional<bool> linear;
  if (a.linear() && b.linear()) linear = *a.linear() && *b.linear();
  std::optional<uint32_t> k;
  if (a.k_exact() && b.k_exact()) k = *a.k_exact() + *b.k_exact();
  return Code(a.alphabet(), a.n() + b.n(), std::move(words), linear, k);
}

// q-ary repetition code of length n.
inline Code repetition_code(uint32_t q, uint32_t n) {
  std::vector<Word> words;
  for (uint32_t s = 0; s < q; ++s) words.push_back(Word(n, uint8_t(s)));
  return Code(codes::Alphabet::integers(q), n, std::move(words),
              codes::is_prime(q) ? std::optional<bool>(true) : std::nullopt, 1);
}

// Binary even-weight (single parity check) code: k message bits + 1 parity.
inline Code parity_code(uint32_t k) {
  const uint32_t n = k + 1;
  std::vector<Word> words;
  for (uint64_t msg = 0; msg < (uint64_t(1) << k); ++msg) {
    Word w(n, 0);
    uint8_t parity = 0;
    for (uint32_t i = 0; i < k; ++i) {
      w[i] = uint8_t((msg >> i) & 1);
      parity ^= w[i];
    }
    w[n - 1] = parity;
    words.push_back(std::move(w));
  }
  return Code(codes::Alphabet::binary(), n, std::move(words), true, k);
}

// Largest theta for which every position has some determining set of size
// <= r: simply the positions that do.
inline PositionSet derive_theta_tau1(const Code& code, uint32_t r,
                                     uint64_t work_budget = kDefaultWorkBudget) {
  WorkMeter meter{work_budget};
  std::vector<uint32_t> pool;
  for (uint32_t i = 0; i < code.n(); ++i) pool.push_back(i);
  std::vector<uint32_t> theta;
  for (uint32_t j = 0; j < code.n(); ++j) {
    std::vector<uint32_t> others;
    for (uint32_t i : pool)
      if (i != j) others.push_back(i);
    bool found = false;
    for (uint32_t s = 0; s <= r && !found; ++s) {
      codes::for_each_subset(others, s, [&](const std::vector<uint32_t>& t) {
        if (codes::is_determined(code, PositionSet(std::vector<uint32_t>(t)), j, &meter)) {
          found = true;
          return false;
        }
        return true;
      });
    }
    if (found) theta.push_back(j);
  }
  return PositionSet(std::move(theta));
}

// Shrinks theta until verify_capability holds for the given tau: drop the
// largest position of each counterexample and retry. Terminates because
// theta strictly shrinks; an empty (or sub-tau) theta passes vacuously.
inline lrc::LocalityStructure derive_locality(const Code& code, uint32_t tau, uint32_t r,
                                              uint64_t work_budget = kDefaultWorkBudget) {
  lrc::LocalityStructure loc;
  loc.tau = tau;
  loc.r = r;
  loc.theta = derive_theta_tau1(code, r, work_budget);
  while (true) {
    lrc::CapabilityReport rep = lrc::verify_capability(code, loc, work_budget);
    if (rep.ok) {
      loc.locality_map = rep.map;
      return loc;
    }
    const auto& vals = rep.counterexample->values();
    loc.theta = loc.theta.minus(PositionSet(std::vector<uint32_t>{vals.back()}));
  }
}

// Random monotone weight grid: a separable staircase 1 + sum_i step_i(v_i)
// with per-axis non-increasing rational steps over a common denominator.
inline rep::WeightSpec random_monotone_spec(std::mt19937_64& rng, uint32_t m, uint32_t d) {
  static constexpr uint32_t kDenoms[] = {2, 3, 4, 6, 8};
  const uint32_t den = kDenoms[bounded_uniform(rng, 5)];
  std::vector<std::vector<uint32_t>> steps(d, std::vector<uint32_t>(m));
  for (uint32_t axis = 0; axis < d; ++axis) {
    for (uint32_t x = 0; x < m; ++x) steps[axis][x] = uint32_t(bounded_uniform(rng, 2 * den + 1));
    std::sort(steps[axis].begin(), steps[axis].end(), std::greater<uint32_t>());
  }
  uint64_t count = 1;
  for (uint32_t i = 0; i < d; ++i) count *= m;
  std::vector<Rational> w(count);
  Rational beta = 1;
  for (uint32_t axis = 0; axis < d; ++axis) beta += Rational(steps[axis][0], den);
  for (uint64_t idx = 0; idx < count; ++idx) {
    uint64_t rest = idx;
    Rational value = 1;
    for (uint32_t axis = 0; axis < d; ++axis) {
      value += Rational(steps[axis][rest % m], den);
      rest /= m;
    }
    w[idx] = value;
  }
  return rep::WeightSpec::explicit_grid(m, d, std::move(w), beta);
}

// Arbitrary (usually non-monotone) random grid with weights in [1, beta].
inline rep::WeightSpec random_weight_spec(std::mt19937_64& rng, uint32_t m, uint32_t d) {
  const uint32_t den = 4;
  uint64_t count = 1;
  for (uint32_t i = 0; i < d; ++i) count *= m;
  std::vector<Rational> w(count);
  Rational beta = 1;
  for (uint64_t idx = 0; idx < count; ++idx) {
    w[idx] = Rational(den + bounded_uniform(rng, 3 * den + 1), den);
    beta = std::max(beta, w[idx]);
  }
  return rep::WeightSpec::explicit_grid(m, d, std::move(w), beta);
}

}  // namespace recomb::gen
