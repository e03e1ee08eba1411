#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "recomb/code_core.hpp"

namespace recomb::lrc {

using codes::Code;
using codes::ExtendedCount;
using codes::PositionSet;
using codes::Word;

// A partial-locality profile: every tau-subset P of theta must be recoverable
// from some set T_P of at most r positions outside P. The map may be empty
// (verify_capability then searches for one) or partial/supplied.
struct LocalityStructure {
  PositionSet theta;
  uint32_t tau = 1;
  uint32_t r = 1;
  std::map<PositionSet, PositionSet> locality_map;

  void validate(uint32_t n) const {
    if (tau == 0) throw std::invalid_argument("tau must be >= 1");
    if (r == 0) throw std::invalid_argument("r must be >= 1");
    for (uint32_t p : theta)
      if (p >= n) throw std::invalid_argument("theta position out of range");
    for (const auto& [p, t] : locality_map) {
      if (p.size() != tau)
        throw std::invalid_argument("locality map key " + codes::to_string(p) +
                                    " does not have exactly tau positions");
      if (!p.subset_of(theta))
        throw std::invalid_argument("locality map key " + codes::to_string(p) +
                                    " is not a subset of theta");
      if (t.size() > r)
        throw std::invalid_argument("locality set for " + codes::to_string(p) +
                                    " is larger than r");
      if (!p.intersect(t).empty())
        throw std::invalid_argument("locality set for " + codes::to_string(p) +
                                    " overlaps the recovered positions");
      for (uint32_t q : t)
        if (q >= n) throw std::invalid_argument("locality set position out of range");
    }
  }
};

struct CapabilityReport {
  bool ok = false;
  std::map<PositionSet, PositionSet> map;       // covering map when ok
  std::optional<PositionSet> counterexample;    // first unrecoverable P when !ok
  std::vector<std::string> warnings;
};

// Checks that every tau-subset P of theta is determined by some position set
// of size <= r disjoint from P. Supplied map entries are validated first; a
// failing supplied entry falls back to search (with a warning) because the
// capability itself is an existence statement. Candidate sets are tried in
// (size, lex) order so the found map is deterministic.
inline CapabilityReport verify_capability(const Code& code, const LocalityStructure& loc,
                                          uint64_t work_budget = kDefaultWorkBudget) {
  loc.validate(code.n());
  CapabilityReport report;
  report.ok = true;
  if (loc.tau < 2) {
    report.warnings.push_back(
        "tau=" + std::to_string(loc.tau) +
        " is below the customary minimum of 2 for local correction; proceeding");
  }
  WorkMeter meter{work_budget};

  const std::vector<uint32_t>& theta = loc.theta.values();
  std::vector<uint32_t> complement_pool;  // rebuilt per P below

  bool completed = codes::for_each_subset(theta, loc.tau, [&](const std::vector<uint32_t>& pvec) {
    PositionSet p{std::vector<uint32_t>(pvec)};

    auto determines_all = [&](const PositionSet& t) {
      for (uint32_t target : p)
        if (!codes::is_determined(code, t, target, &meter)) return false;
      return true;
    };

    if (auto it = loc.locality_map.find(p); it != loc.locality_map.end()) {
      if (determines_all(it->second)) {
        report.map[p] = it->second;
        return true;
      }
      report.warnings.push_back("supplied locality set for P=" + codes::to_string(p) +
                                " does not determine it; searching for a replacement");
    }

    complement_pool.clear();
    for (uint32_t i = 0; i < code.n(); ++i)
      if (!p.contains(i)) complement_pool.push_back(i);

    for (uint32_t s = 0; s <= loc.r; ++s) {
      bool found = false;
      codes::for_each_subset(complement_pool, s, [&](const std::vector<uint32_t>& tvec) {
        PositionSet t{std::vector<uint32_t>(tvec)};
        if (determines_all(t)) {
          report.map[p] = t;
          found = true;
          return false;  // stop: first hit in (size, lex) order
        }
        return true;
      });
      if (found) return true;
    }

    report.ok = false;
    report.counterexample = p;
    return false;  // stop at the first failing P (lex order => deterministic)
  });
  (void)completed;
  return report;
}

// Per-t evaluation record of both inequalities behind the iteration count T:
//   (1)  t*r <= k - 1 + theta - n
//   (2)  t*r + Delta(t*r) <= theta - tau + 1
struct ConditionRecord {
  uint32_t t = 0;
  uint64_t lhs1 = 0;  // t*r
  int64_t rhs1 = 0;   // k-1+theta-n
  bool cond1 = false;
  ExtendedCount delta;    // Delta(t*r)
  uint64_t lhs2_base = 0;  // t*r; full lhs2 = t*r + delta
  int64_t rhs2 = 0;        // theta-tau+1
  bool cond2 = false;
};

struct BoundReport {
  uint32_t n = 0, k = 0, theta_size = 0, tau = 0, r = 0, q = 0;
  bool linear = false;
  uint32_t T = 0;          // largest t passing both conditions, 0 if none
  int64_t bound = 0;       // n - k + 1 - T*tau
  int64_t singleton = 0;   // n - k + 1
  std::vector<ConditionRecord> conditions;
};

// Distance bound n-k+1-T*tau from the largest t for which both shortening
// conditions hold. Pure arithmetic; records every evaluated t (from 0 up to
// and including the first failure) for the report. Both left-hand sides are
// strictly increasing in t, so the first failure is definitive.
inline BoundReport compute_T(uint32_t n, uint32_t k, uint32_t theta_size, uint32_t tau,
                             uint32_t r, uint32_t q, bool linear,
                             uint64_t count_ceiling = codes::kDefaultCountCeiling) {
  if (n == 0) throw std::invalid_argument("compute_T: n must be positive");
  if (k == 0 || k > n) throw std::invalid_argument("compute_T: need 1 <= k <= n");
  if (theta_size > n) throw std::invalid_argument("compute_T: theta cannot exceed n positions");
  if (tau == 0 || r == 0) throw std::invalid_argument("compute_T: tau and r must be >= 1");
  if (q < 2) throw std::invalid_argument("compute_T: q must be >= 2");

  BoundReport rep;
  rep.n = n;
  rep.k = k;
  rep.theta_size = theta_size;
  rep.tau = tau;
  rep.r = r;
  rep.q = q;
  rep.linear = linear;
  rep.singleton = int64_t(n) - int64_t(k) + 1;

  const int64_t rhs1 = int64_t(k) - 1 + int64_t(theta_size) - int64_t(n);
  const int64_t rhs2 = int64_t(theta_size) - int64_t(tau) + 1;

  uint32_t T = 0;
  for (uint32_t t = 0;; ++t) {
    ConditionRecord rec;
    rec.t = t;
    rec.lhs1 = uint64_t(t) * r;
    rec.rhs1 = rhs1;
    rec.cond1 = rhs1 >= 0 && rec.lhs1 <= uint64_t(rhs1);
    rec.delta = codes::delta_bound(q, rec.lhs1, linear, count_ceiling);
    rec.lhs2_base = rec.lhs1;
    rec.rhs2 = rhs2;
    rec.cond2 = codes::plus_delta_leq(rec.lhs1, rec.delta, rhs2);
    rep.conditions.push_back(rec);
    if (rec.cond1 && rec.cond2) {
      T = t;
    } else if (t > 0) {
      break;  // lhs monotone in t: no later t can pass
    } else if (!rec.cond1 || !rec.cond2) {
      // t=0 failing still means T=0; keep probing t=1 for the record, which
      // will fail too and terminate the loop.
    }
    if (t > n) break;  // unreachable safety stop
  }
  rep.T = T;
  rep.bound = rep.singleton - int64_t(T) * tau;
  return rep;
}

struct ExampleCode {
  Code code;
  LocalityStructure loc;
  std::vector<std::string> warnings;
};

// The running example family: k message bits, one parity per 3-subset of the
// message positions (in lexicographic triple order), then one overall parity
// of the message bits. Every position except the last is recoverable from 3
// others; for k >= 10 the last parity provably is not.
inline ExampleCode build_example_code(uint32_t k) {
  if (k < 3) throw std::invalid_argument("build_example_code: need k >= 3 for 3-subset parities");
  if (k > 16) throw std::invalid_argument("build_example_code: k > 16 exceeds the 2^k word budget");

  std::vector<std::array<uint32_t, 3>> triples;
  for (uint32_t a = 0; a < k; ++a)
    for (uint32_t b = a + 1; b < k; ++b)
      for (uint32_t c = b + 1; c < k; ++c) triples.push_back({a, b, c});

  const uint32_t n = k + uint32_t(triples.size()) + 1;
  std::map<std::array<uint32_t, 3>, uint32_t> triple_pos;
  for (uint32_t i = 0; i < triples.size(); ++i) triple_pos[triples[i]] = k + i;

  std::vector<Word> words;
  words.reserve(size_t(1) << k);
  for (uint64_t msg = 0; msg < (uint64_t(1) << k); ++msg) {
    Word w(n, 0);
    for (uint32_t i = 0; i < k; ++i) w[i] = uint8_t((msg >> i) & 1);
    for (uint32_t i = 0; i < triples.size(); ++i) {
      const auto& t = triples[i];
      w[k + i] = uint8_t(w[t[0]] ^ w[t[1]] ^ w[t[2]]);
    }
    uint8_t parity = 0;
    for (uint32_t i = 0; i < k; ++i) parity ^= w[i];
    w[n - 1] = parity;
    words.push_back(std::move(w));
  }

  ExampleCode out{
      Code(codes::Alphabet::binary(), n, std::move(words), true, k),
      LocalityStructure{},
      {}};

  std::vector<uint32_t> theta;
  for (uint32_t i = 0; i + 1 < n; ++i) theta.push_back(i);
  out.loc.theta = PositionSet(std::move(theta));
  out.loc.tau = 1;
  out.loc.r = 3;

  // message bit i is the XOR of the three parities over {i,a}, {i,b}, {i,c}
  // pairs drawn from the three smallest other message positions a < b < c
  for (uint32_t i = 0; i < k; ++i) {
    std::vector<uint32_t> others;
    for (uint32_t j = 0; j < k && others.size() < 3; ++j)
      if (j != i) others.push_back(j);
    const uint32_t a = others[0], b = others[1], c = others[2];
    auto key = [&](uint32_t x, uint32_t y, uint32_t z) {
      std::array<uint32_t, 3> t{x, y, z};
      std::sort(t.begin(), t.end());
      return triple_pos.at(t);
    };
    PositionSet t(std::vector<uint32_t>{key(i, a, b), key(i, a, c), key(i, b, c)});
    out.loc.locality_map[PositionSet(std::vector<uint32_t>{i})] = t;
  }
  // each 3-subset parity is determined by its own 3 message bits
  for (uint32_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    out.loc.locality_map[PositionSet(std::vector<uint32_t>{k + i})] =
        PositionSet(std::vector<uint32_t>{t[0], t[1], t[2]});
  }

  if (k < 10) {
    out.warnings.push_back(
        "k=" + std::to_string(k) +
        " is below 10: the final overall parity may itself be recoverable from <= 3 "
        "positions, so excluding it from theta loses its guarantee");
  }
  return out;
}

struct ShorteningIteration {
  PositionSet p;           // the tau-subset driving this step
  PositionSet fresh;       // I_j: new positions pinned this step
  uint32_t m = 0;          // #I_j
  Word projection;         // symbols fixed on I_j (in I_j's sorted order)
  uint64_t subcode_size = 0;  // #C_j after restriction
  PositionSet reach_set;   // J_j: positions determined by everything pinned so far
  std::optional<int64_t> certified_bound;  // reduced-Singleton bound when #C_j >= 2
};

struct ShorteningTrace {
  uint64_t initial_size = 0;
  int64_t singleton_bound = 0;  // stage-0 bound: n - ceil_log_q(#C) + 1
  std::vector<ShorteningIteration> iterations;
  PositionSet q_positions;   // surviving positions Q_T
  uint32_t reduced_length = 0;
  std::vector<Word> reduced_code;  // final subcode projected to Q_T
  int64_t certified_bound = 0;     // min over stage 0 and all >=2-word stages
  std::string stop_reason;         // "no-fresh-locality" or "subcode-exhausted"
  bool progress_guarantee = false; // r + n - #theta < floor_log_q(#C)
};

// Runs the iterative shortening argument concretely: repeatedly picks the
// lexicographically first tau-subset P of the still-live region whose
// locality set contains a fresh position, pins those fresh positions to the
// most popular projection value, and re-derives the determined region. Each
// stage with at least two surviving words certifies a distance bound
//   d <= (n - #pinned - #J) - ceil_log_q(#subcode) + 1
// because distances are preserved for words agreeing everywhere outside the
// surviving positions.
inline ShorteningTrace shorten(const Code& code, const LocalityStructure& loc,
                               uint64_t work_budget = kDefaultWorkBudget) {
  loc.validate(code.n());
  if (code.size() < 2) throw std::invalid_argument("shorten needs a code with at least 2 words");
  if (loc.locality_map.empty() && loc.theta.size() >= loc.tau) {
    throw std::invalid_argument(
        "shorten: locality map missing; supply one or run verify_capability first");
  }
  WorkMeter meter{work_budget};
  const uint32_t n = code.n();
  const uint32_t q = code.q();

  ShorteningTrace trace;
  trace.initial_size = code.size();
  trace.singleton_bound = int64_t(n) - codes::ceil_log(q, code.size()) + 1;
  int64_t best = trace.singleton_bound;

  std::vector<Word> current = code.words();
  PositionSet pinned;      // union of all I_j
  PositionSet determined;  // J_j, always relative to `pinned` over the original code

  auto recompute_reach = [&](const PositionSet& prev_reach) {
    // pinned+determined only ever grows, so it suffices to re-test positions
    // that were in neither set (the old reach minus newly pinned carries over;
    // asserted against a full recomputation in the tests).
    std::vector<uint32_t> keep;
    for (uint32_t p : prev_reach)
      if (!pinned.contains(p)) keep.push_back(p);
    PositionSet next(std::move(keep));
    std::vector<uint32_t> fresh_hits;
    for (uint32_t j = 0; j < n; ++j) {
      if (pinned.contains(j) || next.contains(j) || prev_reach.contains(j)) continue;
      if (codes::is_determined(code, pinned, j, &meter)) fresh_hits.push_back(j);
    }
    return next.union_with(PositionSet(std::move(fresh_hits)));
  };

  for (uint32_t guard = 0; guard <= n; ++guard) {
    if (current.size() < 2) {
      trace.stop_reason = "subcode-exhausted";
      break;
    }
    PositionSet live = loc.theta.minus(pinned.union_with(determined));

    // first tau-subset of the live region (lex order) with a fresh locality position
    std::optional<PositionSet> chosen_p;
    PositionSet chosen_fresh;
    codes::for_each_subset(live.values(), loc.tau, [&](const std::vector<uint32_t>& pvec) {
      PositionSet p{std::vector<uint32_t>(pvec)};
      auto it = loc.locality_map.find(p);
      if (it == loc.locality_map.end()) {
        throw std::invalid_argument("shorten: locality map has no entry for P=" +
                                    codes::to_string(p));
      }
      PositionSet fresh = it->second.minus(pinned.union_with(determined));
      if (!fresh.empty()) {
        chosen_p = p;
        chosen_fresh = fresh;
        return false;
      }
      return true;
    });
    if (!chosen_p) {
      trace.stop_reason = "no-fresh-locality";
      break;
    }

    // restrict to the heaviest fiber over the fresh positions (ties: smallest
    // projection value, which std::map ordering provides)
    std::map<Word, std::vector<Word>> fibers;
    for (const Word& w : current) {
      Word key;
      key.reserve(chosen_fresh.size());
      for (uint32_t p : chosen_fresh) key.push_back(w[p]);
      fibers[key].push_back(w);
    }
    meter.charge(current.size(), "shorten");
    auto best_fiber = fibers.begin();
    for (auto it = fibers.begin(); it != fibers.end(); ++it)
      if (it->second.size() > best_fiber->second.size()) best_fiber = it;

    ShorteningIteration step;
    step.p = *chosen_p;
    step.fresh = chosen_fresh;
    step.m = uint32_t(chosen_fresh.size());
    step.projection = best_fiber->first;
    current = best_fiber->second;
    step.subcode_size = current.size();

    pinned = pinned.union_with(chosen_fresh);
    determined = recompute_reach(determined);
    step.reach_set = determined;

    if (current.size() >= 2) {
      const int64_t reduced_len = int64_t(n) - int64_t(pinned.size()) - int64_t(determined.size());
      step.certified_bound = reduced_len - codes::ceil_log(q, current.size()) + 1;
      best = std::min(best, *step.certified_bound);
    }
    trace.iterations.push_back(std::move(step));
  }

  PositionSet removed = pinned.union_with(determined);
  trace.q_positions = PositionSet::range(n).minus(removed);
  trace.reduced_length = uint32_t(trace.q_positions.size());
  trace.certified_bound = best;

  trace.reduced_code.reserve(current.size());
  for (const Word& w : current) {
    Word r;
    r.reserve(trace.q_positions.size());
    for (uint32_t p : trace.q_positions) r.push_back(w[p]);
    trace.reduced_code.push_back(std::move(r));
  }
  std::sort(trace.reduced_code.begin(), trace.reduced_code.end());
  // all surviving words agree on pinned (same fibers) hence on everything the
  // pinned set determines, so the projection to Q_T stays injective
  if (std::adjacent_find(trace.reduced_code.begin(), trace.reduced_code.end()) !=
      trace.reduced_code.end()) {
    throw std::logic_error("shorten: projection to surviving positions collided");
  }

  const uint32_t k_low = codes::floor_log(q, code.size());
  trace.progress_guarantee =
      int64_t(loc.r) + int64_t(n) - int64_t(loc.theta.size()) < int64_t(k_low);
  return trace;
}

}  // namespace recomb::lrc
