#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "recomb/code_core.hpp"
#include "recomb/generators.hpp"
#include "recomb/json_io.hpp"
#include "recomb/lattice_rep.hpp"
#include "recomb/lrc_partial.hpp"
#include "recomb/perm_cycles.hpp"
#include "recomb/rational.hpp"

// The full verification suite behind `recomb reproduce`: nine deterministic
// checks in three groups (thm1 = locality distance bounds, thm2 = lattice
// representative sizes, thm3 = cycle statistics). Every check is seeded and
// budgeted explicitly so two runs emit identical bytes.
namespace recomb::accept {

struct Options {
  uint64_t seed = 42;
  std::string golden_path = "data/golden_example_k10.json";
  uint64_t work_budget = 2'000'000'000;  // acceptance-scale enumeration cap
};

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

// --- deterministic formatting helpers --------------------------------------

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return std::string(buf);
}

// --- corpus of random codes with verified locality --------------------------

struct CorpusEntry {
  std::string name;
  codes::Code code;
  lrc::LocalityStructure loc;  // locality map already found and verified
};

inline std::vector<CorpusEntry> build_code_corpus(uint64_t seed, uint64_t budget) {
  std::vector<CorpusEntry> out;
  std::mt19937_64 rng(cyc::splitmix64(seed ^ 0xC0DEC0DEULL));

  auto add = [&](std::string name, codes::Code code, uint32_t tau, uint32_t r) {
    lrc::LocalityStructure loc = gen::derive_locality(code, tau, r, budget);
    out.push_back(CorpusEntry{std::move(name), std::move(code), std::move(loc)});
  };

  // 20 random systematic linear codes, single-position recovery
  for (uint32_t i = 0; i < 20; ++i) {
    const uint32_t k = 2 + uint32_t(cyc::bounded_uniform(rng, 5));  // 2..6
    const uint32_t n = k + 2 + uint32_t(cyc::bounded_uniform(rng, 13 - k));  // <= 14
    add("linear-" + std::to_string(i), gen::random_linear_code(rng, n, k), 1, 3);
  }
  // 10 random linear codes, pair recovery
  for (uint32_t i = 0; i < 10; ++i) {
    const uint32_t k = 3 + uint32_t(cyc::bounded_uniform(rng, 4));  // 3..6
    const uint32_t n = k + 3 + uint32_t(cyc::bounded_uniform(rng, 12 - k));  // <= 14
    const uint32_t r = 2 + uint32_t(cyc::bounded_uniform(rng, 2));  // 2..3
    add("linear-tau2-" + std::to_string(i), gen::random_linear_code(rng, n, k), 2, r);
  }
  // 16 structured repetition/parity direct sums; the r=1 family keeps theta
  // equal to all of [n] and forces T >= 1 independent of the seed
  {
    auto rep_sum = [&](uint32_t block, uint32_t copies) {
      codes::Code c = gen::repetition_code(2, block);
      for (uint32_t i = 1; i < copies; ++i) c = gen::direct_sum(c, gen::repetition_code(2, block));
      return c;
    };
    add("product-rep2x3-r1", rep_sum(2, 3), 1, 1);
    add("product-rep2x4-r1", rep_sum(2, 4), 1, 1);
    add("product-rep2x5-r1", rep_sum(2, 5), 1, 1);
    add("product-rep2x6-r1", rep_sum(2, 6), 1, 1);
    add("product-rep3x2-r1", rep_sum(3, 2), 1, 1);
    add("product-rep3x3-r1", rep_sum(3, 3), 1, 1);
    add("product-rep3x4-r1", rep_sum(3, 4), 1, 1);
    add("product-rep2x2-rep3x2-r1", gen::direct_sum(rep_sum(2, 2), rep_sum(3, 2)), 1, 1);
    add("product-rep2x3-rep3x1-r1", gen::direct_sum(rep_sum(2, 3), rep_sum(3, 1)), 1, 1);
    add("product-rep2x4-rep3x2-r1", gen::direct_sum(rep_sum(2, 4), rep_sum(3, 2)), 1, 1);
    add("product-rep2x5-rep3x1-r1", gen::direct_sum(rep_sum(2, 5), rep_sum(3, 1)), 1, 1);
    add("product-rep2x5-r3", rep_sum(2, 5), 1, 3);
    add("product-parity3-parity3", gen::direct_sum(gen::parity_code(3), gen::parity_code(3)), 1, 3);
    add("product-rep2x3-parity3", gen::direct_sum(rep_sum(2, 3), gen::parity_code(3)), 1, 3);
    add("product-rep2x6-tau2", rep_sum(2, 6), 2, 1);
    add("product-rep2x5-tau2-r2", rep_sum(2, 5), 2, 2);
  }
  // 6 affine shifts of linear codes: distances and determinations survive,
  // closure does not, so the general (non-linear) fiber bound is exercised
  for (uint32_t i = 0; i < 6; ++i) {
    const uint32_t k = 3 + uint32_t(cyc::bounded_uniform(rng, 3));  // 3..5
    const uint32_t n = k + 3 + uint32_t(cyc::bounded_uniform(rng, 11 - k));
    add("affine-" + std::to_string(i),
        gen::affine_shift(rng, gen::random_linear_code(rng, n, k)), 1, 3);
  }
  // 6 unstructured random word sets (theta usually tiny or empty)
  for (uint32_t i = 0; i < 6; ++i) {
    const uint32_t k = 2 + uint32_t(cyc::bounded_uniform(rng, 3));  // 2..4
    const uint32_t n = 8 + uint32_t(cyc::bounded_uniform(rng, 5));  // 8..12
    add("words-" + std::to_string(i), gen::random_word_code(rng, n, k), 1, 2);
  }
  return out;
}

// --- corpus of weighted lattices --------------------------------------------

struct LatticeCase {
  std::string name;
  rep::WeightSpec spec;
  uint32_t m = 0, d = 0;
  Rational eps;
};

inline std::vector<LatticeCase> build_lattice_corpus(uint64_t seed) {
  std::mt19937_64 rng(cyc::splitmix64(seed ^ 0x7A771CEULL));
  std::vector<LatticeCase> out;
  const Rational eps_grid[] = {Rational(1, 10), Rational(1, 4), Rational(1, 3), Rational(1, 2),
                               Rational(2, 3), Rational(3, 4), Rational(9, 10)};
  auto add_all_eps = [&](const std::string& base, const rep::WeightSpec& spec, uint32_t m,
                         uint32_t d) {
    for (const Rational& eps : eps_grid)
      out.push_back(LatticeCase{base + "-eps" + format_rational(eps), spec, m, d, eps});
  };
  for (uint32_t d : {1u, 2u}) {
    for (uint32_t m = 1; m <= 16; ++m) {
      add_all_eps("uniform-d" + std::to_string(d) + "-m" + std::to_string(m),
                  rep::WeightSpec::uniform(), m, d);
      add_all_eps("shell-d" + std::to_string(d) + "-m" + std::to_string(m),
                  rep::WeightSpec::shell(), m, d);
      for (uint32_t i = 0; i < 3; ++i) {
        add_all_eps("rand" + std::to_string(i) + "-d" + std::to_string(d) + "-m" + std::to_string(m),
                    gen::random_monotone_spec(rng, m, d), m, d);
      }
    }
  }
  return out;
}

// --- shared context (built once per seed) ------------------------------------

struct Context {
  Options opt;
  std::vector<CorpusEntry> corpus;
  std::vector<LatticeCase> lattices;
};

inline const Context& context_for(const Options& opt) {
  static std::optional<Context> cache;
  if (!cache || cache->opt.seed != opt.seed || cache->opt.work_budget != opt.work_budget) {
    Context ctx;
    ctx.opt = opt;
    ctx.corpus = build_code_corpus(opt.seed, opt.work_budget);
    ctx.lattices = build_lattice_corpus(opt.seed);
    cache = std::move(ctx);
  }
  return *cache;
}

// --- thm1: locality distance bounds ------------------------------------------

inline CheckResult thm1_random_codes_bound(const Options& opt) {
  CheckResult res;
  res.id = "thm1.random_codes_bound";
  const Context& ctx = context_for(opt);
  uint32_t violations = 0;
  uint32_t nontrivial = 0;  // entries where T >= 1 (bound beats plain Singleton)
  std::ostringstream first_bad;
  for (const CorpusEntry& e : ctx.corpus) {
    lrc::CapabilityReport cap = lrc::verify_capability(e.code, e.loc, opt.work_budget);
    if (!cap.ok) {
      ++violations;
      if (first_bad.str().empty()) first_bad << e.name << ": capability check failed";
      continue;
    }
    const uint32_t k = *e.code.k_exact();
    lrc::BoundReport rep = lrc::compute_T(e.code.n(), k, uint32_t(e.loc.theta.size()), e.loc.tau,
                                          e.loc.r, e.code.q(), e.code.linear().value_or(false));
    const uint32_t d = codes::min_distance(e.code, opt.work_budget);
    if (rep.T >= 1) ++nontrivial;
    if (int64_t(d) > rep.bound) {
      ++violations;
      if (first_bad.str().empty())
        first_bad << e.name << ": d=" << d << " exceeds bound=" << rep.bound;
    }
  }
  res.pass = violations == 0 && ctx.corpus.size() >= 50 && nontrivial >= 10;
  std::ostringstream detail;
  detail << ctx.corpus.size() << " codes, " << violations << " violations, " << nontrivial
         << " with T>=1";
  if (!first_bad.str().empty()) detail << "; first: " << first_bad.str();
  res.detail = detail.str();
  return res;
}

inline CheckResult thm1_example_code(const Options& opt) {
  CheckResult res;
  res.id = "thm1.example_code";
  std::ostringstream detail;
  try {
    lrc::ExampleCode ex = lrc::build_example_code(10);
    const codes::Code& code = ex.code;
    bool ok = code.n() == 131 && code.size() == 1024;

    // capability over all positions but the last, with the generated map
    lrc::CapabilityReport cap = lrc::verify_capability(code, ex.loc, opt.work_budget);
    ok = ok && cap.ok;

    // the final overall parity must NOT be recoverable from <= 3 positions:
    // widening theta to all positions has to fail exactly there
    lrc::LocalityStructure full = ex.loc;
    full.theta = codes::PositionSet::range(code.n());
    lrc::CapabilityReport neg = lrc::verify_capability(code, full, opt.work_budget);
    const bool neg_ok = !neg.ok && neg.counterexample &&
                        *neg.counterexample == codes::PositionSet(std::vector<uint32_t>{130});
    ok = ok && neg_ok;

    lrc::BoundReport rep =
        lrc::compute_T(code.n(), 10, uint32_t(ex.loc.theta.size()), 1, 3, 2, true);
    ok = ok && rep.T == 2 && rep.bound == 120 && rep.singleton == 122;

    // brute-force distance under the stock budget, cross-checked against the
    // minimum nonzero weight (the code is linear)
    const uint32_t d = codes::min_distance(code, kDefaultWorkBudget);
    const uint32_t w = codes::min_nonzero_weight(code);
    ok = ok && d == w && int64_t(d) <= rep.bound;

    // frozen golden values
    io::json golden = io::load_json_file(opt.golden_path);
    io::require_format(golden, "golden file");
    auto want = [&](const char* field, int64_t value) {
      if (!golden.contains(field) || !golden.at(field).is_number_integer() ||
          golden.at(field).get<int64_t>() != value) {
        throw std::invalid_argument(std::string("golden mismatch at \"") + field + "\": computed " +
                                    std::to_string(value));
      }
    };
    want("k", 10);
    want("n", code.n());
    want("word_count", int64_t(code.size()));
    want("min_distance", d);
    want("T", rep.T);
    want("bound", rep.bound);
    want("singleton", rep.singleton);

    res.pass = ok;
    detail << "n=" << code.n() << " words=" << code.size() << " d=" << d << " T=" << rep.T
           << " bound=" << rep.bound << " neg=" << (neg_ok ? "refused" : "FAILED");
  } catch (const std::exception& e) {
    res.pass = false;
    detail << "error: " << e.what();
  }
  res.detail = detail.str();
  return res;
}

inline CheckResult thm1_shortening_traces(const Options& opt) {
  CheckResult res;
  res.id = "thm1.shortening_traces";
  const Context& ctx = context_for(opt);
  uint32_t checked = 0, violations = 0;
  std::ostringstream first_bad;

  auto check_one = [&](const std::string& name, const codes::Code& code,
                       const lrc::LocalityStructure& loc) {
    ++checked;
    auto fail = [&](const std::string& why) {
      ++violations;
      if (first_bad.str().empty()) first_bad << name << ": " << why;
    };
    try {
      lrc::ShorteningTrace tr = lrc::shorten(code, loc, opt.work_budget);
      const uint32_t q = code.q();
      uint64_t prev = tr.initial_size;
      uint64_t pinned_total = 0;
      BigInt q_pinned = 1;
      for (size_t j = 0; j < tr.iterations.size(); ++j) {
        const auto& it = tr.iterations[j];
        if (it.subcode_size > prev) fail("subcode grew at step " + std::to_string(j + 1));
        pinned_total += it.m;
        for (uint32_t i = 0; i < it.m; ++i) q_pinned *= q;
        // pigeonhole: the heaviest fiber over the newly pinned coordinates
        // keeps at least #C / q^(pinned so far) words
        if (BigInt(it.subcode_size) * q_pinned < BigInt(tr.initial_size))
          fail("fiber smaller than the pigeonhole floor at step " + std::to_string(j + 1));
        // coarser literal floor: at most r pins per step, so after j steps the
        // subcode still holds q^(k - j*r) words whenever the exponent is positive
        if (auto kx = code.k_exact()) {
          BigInt rhs = 1;
          for (uint64_t i = 0; i < uint64_t(j + 1) * loc.r; ++i) rhs *= q;
          if (BigInt(it.subcode_size) * rhs < boost::multiprecision::pow(BigInt(q), unsigned(*kx)))
            fail("subcode below q^(k - j*r) at step " + std::to_string(j + 1));
        }
        if (it.reach_set.size() < (j + 1) * loc.tau)
          fail("reach below (steps*tau) at step " + std::to_string(j + 1));
        prev = it.subcode_size;
      }
      const uint32_t d = codes::min_distance(code, opt.work_budget);
      if (int64_t(d) > tr.certified_bound) fail("certified bound below the true distance");
      if (tr.reduced_code.empty()) fail("empty reduced code");
      if (!tr.iterations.empty()) {
        const auto& last = tr.iterations.back();
        const uint64_t removed = pinned_total + last.reach_set.size();
        if (tr.reduced_length != code.n() - removed) fail("reduced length bookkeeping off");
      }
    } catch (const std::exception& e) {
      fail(std::string("error: ") + e.what());
    }
  };

  {
    lrc::ExampleCode ex = lrc::build_example_code(10);
    check_one("example-k10", ex.code, ex.loc);
  }
  for (const CorpusEntry& e : ctx.corpus) check_one(e.name, e.code, e.loc);

  res.pass = violations == 0 && checked >= 51;
  std::ostringstream detail;
  detail << checked << " traces, " << violations << " violations";
  if (!first_bad.str().empty()) detail << "; first: " << first_bad.str();
  res.detail = detail.str();
  return res;
}

// --- thm2: representative set sizes -------------------------------------------

inline CheckResult thm2_size_bounds(const Options& opt) {
  CheckResult res;
  res.id = "thm2.size_bounds";
  const Context& ctx = context_for(opt);
  uint32_t violations = 0;
  std::ostringstream first_bad;
  for (const LatticeCase& lc : ctx.lattices) {
    auto fail = [&](const std::string& why) {
      ++violations;
      if (first_bad.str().empty()) first_bad << lc.name << ": " << why;
    };
    try {
      const rep::WeightedLattice lat = rep::WeightedLattice::from_spec(lc.spec, lc.m, lc.d);
      const Rational count(lat.point_count());
      const rep::MinRepResult r = rep::min_rep_size(lat, lc.eps);
      const Rational b(r.size);
      if (b < count * (Rational(1) - lc.eps)) fail("lower size bound violated");
      if (b > count * (Rational(1) - lc.eps / lat.beta()) + 1) fail("upper size bound violated");
      if (r.witness.points.size() != r.size) fail("witness size mismatch");
      if (!rep::is_representative(lat, r.witness)) fail("witness not representative");

      const Rational threshold = lc.eps * count;
      if (threshold >= 1) {
        const std::vector<rep::Point> crit = rep::critical_set(lat, lc.eps);
        if (crit.size() + r.size != lat.point_count()) fail("critical set size mismatch");
        Rational w = 0;
        for (const rep::Point& p : crit) w += lat.weight_of(p);
        if (!(w < threshold)) fail("critical set too heavy");
        // maximality: every point outside tips the total over the threshold
        std::vector<bool> inside(lat.point_count(), false);
        for (const rep::Point& p : crit) inside[lat.index_of(p)] = true;
        for (uint64_t i = 0; i < lat.point_count(); ++i)
          if (!inside[i] && w + lat.weight_at(i) < threshold) fail("critical set not maximal");
      } else {
        bool threw = false;
        try {
          rep::critical_set(lat, lc.eps);
        } catch (const std::invalid_argument&) {
          threw = true;
        }
        if (!threw) fail("critical_set accepted a sub-unit threshold");
      }
    } catch (const std::exception& e) {
      fail(std::string("error: ") + e.what());
    }
  }
  res.pass = violations == 0 && ctx.lattices.size() >= 500;
  std::ostringstream detail;
  detail << ctx.lattices.size() << " lattice cases, " << violations << " violations";
  if (!first_bad.str().empty()) detail << "; first: " << first_bad.str();
  res.detail = detail.str();
  return res;
}

// heavy-subset bitmap: heavy[mask] = (weight of the point subset `mask`) >=
// eps * m^d; shared-denominator int64 arithmetic with a rational fallback
struct HeavyMap {
  uint32_t n = 0;
  std::vector<bool> heavy;
};

inline HeavyMap build_heavy_map(const rep::WeightedLattice& lat, const Rational& eps) {
  const uint64_t n64 = lat.point_count();
  if (n64 > 20) throw std::invalid_argument("heavy map limited to 20 points");
  const uint32_t n = uint32_t(n64);
  const Rational threshold = eps * Rational(n64);
  HeavyMap hm;
  hm.n = n;
  hm.heavy.assign(size_t(1) << n, false);

  BigInt lcm = denominator(threshold);
  for (uint32_t i = 0; i < n; ++i)
    lcm = boost::multiprecision::lcm(lcm, denominator(lat.weight_at(i)));
  BigInt total = 0;
  std::vector<int64_t> w(n, 0);
  bool scaled_ok = lcm <= BigInt(1) << 30;
  if (scaled_ok) {
    for (uint32_t i = 0; i < n; ++i) {
      BigInt scaled = numerator(lat.weight_at(i)) * (lcm / denominator(lat.weight_at(i)));
      total += scaled;
      w[i] = scaled.convert_to<int64_t>();
    }
    if (total > (BigInt(1) << 60)) scaled_ok = false;
  }
  if (scaled_ok) {
    const int64_t th =
        (numerator(threshold) * (lcm / denominator(threshold))).convert_to<int64_t>();
    std::vector<int64_t> sum(size_t(1) << n, 0);
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
      const uint64_t low = mask & (~mask + 1);
      sum[mask] = sum[mask ^ low] + w[uint32_t(__builtin_ctzll(low))];
      hm.heavy[mask] = sum[mask] >= th;
    }
  } else {
    std::vector<Rational> sum(size_t(1) << n, Rational(0));
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
      const uint64_t low = mask & (~mask + 1);
      sum[mask] = sum[mask ^ low] + lat.weight_at(uint32_t(__builtin_ctzll(low)));
      hm.heavy[mask] = sum[mask] >= threshold;
    }
  }
  return hm;
}

// definitional representativity: no heavy subset avoids B
inline bool heavy_walk_is_rep(const HeavyMap& hm, uint64_t b_mask) {
  const uint64_t full = (uint64_t(1) << hm.n) - 1;
  const uint64_t t = full & ~b_mask;
  uint64_t u = t;
  while (true) {
    if (hm.heavy[u]) return false;
    if (u == 0) return true;
    u = (u - 1) & t;
  }
}

inline CheckResult thm2_oracle_agreement(const Options& opt) {
  CheckResult res;
  res.id = "thm2.oracle_agreement";
  const Context& ctx = context_for(opt);
  uint32_t cases = 0, violations = 0;
  std::ostringstream first_bad;
  for (const LatticeCase& lc : ctx.lattices) {
    uint64_t points = 1;
    for (uint32_t i = 0; i < lc.d; ++i) points *= lc.m;
    if (points > 16) continue;
    ++cases;
    auto fail = [&](const std::string& why) {
      ++violations;
      if (first_bad.str().empty()) first_bad << lc.name << ": " << why;
    };
    try {
      const rep::WeightedLattice lat = rep::WeightedLattice::from_spec(lc.spec, lc.m, lc.d);
      const uint64_t greedy = rep::min_rep_size(lat, lc.eps).size;
      const uint64_t brute = rep::brute_force_min_rep(lat, lc.eps);
      if (greedy != brute)
        fail("greedy " + std::to_string(greedy) + " != brute " + std::to_string(brute));

      // is_representative must agree with the definitional heavy-subset walk
      const HeavyMap hm = build_heavy_map(lat, lc.eps);
      const uint32_t n = hm.n;
      auto check_mask = [&](uint64_t mask) {
        rep::RepCode cand;
        cand.epsilon = lc.eps;
        for (uint32_t i = 0; i < n; ++i)
          if ((mask >> i) & 1) cand.points.push_back(lat.point_at(i));
        if (rep::is_representative(lat, cand) != heavy_walk_is_rep(hm, mask))
          fail("is_representative disagrees at mask " + std::to_string(mask));
      };
      if (n <= 12) {
        for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) check_mask(mask);
      } else {
        uint64_t state = opt.seed ^ (uint64_t(lc.m) << 32) ^ lc.d;
        for (uint32_t i = 0; i < 512; ++i) {
          state = cyc::splitmix64(state);
          check_mask(state & ((uint64_t(1) << n) - 1));
        }
        check_mask(0);
        check_mask((uint64_t(1) << n) - 1);
      }
    } catch (const std::exception& e) {
      fail(std::string("error: ") + e.what());
    }
  }
  res.pass = violations == 0 && cases >= 300;
  std::ostringstream detail;
  detail << cases << " small lattices, " << violations << " disagreements";
  if (!first_bad.str().empty()) detail << "; first: " << first_bad.str();
  res.detail = detail.str();
  return res;
}

inline CheckResult thm2_subadditive_ratios(const Options& opt) {
  CheckResult res;
  res.id = "thm2.subadditive_ratios";
  uint32_t violations = 0;
  std::ostringstream first_bad;
  auto fail = [&](const std::string& why) {
    ++violations;
    if (first_bad.str().empty()) first_bad << why;
  };
  try {
    // ratio sweeps with per-row bounds and multiple-ratio monotonicity
    struct SweepCase {
      const char* name;
      rep::WeightSpec spec;
      uint32_t d;
      uint32_t m_max;
      Rational eps;
    };
    std::vector<SweepCase> sweeps;
    sweeps.push_back({"uniform-d1", rep::WeightSpec::uniform(), 1, 16, Rational(1, 2)});
    sweeps.push_back({"uniform-d2", rep::WeightSpec::uniform(), 2, 16, Rational(1, 2)});
    sweeps.push_back({"uniform-d2-third", rep::WeightSpec::uniform(), 2, 16, Rational(1, 3)});
    sweeps.push_back({"shell-d1", rep::WeightSpec::shell(), 1, 16, Rational(1, 2)});
    sweeps.push_back({"shell-d2", rep::WeightSpec::shell(), 2, 16, Rational(1, 2)});
    for (const SweepCase& sc : sweeps) {
      std::vector<uint32_t> sizes;
      for (uint32_t m = 1; m <= sc.m_max; ++m) sizes.push_back(m);
      const rep::SweepResult sw = rep::subadditive_sweep(sc.spec, sc.eps, sc.d, sizes, true);
      if (!sw.monotone) fail(std::string(sc.name) + ": spec not monotone");
      for (const auto& row : sw.rows) {
        if (!row.lower_ok || !row.upper_ok)
          fail(std::string(sc.name) + ": bound column false at m=" + std::to_string(row.m));
      }
      for (const auto& chk : sw.multiple_checks) {
        if (!chk.ok)
          fail(std::string(sc.name) + ": ratio grew from m=" + std::to_string(chk.m_small) +
               " to m=" + std::to_string(chk.m_large));
      }
      if (std::string(sc.name) == "shell-d2") {
        // the documented window for the shell family at eps = 1/2
        for (const auto& row : sw.rows) {
          const Rational lo(1, 2);
          const Rational hi = Rational(3, 4) + Rational(1, uint64_t(row.m) * row.m);
          if (row.ratio < lo || row.ratio > hi)
            fail("shell-d2 ratio outside [1/2, 3/4 + 1/m^2] at m=" + std::to_string(row.m));
        }
      }
    }

    // four-block composition: representative output and the size chain
    std::mt19937_64 rng(cyc::splitmix64(opt.seed ^ 0xB10C5ULL));
    const Rational eps(1, 2);
    const std::pair<uint32_t, uint32_t> splits[] = {{3, 2}, {5, 2}, {7, 3}, {8, 3}, {9, 4}, {12, 5}};
    for (uint32_t which = 0; which < 3; ++which) {
      for (auto [m, r] : splits) {
        rep::WeightSpec spec = (which == 0)   ? rep::WeightSpec::uniform()
                               : (which == 1) ? rep::WeightSpec::shell()
                                              : gen::random_monotone_spec(rng, m, 2);
        const std::string name = "compose-" + std::to_string(which) + "-m" + std::to_string(m) +
                                 "-r" + std::to_string(r);
        const rep::WeightedLattice lat = rep::WeightedLattice::from_spec(spec, m, 2);
        const uint32_t k = m / r;
        const uint32_t kr = k * r;
        const uint32_t s = m - kr;
        const rep::MinRepResult c1 = rep::block_min_code(lat, {0, 0, kr, kr}, eps);
        const rep::MinRepResult c2 = rep::block_min_code(lat, {0, kr, kr, s}, eps);
        const rep::MinRepResult c3 = rep::block_min_code(lat, {kr, 0, s, kr}, eps);
        const rep::MinRepResult c4 = rep::block_min_code(lat, {kr, kr, s, s}, eps);
        const rep::RepCode comp = rep::compose(m, r, c1.witness, c2.witness, c3.witness, c4.witness);
        if (!rep::is_representative(lat, comp)) fail(name + ": composition not representative");
        const uint64_t b_m = rep::min_rep_size(lat, eps).size;
        const uint64_t b_r =
            rep::min_rep_size(rep::WeightedLattice::from_spec(spec, r, 2), eps).size;
        const uint64_t mid = c1.size + 2ull * k * r * s + uint64_t(s) * s;
        const uint64_t outer = uint64_t(k) * k * b_r + (2ull * k + 1) * r * r;
        if (comp.points.size() > mid) fail(name + ": size above block-sum bound");
        if (c1.size > uint64_t(k) * k * b_r) fail(name + ": corner block above tiling bound");
        if (mid > outer) fail(name + ": block-sum bound above coarse bound");
        if (b_m > comp.points.size()) fail(name + ": b_m above the composed size");
      }
    }

    // non-monotone specs must be rejected unless the checks are waived
    rep::WeightSpec bumpy = gen::random_weight_spec(rng, 4, 2);
    if (!rep::is_monotone(rep::WeightedLattice::from_spec(bumpy, 4, 2))) {
      bool threw = false;
      try {
        rep::subadditive_sweep(bumpy, Rational(1, 2), 2, {2, 4}, true);
      } catch (const std::invalid_argument&) {
        threw = true;
      }
      if (!threw) fail("non-monotone sweep was not rejected");
      rep::SweepResult waived = rep::subadditive_sweep(bumpy, Rational(1, 2), 2, {2, 4}, false);
      if (waived.monotone) fail("waived sweep mislabeled monotone");
      if (!waived.multiple_checks.empty()) fail("waived sweep still ran multiple checks");
    }
  } catch (const std::exception& e) {
    fail(std::string("error: ") + e.what());
  }
  res.pass = violations == 0;
  std::ostringstream detail;
  detail << "5 sweeps + 18 compositions, " << violations << " violations";
  if (!first_bad.str().empty()) detail << "; first: " << first_bad.str();
  res.detail = detail.str();
  return res;
}

// --- thm3: cycle statistics -----------------------------------------------------

inline CheckResult thm3_moment_recursion(const Options& opt) {
  (void)opt;
  CheckResult res;
  res.id = "thm3.moment_recursion";
  uint32_t violations = 0;
  std::ostringstream first_bad;
  auto fail = [&](const std::string& why) {
    ++violations;
    if (first_bad.str().empty()) first_bad << why;
  };
  try {
    // exact enumeration of all n! permutations for n <= 8
    const cyc::MomentTable table = cyc::moment_table(60, 4);
    for (uint32_t n = 1; n <= 8; ++n) {
      std::vector<uint32_t> perm(n);
      for (uint32_t i = 0; i < n; ++i) perm[i] = i;
      std::vector<BigInt> power_sums(5, BigInt(0));  // sum over perms of N^s
      do {
        const cyc::CycleDecomposition dec = cyc::cycle_decompose(cyc::Permutation(perm));
        BigInt p = 1;
        for (uint32_t s = 1; s <= 4; ++s) {
          p *= dec.count;
          power_sums[s] += p;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      const BigInt nf = factorial(n);
      for (uint32_t s = 1; s <= 4; ++s) {
        if (table.at(n, s) != Rational(power_sums[s], nf))
          fail("moment (n=" + std::to_string(n) + ",s=" + std::to_string(s) +
               ") differs from full enumeration");
      }
    }
    // Stirling cross-check: mu_{n,s} = sum_k k^s c(n,k) / n! for n <= 60
    for (uint32_t n = 1; n <= 60; ++n) {
      const std::vector<BigInt> row = cyc::stirling_row(n);
      const BigInt nf = factorial(n);
      for (uint32_t s = 1; s <= 4; ++s) {
        BigInt acc = 0;
        for (uint32_t k = 1; k <= n; ++k) {
          BigInt p = 1;
          for (uint32_t e = 0; e < s; ++e) p *= k;
          acc += p * row[k];
        }
        if (table.at(n, s) != Rational(acc, nf))
          fail("moment (n=" + std::to_string(n) + ",s=" + std::to_string(s) +
               ") differs from the cycle-count distribution");
      }
    }
    // the distribution itself must sum to one
    for (uint32_t n : {1u, 2u, 3u, 5u, 8u, 20u, 60u}) {
      Rational total = 0;
      for (const auto& [k, p] : cyc::stirling_distribution(n)) total += p;
      if (total != 1) fail("distribution for n=" + std::to_string(n) + " does not sum to 1");
    }
    // spot values pinned independently of both oracles above
    if (table.at(3, 1) != Rational(11, 6)) fail("first moment at n=3 is not 11/6");
    if (table.at(3, 2) != Rational(23, 6)) fail("second moment at n=3 is not 23/6");
    if (cyc::variance_cycles(2) != Rational(1, 4)) fail("variance at n=2 is not 1/4");
    if (cyc::variance_cycles(3) != Rational(17, 36)) fail("variance at n=3 is not 17/36");
  } catch (const std::exception& e) {
    fail(std::string("error: ") + e.what());
  }
  res.pass = violations == 0;
  std::ostringstream detail;
  detail << "n<=8 full enumeration, n<=60 distribution cross-check, " << violations
         << " violations";
  if (!first_bad.str().empty()) detail << "; first: " << first_bad.str();
  res.detail = detail.str();
  return res;
}

inline CheckResult thm3_closed_forms(const Options& opt) {
  (void)opt;
  CheckResult res;
  res.id = "thm3.closed_forms";
  uint32_t violations = 0;
  std::ostringstream first_bad;
  auto fail = [&](const std::string& why) {
    ++violations;
    if (first_bad.str().empty()) first_bad << why;
  };
  try {
    constexpr uint32_t kMaxN = 1000;
    const cyc::MomentTable table = cyc::moment_table(kMaxN, 2);
    Rational h = 0;       // harmonic sum
    Rational sq = 0;      // sum of 1/i^2
    for (uint32_t n = 1; n <= kMaxN; ++n) {
      h += Rational(1, n);
      sq += Rational(1, uint64_t(n) * n);
      if (table.at(n, 1) != h) fail("mean differs from H_n at n=" + std::to_string(n));
      const Rational var = table.at(n, 2) - table.at(n, 1) * table.at(n, 1);
      if (var != h - sq) fail("variance identity fails at n=" + std::to_string(n));
    }
    for (uint32_t n : {1u, 2u, 8u, 10u, 137u, 1000u}) {
      if (cyc::mean_cycles(n) != table.at(n, 1))
        fail("mean_cycles(" + std::to_string(n) + ") off");
      if (cyc::variance_cycles(n) !=
          table.at(n, 2) - table.at(n, 1) * table.at(n, 1))
        fail("variance_cycles(" + std::to_string(n) + ") off");
    }
    if (cyc::mean_cycles(10) != Rational(7381, 2520)) fail("H_10 != 7381/2520");
    if (cyc::mean_cycles(8) != Rational(761, 280)) fail("H_8 != 761/280");

    // forward propagation pins the whole mean sequence to its n=1 value:
    // starting from 1 reproduces H_n, any other start stays off H_n forever
    for (const Rational& start : {Rational(1), Rational(2), Rational(1, 2)}) {
      Rational u = start;
      Rational s = u;
      Rational hh = 1;
      const bool expect_equal = (start == 1);
      if ((u == hh) != expect_equal) fail("propagation start " + format_rational(start) + " misbehaves at n=1");
      for (uint32_t n = 2; n <= kMaxN; ++n) {
        u = Rational(1) + s / n;
        s += u;
        hh += Rational(1, n);
        if ((u == hh) != expect_equal)
          fail("propagation from " + format_rational(start) + " misbehaves at n=" + std::to_string(n));
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("error: ") + e.what());
  }
  res.pass = violations == 0;
  std::ostringstream detail;
  detail << "closed forms to n=1000 plus uniqueness propagation, " << violations << " violations";
  if (!first_bad.str().empty()) detail << "; first: " << first_bad.str();
  res.detail = detail.str();
  return res;
}

inline CheckResult thm3_monte_carlo(const Options& opt) {
  CheckResult res;
  res.id = "thm3.monte_carlo";
  uint32_t violations = 0;
  std::ostringstream first_bad;
  auto fail = [&](const std::string& why) {
    ++violations;
    if (first_bad.str().empty()) first_bad << why;
  };
  std::ostringstream detail;
  try {
    constexpr uint64_t kTrials = 1'000'000;

    // n = 8: mean within 4 standard errors, L_1 histogram uniform
    const cyc::SampleSummary s8 = cyc::sample_cycles(8, kTrials, opt.seed);
    const double mean = double(s8.cycle_count_sum) / double(kTrials);
    const double exact_mean = to_double(cyc::mean_cycles(8));
    const double exact_var = to_double(cyc::variance_cycles(8));
    const double mean_window = 4.0 * std::sqrt(exact_var / double(kTrials));
    if (std::abs(mean - exact_mean) > mean_window)
      fail("cycle-count mean off by " + fmt_double(std::abs(mean - exact_mean)) + " > " +
           fmt_double(mean_window));
    const double p = 1.0 / 8.0;
    const double l1_window = 4.0 * std::sqrt(p * (1 - p) / double(kTrials));
    for (uint32_t k = 1; k <= 8; ++k) {
      const double freq = double(s8.first_cycle_counts[k - 1]) / double(kTrials);
      if (std::abs(freq - p) > l1_window)
        fail("P(L1=" + std::to_string(k) + ") off: " + fmt_double(freq));
    }
    detail << "mean=" << fmt_double(mean) << " (exact " << fmt_double(exact_mean) << ", window "
           << fmt_double(mean_window) << ")";

    // n = 4: conditional uniformity of the induced permutation given L_1 = k
    const cyc::SampleSummary s4 = cyc::sample_cycles(4, kTrials, opt.seed + 1);
    for (uint32_t k = 1; k <= 3; ++k) {
      const auto& buckets = s4.induced_counts[k - 1];
      uint64_t cond_total = 0;
      for (uint64_t c : buckets) cond_total += c;
      if (cond_total == 0) {
        fail("no trials with L1=" + std::to_string(k));
        continue;
      }
      const double pb = 1.0 / double(buckets.size());
      const double window = 4.0 * std::sqrt(pb * (1 - pb) / double(cond_total));
      for (size_t b = 0; b < buckets.size(); ++b) {
        const double freq = double(buckets[b]) / double(cond_total);
        if (std::abs(freq - pb) > window)
          fail("induced rank " + std::to_string(b) + " given L1=" + std::to_string(k) +
               " off: " + fmt_double(freq));
      }
    }

    // the shuffle itself: chi^2 over all 24 rank buckets for n = 4
    {
      std::vector<uint64_t> counts(24, 0);
      constexpr uint64_t kChunk = uint64_t(1) << 16;
      std::vector<uint32_t> perm(4);
      for (uint64_t done = 0; done < kTrials; done += kChunk) {
        const uint64_t batch = std::min(kChunk, kTrials - done);
        std::mt19937_64 rng(
            cyc::splitmix64(opt.seed + 7 + 0x9E3779B97F4A7C15ULL * (done / kChunk + 1)));
        for (uint64_t t = 0; t < batch; ++t) {
          for (uint32_t i = 0; i < 4; ++i) perm[i] = i;
          cyc::shuffle_in_place(perm, rng);
          counts[cyc::lehmer_rank(cyc::Permutation(perm))] += 1;
        }
      }
      const double expected = double(kTrials) / 24.0;
      double chi2 = 0;
      for (uint64_t c : counts) {
        const double delta = double(c) - expected;
        chi2 += delta * delta / expected;
      }
      const double dof = 23.0;
      const double threshold = dof + 4.0 * std::sqrt(2.0 * dof);
      if (chi2 > threshold)
        fail("shuffle chi^2 " + fmt_double(chi2) + " above " + fmt_double(threshold));
      detail << "; shuffle chi2=" << fmt_double(chi2);
    }
  } catch (const std::exception& e) {
    fail(std::string("error: ") + e.what());
  }
  res.pass = violations == 0;
  std::ostringstream out;
  out << detail.str() << "; " << violations << " window violations";
  if (!first_bad.str().empty()) out << "; first: " << first_bad.str();
  res.detail = out.str();
  return res;
}

// --- runner -------------------------------------------------------------------

inline std::vector<CheckResult> run(const Options& opt, const std::string& only = "") {
  std::vector<CheckResult> out;
  auto want = [&](const char* group) { return only.empty() || only == group; };
  if (want("thm1")) {
    out.push_back(thm1_random_codes_bound(opt));
    out.push_back(thm1_example_code(opt));
    out.push_back(thm1_shortening_traces(opt));
  }
  if (want("thm2")) {
    out.push_back(thm2_size_bounds(opt));
    out.push_back(thm2_oracle_agreement(opt));
    out.push_back(thm2_subadditive_ratios(opt));
  }
  if (want("thm3")) {
    out.push_back(thm3_moment_recursion(opt));
    out.push_back(thm3_closed_forms(opt));
    out.push_back(thm3_monte_carlo(opt));
  }
  if (out.empty()) throw std::invalid_argument("unknown check group: " + only);
  return out;
}

inline std::string render_matrix(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  size_t width = 0;
  for (const CheckResult& r : results) width = std::max(width, r.id.size());
  for (const CheckResult& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << "  " << r.id;
    for (size_t i = r.id.size(); i < width + 2; ++i) out << ' ';
    out << r.detail << "\n";
  }
  uint32_t failed = 0;
  for (const CheckResult& r : results) failed += r.pass ? 0 : 1;
  out << (failed == 0 ? "ALL CHECKS PASSED" : std::to_string(failed) + " CHECK(S) FAILED")
      << " (" << results.size() << " run)\n";
  return out.str();
}

inline io::json results_to_json(const std::vector<CheckResult>& results) {
  io::json rows = io::json::array();
  for (const CheckResult& r : results) {
    io::json row;
    row["id"] = r.id;
    row["pass"] = r.pass;
    row["detail"] = r.detail;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace recomb::accept
