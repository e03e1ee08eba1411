#include "recomb/lrc_partial.hpp"

#include <gtest/gtest.h>

#include <map>
#include <stdexcept>
#include <vector>

#include "recomb/generators.hpp"

namespace recomb::lrc {
namespace {

using codes::Alphabet;
using codes::Code;
using codes::PositionSet;
using codes::Word;

Code even_weight_3() {
  return Code(Alphabet::binary(), 3,
              {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, true, 2);
}

LocalityStructure all_positions_loc(uint32_t n, uint32_t tau, uint32_t r) {
  LocalityStructure loc;
  loc.theta = PositionSet::range(n);
  loc.tau = tau;
  loc.r = r;
  return loc;
}

// same bucket oracle as in code_core_test, used here to replay traces
bool determined_oracle(const Code& code, const PositionSet& u, uint32_t j) {
  std::map<std::vector<uint8_t>, uint8_t> seen;
  for (const Word& w : code.words()) {
    std::vector<uint8_t> key;
    for (uint32_t p : u) key.push_back(w[p]);
    auto [it, inserted] = seen.emplace(key, w[j]);
    if (!inserted && it->second != w[j]) return false;
  }
  return true;
}

TEST(VerifyCapability, FindsPairLocalitiesInParityCode) {
  const CapabilityReport rep = verify_capability(even_weight_3(), all_positions_loc(3, 1, 2));
  EXPECT_TRUE(rep.ok);
  ASSERT_EQ(rep.map.size(), 3u);
  EXPECT_EQ(rep.map.at(PositionSet({0})), PositionSet({1, 2}));
  EXPECT_EQ(rep.map.at(PositionSet({1})), PositionSet({0, 2}));
  EXPECT_EQ(rep.map.at(PositionSet({2})), PositionSet({0, 1}));
  EXPECT_FALSE(rep.counterexample.has_value());
}

TEST(VerifyCapability, ReportsFirstCounterexample) {
  const CapabilityReport rep = verify_capability(even_weight_3(), all_positions_loc(3, 1, 1));
  EXPECT_FALSE(rep.ok);
  ASSERT_TRUE(rep.counterexample.has_value());
  EXPECT_EQ(*rep.counterexample, PositionSet({0}));
}

TEST(VerifyCapability, WarnsAboutSmallTau) {
  const CapabilityReport rep = verify_capability(even_weight_3(), all_positions_loc(3, 1, 2));
  ASSERT_FALSE(rep.warnings.empty());
  EXPECT_NE(rep.warnings.front().find("tau=1"), std::string::npos);
}

TEST(VerifyCapability, TauTwoOnRepetitionCode) {
  const Code rep5 = gen::repetition_code(2, 5);
  const CapabilityReport rep = verify_capability(rep5, all_positions_loc(5, 2, 1));
  EXPECT_TRUE(rep.ok);
  EXPECT_TRUE(rep.warnings.empty());  // tau=2 meets the customary minimum
  EXPECT_EQ(rep.map.at(PositionSet({0, 1})), PositionSet({2}));
}

TEST(VerifyCapability, BadSuppliedEntryFallsBackToSearch) {
  LocalityStructure loc = all_positions_loc(3, 1, 2);
  loc.locality_map[PositionSet({0})] = PositionSet({1});  // cannot work alone
  const CapabilityReport rep = verify_capability(even_weight_3(), loc);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.map.at(PositionSet({0})), PositionSet({1, 2}));
  bool warned = false;
  for (const auto& w : rep.warnings)
    if (w.find("supplied locality set") != std::string::npos) warned = true;
  EXPECT_TRUE(warned);
}

TEST(VerifyCapability, ValidatesStructure) {
  LocalityStructure loc = all_positions_loc(3, 1, 2);
  loc.locality_map[PositionSet({0})] = PositionSet({0, 1});  // overlaps its own key
  EXPECT_THROW(verify_capability(even_weight_3(), loc), std::invalid_argument);
}

TEST(ComputeT, WorkedExampleNumbers) {
  const BoundReport rep = compute_T(131, 10, 130, 1, 3, 2, true);
  EXPECT_EQ(rep.T, 2u);
  EXPECT_EQ(rep.singleton, 122);
  EXPECT_EQ(rep.bound, 120);
  ASSERT_EQ(rep.conditions.size(), 4u);  // t = 0,1,2 pass; t = 3 recorded as failing
  EXPECT_TRUE(rep.conditions[2].cond1 && rep.conditions[2].cond2);
  EXPECT_FALSE(rep.conditions[3].cond1);
  EXPECT_EQ(rep.conditions[2].delta.value, 64u);  // 2^(2*3)
}

TEST(ComputeT, ZeroTWhenConditionsNeverHold) {
  // theta too small: k - 1 + theta - n < 0 kills condition (1) beyond t = 0
  const BoundReport rep = compute_T(10, 3, 5, 1, 2, 2, true);
  EXPECT_EQ(rep.T, 0u);
  EXPECT_EQ(rep.bound, rep.singleton);
}

TEST(ComputeT, NonlinearFiberGrowthOnlyLowersT) {
  const BoundReport lin = compute_T(40, 12, 39, 1, 2, 2, true);
  const BoundReport gen = compute_T(40, 12, 39, 1, 2, 2, false);
  EXPECT_LE(gen.T, lin.T);
  for (const auto& c : gen.conditions) {
    if (c.delta.is_infinite) EXPECT_FALSE(c.cond2);
  }
}

TEST(ComputeT, RejectsDegenerateParameters) {
  EXPECT_THROW(compute_T(0, 1, 0, 1, 1, 2, true), std::invalid_argument);
  EXPECT_THROW(compute_T(5, 0, 5, 1, 1, 2, true), std::invalid_argument);
  EXPECT_THROW(compute_T(5, 6, 5, 1, 1, 2, true), std::invalid_argument);
  EXPECT_THROW(compute_T(5, 2, 6, 1, 1, 2, true), std::invalid_argument);
  EXPECT_THROW(compute_T(5, 2, 5, 0, 1, 2, true), std::invalid_argument);
  EXPECT_THROW(compute_T(5, 2, 5, 1, 1, 1, true), std::invalid_argument);
}

TEST(ExampleCode, SmallInstanceShape) {
  const ExampleCode ex = build_example_code(4);
  EXPECT_EQ(ex.code.n(), 9u);  // 4 message + C(4,3)=4 triples + 1 parity
  EXPECT_EQ(ex.code.size(), 16u);
  EXPECT_EQ(ex.code.k_exact(), std::optional<uint32_t>(4));
  EXPECT_TRUE(codes::verify_linear(ex.code));
  EXPECT_EQ(ex.loc.theta.size(), 8u);
  EXPECT_FALSE(ex.loc.theta.contains(8));  // overall parity stays outside theta
  EXPECT_FALSE(ex.warnings.empty());       // k < 10 warning
}

TEST(ExampleCode, DeclaredLocalitiesVerify) {
  const ExampleCode ex = build_example_code(5);
  const CapabilityReport rep = verify_capability(ex.code, ex.loc);
  EXPECT_TRUE(rep.ok);
  // every supplied entry should have been accepted as-is
  for (const auto& w : rep.warnings)
    EXPECT_EQ(w.find("supplied locality set"), std::string::npos) << w;
  for (const auto& [p, t] : ex.loc.locality_map) EXPECT_EQ(rep.map.at(p), t);
}

TEST(ExampleCode, RejectsOutOfRangeK) {
  EXPECT_THROW(build_example_code(2), std::invalid_argument);
  EXPECT_THROW(build_example_code(17), std::invalid_argument);
}

TEST(Shorten, RepetitionCodeCertifiesExactDistance) {
  const Code rep3 = gen::repetition_code(2, 3);
  LocalityStructure loc = all_positions_loc(3, 1, 1);
  const CapabilityReport cap = verify_capability(rep3, loc);
  ASSERT_TRUE(cap.ok);
  loc.locality_map = cap.map;

  const ShorteningTrace trace = shorten(rep3, loc);
  EXPECT_EQ(trace.initial_size, 2u);
  EXPECT_EQ(trace.singleton_bound, 3);  // 3 - 1 + 1
  ASSERT_EQ(trace.iterations.size(), 1u);
  const ShorteningIteration& it = trace.iterations[0];
  EXPECT_EQ(it.p, PositionSet({0}));
  EXPECT_EQ(it.subcode_size, 1u);
  EXPECT_EQ(it.projection, Word({0}));  // tie between fibers -> smallest value
  EXPECT_EQ(trace.stop_reason, "subcode-exhausted");
  EXPECT_EQ(trace.certified_bound, 3);
  EXPECT_EQ(codes::min_distance(rep3), 3u);
}

TEST(Shorten, RequiresLocalityMap) {
  const Code rep3 = gen::repetition_code(2, 3);
  const LocalityStructure loc = all_positions_loc(3, 1, 1);
  try {
    shorten(rep3, loc);
    FAIL() << "expected missing-map error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("locality map missing"), std::string::npos);
  }
}

// Replays the recorded trace against first principles: filtered word counts,
// fully recomputed reach sets, pigeonhole growth, and the certified bound's
// validity against the true minimum distance.
void check_trace_consistency(const Code& code, const LocalityStructure& loc) {
  const ShorteningTrace trace = shorten(code, loc);
  const uint32_t n = code.n();

  std::vector<Word> words = code.words();
  PositionSet pinned;
  PositionSet prev_reach;
  uint64_t step_index = 0;
  for (const ShorteningIteration& it : trace.iterations) {
    ++step_index;
    ASSERT_EQ(it.fresh.size(), it.m);
    ASSERT_EQ(it.projection.size(), it.m);
    // filter to the recorded fiber
    std::vector<Word> kept;
    for (const Word& w : words) {
      bool match = true;
      size_t idx = 0;
      for (uint32_t p : it.fresh)
        if (w[p] != it.projection[idx++]) { match = false; break; }
      if (match) kept.push_back(w);
    }
    EXPECT_EQ(kept.size(), it.subcode_size);
    words = std::move(kept);
    pinned = pinned.union_with(it.fresh);

    // full reach recomputation from scratch must match the incremental one
    std::vector<uint32_t> full;
    for (uint32_t j = 0; j < n; ++j)
      if (!pinned.contains(j) && determined_oracle(code, pinned, j)) full.push_back(j);
    EXPECT_EQ(it.reach_set, PositionSet(std::move(full)));

    // reach grows by at least tau per completed step
    EXPECT_GE(it.reach_set.size(), step_index * loc.tau);
    EXPECT_TRUE(prev_reach.subset_of(it.reach_set));
    prev_reach = it.reach_set;

    // pigeonhole: #C_j * q^{#pinned} >= #C
    BigInt lhs = BigInt(it.subcode_size);
    for (uint64_t i = 0; i < pinned.size(); ++i) lhs *= code.q();
    EXPECT_GE(lhs, BigInt(code.size()));

    if (it.certified_bound.has_value()) {
      EXPECT_GE(it.subcode_size, 2u);
      EXPECT_EQ(*it.certified_bound,
                int64_t(n) - int64_t(pinned.size()) - int64_t(it.reach_set.size()) -
                    codes::ceil_log(code.q(), it.subcode_size) + 1);
    }
  }

  EXPECT_EQ(trace.reduced_length, trace.q_positions.size());
  EXPECT_FALSE(trace.reduced_code.empty());
  EXPECT_EQ(trace.reduced_code.size(), words.size());
  EXPECT_TRUE(trace.stop_reason == "subcode-exhausted" ||
              trace.stop_reason == "no-fresh-locality");

  const uint32_t d = codes::min_distance(code);
  EXPECT_GE(trace.certified_bound, int64_t(d));
  EXPECT_LE(trace.certified_bound, trace.singleton_bound);
}

TEST(Shorten, TraceReplaysOnWorkedExample) {
  const ExampleCode ex = build_example_code(5);
  check_trace_consistency(ex.code, ex.loc);
}

TEST(Shorten, TraceReplaysOnRandomCodes) {
  std::mt19937_64 rng(23);
  int done = 0;
  for (int iter = 0; iter < 12 && done < 6; ++iter) {
    const Code c = gen::random_linear_code(rng, 8, 3);
    const LocalityStructure derived = gen::derive_locality(c, 1, 2);
    if (derived.theta.size() < 2 || derived.locality_map.empty()) continue;
    check_trace_consistency(c, derived);
    ++done;
  }
  EXPECT_GE(done, 3);
}

TEST(Shorten, ProgressGuaranteeFlagOnLargerExample) {
  const ExampleCode ex = build_example_code(5);
  const ShorteningTrace trace = shorten(ex.code, ex.loc);
  // r + n - #theta = 3 + 1 = 4 < floor(log2(32)) = 5
  EXPECT_TRUE(trace.progress_guarantee);
}

}  // namespace
}  // namespace recomb::lrc
