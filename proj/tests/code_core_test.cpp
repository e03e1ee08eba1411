#include "recomb/code_core.hpp"

#include <gtest/gtest.h>

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "recomb/generators.hpp"

namespace recomb::codes {
namespace {

Code even_weight_3() {
  return Code(Alphabet::binary(), 3,
              {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, true, 2);
}

// Independent determination oracle: bucket words by their projection onto u
// and demand a constant value at j inside every bucket.
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

TEST(Alphabet, BasicAccess) {
  const Alphabet a = Alphabet::integers(3);
  EXPECT_EQ(a.q(), 3u);
  EXPECT_EQ(a.symbol(2), "2");
  EXPECT_EQ(a.index_of("1"), std::optional<uint8_t>(1));
  EXPECT_EQ(a.index_of("x"), std::nullopt);
  EXPECT_EQ(Alphabet::binary().q(), 2u);
}

TEST(Alphabet, RejectsDegenerateSymbolSets) {
  EXPECT_THROW(Alphabet({"0"}), std::invalid_argument);
  EXPECT_THROW(Alphabet({"a", "a"}), std::invalid_argument);
}

TEST(PositionSet, SortsAndDeduplicatesNothing) {
  const PositionSet s({3, 1, 2});
  EXPECT_EQ(s.values(), (std::vector<uint32_t>{1, 2, 3}));
  EXPECT_THROW(PositionSet({1, 1}), std::invalid_argument);
}

TEST(PositionSet, OneBasedRoundTrip) {
  const PositionSet s = PositionSet::from_one_based({5, 1, 3});
  EXPECT_EQ(s.values(), (std::vector<uint32_t>{0, 2, 4}));
  EXPECT_EQ(s.to_one_based(), (std::vector<uint64_t>{1, 3, 5}));
  EXPECT_EQ(to_string(s), "{1,3,5}");
  EXPECT_THROW(PositionSet::from_one_based({0}), std::invalid_argument);
}

TEST(PositionSet, SetAlgebra) {
  const PositionSet a({0, 1, 2});
  const PositionSet b({2, 3});
  EXPECT_EQ(a.union_with(b).values(), (std::vector<uint32_t>{0, 1, 2, 3}));
  EXPECT_EQ(a.minus(b).values(), (std::vector<uint32_t>{0, 1}));
  EXPECT_EQ(a.intersect(b).values(), (std::vector<uint32_t>{2}));
  EXPECT_TRUE(PositionSet({1}).subset_of(a));
  EXPECT_FALSE(b.subset_of(a));
  EXPECT_TRUE(a.contains(2));
  EXPECT_FALSE(a.contains(3));
  EXPECT_EQ(PositionSet::range(3).values(), (std::vector<uint32_t>{0, 1, 2}));
}

TEST(Code, ValidatesWordsAndDimension) {
  const Code c = even_weight_3();
  EXPECT_EQ(c.n(), 3u);
  EXPECT_EQ(c.q(), 2u);
  EXPECT_EQ(c.size(), 4u);
  EXPECT_EQ(c.k_exact(), std::optional<uint32_t>(2));
  EXPECT_DOUBLE_EQ(c.k(), 2.0);
  EXPECT_TRUE(c.contains({0, 1, 1}));
  EXPECT_FALSE(c.contains({0, 0, 1}));
  EXPECT_THROW(Code(Alphabet::binary(), 2, {{0, 0}, {0, 0}}, false, std::nullopt),
               std::invalid_argument);
  EXPECT_THROW(Code(Alphabet::binary(), 2, {{0, 0}, {0, 1}}, false, 2),
               std::invalid_argument);  // 2^2 != 2
  EXPECT_THROW(Code(Alphabet::binary(), 2, {{0, 2}}, false, std::nullopt),
               std::invalid_argument);  // symbol out of range
}

TEST(Distance, EvenWeightCodeHasDistanceTwo) {
  const Code c = even_weight_3();
  EXPECT_EQ(min_distance(c), 2u);
  EXPECT_EQ(min_nonzero_weight(c), 2u);
}

TEST(Distance, RepetitionCode) {
  const Code c = gen::repetition_code(2, 5);
  EXPECT_EQ(min_distance(c), 5u);
}

TEST(Distance, BudgetRefusal) {
  const Code c = gen::repetition_code(2, 5);
  EXPECT_THROW(min_distance(c, 2), BudgetExceededError);
}

TEST(Linearity, VerifyLinearAcceptsAndRejects) {
  EXPECT_TRUE(verify_linear(even_weight_3()));
  const Code notclosed(Alphabet::binary(), 3, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}},
                       std::nullopt, std::nullopt);
  EXPECT_FALSE(verify_linear(notclosed));
  const Code nozero(Alphabet::binary(), 2, {{0, 1}, {1, 0}}, std::nullopt,
                    std::nullopt);
  EXPECT_FALSE(verify_linear(nozero));
}

TEST(Determination, ParityPositionIsDetermined) {
  const Code c = even_weight_3();
  EXPECT_TRUE(is_determined(c, PositionSet({0, 1}), 2));
  EXPECT_FALSE(is_determined(c, PositionSet({0}), 1));
  EXPECT_TRUE(is_determined(c, PositionSet(), 2) == false);
  EXPECT_THROW(is_determined(c, PositionSet({0, 2}), 2), std::invalid_argument);
  EXPECT_THROW(is_determined(c, PositionSet({0}), 3), std::invalid_argument);
}

TEST(Determination, MatchesBucketOracleOnRandomCodes) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 20; ++iter) {
    const Code c = (iter % 2 == 0) ? gen::random_linear_code(rng, 6, 3)
                                   : gen::random_word_code(rng, 6, 3);
    for (uint32_t j = 0; j < c.n(); ++j) {
      for (uint32_t a = 0; a < c.n(); ++a) {
        for (uint32_t b = a + 1; b < c.n(); ++b) {
          if (a == j || b == j) continue;
          const PositionSet u({a, b});
          EXPECT_EQ(is_determined(c, u, j), determined_oracle(c, u, j))
              << "iter=" << iter << " u=" << to_string(u) << " j=" << j;
        }
      }
    }
  }
}

TEST(Determination, MonotoneInTheWitnessSet) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 10; ++iter) {
    const Code c = gen::random_word_code(rng, 7, 4);
    for (uint32_t j = 0; j < c.n(); ++j) {
      const PositionSet small({(j + 1) % c.n()});
      const PositionSet big({(j + 1) % c.n(), (j + 2) % c.n(), (j + 3) % c.n()});
      if (is_determined(c, small, j)) EXPECT_TRUE(is_determined(c, big, j));
    }
  }
}

TEST(Reach, ParityExample) {
  const Code c = even_weight_3();
  EXPECT_EQ(reach(c, PositionSet({0, 1})).values(), (std::vector<uint32_t>{2}));
  EXPECT_TRUE(reach(c, PositionSet({0})).empty());
}

TEST(Reach, FullSupportDeterminesEverythingElse) {
  std::mt19937_64 rng(13);
  const Code c = gen::random_linear_code(rng, 6, 3);
  // with all but one position known, a distance >= 2 code pins the last one
  if (min_distance(c) >= 2) {
    PositionSet all_but_last = PositionSet::range(c.n() - 1);
    EXPECT_EQ(reach(c, all_but_last).values(),
              (std::vector<uint32_t>{c.n() - 1}));
  }
}

TEST(MaxReach, EvenWeightCode) {
  const Code c = even_weight_3();
  EXPECT_EQ(max_reach(c, 1), 0u);
  EXPECT_EQ(max_reach(c, 2), 1u);
}

TEST(MaxReach, RefusesUpfrontWhenOverBudget) {
  const Code c = gen::repetition_code(2, 20);
  try {
    max_reach(c, 10, 100);
    FAIL() << "expected refusal";
  } catch (const BudgetExceededError& e) {
    EXPECT_NE(std::string(e.what()).find("max_reach"), std::string::npos);
  }
}

TEST(WorkMeter, ChargesAndThrows) {
  WorkMeter meter{100, 0};
  meter.charge(60, "stage-a");
  EXPECT_EQ(meter.used, 60u);
  try {
    meter.charge(50, "stage-b");
    FAIL() << "expected budget error";
  } catch (const BudgetExceededError& e) {
    EXPECT_NE(std::string(e.what()).find("stage-b"), std::string::npos);
  }
}

TEST(Subsets, LexOrderAndAbort) {
  std::vector<std::vector<uint32_t>> got;
  for_each_subset({0, 1, 2, 3}, 2, [&](const std::vector<uint32_t>& s) {
    got.push_back(s);
    return true;
  });
  const std::vector<std::vector<uint32_t>> want{{0, 1}, {0, 2}, {0, 3},
                                                {1, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(got, want);

  int count = 0;
  for_each_subset({0, 1, 2, 3}, 2, [&](const std::vector<uint32_t>&) {
    return ++count < 3;
  });
  EXPECT_EQ(count, 3);
}

TEST(ExtendedCount, PowSaturating) {
  EXPECT_EQ(pow_saturating(2, 10, kDefaultCountCeiling).value, 1024u);
  EXPECT_TRUE(pow_saturating(2, 63, 1'000'000'000'000'000'000ull).is_infinite);
  EXPECT_EQ(pow_saturating(3, 0, kDefaultCountCeiling).value, 1u);
}

TEST(ExtendedCount, DeltaBound) {
  EXPECT_EQ(delta_bound(2, 3, true).value, 8u);
  EXPECT_EQ(delta_bound(2, 3, false).value, 256u);
  EXPECT_TRUE(delta_bound(2, 70, true).is_infinite);
  EXPECT_TRUE(delta_bound(2, 7, false).is_infinite);  // 2^128 overflows ceiling
  EXPECT_EQ(delta_bound(2, 0, true).value, 1u);
}

TEST(ExtendedCount, PlusDeltaComparison) {
  EXPECT_TRUE(plus_delta_leq(3, delta_bound(2, 2, true), 7));   // 3+4 <= 7
  EXPECT_FALSE(plus_delta_leq(4, delta_bound(2, 2, true), 7));  // 4+4 > 7
  EXPECT_FALSE(plus_delta_leq(0, delta_bound(2, 70, true), 1'000'000));
}

TEST(Logs, CeilAndFloor) {
  EXPECT_EQ(ceil_log(2, 1024), 10u);
  EXPECT_EQ(ceil_log(2, 1025), 11u);
  EXPECT_EQ(ceil_log(2, 1), 0u);
  EXPECT_EQ(floor_log(2, 1023), 9u);
  EXPECT_EQ(floor_log(2, 1024), 10u);
  EXPECT_EQ(floor_log(3, 80), 3u);
}

TEST(Generators, DirectSumAndParity) {
  const Code p = gen::parity_code(4);
  EXPECT_EQ(p.n(), 5u);
  EXPECT_EQ(p.size(), 16u);
  EXPECT_EQ(min_distance(p), 2u);
  const Code sum = gen::direct_sum(p, gen::repetition_code(2, 3));
  EXPECT_EQ(sum.n(), 8u);
  EXPECT_EQ(sum.size(), 32u);
  EXPECT_EQ(min_distance(sum), 2u);
}

TEST(Generators, AffineShiftPreservesDistanceAndBreaksLinearity) {
  std::mt19937_64 rng(17);
  const Code base = gen::random_linear_code(rng, 6, 3);
  const Code shifted = gen::affine_shift(rng, base);
  EXPECT_EQ(shifted.size(), base.size());
  EXPECT_EQ(min_distance(shifted), min_distance(base));
  EXPECT_FALSE(verify_linear(shifted));  // zero word was shifted away
}

}  // namespace
}  // namespace recomb::codes
