#include "recomb/json_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "recomb/generators.hpp"

namespace recomb::io {
namespace {

using codes::Alphabet;
using codes::Code;
using codes::PositionSet;

Code even_weight_3() {
  return Code(Alphabet::binary(), 3,
              {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, true, 2);
}

TEST(CodeJson, RoundTrip) {
  const Code c = even_weight_3();
  const json j = code_to_json(c);
  const Code back = code_from_json(j);
  EXPECT_EQ(back.n(), c.n());
  EXPECT_EQ(back.q(), c.q());
  EXPECT_EQ(back.words(), c.words());
  EXPECT_EQ(back.linear(), c.linear());
  EXPECT_EQ(back.k_exact(), c.k_exact());
}

TEST(CodeJson, RejectsBadInput) {
  json j = code_to_json(even_weight_3());

  json wrong_format = j;
  wrong_format["format"] = 99;
  EXPECT_THROW(code_from_json(wrong_format), std::invalid_argument);

  json wrong_q = j;
  wrong_q["q"] = 3;
  EXPECT_THROW(code_from_json(wrong_q), std::invalid_argument);

  json bad_symbol = j;
  bad_symbol["words"][0][0] = "z";
  EXPECT_THROW(code_from_json(bad_symbol), std::invalid_argument);

  json false_linear = code_to_json(Code(
      Alphabet::binary(), 2, {{0, 0}, {0, 1}, {1, 1}}, std::nullopt, std::nullopt));
  false_linear["linear"] = true;
  try {
    code_from_json(false_linear);
    FAIL() << "expected linearity rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("declared linear"), std::string::npos);
  }

  json bad_k = j;
  bad_k["k"] = 2.7;
  EXPECT_THROW(code_from_json(bad_k), std::invalid_argument);

  json missing = j;
  missing.erase("words");
  EXPECT_THROW(code_from_json(missing), std::invalid_argument);
}

TEST(CodeJson, NullableFieldsSurvive) {
  const Code c(Alphabet::integers(3), 2, {{0, 1}, {1, 2}}, std::nullopt, std::nullopt);
  const json j = code_to_json(c);
  EXPECT_TRUE(j.at("linear").is_null());
  const Code back = code_from_json(j);
  EXPECT_FALSE(back.linear().has_value());
  EXPECT_FALSE(back.k_exact().has_value());  // 2 words is not a power of 3
}

TEST(PositionSetJson, OneBasedOnDisk) {
  const PositionSet s({0, 2, 4});
  const json j = position_set_to_json(s);
  EXPECT_EQ(j, json::array({1, 3, 5}));
  EXPECT_EQ(position_set_from_json(j, "test"), s);
}

TEST(LocalityJson, RoundTrip) {
  lrc::LocalityStructure loc;
  loc.theta = PositionSet({0, 1, 2});
  loc.tau = 1;
  loc.r = 2;
  loc.locality_map[PositionSet({0})] = PositionSet({1, 2});
  loc.locality_map[PositionSet({2})] = PositionSet({0, 1});
  const json j = loc_to_json(loc);
  const lrc::LocalityStructure back = loc_from_json(j);
  EXPECT_EQ(back.theta, loc.theta);
  EXPECT_EQ(back.tau, loc.tau);
  EXPECT_EQ(back.r, loc.r);
  EXPECT_EQ(back.locality_map, loc.locality_map);
}

TEST(WeightSpecJson, AllKindsRoundTrip) {
  for (const auto& spec :
       {rep::WeightSpec::uniform(), rep::WeightSpec::shell(),
        rep::WeightSpec::explicit_grid(2, 1, {Rational(1), Rational(3, 2)},
                                       Rational(2))}) {
    const rep::WeightSpec back = weight_spec_from_json(weight_spec_to_json(spec));
    EXPECT_EQ(back.kind, spec.kind);
    EXPECT_EQ(back.weights, spec.weights);
    EXPECT_EQ(back.beta, spec.beta);
  }
  json j = weight_spec_to_json(rep::WeightSpec::uniform());
  j["kind"] = "mystery";
  EXPECT_THROW(weight_spec_from_json(j), std::invalid_argument);
}

TEST(RepCodeJson, RoundTrip) {
  rep::RepCode code{{{1, 2}, {2, 2}}, Rational(1, 3)};
  const rep::RepCode back = rep_code_from_json(rep_code_to_json(code));
  EXPECT_EQ(back.points, code.points);
  EXPECT_EQ(back.epsilon, code.epsilon);
}

TEST(SweepCsv, ExactBytes) {
  const rep::SweepResult sw = rep::subadditive_sweep(
      rep::WeightSpec::uniform(), Rational(1, 2), 1, {1, 2}, true);
  EXPECT_EQ(sweep_to_csv(sw),
            "m,b_m,ratio_num,ratio_den,lower_ok,upper_ok\n"
            "1,1,1,1,true,true\n"
            "2,2,1,1,true,true\n");
}

TEST(MomentsCsv, ExactBytes) {
  const cyc::MomentTable t = cyc::moment_table(2, 2);
  EXPECT_EQ(moments_to_csv(t),
            "n,s,value\n"
            "1,1,1/1\n"
            "1,2,1/1\n"
            "2,1,3/2\n"
            "2,2,5/2\n");
}

TEST(Envelope, ShapeAndDeterminism) {
  const json env = make_envelope("demo", json{{"x", 1}}, json{{"y", 2}}, {"careful"});
  EXPECT_EQ(env.at("format"), kFormatVersion);
  EXPECT_EQ(env.at("tool"), "recomb");
  EXPECT_EQ(env.at("command"), "demo");
  EXPECT_EQ(env.at("params").at("x"), 1);
  EXPECT_EQ(env.at("result").at("y"), 2);
  EXPECT_EQ(env.at("warnings"), json::array({"careful"}));
  EXPECT_EQ(env.at("budget_exhausted"), false);

  const json again = make_envelope("demo", json{{"x", 1}}, json{{"y", 2}}, {"careful"});
  EXPECT_EQ(dump(env), dump(again));
  EXPECT_EQ(dump(env).back(), '\n');
}

TEST(Files, SaveAndLoadRoundTrip) {
  const std::string path = "json_io_test_tmp.json";
  const json j{{"format", 1}, {"hello", "world"}};
  save_text_file(path, dump(j));
  const json back = load_json_file(path);
  EXPECT_EQ(back.at("hello"), "world");
  std::remove(path.c_str());
  EXPECT_THROW(load_json_file("does_not_exist_12345.json"), std::invalid_argument);
}

TEST(TraceJson, ContainsTheContract) {
  const Code rep3 = gen::repetition_code(2, 3);
  lrc::LocalityStructure loc;
  loc.theta = PositionSet::range(3);
  loc.tau = 1;
  loc.r = 1;
  const lrc::CapabilityReport cap = lrc::verify_capability(rep3, loc);
  ASSERT_TRUE(cap.ok);
  loc.locality_map = cap.map;
  const lrc::ShorteningTrace trace = lrc::shorten(rep3, loc);
  const json j = trace_to_json(trace, rep3);
  EXPECT_EQ(j.at("initial_size"), 2u);
  EXPECT_EQ(j.at("certified_bound"), 3);
  EXPECT_EQ(j.at("stop_reason"), "subcode-exhausted");
  ASSERT_EQ(j.at("iterations").size(), 1u);
  EXPECT_EQ(j.at("iterations")[0].at("projection"), json::array({"0"}));
}

TEST(BoundReportJson, InfiniteDeltaSerializesAsString) {
  const lrc::BoundReport rep = lrc::compute_T(40, 12, 39, 1, 20, 2, false);
  const json j = bound_report_to_json(rep);
  bool saw_inf = false;
  for (const json& c : j.at("conditions"))
    if (c.at("delta") == "inf") saw_inf = true;
  EXPECT_TRUE(saw_inf);
}

}  // namespace
}  // namespace recomb::io
