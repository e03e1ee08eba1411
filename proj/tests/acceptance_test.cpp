// Acceptance gate: one test per shipping criterion, each printing exactly one
// CRITERION NN PASS/FAIL line. Thresholds and tolerances are pinned inside the
// checks; everything must hold at the default seed with the shipped golden
// file and a 2e9 work budget.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "recomb/reproduce.hpp"

namespace {

recomb::accept::Options gate_options() {
  recomb::accept::Options opt;
  opt.seed = 42;
  opt.golden_path = RECOMB_GOLDEN_PATH;
  opt.work_budget = 2'000'000'000ull;
  return opt;
}

void report(int number, bool pass, const std::string& what, double secs) {
  std::printf("CRITERION %02d %s  %s (%.1fs)\n", number, pass ? "PASS" : "FAIL", what.c_str(),
              secs);
  std::fflush(stdout);
  EXPECT_TRUE(pass) << what;
}

void run_criterion(int number,
                   recomb::accept::CheckResult (*fn)(const recomb::accept::Options&)) {
  const auto t0 = std::chrono::steady_clock::now();
  const recomb::accept::CheckResult r = fn(gate_options());
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(number, r.pass, "[" + r.id + "] " + r.detail, secs);
}

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(RECOMB_BIN_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliRun r;
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(Acceptance, Criterion01RandomCodesRespectTheBound) {
  run_criterion(1, recomb::accept::thm1_random_codes_bound);
}

TEST(Acceptance, Criterion02WorkedExampleMatchesGolden) {
  run_criterion(2, recomb::accept::thm1_example_code);
}

TEST(Acceptance, Criterion03ShorteningTraceInvariants) {
  run_criterion(3, recomb::accept::thm1_shortening_traces);
}

TEST(Acceptance, Criterion04SizeBoundsAcrossTheCorpus) {
  run_criterion(4, recomb::accept::thm2_size_bounds);
}

TEST(Acceptance, Criterion05GreedyAgreesWithTheOracles) {
  run_criterion(5, recomb::accept::thm2_oracle_agreement);
}

TEST(Acceptance, Criterion06RatiosShrinkAndCompositionsHit) {
  run_criterion(6, recomb::accept::thm2_subadditive_ratios);
}

TEST(Acceptance, Criterion07MomentRecursionIsExact) {
  run_criterion(7, recomb::accept::thm3_moment_recursion);
}

TEST(Acceptance, Criterion08ClosedFormsAreExact) {
  run_criterion(8, recomb::accept::thm3_closed_forms);
}

TEST(Acceptance, Criterion09MonteCarloWithinWindows) {
  run_criterion(9, recomb::accept::thm3_monte_carlo);
}

TEST(Acceptance, Criterion10ReproduceIsByteDeterministic) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string base = std::string("reproduce --golden ") + RECOMB_GOLDEN_PATH;
  const CliRun text_a = run_cli(base);
  const CliRun text_b = run_cli(base);
  const CliRun json_a = run_cli(base + " --json");
  const CliRun json_b = run_cli(base + " --json");
  const bool pass = text_a.exit_code == 0 && text_b.exit_code == 0 && !text_a.out.empty() &&
                    text_a.out == text_b.out && json_a.exit_code == 0 && !json_a.out.empty() &&
                    json_a.out == json_b.out;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string what = "two text runs and two JSON runs byte-identical";
  if (!pass)
    what = "exit codes " + std::to_string(text_a.exit_code) + "/" +
           std::to_string(text_b.exit_code) + "/" + std::to_string(json_a.exit_code) + "/" +
           std::to_string(json_b.exit_code) +
           (text_a.out == text_b.out ? "" : ", text outputs differ") +
           (json_a.out == json_b.out ? "" : ", JSON outputs differ");
  report(10, pass, what, secs);
  EXPECT_NE(text_a.out.find("ALL CHECKS PASSED"), std::string::npos) << text_a.out;
}

}  // namespace
