// recomb: a workbench for three families of combinatorial checks -
//   lrc  - locally recoverable block codes: capability checks, distance
//          bounds from iterative shortening, worked example generator
//   rep  - weighted-lattice representative (hitting) sets: exact minima,
//          size-bound sweeps, four-block composition
//   cyc  - cycle statistics of uniform random permutations: exact moments,
//          closed forms, deterministic Monte Carlo
//   reproduce - the full deterministic verification matrix
// All JSON/CSV output is byte-deterministic for fixed inputs and seeds.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recomb/code_core.hpp"
#include "recomb/generators.hpp"
#include "recomb/json_io.hpp"
#include "recomb/lattice_rep.hpp"
#include "recomb/lrc_partial.hpp"
#include "recomb/perm_cycles.hpp"
#include "recomb/rational.hpp"
#include "recomb/reproduce.hpp"

namespace {

using recomb::BudgetExceededError;
using recomb::Rational;
using recomb::io::json;

uint64_t default_budget() {
  if (const char* env = std::getenv("RECOMB_WORK_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw std::invalid_argument("RECOMB_WORK_BUDGET must be a positive integer");
    return v;
  }
  return recomb::kDefaultWorkBudget;
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    recomb::io::save_text_file(out_path, text);
}

void emit_json(const json& j, const std::string& out_path) {
  emit_text(recomb::io::dump(j), out_path);
}

recomb::rep::WeightSpec load_weight_spec(const std::string& arg) {
  if (arg == "uniform") return recomb::rep::WeightSpec::uniform();
  if (arg == "shell") return recomb::rep::WeightSpec::shell();
  return recomb::io::weight_spec_from_json(recomb::io::load_json_file(arg));
}

Rational parse_eps(const std::string& text) {
  const Rational eps = recomb::parse_rational(text);
  if (eps <= 0 || eps >= 1)
    throw std::invalid_argument("eps must lie strictly between 0 and 1");
  return eps;
}

struct Timer {
  bool enabled = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~Timer() {
    if (!enabled) return;
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    // stderr only: stdout must stay byte-identical across runs
    std::cerr << "elapsed_ms=" << ms << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorics workbench: local recovery bounds, lattice "
               "representative sets, permutation cycle statistics"};
  app.require_subcommand(1);
  bool timings = false;
  app.add_flag("--timings", timings, "print wall-clock time to stderr");

  // ---- lrc -----------------------------------------------------------------
  CLI::App* lrc = app.add_subcommand("lrc", "locally recoverable code tools");
  lrc->require_subcommand(1);

  struct {
    uint32_t n = 0, k = 0, theta = 0, tau = 1, r = 1, q = 2;
    bool linear = true;
    std::string out;
  } bound_args;
  CLI::App* lrc_bound = lrc->add_subcommand("bound", "distance bound from recovery capability");
  lrc_bound->add_option("--n", bound_args.n, "code length")->required();
  lrc_bound->add_option("--k", bound_args.k, "code dimension (log_q of word count)")->required();
  lrc_bound->add_option("--theta", bound_args.theta, "number of recoverable positions")->required();
  lrc_bound->add_option("--tau", bound_args.tau, "recovered subset size")->required();
  lrc_bound->add_option("--r", bound_args.r, "max locality set size")->required();
  lrc_bound->add_option("--q", bound_args.q, "alphabet size")->capture_default_str();
  lrc_bound->add_flag("--linear,!--nonlinear", bound_args.linear,
                      "linear fiber bound q^w (default) vs general q^(q^w)");
  lrc_bound->add_option("--out", bound_args.out, "write the report to a file");

  struct {
    std::string code, loc, map_out, out;
    uint64_t budget = 0;
  } verify_args;
  CLI::App* lrc_verify = lrc->add_subcommand("verify", "check a recovery capability exhaustively");
  lrc_verify->add_option("--code", verify_args.code, "code JSON file")->required();
  lrc_verify->add_option("--loc", verify_args.loc, "locality JSON file")->required();
  lrc_verify->add_option("--map-out", verify_args.map_out,
                         "write the verified locality map to a file");
  lrc_verify->add_option("--budget", verify_args.budget, "work budget override");
  lrc_verify->add_option("--out", verify_args.out, "write the report to a file");

  struct {
    std::string code, loc, out;
    uint64_t budget = 0;
  } shorten_args;
  CLI::App* lrc_shorten =
      lrc->add_subcommand("shorten", "run the iterative shortening trace");
  lrc_shorten->add_option("--code", shorten_args.code, "code JSON file")->required();
  lrc_shorten->add_option("--loc", shorten_args.loc, "locality JSON file (map required)")
      ->required();
  lrc_shorten->add_option("--budget", shorten_args.budget, "work budget override");
  lrc_shorten->add_option("--out,--trace", shorten_args.out, "write the trace to a file");

  struct {
    uint32_t k = 10;
    std::string out, loc_out;
  } example_args;
  CLI::App* lrc_example = lrc->add_subcommand(
      "example", "generate the triple-parity worked example code");
  lrc_example->add_option("--k", example_args.k, "message bits (3..16)")->capture_default_str();
  lrc_example->add_option("--out", example_args.out, "write the code JSON to a file");
  lrc_example->add_option("--loc", example_args.loc_out, "write the locality JSON to a file");

  // ---- rep -----------------------------------------------------------------
  CLI::App* rp = app.add_subcommand("rep", "weighted-lattice representative sets");
  rp->require_subcommand(1);

  struct {
    std::string spec = "uniform", eps = "1/2", out;
    uint32_t m = 0, d = 0;
    bool oracle = false, witness = false;
  } min_args;
  CLI::App* rep_min = rp->add_subcommand("min", "minimum representative set size");
  rep_min->add_option("--spec,--weights", min_args.spec, "uniform | shell | weight spec JSON file")
      ->capture_default_str();
  rep_min->add_option("--m", min_args.m, "side length")->required();
  rep_min->add_option("--d", min_args.d, "dimension")->required();
  rep_min->add_option("--eps", min_args.eps, "threshold fraction p/q")->capture_default_str();
  rep_min->add_flag("--oracle", min_args.oracle,
                    "cross-check with the exhaustive oracle (m^d <= 20)");
  rep_min->add_flag("--witness", min_args.witness, "include the witness point set");
  rep_min->add_option("--out", min_args.out, "write the report to a file");

  struct {
    std::string spec = "uniform", eps = "1/2", out, csv_out;
    uint32_t d = 0, m_max = 0;
    std::vector<uint32_t> m_list;
    bool no_subadditivity = false;
    bool as_json = false;
  } sweep_args;
  CLI::App* rep_sweep = rp->add_subcommand("sweep", "b_m across sizes, as CSV");
  rep_sweep->add_option("--spec", sweep_args.spec, "uniform | shell | weight spec JSON file")
      ->capture_default_str();
  rep_sweep->add_option("--d", sweep_args.d, "dimension")->required();
  rep_sweep->add_option("--eps", sweep_args.eps, "threshold fraction p/q")->capture_default_str();
  rep_sweep->add_option("--m", sweep_args.m_list, "comma-separated sizes")->delimiter(',');
  rep_sweep->add_option("--m-max", sweep_args.m_max, "shorthand for --m 1,2,...,m-max");
  rep_sweep->add_flag("--no-subadditivity", sweep_args.no_subadditivity,
                      "skip monotonicity requirement and multiple-ratio checks");
  rep_sweep->add_flag("--json", sweep_args.as_json, "emit a JSON report instead of CSV");
  rep_sweep->add_option("--csv", sweep_args.csv_out, "write the CSV table to a file")
      ->excludes("--json");
  rep_sweep->add_option("--out", sweep_args.out, "write the output to a file");

  struct {
    std::string spec = "uniform", eps = "1/2", out, code_out;
    uint32_t m = 0, r = 0;
  } compose_args;
  CLI::App* rep_compose =
      rp->add_subcommand("compose", "four-block composition at the m = k*r + s split");
  rep_compose->add_option("--spec", compose_args.spec, "uniform | shell | weight spec JSON file")
      ->capture_default_str();
  rep_compose->add_option("--m", compose_args.m, "side length")->required();
  rep_compose->add_option("--r", compose_args.r, "block side length")->required();
  rep_compose->add_option("--eps", compose_args.eps, "threshold fraction p/q")
      ->capture_default_str();
  rep_compose->add_option("--code-out", compose_args.code_out,
                          "write the composed point set to a file");
  rep_compose->add_option("--out", compose_args.out, "write the report to a file");

  // ---- cyc -----------------------------------------------------------------
  CLI::App* cy = app.add_subcommand("cyc", "random permutation cycle statistics");
  cy->require_subcommand(1);

  struct {
    uint32_t n = 0, s = 1;
    bool csv = false, json = false;
    std::string out;
  } moments_args;
  CLI::App* cyc_moments = cy->add_subcommand("moments", "exact moment table of the cycle count");
  cyc_moments->add_option("--n", moments_args.n, "max permutation size")->required();
  cyc_moments->add_option("--s", moments_args.s, "max moment order")->capture_default_str();
  cyc_moments->add_flag("--csv", moments_args.csv, "emit CSV (n,s,value) instead of JSON");
  cyc_moments->add_flag("--json", moments_args.json, "emit the JSON report (the default)")
      ->excludes("--csv");
  cyc_moments->add_option("--out", moments_args.out, "write the output to a file");

  struct {
    uint32_t n = 0;
    bool as_json = false;
    std::string out;
  } mean_args, var_args;
  CLI::App* cyc_mean = cy->add_subcommand("mean", "exact mean cycle count (harmonic number)");
  cyc_mean->add_option("--n", mean_args.n, "permutation size")->required();
  cyc_mean->add_flag("--json", mean_args.as_json, "emit a JSON report instead of p/q text");
  cyc_mean->add_option("--out", mean_args.out, "write the output to a file");
  CLI::App* cyc_var = cy->add_subcommand("var", "exact variance of the cycle count");
  cyc_var->add_option("--n", var_args.n, "permutation size")->required();
  cyc_var->add_flag("--json", var_args.as_json, "emit a JSON report instead of p/q text");
  cyc_var->add_option("--out", var_args.out, "write the output to a file");

  struct {
    uint32_t n = 0;
    uint64_t trials = 0, seed = 42;
    bool json = false;
    std::string out;
  } sample_args;
  CLI::App* cyc_sample = cy->add_subcommand("sample", "deterministic Monte Carlo summary");
  cyc_sample->add_option("--n", sample_args.n, "permutation size")->required();
  cyc_sample->add_option("--trials", sample_args.trials, "number of samples")->required();
  cyc_sample->add_option("--seed", sample_args.seed, "RNG seed")->capture_default_str();
  cyc_sample->add_flag("--json", sample_args.json, "emit the JSON report (the default)");
  cyc_sample->add_option("--out", sample_args.out, "write the report to a file");

  // ---- reproduce -------------------------------------------------------------
  struct {
    std::string only, golden = "data/golden_example_k10.json", out;
    uint64_t seed = 42;
    bool as_json = false;
  } repro_args;
  CLI::App* repro = app.add_subcommand("reproduce", "run the full verification matrix");
  repro->add_option("--only", repro_args.only, "restrict to one group: thm1 | thm2 | thm3")
      ->check(CLI::IsMember({"thm1", "thm2", "thm3"}));
  repro->add_option("--golden", repro_args.golden, "golden value file for the worked example")
      ->capture_default_str();
  repro->add_option("--seed", repro_args.seed, "corpus seed")->capture_default_str();
  repro->add_flag("--json", repro_args.as_json, "emit a JSON report instead of the text matrix");
  repro->add_option("--out", repro_args.out, "write the output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Timer timer;
  timer.enabled = timings;

  try {
    const uint64_t budget = default_budget();

    if (lrc_bound->parsed()) {
      const auto& a = bound_args;
      recomb::lrc::BoundReport rep =
          recomb::lrc::compute_T(a.n, a.k, a.theta, a.tau, a.r, a.q, a.linear);
      json params{{"n", a.n},     {"k", a.k}, {"theta", a.theta}, {"tau", a.tau},
                  {"r", a.r},     {"q", a.q}, {"linear", a.linear}};
      emit_json(recomb::io::make_envelope("lrc bound", params,
                                          recomb::io::bound_report_to_json(rep)),
                a.out);
      return 0;
    }

    if (lrc_verify->parsed()) {
      const auto& a = verify_args;
      const uint64_t b = a.budget ? a.budget : budget;
      const recomb::codes::Code code =
          recomb::io::code_from_json(recomb::io::load_json_file(a.code), b);
      const recomb::lrc::LocalityStructure loc =
          recomb::io::loc_from_json(recomb::io::load_json_file(a.loc));
      recomb::lrc::CapabilityReport rep = recomb::lrc::verify_capability(code, loc, b);
      if (!a.map_out.empty() && rep.ok) {
        recomb::lrc::LocalityStructure found = loc;
        found.locality_map = rep.map;
        recomb::io::save_text_file(a.map_out, recomb::io::dump(recomb::io::loc_to_json(found)));
      }
      json params{{"code", a.code}, {"loc", a.loc}, {"budget", b}};
      emit_json(recomb::io::make_envelope("lrc verify", params,
                                          recomb::io::capability_to_json(rep), rep.warnings),
                a.out);
      return rep.ok ? 0 : 1;
    }

    if (lrc_shorten->parsed()) {
      const auto& a = shorten_args;
      const uint64_t b = a.budget ? a.budget : budget;
      const recomb::codes::Code code =
          recomb::io::code_from_json(recomb::io::load_json_file(a.code), b);
      const recomb::lrc::LocalityStructure loc =
          recomb::io::loc_from_json(recomb::io::load_json_file(a.loc));
      recomb::lrc::ShorteningTrace trace = recomb::lrc::shorten(code, loc, b);
      json params{{"code", a.code}, {"loc", a.loc}, {"budget", b}};
      emit_json(recomb::io::make_envelope("lrc shorten", params,
                                          recomb::io::trace_to_json(trace, code)),
                a.out);
      return 0;
    }

    if (lrc_example->parsed()) {
      const auto& a = example_args;
      recomb::lrc::ExampleCode ex = recomb::lrc::build_example_code(a.k);
      for (const std::string& w : ex.warnings) std::cerr << "warning: " << w << "\n";
      if (!a.loc_out.empty())
        recomb::io::save_text_file(a.loc_out, recomb::io::dump(recomb::io::loc_to_json(ex.loc)));
      emit_json(recomb::io::code_to_json(ex.code), a.out);
      return 0;
    }

    if (rep_min->parsed()) {
      const auto& a = min_args;
      const recomb::rep::WeightSpec spec = load_weight_spec(a.spec);
      const Rational eps = parse_eps(a.eps);
      const recomb::rep::WeightedLattice lat =
          recomb::rep::WeightedLattice::from_spec(spec, a.m, a.d);
      const recomb::rep::MinRepResult r = recomb::rep::min_rep_size(lat, eps);
      json result;
      result["m"] = a.m;
      result["d"] = a.d;
      result["points"] = lat.point_count();
      result["eps"] = recomb::format_rational(eps);
      result["beta"] = recomb::format_rational(lat.beta());
      result["b"] = r.size;
      result["ratio"] = recomb::format_rational(Rational(r.size) / Rational(lat.point_count()));
      result["lower_bound"] =
          recomb::format_rational(Rational(lat.point_count()) * (Rational(1) - eps));
      result["upper_bound"] = recomb::format_rational(
          Rational(lat.point_count()) * (Rational(1) - eps / lat.beta()) + 1);
      if (a.witness) result["witness"] = recomb::io::rep_code_to_json(r.witness);
      if (a.oracle) {
        const uint64_t brute = recomb::rep::brute_force_min_rep(lat, eps);
        result["oracle"] = json{{"b", brute}, {"agrees", brute == r.size}};
      }
      json params{{"spec", a.spec}, {"m", a.m}, {"d", a.d}, {"eps", a.eps}};
      emit_json(recomb::io::make_envelope("rep min", params, result), a.out);
      return 0;
    }

    if (rep_sweep->parsed()) {
      auto& a = sweep_args;
      if (a.m_list.empty()) {
        if (a.m_max == 0)
          throw std::invalid_argument("rep sweep needs --m or --m-max");
        for (uint32_t m = 1; m <= a.m_max; ++m) a.m_list.push_back(m);
      }
      const recomb::rep::WeightSpec spec = load_weight_spec(a.spec);
      const Rational eps = parse_eps(a.eps);
      const recomb::rep::SweepResult sw =
          recomb::rep::subadditive_sweep(spec, eps, a.d, a.m_list, !a.no_subadditivity);
      if (a.as_json) {
        json params{{"spec", a.spec}, {"d", a.d}, {"eps", a.eps}};
        emit_json(recomb::io::make_envelope("rep sweep", params, recomb::io::sweep_to_json(sw)),
                  a.out);
      } else {
        emit_text(recomb::io::sweep_to_csv(sw), a.csv_out.empty() ? a.out : a.csv_out);
      }
      return 0;
    }

    if (rep_compose->parsed()) {
      const auto& a = compose_args;
      const recomb::rep::WeightSpec spec = load_weight_spec(a.spec);
      const Rational eps = parse_eps(a.eps);
      const recomb::rep::WeightedLattice lat =
          recomb::rep::WeightedLattice::from_spec(spec, a.m, 2);
      if (a.r == 0 || a.r > a.m) throw std::invalid_argument("compose needs 1 <= r <= m");
      const uint32_t k = a.m / a.r;
      const uint32_t kr = k * a.r;
      const uint32_t s = a.m - kr;
      const recomb::rep::MinRepResult c1 = recomb::rep::block_min_code(lat, {0, 0, kr, kr}, eps);
      const recomb::rep::MinRepResult c2 = recomb::rep::block_min_code(lat, {0, kr, kr, s}, eps);
      const recomb::rep::MinRepResult c3 = recomb::rep::block_min_code(lat, {kr, 0, s, kr}, eps);
      const recomb::rep::MinRepResult c4 = recomb::rep::block_min_code(lat, {kr, kr, s, s}, eps);
      const recomb::rep::RepCode comp =
          recomb::rep::compose(a.m, a.r, c1.witness, c2.witness, c3.witness, c4.witness);
      const uint64_t b_m = recomb::rep::min_rep_size(lat, eps).size;
      const uint64_t b_r =
          recomb::rep::min_rep_size(recomb::rep::WeightedLattice::from_spec(spec, a.r, 2), eps)
              .size;
      json result;
      result["m"] = a.m;
      result["r"] = a.r;
      result["k"] = k;
      result["s"] = s;
      result["eps"] = recomb::format_rational(eps);
      result["block_sizes"] = json::array({c1.size, c2.size, c3.size, c4.size});
      result["composed_size"] = comp.points.size();
      result["is_representative"] = recomb::rep::is_representative(lat, comp);
      result["b_m"] = b_m;
      result["b_r"] = b_r;
      result["block_sum_bound"] = c1.size + 2ull * k * a.r * s + uint64_t(s) * s;
      result["coarse_bound"] = uint64_t(k) * k * b_r + (2ull * k + 1) * a.r * a.r;
      if (!a.code_out.empty())
        recomb::io::save_text_file(a.code_out, recomb::io::dump(recomb::io::rep_code_to_json(comp)));
      json params{{"spec", a.spec}, {"m", a.m}, {"r", a.r}, {"eps", a.eps}};
      emit_json(recomb::io::make_envelope("rep compose", params, result), a.out);
      return 0;
    }

    if (cyc_moments->parsed()) {
      const auto& a = moments_args;
      const recomb::cyc::MomentTable table = recomb::cyc::moment_table(a.n, a.s);
      if (a.csv) {
        emit_text(recomb::io::moments_to_csv(table), a.out);
      } else {
        json params{{"n", a.n}, {"s", a.s}};
        emit_json(recomb::io::make_envelope("cyc moments", params,
                                            recomb::io::moments_to_json(table)),
                  a.out);
      }
      return 0;
    }

    if (cyc_mean->parsed() || cyc_var->parsed()) {
      const auto& a = cyc_mean->parsed() ? mean_args : var_args;
      const bool is_mean = cyc_mean->parsed();
      const Rational value =
          is_mean ? recomb::cyc::mean_cycles(a.n) : recomb::cyc::variance_cycles(a.n);
      if (a.as_json) {
        json params{{"n", a.n}};
        json result{{"n", a.n}, {"value", recomb::format_rational(value)}};
        emit_json(recomb::io::make_envelope(is_mean ? "cyc mean" : "cyc var", params, result),
                  a.out);
      } else {
        emit_text(recomb::format_rational(value) + "\n", a.out);
      }
      return 0;
    }

    if (cyc_sample->parsed()) {
      const auto& a = sample_args;
      const recomb::cyc::SampleSummary s =
          recomb::cyc::sample_cycles(a.n, a.trials, a.seed);
      json params{{"n", a.n}, {"trials", a.trials}, {"seed", a.seed}};
      emit_json(recomb::io::make_envelope("cyc sample", params,
                                          recomb::io::sample_summary_to_json(s)),
                a.out);
      return 0;
    }

    if (repro->parsed()) {
      const auto& a = repro_args;
      recomb::accept::Options opt;
      opt.seed = a.seed;
      opt.golden_path = a.golden;
      if (std::getenv("RECOMB_WORK_BUDGET")) opt.work_budget = budget;
      const std::vector<recomb::accept::CheckResult> results =
          recomb::accept::run(opt, a.only);
      if (a.as_json) {
        json params{{"only", a.only.empty() ? json(nullptr) : json(a.only)},
                    {"seed", a.seed},
                    {"golden", a.golden}};
        emit_json(recomb::io::make_envelope("reproduce", params,
                                            recomb::accept::results_to_json(results)),
                  a.out);
      } else {
        emit_text(recomb::accept::render_matrix(results), a.out);
      }
      for (const auto& r : results) {
        if (!r.pass) {
          std::cerr << "failed: " << r.id << " (" << r.detail << ")\n";
          return 1;
        }
      }
      return 0;
    }

    throw std::invalid_argument("no subcommand handled");  // unreachable
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
