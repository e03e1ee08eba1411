#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "recomb/code_core.hpp"
#include "recomb/lattice_rep.hpp"
#include "recomb/lrc_partial.hpp"
#include "recomb/perm_cycles.hpp"

namespace recomb::io {

// ordered_json keeps insertion order, which is what makes re-runs of the
// same command byte-identical.
using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolName = "recomb";
inline constexpr const char* kToolVersion = "0.1.0";

inline void require_format(const json& j, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
  if (!j.contains("format") || !j.at("format").is_number_integer() ||
      j.at("format").get<int>() != kFormatVersion) {
    throw std::invalid_argument(std::string(what) + ": missing or unsupported \"format\" (want " +
                                std::to_string(kFormatVersion) + ")");
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("cannot parse JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
  if (!out) throw std::invalid_argument("write failed: " + path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- codes ----------------------------------------------------------------

inline json code_to_json(const codes::Code& code) {
  json j;
  j["format"] = kFormatVersion;
  j["q"] = code.q();
  j["alphabet"] = code.alphabet().symbols();
  j["n"] = code.n();
  if (auto k = code.k_exact())
    j["k"] = *k;
  else
    j["k"] = code.k();
  if (code.linear().has_value())
    j["linear"] = *code.linear();
  else
    j["linear"] = nullptr;
  json words = json::array();
  for (const codes::Word& w : code.words()) {
    json row = json::array();
    for (uint8_t s : w) row.push_back(code.alphabet().symbol(s));
    words.push_back(std::move(row));
  }
  j["words"] = std::move(words);
  return j;
}

inline codes::Code code_from_json(const json& j,
                                  uint64_t work_budget = kDefaultWorkBudget) {
  require_format(j, "code file");
  for (const char* field : {"q", "alphabet", "n", "words"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("code file: missing \"") + field + "\"");

  std::vector<std::string> symbols = j.at("alphabet").get<std::vector<std::string>>();
  codes::Alphabet alphabet(symbols);
  if (j.at("q").get<uint64_t>() != alphabet.q())
    throw std::invalid_argument("code file: q does not match the alphabet size");
  const uint32_t n = j.at("n").get<uint32_t>();

  std::vector<codes::Word> words;
  for (const json& row : j.at("words")) {
    codes::Word w;
    w.reserve(row.size());
    for (const json& tok : row) {
      auto idx = alphabet.index_of(tok.get<std::string>());
      if (!idx)
        throw std::invalid_argument("code file: word symbol '" + tok.get<std::string>() +
                                    "' is not in the alphabet");
      w.push_back(uint8_t(*idx));
    }
    words.push_back(std::move(w));
  }

  std::optional<bool> linear;
  if (j.contains("linear") && !j.at("linear").is_null()) linear = j.at("linear").get<bool>();

  std::optional<uint32_t> declared_k;
  if (j.contains("k") && !j.at("k").is_null()) {
    if (j.at("k").is_number_integer()) {
      declared_k = j.at("k").get<uint32_t>();
    } else {
      const double kf = j.at("k").get<double>();
      const double actual = std::log(double(words.size())) / std::log(double(alphabet.q()));
      if (std::abs(kf - actual) > 1e-6)
        throw std::invalid_argument("code file: fractional k does not match log_q(#words)");
    }
  }

  codes::Code code(std::move(alphabet), n, std::move(words), linear, declared_k);
  if (linear.has_value() && *linear && !codes::verify_linear(code, work_budget))
    throw std::invalid_argument("code file: declared linear but the word set is not closed "
                                "under coordinatewise addition mod q");
  return code;
}

// --- locality structures ----------------------------------------------------

inline json position_set_to_json(const codes::PositionSet& s) {
  return json(s.to_one_based());
}

inline codes::PositionSet position_set_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  return codes::PositionSet::from_one_based(j.get<std::vector<uint64_t>>());
}

inline json loc_to_json(const lrc::LocalityStructure& loc) {
  json j;
  j["format"] = kFormatVersion;
  j["theta"] = position_set_to_json(loc.theta);
  j["tau"] = loc.tau;
  j["r"] = loc.r;
  json map = json::array();
  for (const auto& [p, t] : loc.locality_map) {
    json entry;
    entry["p"] = position_set_to_json(p);
    entry["t"] = position_set_to_json(t);
    map.push_back(std::move(entry));
  }
  j["map"] = std::move(map);
  return j;
}

inline lrc::LocalityStructure loc_from_json(const json& j) {
  require_format(j, "locality file");
  for (const char* field : {"theta", "tau", "r"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("locality file: missing \"") + field + "\"");
  lrc::LocalityStructure loc;
  loc.theta = position_set_from_json(j.at("theta"), "locality file theta");
  loc.tau = j.at("tau").get<uint32_t>();
  loc.r = j.at("r").get<uint32_t>();
  if (j.contains("map") && !j.at("map").is_null()) {
    for (const json& entry : j.at("map")) {
      codes::PositionSet p = position_set_from_json(entry.at("p"), "locality map p");
      codes::PositionSet t = position_set_from_json(entry.at("t"), "locality map t");
      loc.locality_map[p] = t;
    }
  }
  return loc;
}

inline json capability_to_json(const lrc::CapabilityReport& rep) {
  json j;
  j["format"] = kFormatVersion;
  j["ok"] = rep.ok;
  if (rep.counterexample)
    j["counterexample"] = position_set_to_json(*rep.counterexample);
  else
    j["counterexample"] = nullptr;
  j["map_size"] = rep.map.size();
  j["warnings"] = rep.warnings;
  return j;
}

// --- bound reports ----------------------------------------------------------

inline json bound_report_to_json(const lrc::BoundReport& rep) {
  json j;
  j["format"] = kFormatVersion;
  j["n"] = rep.n;
  j["k"] = rep.k;
  j["theta_size"] = rep.theta_size;
  j["tau"] = rep.tau;
  j["r"] = rep.r;
  j["q"] = rep.q;
  j["linear"] = rep.linear;
  j["T"] = rep.T;
  j["bound"] = rep.bound;
  j["singleton"] = rep.singleton;
  json conds = json::array();
  for (const auto& c : rep.conditions) {
    json row;
    row["t"] = c.t;
    row["lhs1"] = c.lhs1;
    row["rhs1"] = c.rhs1;
    row["cond1"] = c.cond1;
    row["delta"] = c.delta.str();
    row["lhs2_base"] = c.lhs2_base;
    row["rhs2"] = c.rhs2;
    row["cond2"] = c.cond2;
    conds.push_back(std::move(row));
  }
  j["conditions"] = std::move(conds);
  return j;
}

// --- shortening traces --------------------------------------------------------

inline json trace_to_json(const lrc::ShorteningTrace& trace, const codes::Code& code) {
  json j;
  j["format"] = kFormatVersion;
  j["initial_size"] = trace.initial_size;
  j["singleton_bound"] = trace.singleton_bound;
  json its = json::array();
  for (const auto& it : trace.iterations) {
    json row;
    row["p"] = position_set_to_json(it.p);
    row["fresh"] = position_set_to_json(it.fresh);
    row["m"] = it.m;
    json proj = json::array();
    for (uint8_t s : it.projection) proj.push_back(code.alphabet().symbol(s));
    row["projection"] = std::move(proj);
    row["subcode_size"] = it.subcode_size;
    row["reach"] = position_set_to_json(it.reach_set);
    if (it.certified_bound)
      row["certified_bound"] = *it.certified_bound;
    else
      row["certified_bound"] = nullptr;
    its.push_back(std::move(row));
  }
  j["iterations"] = std::move(its);
  j["q_positions"] = position_set_to_json(trace.q_positions);
  j["reduced_length"] = trace.reduced_length;
  j["reduced_size"] = trace.reduced_code.size();
  j["certified_bound"] = trace.certified_bound;
  j["stop_reason"] = trace.stop_reason;
  j["progress_guarantee"] = trace.progress_guarantee;
  return j;
}

// --- weighted lattices ---------------------------------------------------------

inline json weight_spec_to_json(const rep::WeightSpec& spec) {
  json j;
  j["format"] = kFormatVersion;
  switch (spec.kind) {
    case rep::WeightSpec::Kind::Uniform:
      j["kind"] = "uniform";
      break;
    case rep::WeightSpec::Kind::Shell:
      j["kind"] = "shell";
      break;
    case rep::WeightSpec::Kind::Explicit: {
      j["kind"] = "explicit";
      j["m"] = spec.m;
      j["d"] = spec.d;
      j["beta"] = format_rational(spec.beta);
      json w = json::array();
      for (const Rational& x : spec.weights) w.push_back(format_rational(x));
      j["weights"] = std::move(w);
      break;
    }
  }
  return j;
}

inline rep::WeightSpec weight_spec_from_json(const json& j) {
  require_format(j, "weight spec");
  if (!j.contains("kind")) throw std::invalid_argument("weight spec: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return rep::WeightSpec::uniform();
  if (kind == "shell") return rep::WeightSpec::shell();
  if (kind != "explicit")
    throw std::invalid_argument("weight spec: unknown kind '" + kind + "'");
  for (const char* field : {"m", "d", "beta", "weights"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("weight spec: missing \"") + field + "\"");
  std::vector<Rational> w;
  for (const json& x : j.at("weights")) w.push_back(parse_rational(x.get<std::string>()));
  return rep::WeightSpec::explicit_grid(j.at("m").get<uint32_t>(), j.at("d").get<uint32_t>(),
                                        std::move(w), parse_rational(j.at("beta").get<std::string>()));
}

inline json point_to_json(const rep::Point& p) { return json(p); }

inline json rep_code_to_json(const rep::RepCode& code) {
  json j;
  j["format"] = kFormatVersion;
  j["eps"] = format_rational(code.epsilon);
  json pts = json::array();
  for (const rep::Point& p : code.points) pts.push_back(point_to_json(p));
  j["points"] = std::move(pts);
  return j;
}

inline rep::RepCode rep_code_from_json(const json& j) {
  require_format(j, "representative code");
  rep::RepCode code;
  code.epsilon = parse_rational(j.at("eps").get<std::string>());
  for (const json& p : j.at("points")) code.points.push_back(p.get<rep::Point>());
  return code;
}

// --- sweep results ---------------------------------------------------------------

// CSV columns are part of the tool contract: m, b_m, ratio as an exact
// fraction, and the two per-row bound verdicts.
inline std::string sweep_to_csv(const rep::SweepResult& sweep) {
  std::ostringstream out;
  out << "m,b_m,ratio_num,ratio_den,lower_ok,upper_ok\n";
  for (const auto& row : sweep.rows) {
    out << row.m << "," << row.b << "," << numerator(row.ratio).str() << ","
        << denominator(row.ratio).str() << "," << (row.lower_ok ? "true" : "false") << ","
        << (row.upper_ok ? "true" : "false") << "\n";
  }
  return out.str();
}

inline json sweep_to_json(const rep::SweepResult& sweep) {
  json j;
  j["format"] = kFormatVersion;
  j["d"] = sweep.d;
  j["eps"] = format_rational(sweep.eps);
  j["beta"] = format_rational(sweep.beta);
  j["monotone"] = sweep.monotone;
  json rows = json::array();
  for (const auto& row : sweep.rows) {
    json r;
    r["m"] = row.m;
    r["b"] = row.b;
    r["ratio"] = format_rational(row.ratio);
    r["lower_ok"] = row.lower_ok;
    r["upper_ok"] = row.upper_ok;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  json checks = json::array();
  for (const auto& chk : sweep.multiple_checks) {
    json c;
    c["m_small"] = chk.m_small;
    c["m_large"] = chk.m_large;
    c["ok"] = chk.ok;
    checks.push_back(std::move(c));
  }
  j["multiple_checks"] = std::move(checks);
  return j;
}

// --- cycle statistics ---------------------------------------------------------------

inline std::string moments_to_csv(const cyc::MomentTable& table) {
  std::ostringstream out;
  out << "n,s,value\n";
  for (uint32_t n = 1; n <= table.n_max; ++n)
    for (uint32_t s = 1; s <= table.s_max; ++s)
      out << n << "," << s << "," << format_rational(table.at(n, s)) << "\n";
  return out.str();
}

inline json moments_to_json(const cyc::MomentTable& table) {
  json j;
  j["format"] = kFormatVersion;
  j["n_max"] = table.n_max;
  j["s_max"] = table.s_max;
  json rows = json::array();
  for (uint32_t n = 1; n <= table.n_max; ++n) {
    for (uint32_t s = 1; s <= table.s_max; ++s) {
      json r;
      r["n"] = n;
      r["s"] = s;
      r["value"] = format_rational(table.at(n, s));
      rows.push_back(std::move(r));
    }
  }
  j["moments"] = std::move(rows);
  return j;
}

inline json sample_summary_to_json(const cyc::SampleSummary& s) {
  json j;
  j["format"] = kFormatVersion;
  j["n"] = s.n;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["cycle_count_sum"] = s.cycle_count_sum;
  j["cycle_count_sq_sum"] = s.cycle_count_sq_sum;
  j["empirical_mean"] = format_rational(s.empirical_mean());
  j["empirical_variance"] = format_rational(s.empirical_variance());
  j["exact_mean"] = format_rational(cyc::mean_cycles(s.n));
  j["exact_variance"] = format_rational(cyc::variance_cycles(s.n));
  j["first_cycle_counts"] = s.first_cycle_counts;
  return j;
}

// --- report envelope ----------------------------------------------------------------

// Common wrapper for every CLI result. Timings deliberately stay out of the
// body: identical inputs must produce identical bytes.
inline json make_envelope(const std::string& command, json params, json result,
                          std::vector<std::string> warnings = {},
                          bool budget_exhausted = false) {
  json j;
  j["format"] = kFormatVersion;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["params"] = std::move(params);
  j["result"] = std::move(result);
  j["warnings"] = std::move(warnings);
  j["budget_exhausted"] = budget_exhausted;
  return j;
}

}  // namespace recomb::io
