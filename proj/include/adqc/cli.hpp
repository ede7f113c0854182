// Copyright 2026 The ADQC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command line front end. Every subcommand prints one JSON document.
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad arguments.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "adqc/blind.hpp"
#include "adqc/conditions.hpp"
#include "adqc/patterns.hpp"

namespace adqc {
namespace cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string subcommand;
  std::optional<uint64_t> seed;
  int grid_n = 8;
  double tolerance = 1e-9;
  std::string circuit_path;
  std::string variant = "single";
  std::string out_path;
  std::string view = "server";
  int count = 20;
  int points = 10000;

  uint64_t seed_or_default() const { return seed.value_or(0); }

  json to_json() const {
    json j{{"subcommand", subcommand}, {"grid_n", grid_n},   {"tolerance", tolerance}, {"variant", variant},
           {"count", count},           {"points", points},   {"view", view}};
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["circuit"] = circuit_path.empty() ? json(nullptr) : json(circuit_path);
    return j;
  }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// ADQC_THREADS caps the worker count; unset means hardware concurrency.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ADQC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

// Runs fn(i) for i in [0, n); results are written by index so output order is fixed.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline json report_header(const RunConfig& cfg) {
  return {{"schema", {{"name", "adqc." + cfg.subcommand}, {"version", kSchemaVersion}}}, {"config", cfg.to_json()}};
}

struct TableSample {
  CaseId expected;
  ParamPoint point;
};

inline std::vector<TableSample> table_samples() {
  auto pt = [](double g, double d, double t, double f) {
    return ParamPoint{kPi / 4, AncillaSpec(g, d), MeasBasis(t, f)};
  };
  return {{CaseId::T1_IDENTITY, pt(0, 0, 0, 0)},
          {CaseId::T1_XROT, pt(0, 0.5, 1.2, 0)},
          {CaseId::T1_X_A, pt(kPi / 2, 0, 0, 0)},
          {CaseId::T1_X_B, pt(0.9, 2.2, kPi / 2, 0)},
          {CaseId::T2_GENERAL_DELTA0, pt(1.0, 0, 2.0, 0)},
          {CaseId::T2_MATCHED, pt(0.7, 1.9, 0.7, 1.9)}};
}

inline json verify_tables(const RunConfig& cfg, bool& pass) {
  json rep = report_header(cfg);
  json cases = json::array();
  pass = true;
  for (const auto& s : table_samples()) {
    json c{{"expected", case_name(s.expected)}};
    try {
      const TableCase tc = classify_parameters(s.point, cfg.tolerance);
      const KrausPair k = kraus_pair(presets::cz_canon(), s.point.ancilla, s.point.basis);
      const auto rows = table_row_kraus(s.expected, s.point);
      bool confirmed = true;
      for (int b = 0; b < 2; ++b)
        if (k.branch(b).frobenius_norm() > 1e-12) confirmed = confirmed && detail::same_ray(k.branch(b), rows[b], 1e-10);
      c["classified"] = case_name(tc.case_id);
      c["kraus"] = tc.kraus_description;
      c["kraus_confirmed"] = confirmed;
      c["status"] = tc.case_id == s.expected && confirmed ? "pass" : "fail";
    } catch (const ClassificationError& e) {
      c["classified"] = "ERROR";
      c["error"] = e.what();
      c["status"] = "fail";
    }
    pass = pass && c["status"] == "pass";
    cases.push_back(c);
  }
  std::mt19937_64 rng(cfg.seed_or_default());
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  int false_positives = 0;
  const int negatives = 1000;
  for (int i = 0; i < negatives; ++i) {
    const ParamPoint p{kPi / 4, AncillaSpec(u(rng), u(rng)), MeasBasis(u(rng), u(rng))};
    try {
      if (classify_parameters(p, cfg.tolerance).case_id != CaseId::NONE) ++false_positives;
    } catch (const ClassificationError&) {
      ++false_positives;
    }
  }
  pass = pass && false_positives == 0;
  rep["cases"] = cases;
  rep["random_negatives"] = {{"points", negatives}, {"false_positives", false_positives}};
  rep["pass"] = pass;
  return rep;
}

inline json sweep(const RunConfig& cfg, bool& pass) {
  json rep = report_header(cfg);
  const SweepReport r = relation_sweep(cfg.points, cfg.seed_or_default(), cfg.tolerance);
  const bool unitary_ok = r.unitary_agree == r.points;
  const bool hiding_ok = r.hiding_agree == r.points;
  rep["counts"] = {{"points", r.points},
                   {"skipped_degenerate", r.skipped_degenerate},
                   {"skipped_outside_chamber", r.skipped_outside_chamber},
                   {"relation_matched", r.matched},
                   {"unitary_branches", r.unitary},
                   {"hiding_pair_branches", r.hiding}};
  rep["checks"] = {{"unitary_iff_relation",
                    {{"agreement", static_cast<double>(r.unitary_agree) / r.points}, {"pass", unitary_ok}}},
                   {"hiding_pair_iff_relation",
                    {{"agreement", static_cast<double>(r.hiding_agree) / r.points}, {"pass", hiding_ok}}}};
  pass = unitary_ok && hiding_ok;
  rep["pass"] = pass;
  return rep;
}

inline CircuitDescription random_circuit(std::mt19937_64& rng, int max_qubits, int max_gates, int grid_n = 0) {
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  auto angle = [&] { return grid_n > 0 ? grid_angle(static_cast<int>(rng() % grid_n), grid_n) : u(rng); };
  CircuitDescription c;
  c.num_qubits = 1 + static_cast<int>(rng() % max_qubits);
  const int gates = static_cast<int>(rng() % (max_gates + 1));
  for (int i = 0; i < gates; ++i) {
    const int k = static_cast<int>(rng() % (c.num_qubits == 2 ? 4 : 3));
    const std::size_t q = rng() % c.num_qubits;
    if (k == 0) c.gates.push_back({"H", std::nullopt, {q}});
    if (k == 1) c.gates.push_back({"Rx", angle(), {q}});
    if (k == 2) c.gates.push_back({"Rz", angle(), {q}});
    if (k == 3) c.gates.push_back({"CZ", std::nullopt, {0, 1}});
  }
  return c;
}

inline json pattern_entry(const std::string& name, const GatePattern& p, double tol) {
  const VerifyReport v = verify_pattern(p, tol);
  return {{"name", name},
          {"steps", p.step_count()},
          {"valid", v.valid},
          {"worst_branch_error", v.worst_branch_error},
          {"branches", v.branches}};
}

inline json verify_patterns(const RunConfig& cfg, bool& pass) {
  json rep = report_header(cfg);
  json standard = json::array();
  const Variant one = Variant::SingleEntangler, two = Variant::TwoEntanglers;
  for (double t : {0.0, kPi / 4, 0.7, 2.5}) {
    std::ostringstream n;
    n << "J(" << t << ")";
    standard.push_back(pattern_entry(n.str(), standard_pattern(PatternKind::J, t, one), cfg.tolerance));
  }
  standard.push_back(pattern_entry("ASSIST", standard_pattern(PatternKind::ASSIST, 0, one), cfg.tolerance));
  standard.push_back(pattern_entry("CZ/single", standard_pattern(PatternKind::CZ, 0, one), cfg.tolerance));
  standard.push_back(pattern_entry("CZ/two", standard_pattern(PatternKind::CZ, 0, two), cfg.tolerance));
  standard.push_back(pattern_entry("RX(1.1)", standard_pattern(PatternKind::RX, 1.1, two), cfg.tolerance));
  standard.push_back(pattern_entry("RZ(2)", standard_pattern(PatternKind::RZ, 2.0, two), cfg.tolerance));
  pass = true;
  for (const auto& e : standard) pass = pass && e["valid"].get<bool>();

  std::mt19937_64 rng(cfg.seed_or_default());
  std::vector<CircuitDescription> circuits;
  for (int i = 0; i < cfg.count; ++i) circuits.push_back(random_circuit(rng, 2, 4));
  const Variant v = parse_variant(cfg.variant);
  auto results = parallel_map<json>(circuits.size(), [&](std::size_t i) {
    const GatePattern p = compile_circuit(circuits[i], v);
    json e = pattern_entry("circuit_" + std::to_string(i), p, cfg.tolerance);
    e["circuit"] = circuits[i].to_json();
    return e;
  });
  json compiled = json::array();
  for (auto& e : results) {
    pass = pass && e["valid"].get<bool>();
    compiled.push_back(std::move(e));
  }
  rep["standard"] = standard;
  rep["compiled"] = compiled;
  rep["pass"] = pass;
  return rep;
}

inline CircuitDescription load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open circuit file " + path);
  json j;
  try {
    j = json::parse(in);
    return CircuitDescription::from_json(j);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad circuit file: ") + e.what());
  } catch (const Error& e) {
    throw UsageError(std::string("bad circuit file: ") + e.what());
  }
}

inline json delegate(const RunConfig& cfg, bool& pass) {
  if (cfg.circuit_path.empty()) throw UsageError("delegate needs --circuit");
  if (!cfg.seed) throw UsageError("delegate needs --seed");
  json rep = report_header(cfg);
  ClientSecret s;
  s.circuit = load_circuit(cfg.circuit_path);
  s.variant = parse_variant(cfg.variant);
  s.grid_n = cfg.grid_n;
  s.seed = *cfg.seed;
  const DelegationResult r = run_delegation(s, *cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  double worst = 1;
  double total = 0;
  const auto branches = enumerate_delegation(s);
  for (const auto& b : branches) {
    worst = std::min(worst, b.fidelity);
    total += b.probability;
  }
  pass = r.fidelity >= 1 - cfg.tolerance && worst >= 1 - cfg.tolerance;
  rep["fidelity"] = r.fidelity;
  rep["enumerated"] = {{"branches", branches.size()}, {"min_fidelity", worst}, {"total_probability", total}};
  rep["messages"] = r.transcript.messages.size();
  json lines = json::array();
  std::istringstream in(r.transcript.to_jsonl(cfg.view == "server"));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(json::parse(line));
  rep["transcript"] = {{"view", cfg.view}, {"lines", lines}};
  rep["pass"] = pass;
  return rep;
}

inline json audit(const RunConfig& cfg, bool& pass) {
  json rep = report_header(cfg);
  std::vector<std::pair<std::string, ClientSecret>> targets;
  auto slot = [&](PatternKind kind, Variant v) {
    ClientSecret s;
    s.variant = v;
    s.grid_n = cfg.grid_n;
    s.pattern = standard_pattern(kind, 0, v);
    return s;
  };
  if (!cfg.circuit_path.empty()) {
    ClientSecret s;
    s.circuit = load_circuit(cfg.circuit_path);
    s.variant = parse_variant(cfg.variant);
    s.grid_n = cfg.grid_n;
    targets.emplace_back("circuit", s);
  } else {
    targets.emplace_back("J", slot(PatternKind::J, Variant::SingleEntangler));
    if (cfg.grid_n % 4 == 0) {
      targets.emplace_back("RX", slot(PatternKind::RX, Variant::TwoEntanglers));
      targets.emplace_back("RZ", slot(PatternKind::RZ, Variant::TwoEntanglers));
    }
  }
  json slots = json::object();
  double td = 0, tvd = 0, joint = 0, state = 0;
  pass = true;
  for (const auto& [name, s] : targets) {
    const AuditReport a = audit_blindness(s, cfg.grid_n);
    slots[name] = a.to_json();
    td = std::max(td, a.ancilla_trace_distance);
    tvd = std::max(tvd, a.angle_tvd);
    joint = std::max(joint, a.joint_tvd);
    state = std::max(state, a.step2_state_error);
    pass = pass && a.passed();
  }
  // Values below the check thresholds are reported as exact zeros.
  auto clean = [](double v, double thr) { return v <= thr ? 0.0 : v; };
  rep["ancilla_trace_distance"] = clean(td, 1e-12);
  rep["angle_tvd"] = clean(tvd, 1e-12);
  rep["joint_tvd"] = clean(joint, 1e-12);
  rep["step2_state_error"] = clean(state, 1e-10);
  rep["slots"] = slots;
  rep["pass"] = pass;
  return rep;
}

inline void emit_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

// args excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"adaptive blind delegation checks", "adqc"};
  app.require_subcommand(1);
  uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--grid", cfg.grid_n, "angle grid size");
    sub->add_option("--tol", cfg.tolerance, "tolerance");
    sub->add_option("--circuit", cfg.circuit_path, "circuit JSON file");
    sub->add_option("--variant", cfg.variant, "single or two")->check(CLI::IsMember({"single", "two"}));
    sub->add_option("--out", cfg.out_path, "write the report here");
  };
  auto* t = app.add_subcommand("verify-tables", "classify the parameter tables");
  auto* sw = app.add_subcommand("sweep", "unitarity and relation sweep");
  sw->add_option("--points", cfg.points, "sweep points");
  auto* vp = app.add_subcommand("verify-patterns", "standard and compiled patterns");
  vp->add_option("--count", cfg.count, "random circuits");
  auto* dg = app.add_subcommand("delegate", "run the blind protocol on a circuit");
  dg->add_option("--view", cfg.view, "transcript view")->check(CLI::IsMember({"server", "full"}));
  auto* au = app.add_subcommand("audit", "blindness audit");
  for (auto* sub : {t, sw, vp, dg, au}) add_common(sub);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (app.get_subcommands().front()->count("--seed")) cfg.seed = seed;
  if (!(cfg.tolerance > 0 && cfg.tolerance <= 1e-3)) {
    emit_error(err, "usage", "--tol must lie in (0, 1e-3]");
    return 2;
  }
  if (cfg.grid_n < 4 || cfg.grid_n % 2) {
    emit_error(err, "usage", "--grid must be even and at least 4");
    return 2;
  }
  if (cfg.count < 0 || cfg.points < 1) {
    emit_error(err, "usage", "--count and --points must be positive");
    return 2;
  }

  bool pass = false;
  json rep;
  try {
    if (cfg.subcommand == "verify-tables") rep = verify_tables(cfg, pass);
    if (cfg.subcommand == "sweep") rep = sweep(cfg, pass);
    if (cfg.subcommand == "verify-patterns") rep = verify_patterns(cfg, pass);
    if (cfg.subcommand == "delegate") rep = delegate(cfg, pass);
    if (cfg.subcommand == "audit") rep = audit(cfg, pass);
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.what());
    return 2;
  } catch (const Error& e) {
    emit_error(err, "runtime", e.what());
    return 1;
  }
  const std::string text = rep.dump(2) + "\n";
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path);
    if (!f) {
      emit_error(err, "usage", "cannot write " + cfg.out_path);
      return 2;
    }
    f << text;
  }
  out << text;
  return pass ? 0 : 1;
}

}  // namespace cli
}  // namespace adqc
