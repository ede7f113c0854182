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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "adqc/register.hpp"

namespace adqc {

enum class Variant { SingleEntangler, TwoEntanglers };

inline const char* variant_name(Variant v) { return v == Variant::SingleEntangler ? "single" : "two"; }

inline Variant parse_variant(const std::string& s) {
  if (s == "single") return Variant::SingleEntangler;
  if (s == "two") return Variant::TwoEntanglers;
  throw Error("unknown variant: " + s);
}

enum class PatternKind { J, CZ, RX, RZ, ASSIST };

struct CircuitGate {
  std::string kind;
  std::optional<double> angle;
  std::vector<std::size_t> targets;
};

struct CircuitDescription {
  int num_qubits = 1;
  std::vector<CircuitGate> gates;

  void validate() const {
    if (num_qubits < 1 || num_qubits > 4) throw Error("circuit: qubit count must be 1..4");
    for (const auto& g : gates) {
      const std::size_t want = g.kind == "CZ" ? 2 : 1;
      if (g.kind != "H" && g.kind != "Rx" && g.kind != "Rz" && g.kind != "CZ")
        throw Error("circuit: unknown gate kind " + g.kind);
      if (g.targets.size() != want) throw Error("circuit: wrong target count for " + g.kind);
      for (auto t : g.targets)
        if (t >= static_cast<std::size_t>(num_qubits)) throw Error("circuit: target out of range");
      if (want == 2 && g.targets[0] == g.targets[1]) throw Error("circuit: CZ targets must differ");
      if ((g.kind == "Rx" || g.kind == "Rz") && !g.angle) throw Error("circuit: rotation needs an angle");
    }
  }

  CMatrix gate_matrix(const CircuitGate& g) const {
    CMatrix local = g.kind == "H" ? hadamard() : g.kind == "Rx" ? rx(*g.angle) : g.kind == "Rz" ? rz(*g.angle) : cz_gate();
    return embed(local, g.targets, num_qubits);
  }

  CMatrix unitary() const {
    validate();
    CMatrix u = CMatrix::identity(std::size_t{1} << num_qubits);
    for (const auto& g : gates) u = gate_matrix(g) * u;
    return u;
  }

  nlohmann::json to_json() const {
    nlohmann::json gs = nlohmann::json::array();
    for (const auto& g : gates) {
      nlohmann::json j{{"kind", g.kind}, {"targets", g.targets}};
      if (g.angle) j["angle"] = *g.angle;
      gs.push_back(j);
    }
    return {{"v", 1}, {"qubits", num_qubits}, {"gates", gs}};
  }

  static CircuitDescription from_json(const nlohmann::json& j) {
    if (j.value("v", 1) != 1) throw Error("circuit: unsupported schema version");
    CircuitDescription c;
    c.num_qubits = j.at("qubits").get<int>();
    for (const auto& g : j.at("gates")) {
      CircuitGate gate{g.at("kind").get<std::string>(), std::nullopt, g.at("targets").get<std::vector<std::size_t>>()};
      if (g.contains("angle") && !g["angle"].is_null()) gate.angle = g["angle"].get<double>();
      c.gates.push_back(std::move(gate));
    }
    c.validate();
    return c;
  }
};

namespace detail {

inline AdqcStep make_step(std::vector<std::size_t> targets, std::vector<std::string> labels, StepRole role,
                          AdaptiveAngle theta, AncillaSpec ancilla = {}, double phi = 0) {
  return {std::move(targets), std::move(labels), ancilla, std::move(theta), phi, role};
}

inline AdqcStep assist_step(std::size_t q) {
  return make_step({q}, {presets::kHHCZ}, StepRole::Fixed, AdaptiveAngle::constant(kPi / 2));
}

// theta = theta' + offset - (-1)^{s_0} gamma
inline AdaptiveAngle two_entangler_rule() {
  AdaptiveAngle a;
  a.base_coeff = 1;
  a.offset = kPi / 2;
  a.gamma_coeff = -1;
  a.gamma_sign_deps = {0};
  return a;
}

// theta = (-1)^{s_1} theta' - (-1)^{s_0 + s_1} gamma
inline AdaptiveAngle j_rule() {
  AdaptiveAngle a;
  a.base_coeff = 1;
  a.base_sign_deps = {1};
  a.gamma_coeff = -1;
  a.gamma_sign_deps = {0, 1};
  return a;
}

}  // namespace detail

inline PatternBlock make_block(PatternKind kind, std::vector<std::size_t> qubits, double theta_prime, Variant variant,
                               double hiding_gamma = 0) {
  using detail::make_step;
  PatternBlock b;
  b.qubits = std::move(qubits);
  b.theta_prime = normalize_angle(theta_prime);
  b.gamma = normalize_angle(hiding_gamma);
  const std::size_t q = b.qubits.front();
  const std::string hh = presets::kHHCZ;
  const std::string ch = presets::kCzCanonH;
  switch (kind) {
    case PatternKind::J:
      if (variant != Variant::SingleEntangler) throw Error("standard_pattern: J needs the single-entangler variant");
      b.kind = "J";
      b.steps = {make_step({q}, {hh}, StepRole::HidingAncilla, AdaptiveAngle::constant(0)),
                 detail::assist_step(q), make_step({q}, {hh}, StepRole::Angle, detail::j_rule())};
      b.frame_axis = Axis::Z;
      b.clifford = CliffordKind::H;
      break;
    case PatternKind::ASSIST:
      if (variant != Variant::SingleEntangler)
        throw Error("standard_pattern: ASSIST needs the single-entangler variant");
      b.kind = "ASSIST";
      b.theta_prime = 0;
      b.steps = {detail::assist_step(q)};
      b.clifford = CliffordKind::H;
      break;
    case PatternKind::CZ: {
      if (b.qubits.size() != 2 || b.qubits[0] == b.qubits[1]) throw Error("standard_pattern: CZ needs two qubits");
      b.kind = "CZ";
      b.theta_prime = 0;
      b.steps = {make_step(b.qubits, {hh, hh}, StepRole::Fixed, AdaptiveAngle::constant(kPi / 2), {}, 3 * kPi / 2),
                 detail::assist_step(b.qubits[0]), detail::assist_step(b.qubits[1])};
      b.clifford = CliffordKind::CZ;
      break;
    }
    case PatternKind::RX:
    case PatternKind::RZ: {
      if (variant != Variant::TwoEntanglers) throw Error("standard_pattern: RX/RZ need the two-entangler variant");
      const bool is_x = kind == PatternKind::RX;
      b.kind = is_x ? "RX" : "RZ";
      b.steps = {make_step({q}, {is_x ? ch : hh}, StepRole::HidingAncilla, AdaptiveAngle::constant(0)),
                 make_step({q}, {is_x ? hh : ch}, StepRole::Angle, detail::two_entangler_rule())};
      b.frame_axis = is_x ? Axis::X : Axis::Z;
      break;
    }
  }
  derive_corrections(b);
  return b;
}

inline GatePattern standard_pattern(PatternKind kind, double theta_prime, Variant variant, double hiding_gamma = 0) {
  GatePattern p;
  if (kind == PatternKind::CZ) {
    p.num_qubits = 2;
    p.blocks.push_back(make_block(kind, {0, 1}, 0, variant));
  } else {
    p.num_qubits = 1;
    p.blocks.push_back(make_block(kind, {0}, theta_prime, variant, hiding_gamma));
  }
  return p;
}

struct EulerZXZ {
  double a = 0;
  double b = 0;
  double c = 0;
};

// u = Rz(c) Rx(b) Rz(a) up to a global phase.
inline EulerZXZ euler_zxz(const CMatrix& u) {
  const double c0 = std::abs(u(0, 0)), s0 = std::abs(u(1, 0));
  EulerZXZ e;
  e.b = 2 * std::atan2(s0, c0);
  const double sum = c0 > 1e-12 ? std::arg(u(1, 1) / u(0, 0)) : 0.0;
  const double diff = s0 > 1e-12 ? std::arg(u(1, 0) / u(0, 1)) : 0.0;
  if (c0 <= 1e-12) {
    e.a = -diff / 2;
    e.c = diff / 2;
  } else if (s0 <= 1e-12) {
    e.a = sum;
    e.c = 0;
  } else {
    e.a = (sum - diff) / 2;
    e.c = (sum + diff) / 2;
  }
  for (int k = 0; k < 8; ++k) {
    EulerZXZ cand{normalize_angle(e.a + (k & 1) * kPi), normalize_angle((k & 4) ? -e.b : e.b),
                  normalize_angle(e.c + ((k >> 1) & 1) * kPi)};
    if (equal_up_to_global_phase(rz(cand.c) * rx(cand.b) * rz(cand.a), u, 1e-9)) return cand;
  }
  throw Error("euler_zxz: decomposition failed");
}

// Slot angles, in time order, for one single-qubit unitary.
inline std::array<double, 3> triple_angles(const CMatrix& u, Variant variant) {
  const EulerZXZ e = euler_zxz(variant == Variant::SingleEntangler ? hadamard() * u : u);
  return {e.a, e.b, e.c};
}

inline bool is_entangling_column(int rows, int col) { return rows >= 2 && col % 4 == 3; }

// rows x cols tile. With two or more rows, every fourth column (index 3 mod 4) is a
// CZ layer; all other columns hold one rotation slot per row. Rotation slots are J
// for the single-entangler variant and cycle RZ, RX, RZ for the two-entangler variant.
inline GatePattern universal_tile(int rows, int cols, const std::vector<std::vector<double>>& angles,
                                  Variant variant) {
  if (rows < 1 || rows > 4) throw Error("universal_tile: rows must be 1..4");
  if (cols < 0 || cols > 4096) throw Error("universal_tile: bad column count");
  GatePattern p;
  p.num_qubits = rows;
  int ent_layer = 0;
  int rot_index = 0;
  for (int c = 0; c < cols; ++c) {
    if (is_entangling_column(rows, c)) {
      const int offset = rows > 2 ? ent_layer % 2 : 0;
      for (int q = offset; q + 1 < rows; q += 2)
        p.blocks.push_back(make_block(PatternKind::CZ, {std::size_t(q), std::size_t(q + 1)}, 0, variant));
      ++ent_layer;
      continue;
    }
    if (static_cast<std::size_t>(c) >= angles.size() || angles[c].size() != static_cast<std::size_t>(rows))
      throw Error("universal_tile: missing angles for a rotation column");
    PatternKind kind = PatternKind::J;
    if (variant == Variant::TwoEntanglers) kind = rot_index % 3 == 1 ? PatternKind::RX : PatternKind::RZ;
    for (int q = 0; q < rows; ++q) p.blocks.push_back(make_block(kind, {std::size_t(q)}, angles[c][q], variant));
    ++rot_index;
  }
  return p;
}

namespace detail {

using Column = std::vector<CMatrix>;

inline Column identity_column(int n) { return Column(n, CMatrix::identity(2)); }

inline Column times(const Column& later, const Column& earlier) {
  Column out(later.size(), CMatrix(2));
  for (std::size_t q = 0; q < later.size(); ++q) out[q] = later[q] * earlier[q];
  return out;
}

struct Cell {
  Column pre, mid, post;
};

inline Cell cz_cell() {
  const CMatrix g = rx(-kPi / 2);
  const CMatrix l1a = pauli::Z() * g * rz(-kPi / 2);
  const CMatrix l1b = rz(-kPi / 2);
  return {{g, CMatrix::identity(2)}, {hadamard(), CMatrix::identity(2)}, {l1a.adjoint(), l1b.adjoint()}};
}

}  // namespace detail

inline int compiled_cells(const CircuitDescription& c, int min_cells) {
  return std::max<int>(static_cast<int>(c.gates.size()), std::max(min_cells, 1));
}

// Columns of single-qubit unitaries that the compiled tile realizes between CZ layers.
inline std::vector<detail::Column> compile_columns(const CircuitDescription& c, int min_cells = 1) {
  c.validate();
  if (c.num_qubits > 2) throw Error("compile_circuit: at most two qubits are supported");
  const int n = c.num_qubits;
  const int cells = compiled_cells(c, min_cells);
  std::vector<detail::Column> cols;
  if (n == 1) {
    for (int k = 0; k < cells; ++k) {
      detail::Column col = detail::identity_column(1);
      if (k < static_cast<int>(c.gates.size())) {
        const auto& g = c.gates[k];
        col[0] = g.kind == "H" ? hadamard() : g.kind == "Rx" ? rx(*g.angle) : rz(*g.angle);
      }
      cols.push_back(col);
    }
    return cols;
  }
  std::vector<detail::Cell> cell_list;
  for (int k = 0; k < cells; ++k) {
    detail::Cell cell{detail::identity_column(n), detail::identity_column(n), detail::identity_column(n)};
    if (k < static_cast<int>(c.gates.size())) {
      const auto& g = c.gates[k];
      if (g.kind == "CZ") {
        cell = detail::cz_cell();
      } else {
        cell.pre[g.targets[0]] = g.kind == "H" ? hadamard() : g.kind == "Rx" ? rx(*g.angle) : rz(*g.angle);
      }
    }
    cell_list.push_back(cell);
  }
  cols.push_back(cell_list[0].pre);
  for (int k = 0; k < cells; ++k) {
    cols.push_back(cell_list[k].mid);
    const detail::Column next_pre = k + 1 < cells ? cell_list[k + 1].pre : detail::identity_column(n);
    cols.push_back(detail::times(next_pre, cell_list[k].post));
  }
  return cols;
}

inline int compiled_tile_columns(int num_qubits, int cells) {
  return num_qubits == 1 ? 3 * cells : 3 * (2 * cells + 1) + 2 * cells;
}

inline GatePattern compile_circuit(const CircuitDescription& c, Variant variant, int min_cells = 1) {
  const auto unitary_cols = compile_columns(c, min_cells);
  const int n = c.num_qubits;
  std::vector<std::vector<double>> angles;
  for (std::size_t k = 0; k < unitary_cols.size(); ++k) {
    std::vector<std::array<double, 3>> per_qubit;
    for (int q = 0; q < n; ++q) per_qubit.push_back(triple_angles(unitary_cols[k][q], variant));
    for (int slot = 0; slot < 3; ++slot) {
      std::vector<double> col;
      for (int q = 0; q < n; ++q) col.push_back(per_qubit[q][slot]);
      angles.push_back(col);
    }
    if (n >= 2 && k + 1 < unitary_cols.size()) angles.emplace_back();
  }
  GatePattern p = universal_tile(n, static_cast<int>(angles.size()), angles, variant);
  if (!equal_up_to_global_phase(p.target(), c.unitary(), 1e-9))
    throw Error("compile_circuit: compiled target does not match the circuit");
  return p;
}

struct VerifyReport {
  bool valid = false;
  double worst_branch_error = 0;
  std::vector<double> branch_probabilities;
  std::size_t inputs = 0;
  std::size_t branches = 0;
};

inline std::vector<PureState> spanning_inputs(int n) {
  const double h = 1 / std::sqrt(2.0);
  const std::vector<PureState> one = {PureState(1, {1, 0}), PureState(1, {0, 1}), PureState(1, {h, h}),
                                      PureState(1, {h, cplx(0, h)})};
  std::vector<PureState> out{PureState(0)};
  for (int q = 0; q < n; ++q) {
    std::vector<PureState> next;
    for (const auto& s : out)
      for (const auto& o : one) next.push_back(tensor(s, o));
    out = std::move(next);
  }
  return out;
}

// Max-norm distance after aligning the global phase of `actual` onto `expected`.
inline double state_error(const PureState& expected, const PureState& actual) {
  const cplx ov = actual.inner(expected);
  const cplx c = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1);
  double worst = 0;
  for (std::size_t i = 0; i < expected.dim(); ++i) worst = std::max(worst, std::abs(expected[i] - c * actual[i]));
  return worst;
}

inline VerifyReport verify_pattern(const GatePattern& pat, double tol = 1e-9) {
  if (pat.num_qubits > 3) throw Error("verify_pattern: at most three qubits");
  VerifyReport rep;
  const CMatrix target = pat.target();
  bool first = true;
  double total_err = 0;
  for (const auto& in : spanning_inputs(pat.num_qubits)) {
    const RunResult rr = run_pattern(init_register(pat.num_qubits, in), pat, RunMode::Enumerate);
    const PureState expected = target * in;
    double psum = 0;
    for (const auto& b : rr.branches) {
      rep.worst_branch_error = std::max(rep.worst_branch_error, state_error(expected, b.corrected));
      psum += b.probability;
      if (first) rep.branch_probabilities.push_back(b.probability);
    }
    total_err = std::max(total_err, std::abs(psum - 1));
    rep.branches += rr.branches.size();
    ++rep.inputs;
    first = false;
  }
  rep.valid = rep.worst_branch_error <= tol && total_err <= 1e-10;
  return rep;
}

}  // namespace adqc
