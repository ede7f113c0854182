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

// The ADQC machine: a register that is only ever touched by coupling a
// single ancilla to it and measuring the ancilla.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adqc/core.hpp"
#include "adqc/pauli.hpp"

namespace adqc {

inline constexpr double kImpossibleBranch = 1e-12;

class ImpossibleBranch : public Error {
 public:
  using Error::Error;
};

// theta = base_coeff * (-1)^{parity(base_sign_deps)} * theta'
//       + offset
//       + gamma_coeff * (-1)^{parity(gamma_sign_deps)} * gamma
//       + pi * parity(shift_deps)
// Dependencies are indices of earlier steps in the same block.
struct AdaptiveAngle {
  double base_coeff = 0;
  double offset = 0;
  double gamma_coeff = 0;
  std::vector<int> base_sign_deps;
  std::vector<int> gamma_sign_deps;
  std::vector<int> shift_deps;

  static AdaptiveAngle constant(double v) {
    AdaptiveAngle a;
    a.offset = v;
    return a;
  }

  static int parity(const std::vector<int>& deps, const std::vector<int>& outcomes) {
    int p = 0;
    for (int d : deps) {
      if (d < 0 || static_cast<std::size_t>(d) >= outcomes.size())
        throw Error("AdaptiveAngle: dependency on a step that has not run");
      p ^= outcomes[d];
    }
    return p;
  }

  double resolve(double theta_prime, double gamma, const std::vector<int>& outcomes) const {
    const double sb = parity(base_sign_deps, outcomes) ? -1.0 : 1.0;
    const double sg = parity(gamma_sign_deps, outcomes) ? -1.0 : 1.0;
    return normalize_angle(base_coeff * sb * theta_prime + offset + gamma_coeff * sg * gamma +
                           kPi * parity(shift_deps, outcomes));
  }

  int max_dependency() const {
    int m = -1;
    for (const auto* v : {&base_sign_deps, &gamma_sign_deps, &shift_deps})
      for (int d : *v) m = std::max(m, d);
    return m;
  }
};

enum class StepRole { Fixed, HidingAncilla, Angle };

inline const char* role_name(StepRole r) {
  switch (r) {
    case StepRole::Fixed: return "fixed";
    case StepRole::HidingAncilla: return "hiding";
    case StepRole::Angle: return "angle";
  }
  return "fixed";
}

// One couple-and-measure round. Ancilla and basis are canonical coordinates of the
// bare interaction; the physical ancilla is V'_a^dag of the first entangler applied
// to |+_{gamma,delta}>, the physical basis W'_a of the last entangler applied to |+-_{theta,phi}>.
struct AdqcStep {
  std::vector<std::size_t> targets;
  std::vector<std::string> entangler_labels;
  AncillaSpec ancilla;
  AdaptiveAngle theta;
  double phi = 0;
  StepRole role = StepRole::Fixed;
};

enum class CliffordKind { None, H, CZ };

struct PatternBlock {
  std::string kind;
  std::vector<std::size_t> qubits;
  std::vector<AdqcStep> steps;
  double theta_prime = 0;
  double gamma = 0;
  std::optional<Axis> frame_axis;
  CliffordKind clifford = CliffordKind::None;
  // Indexed by outcome bits, first step most significant; strings live on `qubits`.
  std::vector<PauliString> corrections;

  CMatrix local_target() const;
};

inline CMatrix block_target(const std::string& kind, double theta_prime) {
  if (kind == "J") return hadamard() * rz(theta_prime);
  if (kind == "ASSIST") return hadamard();
  if (kind == "CZ") return cz_gate();
  if (kind == "RX") return rx(theta_prime);
  if (kind == "RZ") return rz(theta_prime);
  if (kind == "ID") return CMatrix::identity(2);
  throw Error("unknown block kind: " + kind);
}

inline CMatrix PatternBlock::local_target() const { return block_target(kind, theta_prime); }

struct GatePattern {
  int num_qubits = 1;
  std::vector<PatternBlock> blocks;

  std::size_t step_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.steps.size();
    return n;
  }

  std::vector<AdqcStep> steps() const {
    std::vector<AdqcStep> out;
    for (const auto& b : blocks) out.insert(out.end(), b.steps.begin(), b.steps.end());
    return out;
  }

  CMatrix target() const {
    CMatrix u = CMatrix::identity(std::size_t{1} << num_qubits);
    for (const auto& b : blocks) u = embed(b.local_target(), b.qubits, num_qubits) * u;
    return u;
  }
};

struct RegisterState {
  PureState reg;
  std::optional<PureState> attached_ancilla;
  PauliString frame;
  std::vector<int> outcome_log;

  int num_qubits() const { return reg.num_qubits(); }
};

inline RegisterState init_register(int n, const PureState& input) {
  if (n < 1 || n > 4) throw Error("init_register: register size must be 1..4");
  if (input.num_qubits() != n) throw Error("init_register: input size mismatch");
  RegisterState st{input, std::nullopt, PauliString(n), {}};
  st.reg.normalize();
  return st;
}

// Label of one character per qubit from {0, 1, +, -}; surrounding |...> is optional.
inline RegisterState init_register(int n, std::string label) {
  if (!label.empty() && label.front() == '|') label.erase(0, 1);
  if (!label.empty() && label.back() == '>') label.pop_back();
  if (static_cast<int>(label.size()) != n) throw Error("init_register: label length must equal n");
  if (n < 1 || n > 4) throw Error("init_register: register size must be 1..4");
  PureState s(0);
  for (char c : label) {
    const double h = 1 / std::sqrt(2.0);
    PureState q(1);
    switch (c) {
      case '0': q = PureState(1, {1, 0}); break;
      case '1': q = PureState(1, {0, 1}); break;
      case '+': q = PureState(1, {h, h}); break;
      case '-': q = PureState(1, {h, -h}); break;
      default: throw Error("init_register: bad label character");
    }
    s = tensor(s, q);
  }
  return init_register(n, s);
}

inline void attach_ancilla(RegisterState& st, PureState payload) {
  if (st.attached_ancilla) throw Error("attach_ancilla: an ancilla is already attached");
  if (payload.num_qubits() != 1) throw Error("attach_ancilla: payload must be one qubit");
  st.attached_ancilla = std::move(payload.normalize());
}

// Source of measurement outcomes: forced bit or a seeded generator.
struct OutcomeChoice {
  std::optional<int> forced;
  std::mt19937_64* rng = nullptr;

  static OutcomeChoice force(int s) { return {s, nullptr}; }
  static OutcomeChoice sample(std::mt19937_64& r) { return {std::nullopt, &r}; }
};

// Portable uniform draw in [0, 1).
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct MeasureResult {
  int outcome = 0;
  double probability = 0;
};

namespace detail {

struct CachedPreset {
  Entangler entangler;
  CMatrix assembled;
};

inline const CachedPreset& preset(const std::string& label) {
  static const std::map<std::string, CachedPreset> cache = [] {
    std::map<std::string, CachedPreset> m;
    for (const char* l : {presets::kCzCanon, presets::kCzCanonH, presets::kHHCZ, presets::kSwapCz}) {
      Entangler e = presets::by_label(l);
      CMatrix a = assemble_entangler(e);
      m.emplace(l, CachedPreset{std::move(e), std::move(a)});
    }
    return m;
  }();
  auto it = cache.find(label);
  if (it == cache.end()) throw Error("unknown entangler preset: " + label);
  return it->second;
}

inline std::vector<PureState> coupled_branches(const RegisterState& st, const std::vector<std::size_t>& targets,
                                               const std::vector<std::string>& labels, const PureState& bra_plus,
                                               const PureState& bra_minus) {
  const int n = st.num_qubits();
  PureState full = tensor(st.reg, *st.attached_ancilla);
  const std::size_t anc = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::size_t t[] = {anc, targets[i]};
    full = apply_on(full, preset(labels[i]).assembled, t);
  }
  std::vector<PureState> out;
  for (const PureState* bra : {&bra_plus, &bra_minus}) {
    std::vector<cplx> amps(st.reg.dim());
    for (std::size_t i = 0; i < amps.size(); ++i)
      amps[i] = std::conj((*bra)[0]) * full[2 * i] + std::conj((*bra)[1]) * full[2 * i + 1];
    out.emplace_back(n, std::move(amps));
  }
  return out;
}

}  // namespace detail

// Entangles the attached ancilla with `targets` (in order) and measures it in the
// physical basis {bra_plus, bra_minus}. Consumes the ancilla.
inline MeasureResult couple_and_measure(RegisterState& st, const std::vector<std::size_t>& targets,
                                        const std::vector<std::string>& labels, const PureState& bra_plus,
                                        const PureState& bra_minus, OutcomeChoice choice) {
  if (!st.attached_ancilla) throw Error("couple_and_measure: no ancilla attached");
  if (targets.empty() || targets.size() > 2 || targets.size() != labels.size())
    throw Error("couple_and_measure: need one or two targets with one label each");
  for (auto t : targets)
    if (t >= static_cast<std::size_t>(st.num_qubits())) throw Error("couple_and_measure: target out of range");
  if (targets.size() == 2 && targets[0] == targets[1]) throw Error("couple_and_measure: duplicate target");
  auto branches = detail::coupled_branches(st, targets, labels, bra_plus, bra_minus);
  const double p0 = branches[0].norm() * branches[0].norm();
  const double p1 = branches[1].norm() * branches[1].norm();
  int s;
  if (choice.forced) {
    s = *choice.forced;
  } else {
    if (!choice.rng) throw Error("couple_and_measure: no outcome source");
    s = uniform01(*choice.rng) < p0 / (p0 + p1) ? 0 : 1;
  }
  const double p = s ? p1 : p0;
  if (p < kImpossibleBranch) throw ImpossibleBranch("couple_and_measure: forced branch is impossible");
  st.attached_ancilla.reset();
  st.reg = std::move(branches[s].normalize());
  st.outcome_log.push_back(s);
  return {s, p};
}

inline PureState step_payload(const AdqcStep& step, const AncillaSpec& canonical) {
  return physical_ancilla(detail::preset(step.entangler_labels.front()).entangler, canonical);
}

// Runs one step with explicit canonical ancilla and basis.
inline MeasureResult execute_step_with(RegisterState& st, const AdqcStep& step, const PureState& canonical_payload,
                                       const MeasBasis& basis, OutcomeChoice choice) {
  const Entangler& first = detail::preset(step.entangler_labels.front()).entangler;
  const Entangler& last = detail::preset(step.entangler_labels.back()).entangler;
  attach_ancilla(st, first.frame.v_a.adjoint() * canonical_payload);
  return couple_and_measure(st, step.targets, step.entangler_labels,
                            physical_basis_state(last, Sign::Plus, basis),
                            physical_basis_state(last, Sign::Minus, basis), choice);
}

struct ResolvedStep {
  AncillaSpec ancilla;
  MeasBasis basis;
};

inline ResolvedStep resolve_step(const AdqcStep& step, double theta_prime, double gamma,
                                 const std::vector<int>& block_outcomes) {
  ResolvedStep r;
  r.ancilla = step.role == StepRole::HidingAncilla ? AncillaSpec(gamma, 0) : step.ancilla;
  r.basis = MeasBasis(step.theta.resolve(theta_prime, gamma, block_outcomes), step.phi);
  return r;
}

inline MeasureResult execute_step(RegisterState& st, const AdqcStep& step, const ResolvedStep& r,
                                  OutcomeChoice choice) {
  return execute_step_with(st, step, ancilla_state(r.ancilla), r.basis, choice);
}

// Sign applied to theta' so the rotation commutes past the incoming frame.
inline double frame_theta_sign(const PatternBlock& b, const PauliString& frame) {
  if (!b.frame_axis) return 1.0;
  return frame.anticommutes_with(b.qubits.front(), *b.frame_axis) ? -1.0 : 1.0;
}

inline std::size_t outcome_index(const std::vector<int>& outcomes) {
  std::size_t idx = 0;
  for (int s : outcomes) idx = (idx << 1) | static_cast<std::size_t>(s);
  return idx;
}

inline PauliString propagate_frame(const PatternBlock& b, PauliString frame, const std::vector<int>& outcomes) {
  switch (b.clifford) {
    case CliffordKind::None: break;
    case CliffordKind::H: frame.conjugate_h(b.qubits.front()); break;
    case CliffordKind::CZ: frame.conjugate_cz(b.qubits[0], b.qubits[1]); break;
  }
  const auto& c = b.corrections.at(outcome_index(outcomes));
  return c.embedded(b.qubits, frame.num_qubits()) * frame;
}

// Local operator realized by the block for a fixed outcome vector, unnormalized.
inline CMatrix block_operator(const PatternBlock& b, double theta_prime, double gamma, const std::vector<int>& outcomes) {
  const int k = static_cast<int>(b.qubits.size());
  const std::size_t dim = std::size_t{1} << k;
  CMatrix out(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    PureState s = PureState::basis(k, c);
    std::vector<int> seen;
    for (std::size_t i = 0; i < b.steps.size(); ++i) {
      AdqcStep local = b.steps[i];
      for (auto& t : local.targets) {
        auto it = std::find(b.qubits.begin(), b.qubits.end(), t);
        t = static_cast<std::size_t>(it - b.qubits.begin());
      }
      const ResolvedStep r = resolve_step(local, theta_prime, gamma, seen);
      const Entangler& first = detail::preset(local.entangler_labels.front()).entangler;
      const Entangler& last = detail::preset(local.entangler_labels.back()).entangler;
      RegisterState st{s, first.frame.v_a.adjoint() * ancilla_state(r.ancilla), PauliString(k), {}};
      auto br = detail::coupled_branches(st, local.targets, local.entangler_labels,
                                         physical_basis_state(last, Sign::Plus, r.basis),
                                         physical_basis_state(last, Sign::Minus, r.basis));
      s = br[outcomes[i]];
      seen.push_back(outcomes[i]);
    }
    for (std::size_t r = 0; r < dim; ++r) out(r, c) = s[r];
  }
  return out;
}

// Fills b.corrections by matching each branch operator against the target. Throws if
// any branch is not a Pauli times the target or if the Pauli depends on the angles.
inline void derive_corrections(PatternBlock& b) {
  const std::size_t m = b.steps.size();
  b.corrections.assign(std::size_t{1} << m, PauliString(b.qubits.size()));
  const double refs[][2] = {{0.7310, 1.2170}, {2.3410, 4.1030}};
  for (std::size_t idx = 0; idx < b.corrections.size(); ++idx) {
    std::vector<int> outs(m);
    for (std::size_t i = 0; i < m; ++i) outs[i] = static_cast<int>((idx >> (m - 1 - i)) & 1);
    std::optional<PauliString> found;
    for (const auto& ref : refs) {
      const double tp = b.frame_axis ? ref[0] : b.theta_prime;
      const CMatrix k = block_operator(b, tp, ref[1], outs);
      const CMatrix c = normalize_operator(k * block_target(b.kind, tp).adjoint());
      auto p = match_pauli(c, 1e-9);
      if (!p) throw Error("derive_corrections: branch of block " + b.kind + " is not correctable");
      if (found && !(*found == *p)) throw Error("derive_corrections: correction depends on the angles");
      found = p;
    }
    b.corrections[idx] = *found;
  }
}

struct StepRecord {
  std::size_t block = 0;
  std::size_t step = 0;
  AncillaSpec ancilla;
  MeasBasis basis;
  int outcome = 0;
  double probability = 0;
};

struct Branch {
  PureState raw;
  PureState corrected;
  PauliString frame;
  double probability = 1;
  std::size_t multiplicity = 1;
  std::vector<StepRecord> records;
};

struct RunResult {
  std::vector<Branch> branches;
};

enum class RunMode { Sample, Enumerate, EnumeratePaths };

namespace detail {

struct RecordNode {
  StepRecord record;
  std::shared_ptr<const RecordNode> prev;
};

struct Partial {
  PureState reg;
  PauliString frame;
  double probability;
  std::size_t multiplicity;
  std::shared_ptr<const RecordNode> records;
};

inline std::vector<StepRecord> unwind(const std::shared_ptr<const RecordNode>& tail) {
  std::vector<StepRecord> out;
  for (const RecordNode* n = tail.get(); n; n = n->prev.get()) out.push_back(n->record);
  std::reverse(out.begin(), out.end());
  return out;
}

inline void expand_block(const Partial& in, const PatternBlock& b, std::size_t bi, std::size_t si,
                         const std::vector<int>& outs, double tp, std::mt19937_64* rng, std::vector<Partial>& sink) {
  if (si == b.steps.size()) {
    Partial p = in;
    p.frame = propagate_frame(b, in.frame, outs);
    sink.push_back(std::move(p));
    return;
  }
  const ResolvedStep r = resolve_step(b.steps[si], tp, b.gamma, outs);
  if (rng) {
    RegisterState st{in.reg, std::nullopt, in.frame, {}};
    MeasureResult mr = execute_step(st, b.steps[si], r, OutcomeChoice::sample(*rng));
    Partial next{std::move(st.reg), in.frame, in.probability * mr.probability, in.multiplicity,
                 std::make_shared<const RecordNode>(
                     RecordNode{{bi, si, r.ancilla, r.basis, mr.outcome, mr.probability}, in.records})};
    auto o = outs;
    o.push_back(mr.outcome);
    expand_block(next, b, bi, si + 1, o, tp, rng, sink);
    return;
  }
  RegisterState probe{in.reg, std::nullopt, in.frame, {}};
  const Entangler& first = preset(b.steps[si].entangler_labels.front()).entangler;
  const Entangler& last = preset(b.steps[si].entangler_labels.back()).entangler;
  probe.attached_ancilla = first.frame.v_a.adjoint() * ancilla_state(r.ancilla);
  auto br = coupled_branches(probe, b.steps[si].targets, b.steps[si].entangler_labels,
                             physical_basis_state(last, Sign::Plus, r.basis),
                             physical_basis_state(last, Sign::Minus, r.basis));
  for (int s = 0; s < 2; ++s) {
    const double p = br[s].norm() * br[s].norm();
    if (p < kImpossibleBranch) continue;
    Partial next{std::move(br[s].normalize()), in.frame, in.probability * p, in.multiplicity,
                 std::make_shared<const RecordNode>(RecordNode{{bi, si, r.ancilla, r.basis, s, p}, in.records})};
    auto o = outs;
    o.push_back(s);
    expand_block(next, b, bi, si + 1, o, tp, rng, sink);
  }
}

inline bool same_up_to_phase(const PureState& a, const PureState& b, double tol) {
  return std::abs(std::abs(a.inner(b)) - 1.0) <= tol;
}

inline std::vector<Partial> merge(std::vector<Partial> in) {
  std::vector<Partial> out;
  for (auto& p : in) {
    bool merged = false;
    for (auto& q : out)
      if (q.frame == p.frame && same_up_to_phase(q.reg, p.reg, 1e-12)) {
        q.probability += p.probability;
        q.multiplicity += p.multiplicity;
        merged = true;
        break;
      }
    if (!merged) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

// Runs the pattern. Sample follows one seeded trajectory; Enumerate explores every
// branch and merges branches whose register state and frame coincide at block
// boundaries (records then belong to the first merged path); EnumeratePaths keeps
// every path separate.
inline RunResult run_pattern(const RegisterState& st, const GatePattern& pat, RunMode mode, uint64_t seed = 0) {
  if (pat.num_qubits != st.num_qubits()) throw Error("run_pattern: register size does not match pattern");
  if (st.attached_ancilla) throw Error("run_pattern: an ancilla is still attached");
  std::mt19937_64 rng(seed);
  std::vector<detail::Partial> live{{st.reg, st.frame, 1.0, 1, {}}};
  for (std::size_t bi = 0; bi < pat.blocks.size(); ++bi) {
    const auto& b = pat.blocks[bi];
    std::vector<detail::Partial> next;
    for (const auto& p : live) {
      const double tp = frame_theta_sign(b, p.frame) * b.theta_prime;
      detail::expand_block(p, b, bi, 0, {}, tp, mode == RunMode::Sample ? &rng : nullptr, next);
    }
    live = mode == RunMode::Enumerate ? detail::merge(std::move(next)) : std::move(next);
  }
  RunResult out;
  for (auto& p : live) {
    PureState corrected = apply_frame_inverse(p.reg, p.frame);
    out.branches.push_back({std::move(p.reg), std::move(corrected), std::move(p.frame), p.probability,
                            p.multiplicity, detail::unwind(p.records)});
  }
  return out;
}

}  // namespace adqc
