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

// Blind delegation of a compiled pattern between a client and a server.
//
// Each rotation slot runs two rounds: the client sends a hidden ancilla
// |+_{gamma + r pi, 0}>, the server reports an outcome, the client sends
// an angle on the grid, the server reports another outcome. Fixed steps
// (assistant and CZ steps) are run by the server alone.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "adqc/patterns.hpp"

namespace adqc {

class ProtocolError : public Error {
 public:
  using Error::Error;
};

enum class MessageKind { ANCILLA, ANGLE, OUTCOME };

inline const char* message_kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::ANCILLA: return "ANCILLA";
    case MessageKind::ANGLE: return "ANGLE";
    case MessageKind::OUTCOME: return "OUTCOME";
  }
  return "OUTCOME";
}

struct Message {
  MessageKind kind = MessageKind::OUTCOME;
  std::size_t block = 0;
  std::size_t step = 0;
  std::optional<PureState> payload;
  int theta_grid = 0;
  int grid_n = 0;
  int outcome = 0;

  double theta() const { return 2 * kPi * theta_grid / grid_n; }

  nlohmann::json to_json() const {
    nlohmann::json j{{"slot", block}, {"step", step}, {"kind", message_kind_name(kind)}};
    switch (kind) {
      case MessageKind::ANCILLA:
        j["payload"] = {{(*payload)[0].real(), (*payload)[0].imag()}, {(*payload)[1].real(), (*payload)[1].imag()}};
        break;
      case MessageKind::ANGLE: j["theta_grid"] = theta_grid; break;
      case MessageKind::OUTCOME: j["outcome"] = outcome; break;
    }
    return j;
  }

  static Message from_json(const nlohmann::json& j) {
    Message m;
    m.block = j.at("slot").get<std::size_t>();
    m.step = j.at("step").get<std::size_t>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ANCILLA") {
      m.kind = MessageKind::ANCILLA;
      const auto& a = j.at("payload");
      m.payload = PureState(1, {cplx(a[0][0].get<double>(), a[0][1].get<double>()),
                                cplx(a[1][0].get<double>(), a[1][1].get<double>())});
    } else if (kind == "ANGLE") {
      m.kind = MessageKind::ANGLE;
      m.theta_grid = j.at("theta_grid").get<int>();
    } else if (kind == "OUTCOME") {
      m.outcome = j.at("outcome").get<int>();
    } else {
      throw ProtocolError("message: unknown kind");
    }
    return m;
  }
};

inline double grid_angle(int k, int grid_n) { return 2 * kPi * k / grid_n; }

// Grid index of an angle that must lie on the grid.
inline int to_grid(double angle, int grid_n, double tol = 1e-9) {
  const double step = 2 * kPi / grid_n;
  const double x = normalize_angle(angle) / step;
  const long k = std::lround(x);
  if (std::abs(x - static_cast<double>(k)) * step > tol) throw Error("angle is not on the protocol grid");
  return static_cast<int>(((k % grid_n) + grid_n) % grid_n);
}

// Step-3 angle theta' + sign * (-1)^s * gamma + r pi, reduced mod 2 pi.
inline double client_angle(double theta_prime, double gamma, int s, int r, int sign) {
  return normalize_angle(theta_prime + sign * (s ? -1.0 : 1.0) * gamma + r * kPi);
}

inline bool is_rotation_slot(const PatternBlock& b) { return b.frame_axis.has_value(); }

// The only pattern description the server receives: step shapes and fixed
// parameters, with every slot angle, hiding angle, angle rule and correction removed.
inline GatePattern public_skeleton(const GatePattern& p) {
  GatePattern s = p;
  for (auto& b : s.blocks) {
    b.theta_prime = 0;
    b.gamma = 0;
    b.corrections.clear();
    for (auto& st : b.steps)
      if (st.role != StepRole::Fixed) {
        st.theta = AdaptiveAngle::constant(0);
        st.ancilla = AncillaSpec();
      }
  }
  return s;
}

struct SlotRandomness {
  int gamma_index = 0;
  int r = 0;
};

struct ClientSecret {
  CircuitDescription circuit;
  Variant variant = Variant::SingleEntangler;
  int grid_n = 8;
  int min_cells = 1;
  uint64_t seed = 0;
  std::optional<PureState> input;
  // Overrides the circuit: run this pattern directly (slot angles must be on the grid).
  std::optional<GatePattern> pattern;
  // Per rotation slot, in slot order; missing entries are drawn from the seeded stream.
  std::map<std::size_t, SlotRandomness> forced;
  // Test hook: a client that never flips the ancilla.
  bool sabotage_r_zero = false;

  PureState input_state(int n) const {
    if (input) return *input;
    return init_register(n, std::string(static_cast<std::size_t>(n), '+')).reg;
  }
};

// Compiles the secret; every slot angle must lie on the grid.
inline GatePattern secret_pattern(const ClientSecret& s) {
  if (s.grid_n < 4 || s.grid_n % 2) throw Error("grid_n must be even and at least 4");
  if (s.variant == Variant::TwoEntanglers && s.grid_n % 4)
    throw Error("the two-entangler variant needs grid_n divisible by 4");
  GatePattern p = s.pattern ? *s.pattern : compile_circuit(s.circuit, s.variant, s.min_cells);
  for (auto& b : p.blocks)
    if (is_rotation_slot(b)) b.theta_prime = grid_angle(to_grid(b.theta_prime, s.grid_n), s.grid_n);  // reduce to an exact grid value
  return p;
}

struct ClientLogEntry {
  std::size_t block = 0;
  int gamma_index = 0;
  int r = 0;
  double theta_prime = 0;
  int frame_sign = 1;
  int hiding_outcome = 0;
  int angle_outcome = 0;
  int logical_outcome = 0;
};

class Client {
 public:
  explicit Client(const ClientSecret& secret) : grid_n_(secret.grid_n) {
    GatePattern p = secret_pattern(secret);
    std::mt19937_64 rng(secret.seed);
    std::size_t slot = 0;
    for (auto& b : p.blocks) {
      if (!is_rotation_slot(b)) continue;
      SlotRandomness sr;
      sr.gamma_index = static_cast<int>(rng() % static_cast<uint64_t>(secret.grid_n));
      sr.r = static_cast<int>(rng() & 1);
      if (auto it = secret.forced.find(slot); it != secret.forced.end()) sr = it->second;
      if (secret.sabotage_r_zero) sr.r = 0;
      slots_.push_back(sr);
      b.gamma = normalize_angle(grid_angle(sr.gamma_index, secret.grid_n) + sr.r * kPi);
      ++slot;
    }
    pattern_ = std::make_shared<const GatePattern>(std::move(p));
    frame_ = PauliString(pattern_->num_qubits);
    begin_block();
  }

  const GatePattern& pattern() const { return *pattern_; }
  GatePattern skeleton() const { return public_skeleton(*pattern_); }
  const PauliString& frame() const { return frame_; }
  const std::vector<ClientLogEntry>& log() const { return log_; }
  const std::vector<SlotRandomness>& slot_randomness() const { return slots_; }
  bool done() const { return block_ >= pattern_->blocks.size(); }

  // Message the client must send before the server can run the next step, if any.
  std::optional<Message> next_message() const {
    if (done()) return std::nullopt;
    const auto& b = pattern_->blocks[block_];
    const auto& st = b.steps[step_];
    if (st.role == StepRole::Fixed) return std::nullopt;
    const ResolvedStep r = resolve_step(st, sign_ * b.theta_prime, b.gamma, outcomes_);
    Message m;
    m.block = block_;
    m.step = step_;
    m.grid_n = grid_n_;
    if (st.role == StepRole::HidingAncilla) {
      m.kind = MessageKind::ANCILLA;
      m.payload = ancilla_state(r.ancilla);
    } else {
      m.kind = MessageKind::ANGLE;
      m.theta_grid = to_grid(r.basis.theta, grid_n_);
    }
    return m;
  }

  void receive(const Message& m) {
    if (m.kind != MessageKind::OUTCOME || done() || m.block != block_ || m.step != step_)
      throw ProtocolError("client: unexpected message");
    const auto& b = pattern_->blocks[block_];
    outcomes_.push_back(m.outcome);
    if (is_rotation_slot(b)) {
      if (b.steps[step_].role == StepRole::HidingAncilla) current_.hiding_outcome = m.outcome;
      if (b.steps[step_].role == StepRole::Angle) {
        current_.angle_outcome = m.outcome;
        current_.logical_outcome = client_postprocess(m.outcome, current_.r);
      }
    }
    if (++step_ == b.steps.size()) {
      frame_ = propagate_frame(b, frame_, outcomes_);
      if (is_rotation_slot(b)) log_.push_back(current_);
      ++block_;
      begin_block();
    }
  }

  static int client_postprocess(int s_prime, int r) { return s_prime ^ r; }

  // Identity of the client's remaining behaviour, for merging enumerated runs.
  bool same_position(const Client& o) const {
    return block_ == o.block_ && step_ == o.step_ && frame_ == o.frame_ && outcomes_ == o.outcomes_;
  }

 private:
  void begin_block() {
    step_ = 0;
    outcomes_.clear();
    if (done()) return;
    const auto& b = pattern_->blocks[block_];
    sign_ = frame_theta_sign(b, frame_);
    if (is_rotation_slot(b)) {
      const SlotRandomness& sr = slots_[slot_index_++];
      current_ = {block_, sr.gamma_index, sr.r, b.theta_prime, static_cast<int>(sign_), 0, 0, 0};
    }
  }

  int grid_n_;
  std::shared_ptr<const GatePattern> pattern_;
  std::vector<SlotRandomness> slots_;
  PauliString frame_;
  std::size_t block_ = 0;
  std::size_t step_ = 0;
  std::size_t slot_index_ = 0;
  double sign_ = 1;
  std::vector<int> outcomes_;
  ClientLogEntry current_;
  std::vector<ClientLogEntry> log_;
};

// Holds the register; knows only the public skeleton and the messages it receives.
class Server {
 public:
  Server(GatePattern skeleton, RegisterState st, int grid_n)
      : skeleton_(std::make_shared<const GatePattern>(std::move(skeleton))), st_(std::move(st)), grid_n_(grid_n) {}

  bool done() const { return block_ >= skeleton_->blocks.size(); }
  const RegisterState& state() const { return st_; }

  MessageKind expected() const {
    if (done()) throw ProtocolError("server: pattern finished");
    switch (current().role) {
      case StepRole::HidingAncilla: return MessageKind::ANCILLA;
      case StepRole::Angle: return MessageKind::ANGLE;
      case StepRole::Fixed: return MessageKind::OUTCOME;
    }
    return MessageKind::OUTCOME;
  }

  // Runs the next step. `msg` must be the ANCILLA or ANGLE message the step needs,
  // or empty for a fixed step. Returns the OUTCOME message.
  Message server_step(const std::optional<Message>& msg, OutcomeChoice choice) {
    if (done()) throw ProtocolError("server: pattern finished");
    const AdqcStep& step = current();
    PureState payload = ancilla_state(step.ancilla);
    MeasBasis basis(step.theta.offset, step.phi);
    switch (step.role) {
      case StepRole::Fixed:
        if (msg) throw ProtocolError("server: fixed step takes no message");
        break;
      case StepRole::HidingAncilla:
        if (!msg || msg->kind != MessageKind::ANCILLA || !msg->payload)
          throw ProtocolError("server: expected an ANCILLA message");
        payload = *msg->payload;
        break;
      case StepRole::Angle:
        if (!msg || msg->kind != MessageKind::ANGLE) throw ProtocolError("server: expected an ANGLE message");
        if (msg->theta_grid < 0 || msg->theta_grid >= grid_n_) throw ProtocolError("server: angle off the grid");
        basis = MeasBasis(grid_angle(msg->theta_grid, grid_n_), step.phi);
        break;
    }
    if (msg && (msg->block != block_ || msg->step != step_)) throw ProtocolError("server: message out of order");
    const MeasureResult mr = execute_step_with(st_, step, payload, basis, choice);
    last_probability_ = mr.probability;
    Message out;
    out.kind = MessageKind::OUTCOME;
    out.block = block_;
    out.step = step_;
    out.outcome = mr.outcome;
    out.grid_n = grid_n_;
    if (++step_ == skeleton_->blocks[block_].steps.size()) {
      ++block_;
      step_ = 0;
    }
    return out;
  }

  double last_probability() const { return last_probability_; }

 private:
  const AdqcStep& current() const { return skeleton_->blocks[block_].steps[step_]; }

  std::shared_ptr<const GatePattern> skeleton_;
  RegisterState st_;
  int grid_n_;
  std::size_t block_ = 0;
  std::size_t step_ = 0;
  double last_probability_ = 1;
};

struct ProtocolTranscript {
  std::vector<Message> messages;
  std::vector<ClientLogEntry> client_log;

  std::vector<Message> server_view() const { return messages; }

  // JSON lines; the server view omits the client log.
  std::string to_jsonl(bool server_view_only) const {
    std::ostringstream out;
    for (const auto& m : messages) out << m.to_json().dump() << "\n";
    if (!server_view_only)
      for (const auto& e : client_log)
        out << nlohmann::json{{"client_log", {{"slot", e.block},
                                              {"gamma_grid", e.gamma_index},
                                              {"r", e.r},
                                              {"theta_prime", e.theta_prime},
                                              {"frame_sign", e.frame_sign},
                                              {"logical_outcome", e.logical_outcome}}}}
                   .dump()
            << "\n";
    return out.str();
  }
};

struct DelegationResult {
  PureState final_state;
  PureState raw_state;
  PureState reference;
  double fidelity = 0;
  ProtocolTranscript transcript;
};

inline PureState reference_state(const ClientSecret& secret, const GatePattern& p) {
  const PureState in = secret.input_state(p.num_qubits);
  if (secret.pattern) return p.target() * in;
  return secret.circuit.unitary() * in;
}

// One sampled dialogue. `seed` drives the server's measurement outcomes.
inline DelegationResult run_delegation(const ClientSecret& secret, uint64_t seed) {
  Client client(secret);
  const GatePattern& p = client.pattern();
  Server server(client.skeleton(), init_register(p.num_qubits, secret.input_state(p.num_qubits)), secret.grid_n);
  std::mt19937_64 rng(seed);
  ProtocolTranscript tr;
  while (!client.done()) {
    auto msg = client.next_message();
    if (msg) tr.messages.push_back(*msg);
    Message out = server.server_step(msg, OutcomeChoice::sample(rng));
    tr.messages.push_back(out);
    client.receive(out);
  }
  tr.client_log = client.log();
  DelegationResult res{apply_frame_inverse(server.state().reg, client.frame()), server.state().reg,
                       reference_state(secret, p), 0, std::move(tr)};
  res.fidelity = std::norm(res.reference.inner(res.final_state));
  return res;
}

// Rebuilds a server run from the serialized server view alone, replaying its outcomes.
inline RegisterState replay_server(const GatePattern& skeleton, const PureState& input, int grid_n,
                                   const std::string& jsonl) {
  Server server(skeleton, init_register(skeleton.num_qubits, input), grid_n);
  std::istringstream in(jsonl);
  std::string line;
  std::optional<Message> pending;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("client_log")) continue;
    Message m = Message::from_json(j);
    m.grid_n = grid_n;
    if (m.kind != MessageKind::OUTCOME) {
      pending = m;
      continue;
    }
    const Message out = server.server_step(pending, OutcomeChoice::force(m.outcome));
    if (out.block != m.block || out.step != m.step) throw ProtocolError("replay: transcript out of order");
    pending.reset();
  }
  return server.state();
}

struct DelegationBranch {
  PureState final_state;
  double probability = 0;
  double fidelity = 0;
  std::size_t multiplicity = 1;
};

// Every server outcome, merging dialogues whose register state and client position coincide.
inline std::vector<DelegationBranch> enumerate_delegation(const ClientSecret& secret) {
  struct Session {
    Client client;
    Server server;
    double probability;
    std::size_t multiplicity;
  };
  Client c0(secret);
  const GatePattern p = c0.pattern();
  std::vector<Session> live;
  live.push_back({c0, Server(c0.skeleton(), init_register(p.num_qubits, secret.input_state(p.num_qubits)), secret.grid_n),
                  1.0, 1});
  while (!live.front().client.done()) {
    std::vector<Session> next;
    for (const auto& s : live) {
      auto msg = s.client.next_message();
      for (int b = 0; b < 2; ++b) {
        Session branch = s;
        Message out;
        try {
          out = branch.server.server_step(msg, OutcomeChoice::force(b));
        } catch (const ImpossibleBranch&) {
          continue;
        }
        branch.probability *= branch.server.last_probability();
        branch.client.receive(out);
        next.push_back(std::move(branch));
      }
    }
    live.clear();
    for (auto& s : next) {
      bool merged = false;
      for (auto& q : live)
        if (q.client.same_position(s.client) &&
            std::abs(std::abs(q.server.state().reg.inner(s.server.state().reg)) - 1) <= 1e-12) {
          q.probability += s.probability;
          q.multiplicity += s.multiplicity;
          merged = true;
          break;
        }
      if (!merged) live.push_back(std::move(s));
    }
  }
  const PureState ref = reference_state(secret, p);
  std::vector<DelegationBranch> out;
  for (const auto& s : live) {
    PureState fin = apply_frame_inverse(s.server.state().reg, s.client.frame());
    const double f = std::norm(ref.inner(fin));
    out.push_back({std::move(fin), s.probability, f, s.multiplicity});
  }
  return out;
}

// Server-visible record of one dialogue path: every ANGLE index and OUTCOME bit in order.
using ServerViewKey = std::vector<int>;

// Exact distribution of the server view over all slot randomness and all outcomes.
inline std::map<ServerViewKey, double> server_view_distribution(const ClientSecret& secret) {
  Client probe(secret);
  const std::size_t slots = probe.slot_randomness().size();
  std::map<ServerViewKey, double> dist;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < slots; ++i) combos *= static_cast<std::size_t>(2 * secret.grid_n);
  for (std::size_t code = 0; code < combos; ++code) {
    ClientSecret s = secret;
    std::size_t rest = code;
    for (std::size_t i = 0; i < slots; ++i) {
      const int v = static_cast<int>(rest % (2 * secret.grid_n));
      rest /= 2 * secret.grid_n;
      s.forced[i] = {v / 2, v % 2};
    }
    const double weight = 1.0 / static_cast<double>(combos);
    struct Path {
      Client client;
      Server server;
      double probability;
      ServerViewKey key;
    };
    Client c(s);
    std::vector<Path> live{{c, Server(c.skeleton(), init_register(c.pattern().num_qubits,
                                                                   s.input_state(c.pattern().num_qubits)),
                                      s.grid_n),
                            weight, {}}};
    while (!live.front().client.done()) {
      std::vector<Path> next;
      for (const auto& path : live) {
        auto msg = path.client.next_message();
        for (int b = 0; b < 2; ++b) {
          Path br = path;
          Message out;
          try {
            out = br.server.server_step(msg, OutcomeChoice::force(b));
          } catch (const ImpossibleBranch&) {
            continue;
          }
          br.probability *= br.server.last_probability();
          if (msg && msg->kind == MessageKind::ANGLE) br.key.push_back(msg->theta_grid);
          br.key.push_back(out.outcome);
          br.client.receive(out);
          next.push_back(std::move(br));
        }
      }
      live = std::move(next);
    }
    for (const auto& path : live) dist[path.key] += path.probability;
  }
  return dist;
}

inline double total_variation(const std::map<ServerViewKey, double>& a, const std::map<ServerViewKey, double>& b) {
  double s = 0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    s += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) s += std::abs(v);
  return s / 2;
}

struct AuditReport {
  int grid_n = 8;
  double ancilla_trace_distance = 0;
  double angle_uniformity_deviation = 0;
  double angle_tvd = 0;
  double joint_tvd = 0;
  double step2_state_error = 0;
  double step2_gamma_spread = 0;
  double dressed_gamma_spread = 0;
  bool ancilla_ok = false;
  bool angles_ok = false;
  bool state_ok = false;
  bool passed() const { return ancilla_ok && angles_ok && state_ok; }

  nlohmann::json to_json() const {
    return {{"grid_n", grid_n},
            {"ancilla_trace_distance", ancilla_trace_distance},
            {"angle_uniformity_deviation", angle_uniformity_deviation},
            {"angle_tvd", angle_tvd},
            {"joint_tvd", joint_tvd},
            {"step2_state_error", step2_state_error},
            {"step2_gamma_spread", step2_gamma_spread},
            {"dressed_gamma_spread", dressed_gamma_spread},
            {"checks", {{"ancilla", ancilla_ok}, {"angles", angles_ok}, {"step2_state", state_ok}}},
            {"pass", passed()}};
  }
};

namespace detail {

// Register state after one hiding step, averaged over r and the outcome.
inline DensityMatrix averaged_hiding_output(const Entangler& e, const PureState& input, double gamma, bool sabotage) {
  CMatrix acc(2);
  for (int r = 0; r < (sabotage ? 1 : 2); ++r) {
    const KrausPair k = canonical_kraus_pair(e, AncillaSpec(gamma + r * kPi, 0), MeasBasis(0, 0));
    for (int s = 0; s < 2; ++s) {
      const PureState out = k.branch(s) * input;
      acc += DensityMatrix::from_pure(out).matrix() * cplx(sabotage ? 1.0 : 0.5);
    }
  }
  return DensityMatrix(acc);
}

// Marginal distribution of each ANGLE position in the server view.
inline std::vector<std::vector<double>> angle_marginals(const std::map<ServerViewKey, double>& dist,
                                                        const std::vector<std::size_t>& angle_positions, int grid_n) {
  std::vector<std::vector<double>> m(angle_positions.size(), std::vector<double>(grid_n, 0.0));
  for (const auto& [k, p] : dist)
    for (std::size_t i = 0; i < angle_positions.size(); ++i) m[i][k[angle_positions[i]]] += p;
  return m;
}

}  // namespace detail

// Exhaustive blindness audit of `tmpl` at grid_n. The pattern in `tmpl` (or its compiled
// circuit) fixes the slot structure; slot angles are swept over `assignments` (defaults to
// every grid value for each slot of a one- or two-slot pattern).
inline AuditReport audit_blindness(const ClientSecret& tmpl, int grid_n,
                                   std::vector<std::vector<int>> assignments = {}) {
  AuditReport rep;
  rep.grid_n = grid_n;
  if (grid_n < 4 || grid_n % 2) throw Error("audit_blindness: grid_n must be even and at least 4");
  ClientSecret base = tmpl;
  base.grid_n = grid_n;
  base.forced.clear();
  GatePattern pat = secret_pattern(base);
  std::vector<std::size_t> slot_blocks;
  for (std::size_t i = 0; i < pat.blocks.size(); ++i)
    if (is_rotation_slot(pat.blocks[i])) slot_blocks.push_back(i);

  // (a) ancilla payload averaged over r for every gamma on the grid.
  for (int k = 0; k < grid_n; ++k) {
    CMatrix acc(2);
    const int rs = tmpl.sabotage_r_zero ? 1 : 2;
    for (int r = 0; r < rs; ++r)
      acc += DensityMatrix::from_pure(ancilla_state(AncillaSpec(grid_angle(k, grid_n) + r * kPi, 0))).matrix() *
             cplx(1.0 / rs);
    rep.ancilla_trace_distance =
        std::max(rep.ancilla_trace_distance, trace_distance(DensityMatrix(acc), DensityMatrix::maximally_mixed(1)));
  }

  // (b) ANGLE marginals and joint server view across slot-angle assignments.
  if (assignments.empty()) {
    if (slot_blocks.size() == 1) {
      for (int k = 0; k < grid_n; ++k) assignments.push_back({k});
    } else if (slot_blocks.size() == 2) {
      for (int k = 0; k < grid_n; ++k) assignments.push_back({k, (3 * k + 1) % grid_n});
    } else {
      std::vector<int> a(slot_blocks.size());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<int>(i) % grid_n;
      assignments.push_back(a);
      for (auto& v : a) v = (v + grid_n / 2 + 1) % grid_n;
      assignments.push_back(a);
    }
  }
  std::optional<std::map<ServerViewKey, double>> first;
  for (const auto& asg : assignments) {
    ClientSecret s = base;
    GatePattern p = pat;
    for (std::size_t i = 0; i < slot_blocks.size() && i < asg.size(); ++i)
      p.blocks[slot_blocks[i]].theta_prime = grid_angle(asg[i], grid_n);
    s.pattern = p;
    const auto dist = server_view_distribution(s);
    // Positions of ANGLE entries in the key follow the step layout, which is fixed.
    std::vector<std::size_t> angle_pos;
    std::size_t pos = 0;
    for (const auto& b : p.blocks)
      for (const auto& st : b.steps) {
        if (st.role == StepRole::Angle) angle_pos.push_back(pos++);
        ++pos;
      }
    for (const auto& marg : detail::angle_marginals(dist, angle_pos, grid_n))
      for (double v : marg)
        rep.angle_uniformity_deviation = std::max(rep.angle_uniformity_deviation, std::abs(v - 1.0 / grid_n));
    if (!first) {
      first = dist;
      continue;
    }
    rep.joint_tvd = std::max(rep.joint_tvd, total_variation(*first, dist));
    std::map<ServerViewKey, double> fa, fb;
    for (const auto& [k, v] : *first) {
      ServerViewKey kk;
      for (auto i : angle_pos) kk.push_back(k[i]);
      fa[kk] += v;
    }
    for (const auto& [k, v] : dist) {
      ServerViewKey kk;
      for (auto i : angle_pos) kk.push_back(k[i]);
      fb[kk] += v;
    }
    rep.angle_tvd = std::max(rep.angle_tvd, total_variation(fa, fb));
  }

  // (c) register after the hiding step: I/2-ancilla dephasing in the X basis, for
  // inputs cos(t/2)|+> + e^{i f} sin(t/2)|->.
  const double h = 1 / std::sqrt(2.0);
  for (int ti = 0; ti <= 8; ++ti)
    for (double f : {0.0, 0.9, 2.3}) {
      const double t = ti * kPi / 8;
      const cplx a = std::cos(t / 2), b = std::polar(std::sin(t / 2), f);
      const PureState input(1, {h * (a + b), h * (a - b)});
      CMatrix expected_pm(2, {std::cos(t / 2) * std::cos(t / 2), 0, 0, std::sin(t / 2) * std::sin(t / 2)});
      const CMatrix to_pm = hadamard();
      std::optional<CMatrix> bare0, dressed0;
      for (int k = 0; k < grid_n; ++k) {
        const double g = grid_angle(k, grid_n);
        const DensityMatrix bare = detail::averaged_hiding_output(presets::cz_canon(), input, g, tmpl.sabotage_r_zero);
        const CMatrix in_pm = to_pm * bare.matrix() * to_pm;
        rep.step2_state_error = std::max(rep.step2_state_error, (in_pm - expected_pm).max_abs());
        if (!bare0) bare0 = bare.matrix();
        rep.step2_gamma_spread = std::max(rep.step2_gamma_spread, (bare.matrix() - *bare0).max_abs());
        const DensityMatrix dressed = detail::averaged_hiding_output(presets::hhcz(), input, g, tmpl.sabotage_r_zero);
        if (!dressed0) dressed0 = dressed.matrix();
        rep.dressed_gamma_spread = std::max(rep.dressed_gamma_spread, (dressed.matrix() - *dressed0).max_abs());
      }
    }

  rep.ancilla_ok = rep.ancilla_trace_distance <= 1e-12;
  rep.angles_ok = rep.angle_uniformity_deviation <= 1e-12 && rep.angle_tvd <= 1e-12 && rep.joint_tvd <= 1e-12;
  rep.state_ok = rep.step2_state_error <= 1e-10 && rep.step2_gamma_spread <= 1e-10 && rep.dressed_gamma_spread <= 1e-10;
  return rep;
}

}  // namespace adqc
