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
#include <cmath>
#include <optional>
#include <string>

#include "adqc/qla.hpp"

namespace adqc {

inline double normalize_angle(double a) {
  double r = std::fmod(a, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  if (r >= 2 * kPi) r -= 2 * kPi;
  return r;
}

struct AncillaSpec {
  double gamma = 0;
  double delta = 0;
  AncillaSpec() = default;
  AncillaSpec(double g, double d) : gamma(normalize_angle(g)), delta(normalize_angle(d)) {}
};

struct MeasBasis {
  double theta = 0;
  double phi = 0;
  MeasBasis() = default;
  MeasBasis(double t, double p) : theta(normalize_angle(t)), phi(normalize_angle(p)) {}
};

enum class Sign { Plus, Minus };

enum class Axis { X, Z };

// |+_{theta,phi}> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
// |-_{theta,phi}> = sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>
inline PureState param_state(Sign sign, double theta, double phi) {
  const cplx e = std::polar(1.0, phi);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  if (sign == Sign::Plus) return PureState(1, {c, e * s});
  return PureState(1, {s, -e * c});
}

inline PureState param_state(Sign sign, const MeasBasis& m) { return param_state(sign, m.theta, m.phi); }

inline PureState ancilla_state(const AncillaSpec& a) { return param_state(Sign::Plus, a.gamma, a.delta); }

inline CMatrix rotation(Axis axis, double theta) {
  const cplx c = std::cos(theta / 2);
  const cplx s = cplx(0, -std::sin(theta / 2));
  if (axis == Axis::X) return CMatrix(2, {c, s, s, c});
  return CMatrix(2, {c + s, 0, 0, c - s});
}

inline CMatrix rx(double theta) { return rotation(Axis::X, theta); }
inline CMatrix rz(double theta) { return rotation(Axis::Z, theta); }

struct CartanParams {
  double alpha_x = 0;
  double alpha_y = 0;
  double alpha_z = 0;

  bool in_weyl_chamber(double tol = 1e-12) const {
    return -tol <= alpha_z && alpha_z <= alpha_y + tol && alpha_y <= alpha_x + tol && alpha_x <= kPi / 4 + tol;
  }
};

struct LocalFrame {
  CMatrix v_s = CMatrix::identity(2);
  CMatrix v_a = CMatrix::identity(2);
  CMatrix w_s = CMatrix::identity(2);
  CMatrix w_a = CMatrix::identity(2);

  bool is_valid(double tol = 1e-12) const {
    for (const CMatrix* m : {&v_s, &v_a, &w_s, &w_a})
      if (m->dim() != 2 || !is_unitary(*m, tol)) return false;
    return true;
  }
};

struct Entangler {
  CartanParams cartan;
  LocalFrame frame;
  std::string label = "custom";
};

// exp(-i (ax XX + ay YY + az ZZ)) for any real coefficients, ancilla first.
inline CMatrix interaction_exponential(const CartanParams& p) {
  auto term = [](double a, const CMatrix& pp) {
    return CMatrix::identity(4) * cplx(std::cos(a)) + pp * cplx(0, -std::sin(a));
  };
  return term(p.alpha_x, tensor(pauli::X(), pauli::X())) * term(p.alpha_y, tensor(pauli::Y(), pauli::Y())) *
         term(p.alpha_z, tensor(pauli::Z(), pauli::Z()));
}

inline CMatrix weyl_interaction(const CartanParams& p) {
  if (!p.in_weyl_chamber()) throw Error("weyl_interaction: parameters outside the Weyl chamber");
  return interaction_exponential(p);
}

inline CMatrix assemble_entangler(const Entangler& e) {
  if (!e.frame.is_valid()) throw Error("assemble_entangler: frame factor is not unitary");
  const auto& f = e.frame;
  return tensor(f.w_a, f.w_s) * weyl_interaction(e.cartan) * tensor(f.v_a, f.v_s);
}

namespace presets {

inline constexpr const char* kCzCanon = "CZ_CANON";
inline constexpr const char* kCzCanonH = "CZ_CANON_H";
inline constexpr const char* kHHCZ = "HHCZ";
inline constexpr const char* kSwapCz = "SWAPCZ";

// Bare canonical CZ-class interaction.
inline Entangler cz_canon() { return {{kPi / 4, 0, 0}, {}, kCzCanon}; }

// Canonical interaction followed by H on the system.
inline Entangler cz_canon_h() {
  Entangler e{{kPi / 4, 0, 0}, {}, kCzCanonH};
  e.frame.w_s = hadamard();
  return e;
}

// Reassembles to (H x H) CZ exactly.
inline Entangler hhcz() {
  Entangler e{{kPi / 4, 0, 0}, {}, kHHCZ};
  e.frame.v_s = hadamard();
  e.frame.v_a = hadamard();
  e.frame.w_s = rx(-kPi / 2);
  e.frame.w_a = rx(-kPi / 2) * std::polar(1.0, -kPi / 4);
  return e;
}

// Reassembles to SWAP CZ exactly.
inline Entangler swapcz() {
  Entangler e{{kPi / 4, kPi / 4, 0}, {}, kSwapCz};
  e.frame.w_a = rz(kPi / 2);
  e.frame.w_s = rz(kPi / 2) * cplx(0, 1);
  return e;
}

inline Entangler by_label(const std::string& label) {
  if (label == kCzCanon) return cz_canon();
  if (label == kCzCanonH) return cz_canon_h();
  if (label == kHHCZ) return hhcz();
  if (label == kSwapCz) return swapcz();
  throw Error("unknown entangler preset: " + label);
}

}  // namespace presets

struct BranchForm {
  double f = 0;
  double g = 0;
  int n_parity = 0;
};

struct KrausPair {
  CMatrix k_plus = CMatrix(2);
  CMatrix k_minus = CMatrix(2);
  double p_plus = 0;
  double p_minus = 0;
  std::optional<std::array<BranchForm, 2>> branch_form;

  const CMatrix& branch(int s) const { return s == 0 ? k_plus : k_minus; }

  double completeness_error() const {
    return (k_plus.adjoint() * k_plus + k_minus.adjoint() * k_minus - CMatrix::identity(2)).max_abs();
  }
};

// Contract the ancilla factor of a 4x4 ancilla-first operator: <bra| E |ket>.
inline CMatrix contract_ancilla(const CMatrix& e, const PureState& bra, const PureState& ket) {
  CMatrix k(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      cplx s = 0;
      for (std::size_t ao = 0; ao < 2; ++ao)
        for (std::size_t ai = 0; ai < 2; ++ai) s += std::conj(bra[ao]) * e(ao * 2 + i, ai * 2 + j) * ket[ai];
      k(i, j) = s;
    }
  return k;
}

namespace detail {

// Branch form f I + i (-1)^n g X, read off after removing the phase of the I component.
inline std::optional<BranchForm> read_branch_form(const CMatrix& k, double tol) {
  const auto c = pauli_components(k);
  if (std::abs(c[2]) > tol || std::abs(c[3]) > tol) return std::nullopt;
  BranchForm b{std::abs(c[0]), std::abs(c[1]), 0};
  cplx ref = std::abs(c[0]) > tol ? c[0] / std::abs(c[0]) : cplx(1);
  const cplx x = c[1] / ref;
  if (b.g > tol) {
    if (std::abs(x.real()) > tol * std::max(1.0, b.g) && b.f > tol) return std::nullopt;
    b.n_parity = x.imag() < 0 ? 1 : 0;
  }
  return b;
}

inline KrausPair finish_pair(CMatrix kp, CMatrix km) {
  KrausPair out;
  out.p_plus = (kp.adjoint() * kp).trace().real() / 2;
  out.p_minus = (km.adjoint() * km).trace().real() / 2;
  out.k_plus = std::move(kp);
  out.k_minus = std::move(km);
  auto bp = read_branch_form(out.k_plus, 1e-10);
  auto bm = read_branch_form(out.k_minus, 1e-10);
  if (bp && bm) out.branch_form = std::array<BranchForm, 2>{*bp, *bm};
  return out;
}

}  // namespace detail

// Kraus pair for physically prepared ancilla a and measurement basis m.
inline KrausPair kraus_pair(const Entangler& e, const AncillaSpec& a, const MeasBasis& m) {
  const CMatrix u = assemble_entangler(e);
  const PureState ket = ancilla_state(a);
  return detail::finish_pair(contract_ancilla(u, param_state(Sign::Plus, m), ket),
                             contract_ancilla(u, param_state(Sign::Minus, m), ket));
}

// Kraus pair with a and m given in the canonical frame of the bare interaction:
// the ancilla is prepared as V'_a^dag |+_{gamma,delta}> and measured in W'_a |+-_{theta,phi}>.
// Equals W_s K V_s with K the bare Kraus pair.
inline KrausPair canonical_kraus_pair(const Entangler& e, const AncillaSpec& a, const MeasBasis& m) {
  const CMatrix d = weyl_interaction(e.cartan);
  const PureState ket = ancilla_state(a);
  const CMatrix kp = e.frame.w_s * contract_ancilla(d, param_state(Sign::Plus, m), ket) * e.frame.v_s;
  const CMatrix km = e.frame.w_s * contract_ancilla(d, param_state(Sign::Minus, m), ket) * e.frame.v_s;
  return detail::finish_pair(kp, km);
}

inline PureState physical_ancilla(const Entangler& first, const AncillaSpec& canonical) {
  return first.frame.v_a.adjoint() * ancilla_state(canonical);
}

inline PureState physical_basis_state(const Entangler& last, Sign sign, const MeasBasis& canonical) {
  return last.frame.w_a * param_state(sign, canonical);
}

enum class Pauli { I, X, Y, Z };

inline CMatrix pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::I: return pauli::I();
    case Pauli::X: return pauli::X();
    case Pauli::Y: return pauli::Y();
    case Pauli::Z: return pauli::Z();
  }
  return pauli::I();
}

inline const char* pauli_name(Pauli p) {
  static constexpr const char* names[] = {"I", "X", "Y", "Z"};
  return names[static_cast<int>(p)];
}

struct BranchReport {
  bool unitary_plus = false;
  bool unitary_minus = false;
  bool one_step_correctable = false;
  std::optional<Pauli> correction;
  cplx phase = 1;
};

inline bool proportional_to_unitary(const CMatrix& k, double tol) {
  const CMatrix kk = k.adjoint() * k;
  const cplx scale = kk.trace() / static_cast<double>(k.dim());
  return (kk - CMatrix::identity(k.dim()) * scale).max_abs() <= tol;
}

inline BranchReport branch_analysis(const KrausPair& k, double tol = kDefaultTol) {
  BranchReport r;
  r.unitary_plus = proportional_to_unitary(k.k_plus, tol);
  r.unitary_minus = proportional_to_unitary(k.k_minus, tol);
  for (Pauli p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
    const CMatrix pk = pauli_matrix(p) * k.k_plus;
    if (k.k_plus.max_abs() <= tol && k.k_minus.max_abs() <= tol) break;
    const cplx c = alignment_phase(k.k_minus, pk);
    if (c == cplx{}) continue;
    if ((k.k_minus - c * pk).max_abs() <= tol) {
      r.one_step_correctable = true;
      r.correction = p;
      r.phase = c;
      break;
    }
  }
  return r;
}

}  // namespace adqc
