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

#include <cstdint>
#include <string>
#include <vector>

#include "adqc/core.hpp"

namespace adqc {

// Unsigned Pauli string stored as X and Z bits. Phases are not tracked.
struct PauliString {
  std::vector<uint8_t> xs;
  std::vector<uint8_t> zs;

  PauliString() = default;
  explicit PauliString(std::size_t n) : xs(n), zs(n) {}

  static PauliString from_str(const std::string& text) {
    PauliString p(text.size());
    for (std::size_t q = 0; q < text.size(); ++q) {
      switch (text[q]) {
        case 'I': case '_': break;
        case 'X': p.xs[q] = 1; break;
        case 'Z': p.zs[q] = 1; break;
        case 'Y': p.xs[q] = p.zs[q] = 1; break;
        default: throw Error("PauliString: bad character");
      }
    }
    return p;
  }

  std::size_t num_qubits() const { return xs.size(); }

  Pauli at(std::size_t q) const {
    if (xs[q] && zs[q]) return Pauli::Y;
    if (xs[q]) return Pauli::X;
    if (zs[q]) return Pauli::Z;
    return Pauli::I;
  }

  void set(std::size_t q, Pauli p) {
    xs[q] = p == Pauli::X || p == Pauli::Y;
    zs[q] = p == Pauli::Z || p == Pauli::Y;
  }

  bool is_identity() const {
    for (std::size_t q = 0; q < xs.size(); ++q)
      if (xs[q] || zs[q]) return false;
    return true;
  }

  std::string str() const {
    std::string out;
    for (std::size_t q = 0; q < xs.size(); ++q) out += pauli_name(at(q));
    return out;
  }

  PauliString& operator*=(const PauliString& o) {
    if (o.num_qubits() != num_qubits()) throw Error("PauliString: size mismatch");
    for (std::size_t q = 0; q < xs.size(); ++q) {
      xs[q] ^= o.xs[q];
      zs[q] ^= o.zs[q];
    }
    return *this;
  }
  friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }
  friend bool operator==(const PauliString&, const PauliString&) = default;

  void conjugate_h(std::size_t q) { std::swap(xs[q], zs[q]); }

  void conjugate_cz(std::size_t a, std::size_t b) {
    zs[a] ^= xs[b];
    zs[b] ^= xs[a];
  }

  bool anticommutes_with(std::size_t q, Axis axis) const { return axis == Axis::Z ? xs[q] != 0 : zs[q] != 0; }

  // X^x Z^z on each qubit.
  CMatrix matrix() const {
    CMatrix out = CMatrix::identity(1);
    for (std::size_t q = 0; q < xs.size(); ++q) {
      CMatrix f = pauli::I();
      if (zs[q]) f = pauli::Z();
      if (xs[q]) f = pauli::X() * f;
      out = tensor(out, f);
    }
    return out;
  }

  // Embeds a string on `qubits` of a larger register.
  PauliString embedded(const std::vector<std::size_t>& qubits, std::size_t n) const {
    PauliString out(n);
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      out.xs[qubits[i]] = xs[i];
      out.zs[qubits[i]] = zs[i];
    }
    return out;
  }
};

// Applies the inverse of X^x Z^z, i.e. Z^z X^x, qubit by qubit.
inline PureState apply_frame_inverse(const PureState& s, const PauliString& frame) {
  PureState out = s;
  for (std::size_t q = 0; q < frame.num_qubits(); ++q) {
    const std::size_t t[] = {q};
    if (frame.xs[q]) out = apply_on(out, pauli::X(), t);
    if (frame.zs[q]) out = apply_on(out, pauli::Z(), t);
  }
  return out;
}

inline PureState apply_frame(const PureState& s, const PauliString& frame) {
  PureState out = s;
  for (std::size_t q = 0; q < frame.num_qubits(); ++q) {
    const std::size_t t[] = {q};
    if (frame.zs[q]) out = apply_on(out, pauli::Z(), t);
    if (frame.xs[q]) out = apply_on(out, pauli::X(), t);
  }
  return out;
}

// Finds the Pauli string p on dim-qubit operator m with m = c * p.matrix(), |c| = 1.
inline std::optional<PauliString> match_pauli(const CMatrix& m, double tol) {
  const std::size_t n = static_cast<std::size_t>(m.num_qubits());
  const std::size_t count = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < count; ++code) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) {
      p.xs[q] = (code >> (2 * q)) & 1;
      p.zs[q] = (code >> (2 * q + 1)) & 1;
    }
    if (equal_up_to_global_phase(m, p.matrix(), tol)) return p;
  }
  return std::nullopt;
}

}  // namespace adqc
