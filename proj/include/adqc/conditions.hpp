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
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adqc/core.hpp"

namespace adqc {

struct ParamPoint {
  double alpha_x = kPi / 4;
  AncillaSpec ancilla;
  MeasBasis basis;
};

enum class CaseId { T1_IDENTITY, T1_XROT, T1_X_A, T1_X_B, T2_GENERAL_DELTA0, T2_MATCHED, NONE };

inline const char* case_name(CaseId c) {
  static constexpr const char* names[] = {"T1_IDENTITY",       "T1_XROT",    "T1_X_A", "T1_X_B",
                                          "T2_GENERAL_DELTA0", "T2_MATCHED", "NONE"};
  return names[static_cast<int>(c)];
}

struct TableCase {
  CaseId case_id = CaseId::NONE;
  std::string kraus_description;
};

class ClassificationError : public Error {
 public:
  using Error::Error;
};

inline double constraint_residual(const ParamPoint& p) {
  const double g = p.ancilla.gamma, d = p.ancilla.delta, t = p.basis.theta, f = p.basis.phi;
  return std::sin(t) * std::cos(g) * std::sin(f) - std::cos(t) * std::sin(g) * std::sin(d);
}

struct FgCoefficients {
  double f_plus = 0;
  double f_minus = 0;
  double g_plus = 0;
  double g_minus = 0;
};

inline FgCoefficients fg_coefficients(const ParamPoint& p) {
  if (std::abs(constraint_residual(p)) > 1e-9) throw Error("fg_coefficients: constraint not satisfied");
  const double g = p.ancilla.gamma, d = p.ancilla.delta, t = p.basis.theta, f = p.basis.phi;
  const double cc = std::cos(g) * std::cos(t);
  const double s1 = std::sin(g) * std::sin(t) * std::cos(d - f);
  const double s2 = std::sin(g) * std::sin(t) * std::cos(d + f);
  auto root = [](double v) { return std::sqrt(std::max(0.0, v)); };
  const double cf = std::cos(p.alpha_x) / std::sqrt(2.0);
  const double cg = std::sin(p.alpha_x) / std::sqrt(2.0);
  return {cf * root(1 + cc + s1), cf * root(1 - cc - s1), cg * root(1 - cc + s2), cg * root(1 + cc - s2)};
}

inline double required_alpha_x(const AncillaSpec& a, const MeasBasis& m) {
  const double g = a.gamma, d = a.delta, t = m.theta, f = m.phi;
  const double u = std::cos(g) * std::cos(t) + std::sin(g) * std::sin(t) * std::cos(d - f);
  const double v = std::cos(g) * std::cos(t) - std::sin(g) * std::sin(t) * std::cos(d + f);
  const double num = std::max(0.0, 1 - u * u);
  const double den = 1 - v * v;
  if (den <= 1e-12) throw Error("required_alpha_x: degenerate denominator");
  return std::atan(std::pow(num / den, 0.25));
}

namespace detail {

inline bool near_angle(double a, double b, double tol) {
  const double d = normalize_angle(a - b);
  return d <= tol || 2 * kPi - d <= tol;
}

// Equal up to a positive scale and a global phase.
inline bool same_ray(const CMatrix& a, const CMatrix& b, double tol) {
  const double na = a.frobenius_norm(), nb = b.frobenius_norm();
  if (na <= tol || nb <= tol) return na <= tol && nb <= tol;
  return equal_up_to_global_phase(a * cplx(1 / na), b * cplx(1 / nb), tol);
}

inline CMatrix xpow(int s) { return s ? pauli::X() : pauli::I(); }

}  // namespace detail

// Symbolic Kraus forms of each table row, as realized by the bare interaction.
inline std::array<CMatrix, 2> table_row_kraus(CaseId id, const ParamPoint& p) {
  const double g = p.ancilla.gamma, d = p.ancilla.delta, t = p.basis.theta;
  const cplx i(0, 1);
  const CMatrix I = pauli::I(), X = pauli::X();
  switch (id) {
    case CaseId::T1_IDENTITY: return {I, X};
    case CaseId::T1_XROT: return {rx(t), X * rx(t)};
    case CaseId::T1_X_A: {
      const CMatrix r = rx(std::cos(d) * kPi / 2);
      return {r, r};
    }
    case CaseId::T1_X_B: return {rx(kPi / 2), X * rx(kPi / 2)};
    case CaseId::T2_GENERAL_DELTA0:
      return {I * cplx(std::cos((t - g) / 2)) - X * (i * std::sin((t + g) / 2)),
              I * cplx(std::sin((t - g) / 2)) + X * (i * std::cos((t + g) / 2))};
    case CaseId::T2_MATCHED:
      return {I - X * (i * std::sin(g) * std::cos(d)), X * (i * std::sin(d) - std::cos(g) * std::cos(d))};
    case CaseId::NONE: break;
  }
  throw Error("table_row_kraus: no row for NONE");
}

inline const char* table_row_description(CaseId id) {
  switch (id) {
    case CaseId::T1_IDENTITY: return "X^s I";
    case CaseId::T1_XROT: return "X^s Rx(theta)";
    case CaseId::T1_X_A: return "Rx(cos(delta) pi/2)";
    case CaseId::T1_X_B: return "X^s Rx(pi/2)";
    case CaseId::T2_GENERAL_DELTA0:
      return "K+ = cos((theta-gamma)/2) I - i sin((theta+gamma)/2) X; "
             "K- = sin((theta-gamma)/2) I + i cos((theta+gamma)/2) X";
    case CaseId::T2_MATCHED: return "K+ = I - i sin(gamma)cos(delta) X; K- = (i sin(delta) - cos(gamma)cos(delta)) X";
    case CaseId::NONE: return "none";
  }
  return "none";
}

inline bool matches_row_pattern(CaseId id, const ParamPoint& p, double tol) {
  using detail::near_angle;
  const double g = p.ancilla.gamma, d = p.ancilla.delta, t = p.basis.theta, f = p.basis.phi;
  switch (id) {
    case CaseId::T1_IDENTITY: return near_angle(g, 0, tol) && near_angle(t, 0, tol);
    case CaseId::T1_XROT: return near_angle(g, 0, tol) && near_angle(f, 0, tol);
    case CaseId::T1_X_A:
      return near_angle(g, kPi / 2, tol) && near_angle(t, 0, tol) && std::abs(constraint_residual(p)) <= tol;
    case CaseId::T1_X_B: return near_angle(t, kPi / 2, tol) && near_angle(f, 0, tol);
    case CaseId::T2_GENERAL_DELTA0: return near_angle(d, 0, tol) && near_angle(f, 0, tol);
    case CaseId::T2_MATCHED: return near_angle(t, g, tol) && near_angle(f, d, tol);
    case CaseId::NONE: return false;
  }
  return false;
}

inline constexpr std::array<CaseId, 6> kTableRows = {CaseId::T1_IDENTITY, CaseId::T1_XROT,
                                                     CaseId::T1_X_A,      CaseId::T1_X_B,
                                                     CaseId::T2_GENERAL_DELTA0, CaseId::T2_MATCHED};

inline TableCase classify_parameters(const ParamPoint& p, double tol = 1e-9) {
  if (std::abs(p.alpha_x - kPi / 4) > tol) return {};
  for (CaseId id : kTableRows) {
    if (!matches_row_pattern(id, p, tol)) continue;
    const KrausPair k = kraus_pair(presets::cz_canon(), p.ancilla, p.basis);
    const auto expected = table_row_kraus(id, p);
    for (int s = 0; s < 2; ++s) {
      if (k.branch(s).frobenius_norm() <= 1e-12) continue;
      if (!detail::same_ray(k.branch(s), expected[s], std::max(tol, 1e-10) * 10))
        throw ClassificationError(std::string("classify_parameters: computed Kraus disagrees with row ") +
                                  case_name(id));
    }
    return {id, table_row_description(id)};
  }
  return {};
}

// v*w has vanishing Y,Z components (a I + i b X form) or vanishing I,X components (a Y + b Z form).
inline bool vw_form_check(const CMatrix& v, const CMatrix& w, double tol = kDefaultTol) {
  const auto c = pauli_components(v * w);
  const bool ix = std::abs(c[2]) <= tol && std::abs(c[3]) <= tol;
  const bool yz = std::abs(c[0]) <= tol && std::abs(c[1]) <= tol;
  return ix || yz;
}

struct LHidingResult {
  double residual = 0;
  int sign = +1;
};

inline LHidingResult l_hiding(const CMatrix& v, const CMatrix& w, double theta, double gamma, int s) {
  const double sg = s ? -1.0 : 1.0;
  const CMatrix lhs = w * rx(theta) * v * w * rx(sg * gamma) * v;
  LHidingResult best{1e300, +1};
  for (int sign : {+1, -1}) {
    const CMatrix rhs = w * rx(theta + sign * sg * gamma) * v * w * v;
    const double r = phase_distance(lhs, rhs);
    if (r < best.residual) best = {r, sign};
  }
  return best;
}

inline double l_hiding_residual(const CMatrix& v, const CMatrix& w, double theta, double gamma, int s) {
  return l_hiding(v, w, theta, gamma, s).residual;
}

// Angle a with k proportional to Rx(a) up to phase, if k has that form.
inline std::optional<double> rx_angle_of(const CMatrix& k, double tol = 1e-9) {
  const auto c = pauli_components(k);
  if (std::abs(c[0]) <= tol && std::abs(c[1]) <= tol) return std::nullopt;
  const cplx ph = std::abs(c[0]) >= std::abs(c[1]) ? c[0] / std::abs(c[0]) : cplx(0, -1) * c[1] / std::abs(c[1]);
  const double a = 2 * std::atan2(-(c[1] / ph).imag(), (c[0] / ph).real());
  if (!equal_up_to_global_phase(normalize_operator(k), rx(a), tol)) return std::nullopt;
  return a;
}

// Branches of the form Rx(a) and X Rx(+-a), up to phase and scale.
inline bool is_hiding_pair(const KrausPair& k, double tol = 1e-9) {
  const auto a = rx_angle_of(k.k_plus, tol);
  if (!a || !rx_angle_of(pauli::X() * k.k_minus, tol)) return false;
  for (double s : {1.0, -1.0})
    if (equal_up_to_global_phase(normalize_operator(k.k_minus), pauli::X() * rx(s * *a), tol)) return true;
  return false;
}

struct SweepReport {
  int points = 0;
  int skipped_degenerate = 0;
  int skipped_outside_chamber = 0;
  int matched = 0;
  int unitary = 0;
  int hiding = 0;
  int unitary_agree = 0;
  int hiding_agree = 0;
};

// Random constraint-satisfying points; every other point uses the alpha_x the relation requires.
inline SweepReport relation_sweep(int points, uint64_t seed, double tol = 1e-9) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  std::uniform_real_distribution<double> ax_dist(0, kPi / 4);
  SweepReport r;
  while (r.points < points) {
    const double g = u(rng), d = u(rng), t = u(rng);
    const double sf = std::cos(t) * std::sin(g) * std::sin(d) / (std::sin(t) * std::cos(g));
    if (!std::isfinite(sf) || std::abs(sf) > 1) continue;
    const double f = (rng() & 1) ? std::asin(sf) : kPi - std::asin(sf);
    const AncillaSpec a(g, d);
    const MeasBasis m(t, f);
    double req = 0;
    try {
      req = required_alpha_x(a, m);
    } catch (const Error&) {
      ++r.skipped_degenerate;
      continue;
    }
    if (req > kPi / 4) {
      ++r.skipped_outside_chamber;
      continue;
    }
    const double ax = r.points % 2 ? req : ax_dist(rng);
    const KrausPair k = kraus_pair(Entangler{{ax, 0, 0}, {}, "sweep"}, a, m);
    const bool matched = std::abs(ax - req) <= tol;
    const bool unitary = proportional_to_unitary(k.k_plus, tol) && proportional_to_unitary(k.k_minus, tol);
    const bool hiding = is_hiding_pair(k, tol);
    r.matched += matched;
    r.unitary += unitary;
    r.hiding += hiding;
    r.unitary_agree += unitary == matched;
    r.hiding_agree += hiding == matched;
    ++r.points;
  }
  return r;
}

}  // namespace adqc
