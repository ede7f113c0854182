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

// Dense complex linear algebra for 1-5 qubits.
//
// Qubit ordering: qubit 0 is the leftmost tensor factor, i.e. the most
// significant bit of an amplitude index. Every other header relies on this.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace adqc {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDefaultTol = 1e-10;
inline constexpr std::size_t kMaxDim = 32;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_valid_dim(std::size_t d) {
  return d >= 1 && d <= kMaxDim && (d & (d - 1)) == 0;
}

inline int qubits_for_dim(std::size_t d) {
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  return n;
}

// Square complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() : CMatrix(1) {}
  explicit CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (!is_valid_dim(dim)) throw Error("CMatrix: dimension must be a power of two <= 32");
  }
  CMatrix(std::size_t dim, std::initializer_list<cplx> entries) : CMatrix(dim) {
    if (entries.size() != dim * dim) throw Error("CMatrix: wrong entry count");
    std::copy(entries.begin(), entries.end(), data_.begin());
  }

  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }
  int num_qubits() const { return qubits_for_dim(dim_); }
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  std::span<const cplx> entries() const { return data_; }

  CMatrix adjoint() const {
    CMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  cplx trace() const {
    cplx t = 0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  CMatrix& operator+=(const CMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    a.require_same(b);
    CMatrix out(a.dim_);
    for (std::size_t r = 0; r < a.dim_; ++r)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const cplx v = a(r, k);
        if (v == cplx{}) continue;
        for (std::size_t c = 0; c < a.dim_; ++c) out(r, c) += v * b(k, c);
      }
    return out;
  }
  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  void require_same(const CMatrix& o) const {
    if (o.dim_ != dim_) throw Error("CMatrix: dimension mismatch");
  }

  std::size_t dim_;
  std::vector<cplx> data_;
};

namespace pauli {
inline CMatrix I() { return CMatrix::identity(2); }
inline CMatrix X() { return CMatrix(2, {0, 1, 1, 0}); }
inline CMatrix Y() { return CMatrix(2, {0, cplx(0, -1), cplx(0, 1), 0}); }
inline CMatrix Z() { return CMatrix(2, {1, 0, 0, -1}); }
}  // namespace pauli

inline CMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return CMatrix(2, {h, h, h, -h});
}

inline CMatrix cz_gate() { return CMatrix(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}); }

inline CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  if (a.dim() * b.dim() > kMaxDim) throw Error("tensor: product dimension exceeds 32");
  CMatrix out(a.dim() * b.dim());
  for (std::size_t ar = 0; ar < a.dim(); ++ar)
    for (std::size_t ac = 0; ac < a.dim(); ++ac) {
      const cplx v = a(ar, ac);
      for (std::size_t br = 0; br < b.dim(); ++br)
        for (std::size_t bc = 0; bc < b.dim(); ++bc)
          out(ar * b.dim() + br, ac * b.dim() + bc) = v * b(br, bc);
    }
  return out;
}

inline bool is_unitary(const CMatrix& u, double tol = kDefaultTol) {
  return (u.adjoint() * u - CMatrix::identity(u.dim())).max_abs() <= tol;
}

// Phase c (|c| = 1) aligning b onto a, taken from the largest-magnitude entry of b.
// Returns nullopt-like zero when b vanishes.
inline cplx alignment_phase(const CMatrix& a, const CMatrix& b) {
  std::size_t best = 0;
  double mag = -1;
  const auto be = b.entries();
  for (std::size_t i = 0; i < be.size(); ++i)
    if (std::abs(be[i]) > mag) {
      mag = std::abs(be[i]);
      best = i;
    }
  if (mag <= 0) return 0.0;
  const cplx ratio = a.entries()[best] / be[best];
  const double r = std::abs(ratio);
  if (r == 0) return 0.0;
  return ratio / r;
}

// max-norm distance between a and c*b for the alignment phase c.
inline double phase_distance(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != b.dim()) throw Error("phase_distance: dimension mismatch");
  const cplx c = alignment_phase(a, b);
  if (c == cplx{}) return a.max_abs() == 0 && b.max_abs() == 0 ? 0.0 : std::max(a.max_abs(), b.max_abs());
  return (a - c * b).max_abs();
}

inline bool equal_up_to_global_phase(const CMatrix& a, const CMatrix& b, double tol = kDefaultTol) {
  if (a.dim() != b.dim()) throw Error("equal_up_to_global_phase: dimension mismatch");
  if (b.max_abs() == 0) return a.max_abs() <= tol;
  const cplx c = alignment_phase(a, b);
  if (c == cplx{}) return false;
  return (a - c * b).max_abs() <= tol;
}

// Rescale to unit operator 2-norm (largest singular value).
inline CMatrix normalize_operator(const CMatrix& m) {
  Eigen::MatrixXcd e(m.dim(), m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) e(r, c) = m(r, c);
  const double s = Eigen::JacobiSVD<Eigen::MatrixXcd>(e).singularValues()(0);
  if (s == 0) return m;
  return m * cplx(1.0 / s);
}

// Coefficients (c_I, c_X, c_Y, c_Z) with m = sum c_P P.
inline std::array<cplx, 4> pauli_components(const CMatrix& m) {
  if (m.dim() != 2) throw Error("pauli_components: expects a 2x2 matrix");
  return {(m(0, 0) + m(1, 1)) / 2.0, (m(0, 1) + m(1, 0)) / 2.0,
          (m(1, 0) - m(0, 1)) / cplx(0, 2), (m(0, 0) - m(1, 1)) / 2.0};
}

class PureState {
 public:
  PureState() : PureState(1) {}
  explicit PureState(int num_qubits) : n_(num_qubits), amps_(std::size_t{1} << num_qubits) {
    if (num_qubits < 0 || num_qubits > 5) throw Error("PureState: 0..5 qubits supported");
    amps_[0] = 1.0;
  }
  PureState(int num_qubits, std::vector<cplx> amps) : n_(num_qubits), amps_(std::move(amps)) {
    if (amps_.size() != (std::size_t{1} << num_qubits)) throw Error("PureState: amplitude count must be 2^n");
  }

  static PureState basis(int num_qubits, std::size_t index) {
    PureState s(num_qubits);
    s.amps_[0] = 0;
    s.amps_.at(index) = 1;
    return s;
  }

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }
  PureState& normalize() {
    const double nrm = norm();
    if (nrm == 0) throw Error("PureState: cannot normalize the zero vector");
    for (auto& a : amps_) a /= nrm;
    return *this;
  }

  cplx inner(const PureState& o) const {
    if (o.dim() != dim()) throw Error("PureState: dimension mismatch");
    cplx s = 0;
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * o.amps_[i];
    return s;
  }

  friend PureState operator*(const CMatrix& m, const PureState& s) {
    if (m.dim() != s.dim()) throw Error("apply: dimension mismatch");
    std::vector<cplx> out(s.dim());
    for (std::size_t r = 0; r < s.dim(); ++r)
      for (std::size_t c = 0; c < s.dim(); ++c) out[r] += m(r, c) * s.amps_[c];
    return PureState(s.n_, std::move(out));
  }

 private:
  int n_;
  std::vector<cplx> amps_;
};

inline PureState tensor(const PureState& a, const PureState& b) {
  std::vector<cplx> out;
  out.reserve(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out.push_back(a[i] * b[j]);
  return PureState(a.num_qubits() + b.num_qubits(), std::move(out));
}

// 1 - |<a|b>| for normalized inputs; zero iff equal up to global phase.
inline double state_phase_distance(const PureState& a, const PureState& b) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(a.inner(b))));
}

inline double fidelity(const PureState& a, const PureState& b) { return std::norm(a.inner(b)); }

// Apply a 2^k x 2^k operator to the listed qubits (first listed = most significant).
inline PureState apply_on(const PureState& s, const CMatrix& op, std::span<const std::size_t> targets) {
  const int n = s.num_qubits();
  const std::size_t k = targets.size();
  if (op.dim() != (std::size_t{1} << k)) throw Error("apply_on: operator size does not match target count");
  for (std::size_t i = 0; i < k; ++i) {
    if (targets[i] >= static_cast<std::size_t>(n)) throw Error("apply_on: target out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j]) throw Error("apply_on: duplicate target");
  }
  std::vector<std::size_t> shift(k);
  std::size_t mask = 0;
  for (std::size_t i = 0; i < k; ++i) {
    shift[i] = static_cast<std::size_t>(n - 1) - targets[i];
    mask |= std::size_t{1} << shift[i];
  }
  std::vector<cplx> out(s.dim());
  const std::size_t sub = std::size_t{1} << k;
  for (std::size_t base = 0; base < s.dim(); ++base) {
    if (base & mask) continue;
    for (std::size_t c = 0; c < sub; ++c) {
      std::size_t ci = base;
      for (std::size_t i = 0; i < k; ++i)
        if ((c >> (k - 1 - i)) & 1) ci |= std::size_t{1} << shift[i];
      const cplx amp = s[ci];
      if (amp == cplx{}) continue;
      for (std::size_t r = 0; r < sub; ++r) {
        std::size_t ri = base;
        for (std::size_t i = 0; i < k; ++i)
          if ((r >> (k - 1 - i)) & 1) ri |= std::size_t{1} << shift[i];
        out[ri] += op(r, c) * amp;
      }
    }
  }
  return PureState(n, std::move(out));
}

inline PureState apply_on(const PureState& s, const CMatrix& op, std::initializer_list<std::size_t> targets) {
  const std::vector<std::size_t> t(targets);
  return apply_on(s, op, std::span<const std::size_t>(t));
}

// Embed an operator on `targets` into the full n-qubit space.
inline CMatrix embed(const CMatrix& op, std::span<const std::size_t> targets, int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  CMatrix out(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const PureState col = apply_on(PureState::basis(num_qubits, c), op, targets);
    for (std::size_t r = 0; r < dim; ++r) out(r, c) = col[r];
  }
  return out;
}

class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {}
  static DensityMatrix from_pure(const PureState& s) {
    CMatrix m(s.dim());
    for (std::size_t r = 0; r < s.dim(); ++r)
      for (std::size_t c = 0; c < s.dim(); ++c) m(r, c) = s[r] * std::conj(s[c]);
    return DensityMatrix(std::move(m));
  }
  static DensityMatrix maximally_mixed(int num_qubits) {
    const std::size_t d = std::size_t{1} << num_qubits;
    return DensityMatrix(CMatrix::identity(d) * cplx(1.0 / static_cast<double>(d)));
  }

  int num_qubits() const { return rho_.num_qubits(); }
  const CMatrix& matrix() const { return rho_; }

  std::vector<double> eigenvalues() const {
    Eigen::MatrixXcd e(rho_.dim(), rho_.dim());
    for (std::size_t r = 0; r < rho_.dim(); ++r)
      for (std::size_t c = 0; c < rho_.dim(); ++c) e(r, c) = rho_(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
  }

  bool is_valid(double tol = 1e-12) const {
    if ((rho_ - rho_.adjoint()).max_abs() > tol) return false;
    if (std::abs(rho_.trace() - 1.0) > tol) return false;
    for (double v : eigenvalues())
      if (v < -1e-10) return false;
    return true;
  }

 private:
  CMatrix rho_;
};

// Reduced state on `keep` (sorted ascending in the output ordering).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
  const int n = rho.num_qubits();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto q : keep)
    if (q >= static_cast<std::size_t>(n)) throw Error("partial_trace: qubit index out of range");
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < static_cast<std::size_t>(n); ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  if (keep.empty() && n > 0) {
    // Tracing everything is allowed only through trace(); an empty keep set is a caller error.
    throw Error("partial_trace: keep set must be nonempty");
  }
  const std::size_t kd = std::size_t{1} << keep.size();
  const std::size_t td = std::size_t{1} << traced.size();
  auto compose = [&](std::size_t kept, std::size_t tr) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
      if ((kept >> (keep.size() - 1 - i)) & 1) idx |= std::size_t{1} << (n - 1 - keep[i]);
    for (std::size_t i = 0; i < traced.size(); ++i)
      if ((tr >> (traced.size() - 1 - i)) & 1) idx |= std::size_t{1} << (n - 1 - traced[i]);
    return idx;
  };
  CMatrix out(kd);
  const CMatrix& m = rho.matrix();
  for (std::size_t r = 0; r < kd; ++r)
    for (std::size_t c = 0; c < kd; ++c) {
      cplx s = 0;
      for (std::size_t t = 0; t < td; ++t) s += m(compose(r, t), compose(c, t));
      out(r, c) = s;
    }
  return DensityMatrix(std::move(out));
}

// Trace of the full matrix as a 1x1 state; partial trace over every qubit.
inline DensityMatrix trace_out_all(const DensityMatrix& rho) {
  CMatrix out(1);
  out(0, 0) = rho.matrix().trace();
  return DensityMatrix(std::move(out));
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const DensityMatrix diff(a.matrix() - b.matrix());
  double s = 0;
  for (double v : diff.eigenvalues()) s += std::abs(v);
  return 0.5 * s;
}

}  // namespace adqc
