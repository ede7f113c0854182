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

#include "adqc/qla.hpp"

#include "gtest/gtest.h"

#include "adqc/core.hpp"

using namespace adqc;

TEST(qla, tensor_identity_and_x) {
    ASSERT_EQ(tensor(pauli::I(), pauli::I()), CMatrix::identity(4));
    CMatrix anti(4);
    for (size_t k = 0; k < 4; k++) {
        anti(k, 3 - k) = 1;
    }
    ASSERT_EQ(tensor(pauli::X(), pauli::X()), anti);
}

TEST(qla, tensor_hadamards) {
    auto hh = tensor(hadamard(), hadamard());
    for (auto v : hh.entries()) {
        ASSERT_NEAR(std::abs(v), 0.5, 1e-15);
    }
    ASSERT_NEAR(hh(3, 3).real(), 0.5, 1e-15);
    ASSERT_NEAR(hh(1, 1).real(), -0.5, 1e-15);
}

TEST(qla, tensor_overflow) {
    CMatrix big(16);
    ASSERT_THROW(tensor(big, CMatrix(4)), Error);
    ASSERT_NO_THROW(tensor(big, CMatrix(2)));
}

TEST(qla, tensor_associative) {
    CMatrix a(2, {1, 2, 3, 4});
    CMatrix b(2, {0, -1, 5, 2});
    CMatrix c(2, {7, 0, 1, 1});
    ASSERT_EQ(tensor(tensor(a, b), c), tensor(a, tensor(b, c)));
}

TEST(qla, partial_trace_product) {
    auto s = tensor(PureState::basis(1, 0), param_state(Sign::Plus, kPi / 2, 0));
    auto r = partial_trace(DensityMatrix::from_pure(s), {1});
    auto expected = DensityMatrix::from_pure(param_state(Sign::Plus, kPi / 2, 0));
    ASSERT_LT((r.matrix() - expected.matrix()).max_abs(), 1e-15);
}

TEST(qla, partial_trace_bell) {
    const double h = 1 / std::sqrt(2.0);
    PureState bell(2, {h, 0, 0, h});
    for (size_t q = 0; q < 2; q++) {
        auto r = partial_trace(DensityMatrix::from_pure(bell), {q});
        ASSERT_LT((r.matrix() - DensityMatrix::maximally_mixed(1).matrix()).max_abs(), 1e-15);
    }
}

TEST(qla, partial_trace_keeps_second_factor) {
    PureState sigma(1, {cplx(0.6, 0), cplx(0, 0.8)});
    auto rho = DensityMatrix::from_pure(tensor(param_state(Sign::Plus, 0.9, 0), sigma));
    auto r = partial_trace(rho, {1});
    ASSERT_LT((r.matrix() - DensityMatrix::from_pure(sigma).matrix()).max_abs(), 1e-15);
    ASSERT_THROW(partial_trace(rho, {}), Error);
    ASSERT_THROW(partial_trace(rho, {2}), Error);
}

TEST(qla, partial_trace_over_everything_is_trace) {
    auto rho = DensityMatrix::maximally_mixed(3);
    ASSERT_NEAR(trace_out_all(rho).matrix()(0, 0).real(), 1.0, 1e-15);
    ASSERT_EQ(trace_out_all(rho).matrix().dim(), 1u);
}

TEST(qla, equal_up_to_global_phase) {
    ASSERT_TRUE(equal_up_to_global_phase(pauli::X(), pauli::X() * cplx(0, 1), 1e-12));
    ASSERT_FALSE(equal_up_to_global_phase(pauli::X(), pauli::Z(), 1e-12));
    ASSERT_FALSE(equal_up_to_global_phase(pauli::X(), CMatrix(2), 1e-12));
    ASSERT_TRUE(equal_up_to_global_phase(CMatrix(2), CMatrix(2), 1e-12));
}

TEST(qla, equal_up_to_global_phase_kraus_branch) {
    double theta = 1.3;
    auto k = kraus_pair(presets::cz_canon(), AncillaSpec(0, 0), MeasBasis(theta, 0));
    auto km = k.k_minus * cplx(0, std::sqrt(2.0));
    ASSERT_TRUE(equal_up_to_global_phase(pauli::X() * rx(theta), km, 1e-10));
}

TEST(qla, equal_up_to_global_phase_is_equivalence) {
    std::vector<CMatrix> us{pauli::X(), pauli::X() * cplx(0, -1), rx(0.4), rx(0.4) * std::polar(1.0, 2.0), hadamard()};
    for (const auto &a : us) {
        ASSERT_TRUE(equal_up_to_global_phase(a, a));
        for (const auto &b : us) {
            ASSERT_EQ(equal_up_to_global_phase(a, b), equal_up_to_global_phase(b, a));
            for (const auto &c : us) {
                if (equal_up_to_global_phase(a, b) && equal_up_to_global_phase(b, c)) {
                    ASSERT_TRUE(equal_up_to_global_phase(a, c));
                }
            }
        }
    }
}

TEST(qla, apply_on_matches_embed) {
    PureState s(3, {0.1, cplx(0.2, 0.1), 0.3, -0.4, cplx(0, 0.5), 0.2, 0.1, 0.6});
    s.normalize();
    std::vector<size_t> t{2, 0};
    auto op = tensor(hadamard(), rx(0.3));
    auto direct = apply_on(s, op, t);
    auto via = embed(op, t, 3) * s;
    for (size_t k = 0; k < 8; k++) {
        ASSERT_NEAR(std::abs(direct[k] - via[k]), 0, 1e-14);
    }
    auto cz = apply_on(PureState::basis(2, 3), cz_gate(), {0, 1});
    ASSERT_NEAR(cz[3].real(), -1, 1e-15);
}

TEST(qla, density_matrix_validity) {
    auto rho = DensityMatrix::from_pure(param_state(Sign::Minus, 0.7, 1.1));
    ASSERT_TRUE(rho.is_valid());
    ASSERT_NEAR(trace_distance(rho, rho), 0, 1e-15);
    auto a = DensityMatrix::from_pure(PureState::basis(1, 0));
    auto b = DensityMatrix::from_pure(PureState::basis(1, 1));
    ASSERT_NEAR(trace_distance(a, b), 1, 1e-15);
    ASSERT_NEAR(trace_distance(a, DensityMatrix::maximally_mixed(1)), 0.5, 1e-15);
}
