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

#include "adqc/core.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace adqc;

namespace {

CMatrix random_unitary(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    return rz(u(rng)) * rx(u(rng)) * rz(u(rng)) * std::polar(1.0, u(rng));
}

// Taylor series exponential of -i*h, independent of the closed forms.
CMatrix expm_minus_i(const CMatrix &h) {
    CMatrix term = CMatrix::identity(h.dim());
    CMatrix sum = term;
    for (int k = 1; k < 60; k++) {
        term = term * h * cplx(0, -1.0 / k);
        sum += term;
    }
    return sum;
}

}  // namespace

TEST(core, param_state) {
    auto a = param_state(Sign::Plus, 0, 0);
    ASSERT_NEAR(std::abs(a[0] - 1.0), 0, 1e-15);
    auto b = param_state(Sign::Plus, kPi / 2, 0);
    ASSERT_NEAR(b[0].real(), 1 / std::sqrt(2.0), 1e-15);
    ASSERT_NEAR(b[1].real(), 1 / std::sqrt(2.0), 1e-15);
    auto c = param_state(Sign::Minus, 0, 0);
    ASSERT_NEAR(std::abs(c[0]), 0, 1e-15);
    ASSERT_NEAR(c[1].real(), -1, 1e-15);
    auto p = param_state(Sign::Plus, 0.8, 2.1);
    auto m = param_state(Sign::Minus, 0.8, 2.1);
    ASSERT_NEAR(std::abs(p.inner(m)), 0, 1e-15);
}

TEST(core, angles_are_reduced) {
    AncillaSpec a(-kPi / 2, 5 * kPi);
    ASSERT_NEAR(a.gamma, 3 * kPi / 2, 1e-12);
    ASSERT_NEAR(a.delta, kPi, 1e-12);
    MeasBasis m(2 * kPi, 0);
    ASSERT_NEAR(m.theta, 0, 1e-12);
}

TEST(core, rotation) {
    ASSERT_LT((rx(0) - pauli::I()).max_abs(), 1e-15);
    ASSERT_LT((rx(kPi) - pauli::X() * cplx(0, -1)).max_abs(), 1e-15);
    auto r = rz(kPi / 2);
    ASSERT_LT(std::abs(r(0, 0) - std::polar(1.0, -kPi / 4)), 1e-15);
    ASSERT_LT(std::abs(r(1, 1) - std::polar(1.0, kPi / 4)), 1e-15);
    ASSERT_LT((rx(0.7) - expm_minus_i(pauli::X() * cplx(0.35))).max_abs(), 1e-14);
}

TEST(core, weyl_interaction) {
    ASSERT_LT((weyl_interaction({0, 0, 0}) - CMatrix::identity(4)).max_abs(), 1e-15);
    auto xx = tensor(pauli::X(), pauli::X());
    auto expected = (CMatrix::identity(4) - xx * cplx(0, 1)) * cplx(1 / std::sqrt(2.0));
    ASSERT_LT((weyl_interaction({kPi / 4, 0, 0}) - expected).max_abs(), 1e-15);
    auto d = weyl_interaction({kPi / 4, kPi / 4, 0});
    ASSERT_TRUE(is_unitary(d, 1e-12));
    auto h = xx * cplx(kPi / 4) + tensor(pauli::Y(), pauli::Y()) * cplx(kPi / 4);
    ASSERT_LT((d - expm_minus_i(h)).max_abs(), 1e-12);
    ASSERT_LT((weyl_interaction({0.5, 0, 0}) * interaction_exponential({0, 0.3, 0}) - weyl_interaction({0.5, 0.3, 0})).max_abs(),
              1e-12);
    ASSERT_THROW(weyl_interaction({0.1, 0.3, 0}), Error);
    ASSERT_THROW(weyl_interaction({1.0, 0, 0}), Error);
}

TEST(core, preset_reassembly) {
    ASSERT_LT((assemble_entangler(presets::cz_canon()) - weyl_interaction({kPi / 4, 0, 0})).max_abs(), 1e-15);
    auto hhcz = tensor(hadamard(), hadamard()) * cz_gate();
    ASSERT_LT((assemble_entangler(presets::hhcz()) - hhcz).max_abs(), 1e-10);
    CMatrix swap(4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
    ASSERT_LT((assemble_entangler(presets::swapcz()) - swap * cz_gate()).max_abs(), 1e-10);
    auto sc = presets::swapcz().cartan;
    ASSERT_DOUBLE_EQ(sc.alpha_x, kPi / 4);
    ASSERT_DOUBLE_EQ(sc.alpha_y, kPi / 4);
    ASSERT_DOUBLE_EQ(sc.alpha_z, 0);
    for (const char *label : {"CZ_CANON", "CZ_CANON_H", "HHCZ", "SWAPCZ"}) {
        ASSERT_TRUE(is_unitary(assemble_entangler(presets::by_label(label)), 1e-12));
    }
    Entangler bad = presets::cz_canon();
    bad.frame.v_s = CMatrix(2, {1, 1, 0, 1});
    ASSERT_THROW(assemble_entangler(bad), Error);
}

TEST(core, kraus_gamma_step) {
    for (double g : {0.0, 0.3, 1.0, 2.5, 4.0}) {
        auto k = kraus_pair(presets::cz_canon(), AncillaSpec(g, 0), MeasBasis(0, 0));
        ASSERT_TRUE(equal_up_to_global_phase(k.k_plus * cplx(std::sqrt(2.0)), rx(g), 1e-10));
        ASSERT_TRUE(equal_up_to_global_phase(k.k_minus * cplx(std::sqrt(2.0)), pauli::X() * rx(-g), 1e-10));
        ASSERT_NEAR(k.p_plus, 0.5, 1e-12);
        ASSERT_NEAR(k.p_minus, 0.5, 1e-12);
    }
}

TEST(core, kraus_first_table_rows) {
    for (double t : {0.0, 0.4, 2.0}) {
        for (double d : {0.0, 1.2}) {
            auto k = kraus_pair(presets::cz_canon(), AncillaSpec(0, d), MeasBasis(t, 0));
            ASSERT_TRUE(equal_up_to_global_phase(normalize_operator(k.k_plus), rx(t), 1e-10));
            ASSERT_TRUE(equal_up_to_global_phase(normalize_operator(k.k_minus), pauli::X() * rx(t), 1e-10));
        }
    }
    auto k = kraus_pair(presets::cz_canon(), AncillaSpec(0, 0.3), MeasBasis(0, 0.9));
    ASSERT_TRUE(equal_up_to_global_phase(normalize_operator(k.k_plus), pauli::I(), 1e-10));
    ASSERT_TRUE(equal_up_to_global_phase(normalize_operator(k.k_minus), pauli::X(), 1e-10));
}

TEST(core, kraus_completeness_random) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    std::uniform_real_distribution<double> chamber(0, kPi / 4);
    for (int trial = 0; trial < 10000; trial++) {
        double a = chamber(rng), b = chamber(rng), c = chamber(rng);
        if (a < b) std::swap(a, b);
        if (b < c) std::swap(b, c);
        if (a < b) std::swap(a, b);
        Entangler e{{a, b, c}, {}, "custom"};
        e.frame.v_s = random_unitary(rng);
        e.frame.v_a = random_unitary(rng);
        e.frame.w_s = random_unitary(rng);
        e.frame.w_a = random_unitary(rng);
        auto k = kraus_pair(e, AncillaSpec(u(rng), u(rng)), MeasBasis(u(rng), u(rng)));
        ASSERT_LT(k.completeness_error(), 1e-10);
        ASSERT_NEAR(k.p_plus + k.p_minus, 1, 1e-10);
    }
}

TEST(core, cz_type_probabilities_are_half) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (int trial = 0; trial < 200; trial++) {
        double g = u(rng), t = u(rng);
        auto k = kraus_pair(presets::cz_canon(), AncillaSpec(g, 0), MeasBasis(t, 0));
        ASSERT_NEAR(k.p_plus, (1 + std::sin(g) * std::sin(t)) / 2, 1e-10);
        auto hiding = kraus_pair(presets::cz_canon(), AncillaSpec(g, 0), MeasBasis(0, 0));
        ASSERT_NEAR(hiding.p_plus, 0.5, 1e-10);
        auto angle = kraus_pair(presets::cz_canon(), AncillaSpec(0, 0), MeasBasis(t, 0));
        ASSERT_NEAR(angle.p_minus, 0.5, 1e-10);
    }
}

TEST(core, dressed_kraus_factorizes_through_frame) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (int trial = 0; trial < 200; trial++) {
        Entangler e = presets::cz_canon();
        e.frame.v_s = random_unitary(rng);
        e.frame.v_a = random_unitary(rng);
        e.frame.w_s = random_unitary(rng);
        e.frame.w_a = random_unitary(rng);
        AncillaSpec a(u(rng), u(rng));
        MeasBasis m(u(rng), u(rng));
        auto dressed = assemble_entangler(e);
        auto ket = physical_ancilla(e, a);
        auto bare = canonical_kraus_pair(presets::cz_canon(), a, m);
        for (int s = 0; s < 2; s++) {
            auto bra = physical_basis_state(e, s ? Sign::Minus : Sign::Plus, m);
            auto k = contract_ancilla(dressed, bra, ket);
            auto expected = e.frame.w_s * bare.branch(s) * e.frame.v_s;
            ASSERT_LT((k - expected).max_abs(), 1e-10);
        }
        auto ck = canonical_kraus_pair(e, a, m);
        ASSERT_LT(ck.completeness_error(), 1e-10);
    }
}

TEST(core, branch_analysis) {
    auto rot = branch_analysis(kraus_pair(presets::cz_canon(), AncillaSpec(0, 0), MeasBasis(0.9, 0)));
    ASSERT_TRUE(rot.unitary_plus && rot.unitary_minus);
    ASSERT_TRUE(rot.one_step_correctable);
    ASSERT_EQ(*rot.correction, Pauli::X);

    auto hiding = branch_analysis(kraus_pair(presets::cz_canon(), AncillaSpec(1.0, 0), MeasBasis(0, 0)));
    ASSERT_TRUE(hiding.unitary_plus && hiding.unitary_minus);
    ASSERT_FALSE(hiding.one_step_correctable);

    auto quarter = branch_analysis(kraus_pair(presets::cz_canon(), AncillaSpec(kPi / 2, 0), MeasBasis(0, 0)));
    ASSERT_TRUE(quarter.one_step_correctable);
    ASSERT_EQ(*quarter.correction, Pauli::I);
}

TEST(core, branch_form_parities_differ_on_rotation_row) {
    auto k = kraus_pair(presets::cz_canon(), AncillaSpec(0, 0), MeasBasis(0.9, 0));
    ASSERT_TRUE(k.branch_form.has_value());
    ASSERT_NE((*k.branch_form)[0].n_parity, (*k.branch_form)[1].n_parity);
}
