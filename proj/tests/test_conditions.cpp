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

#include "adqc/conditions.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace adqc;

namespace {

ParamPoint pt(double ax, double g, double d, double t, double f) { return {ax, AncillaSpec(g, d), MeasBasis(t, f)}; }

CMatrix random_unitary(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    return rz(u(rng)) * rx(u(rng)) * rz(u(rng)) * std::polar(1.0, u(rng));
}

}  // namespace

TEST(conditions, constraint_residual) {
    ASSERT_NEAR(constraint_residual(pt(kPi / 4, 0, 1.3, 0.7, 0)), 0, 1e-15);
    ASSERT_NEAR(constraint_residual(pt(kPi / 4, kPi / 2, kPi / 2, 0, 0)), -1, 1e-15);
    ASSERT_NEAR(constraint_residual(pt(kPi / 4, 0.8, 0.3, 0.8, 0.3)), 0, 1e-15);
}

TEST(conditions, fg_coefficients_examples) {
    auto a = fg_coefficients(pt(kPi / 4, 0, 0, kPi / 2, 0));
    ASSERT_NEAR(a.f_plus, 0.5, 1e-12);
    ASSERT_NEAR(a.f_minus, 0.5, 1e-12);
    ASSERT_NEAR(a.g_plus, 0.5, 1e-12);
    ASSERT_NEAR(a.g_minus, 0.5, 1e-12);

    auto b = fg_coefficients(pt(kPi / 4, 0, 0, 0, 0));
    ASSERT_NEAR(b.f_plus, 1 / std::sqrt(2.0), 1e-12);
    ASSERT_NEAR(b.g_plus, 0, 1e-12);
    ASSERT_NEAR(b.f_minus, 0, 1e-12);
    ASSERT_NEAR(b.g_minus, 1 / std::sqrt(2.0), 1e-12);

    auto c = fg_coefficients(pt(0, 0.4, 0, 1.9, 0));
    ASSERT_EQ(c.g_plus, 0);
    ASSERT_EQ(c.g_minus, 0);

    ASSERT_THROW(fg_coefficients(pt(kPi / 4, kPi / 2, kPi / 2, 0, 0)), Error);
}

TEST(conditions, fg_matches_kraus_components) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    std::uniform_real_distribution<double> ax(0, kPi / 4);
    int checked = 0;
    while (checked < 2000) {
        double g = u(rng), d = u(rng), t = u(rng);
        double sf = std::cos(t) * std::sin(g) * std::sin(d) / (std::sin(t) * std::cos(g));
        if (std::abs(sf) > 1) continue;
        double f = std::asin(sf);
        auto p = pt(ax(rng), g, d, t, f);
        Entangler e{{p.alpha_x, 0, 0}, {}, "custom"};
        auto k = kraus_pair(e, p.ancilla, p.basis);
        auto fg = fg_coefficients(p);
        auto cp = pauli_components(k.k_plus);
        auto cm = pauli_components(k.k_minus);
        ASSERT_NEAR(std::abs(cp[0]), fg.f_plus, 1e-9);
        ASSERT_NEAR(std::abs(cp[1]), fg.g_plus, 1e-9);
        ASSERT_NEAR(std::abs(cm[0]), fg.f_minus, 1e-9);
        ASSERT_NEAR(std::abs(cm[1]), fg.g_minus, 1e-9);
        checked++;
    }
}

TEST(conditions, required_alpha_x) {
    ASSERT_NEAR(required_alpha_x(AncillaSpec(0, 0), MeasBasis(kPi / 3, 0)), kPi / 4, 1e-12);
    ASSERT_NEAR(required_alpha_x(AncillaSpec(1.1, 0), MeasBasis(1.1, 0)), 0, 1e-7);
    ASSERT_THROW(required_alpha_x(AncillaSpec(0, 0), MeasBasis(0, 0)), Error);
}

TEST(conditions, classify_table_rows) {
    ASSERT_EQ(classify_parameters(pt(kPi / 4, 0, 0, 0, 0)).case_id, CaseId::T1_IDENTITY);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, 0, 0.5, 1.2, 0)).case_id, CaseId::T1_XROT);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, kPi / 2, 0, 0, 0)).case_id, CaseId::T1_X_A);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, kPi / 2, kPi, 0, 0)).case_id, CaseId::T1_X_A);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, 0.9, 2.2, kPi / 2, 0)).case_id, CaseId::T1_X_B);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, 1.0, 0, 0, 0)).case_id, CaseId::T2_GENERAL_DELTA0);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, 1.0, 0, 2.0, 0)).case_id, CaseId::T2_GENERAL_DELTA0);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, 0.7, 1.9, 0.7, 1.9)).case_id, CaseId::T2_MATCHED);
    ASSERT_EQ(classify_parameters(pt(kPi / 4, kPi / 2, kPi / 5, kPi / 3, kPi / 7)).case_id, CaseId::NONE);
    ASSERT_EQ(classify_parameters(pt(0.3, 0, 0, 0, 0)).case_id, CaseId::NONE);
}

TEST(conditions, classify_random_points_are_none) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (int k = 0; k < 1000; k++) {
        ASSERT_EQ(classify_parameters(pt(kPi / 4, u(rng), u(rng), u(rng), u(rng))).case_id, CaseId::NONE);
    }
}

TEST(conditions, matched_rows_hold_along_families) {
    for (double g : {0.2, 1.4, 3.0, 5.5}) {
        for (double d : {0.0, 0.8, 2.9}) {
            ASSERT_NO_THROW(classify_parameters(pt(kPi / 4, g, d, g, d)));
        }
        ASSERT_NO_THROW(classify_parameters(pt(kPi / 4, g, 0, 0.37 * g + 1, 0)));
        ASSERT_NO_THROW(classify_parameters(pt(kPi / 4, g, g, kPi / 2, 0)));
    }
}

TEST(conditions, vw_form_check) {
    ASSERT_TRUE(vw_form_check(hadamard(), hadamard()));
    ASSERT_TRUE(vw_form_check(pauli::Y(), pauli::I()));
    ASSERT_FALSE(vw_form_check(pauli::I(), rz(kPi / 3)));
    ASSERT_TRUE(vw_form_check(rx(0.3), rx(1.0)));
}

TEST(conditions, l_hiding_residual) {
    for (double t : {0.1, 1.7}) {
        for (double g : {0.4, 2.2}) {
            for (int s : {0, 1}) {
                ASSERT_LT(l_hiding_residual(pauli::I(), pauli::I(), t, g, s), 1e-12);
                ASSERT_LT(l_hiding_residual(pauli::Z(), pauli::I(), t, g, s), 1e-12);
            }
        }
    }
    double worst = 0;
    for (int i = 0; i < 16; i++) {
        for (int j = 0; j < 16; j++) {
            worst = std::max(worst, l_hiding_residual(pauli::I(), rz(kPi / 3), i * kPi / 8, j * kPi / 8, 0));
        }
    }
    ASSERT_GT(worst, 0.1);
}

TEST(conditions, l_hiding_implies_vw_form) {
    std::mt19937_64 rng(23);
    int hiding = 0;
    for (int trial = 0; trial < 1000; trial++) {
        CMatrix v = random_unitary(rng);
        CMatrix w = random_unitary(rng);
        if (trial % 3 == 0) {
            w = v.adjoint() * rx(0.9 * trial);
        } else if (trial % 3 == 1) {
            w = v.adjoint() * pauli::Y() * rx(0.3 * trial);
        }
        double worst = 0;
        for (int i = 0; i < 16 && worst < 1e-9; i++) {
            for (int j = 0; j < 16 && worst < 1e-9; j++) {
                for (int s = 0; s < 2; s++) {
                    worst = std::max(worst, l_hiding_residual(v, w, i * kPi / 8, j * kPi / 8, s));
                }
            }
        }
        if (worst < 1e-9) {
            hiding++;
            ASSERT_TRUE(vw_form_check(v, w, 1e-9));
        }
    }
    ASSERT_GT(hiding, 600);
}

TEST(conditions, x_form_kernels_stay_in_yz_plane) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (int trial = 0; trial < 100; trial++) {
        CMatrix v = random_unitary(rng);
        CMatrix w = v.adjoint() * rx(u(rng));
        ASSERT_TRUE(vw_form_check(v, w, 1e-9));
        CMatrix kernel = rx(u(rng)) * v * w * rx(u(rng)) * v * w * rx(u(rng));
        PureState psi(1, {cplx(u(rng), 0.3), cplx(0.2, u(rng))});
        psi.normalize();
        auto out = kernel * psi;
        auto xcoord = [](const PureState &s) { return 2 * (std::conj(s[0]) * s[1]).real(); };
        ASSERT_NEAR(xcoord(out), xcoord(psi), 1e-9);
    }
}

TEST(conditions, hiding_pair_form) {
    auto k = kraus_pair(presets::cz_canon(), AncillaSpec(0.9, 0), MeasBasis(0, 0));
    ASSERT_TRUE(is_hiding_pair(k));
    ASSERT_NEAR(std::abs(*rx_angle_of(k.k_plus)), 0.9, 1e-9);
    Entangler weak{{0.3, 0, 0}, {}, "weak"};
    ASSERT_FALSE(is_hiding_pair(kraus_pair(weak, AncillaSpec(0.9, 0), MeasBasis(0.4, 0))));
    ASSERT_FALSE(rx_angle_of(hadamard()).has_value());
}

TEST(conditions, relation_sweep_counts) {
    auto r = relation_sweep(1000, 7);
    ASSERT_EQ(r.points, 1000);
    ASSERT_EQ(r.matched, 500);
    ASSERT_EQ(r.hiding_agree, 1000);
    ASSERT_EQ(r.unitary, 1000);
    ASSERT_EQ(r.unitary_agree, 500);
}
