// Copyright 2026 The qspc Authors
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

#include "qspc/su2.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "qspc/errors.h"
#include "test_util.h"

using namespace qspc;
using qspc::testing::kPi;
using qspc::testing::uniform;

namespace {

// Chebyshev coefficients of f sampled at the n first-kind nodes.
std::vector<cdouble> chebyshev_coefficients(const std::vector<cdouble> &values) {
    size_t n = values.size();
    std::vector<cdouble> a(n);
    for (size_t k = 0; k < n; k++) {
        cdouble acc = 0;
        for (size_t j = 0; j < n; j++) {
            acc += values[j] * std::cos(kPi * double(k) * (j + 0.5) / double(n));
        }
        a[k] = acc * (k == 0 ? 1.0 : 2.0) / double(n);
    }
    return a;
}

double node(size_t j, size_t n) {
    return std::cos(kPi * (j + 0.5) / double(n));
}

}  // namespace

TEST(fsim, identity_at_zero) {
    EXPECT_LT(fsim_subspace_unitary({0, 0, 0}).max_abs_diff(Unitary2::identity()), 1e-15);
}

TEST(fsim, pure_swap) {
    Unitary2 expected;
    expected.m = {0, cdouble{0, -1}, cdouble{0, -1}, 0};
    EXPECT_LT(fsim_subspace_unitary({kPi / 2, 0, 0}).max_abs_diff(expected), 1e-15);
}

TEST(fsim, euler_decomposition) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; t++) {
        FsimParams g{uniform(rng, 0, kPi), uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi)};
        Unitary2 euler = Unitary2::rz(-(g.varphi - g.chi - kPi) / 2) * Unitary2::rx(g.theta) *
                         Unitary2::rz(-(g.varphi + g.chi + kPi) / 2);
        Unitary2 u = fsim_subspace_unitary(g);
        ASSERT_LT(u.max_abs_diff(euler), 1e-12);
        ASSERT_LT(u.unitarity_error(), 1e-12);
        ASSERT_NEAR(std::abs(u.det()), 1, 1e-12);
    }
}

TEST(qsp, x_one_is_diagonal) {
    std::vector<double> phases{0.3, -1.1, 0.7, 2.0};
    Unitary2 u = qsp_unitary(1, phases);
    double total = 0.3 - 1.1 + 0.7 + 2.0;
    EXPECT_LT(std::abs(u(0, 0) - std::polar(1.0, total)), 1e-14);
    EXPECT_LT(std::abs(u(1, 1) - std::polar(1.0, -total)), 1e-14);
    EXPECT_LT(std::abs(u(0, 1)), 1e-15);
}

TEST(qsp, single_phase) {
    std::vector<double> phases{0.42};
    EXPECT_LT(qsp_unitary(0.3, phases).max_abs_diff(Unitary2::rz(0.42)), 1e-15);
}

TEST(qsp, rejects_out_of_domain) {
    std::vector<double> phases{0.1, 0.2};
    EXPECT_THROW(qsp_unitary(1.0001, phases), DomainError);
    EXPECT_THROW(qsp_unitary(std::nan(""), phases), DomainError);
}

TEST(qsp, symmetric_phases_give_real_q) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; t++) {
        int d = 1 + t % 12;
        std::vector<double> ph(d + 1);
        for (int j = 0; j <= d / 2; j++) {
            ph[j] = ph[d - j] = uniform(rng, -kPi, kPi);
        }
        double x = uniform(rng, -0.999, 0.999);
        Unitary2 u = qsp_unitary(x, ph);
        cdouble q = u(0, 1) / cdouble{0, std::sqrt(1 - x * x)};
        ASSERT_LT(std::abs(q.imag()), 1e-12) << "d=" << d;
    }
}

TEST(qsp, polynomial_structure) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 60; t++) {
        int d = 1 + t % 16;
        std::vector<double> ph(d + 1);
        for (int j = 0; j <= d / 2; j++) {
            ph[j] = ph[d - j] = uniform(rng, -kPi, kPi);
        }
        size_t n = d + 8;
        std::vector<cdouble> pv(n), qv(n);
        for (size_t j = 0; j < n; j++) {
            double x = node(j, n);
            Unitary2 u = qsp_unitary(x, ph);
            pv[j] = u(0, 0);
            qv[j] = u(0, 1) / cdouble{0, std::sqrt(1 - x * x)};
        }
        auto pc = chebyshev_coefficients(pv);
        auto qc = chebyshev_coefficients(qv);
        for (size_t k = 0; k < n; k++) {
            if (int(k) > d || (k % 2) != size_t(d % 2)) {
                ASSERT_LT(std::abs(pc[k]), 1e-9) << "P coefficient " << k << " at d=" << d;
            }
            if (int(k) > d - 1 || (k % 2) != size_t((d - 1) % 2)) {
                ASSERT_LT(std::abs(qc[k]), 1e-9) << "Q coefficient " << k << " at d=" << d;
            }
            ASSERT_LT(std::abs(qc[k].imag()), 1e-9);
        }
        double x = uniform(rng, -1, 1);
        Unitary2 u = qsp_unitary(x, ph);
        double q = (u(0, 1) / cdouble{0, std::sqrt(1 - x * x)}).real();
        ASSERT_NEAR(std::norm(u(0, 0)) + (1 - x * x) * q * q, 1, 1e-12);
    }
}

TEST(periodic, depth_one) {
    double w = 0.37;
    double t = 0.81;
    Unitary2 u = periodic_unitary_product(1, w, t);
    Unitary2 direct = Unitary2::rz(w) * Unitary2::rx(t) * Unitary2::rz(w);
    EXPECT_LT(u.max_abs_diff(direct), 1e-15);
    EXPECT_LT(std::abs(u(0, 0) - std::polar(std::cos(t), 2 * w)), 1e-15);
}

TEST(periodic, zero_modulation_collapses) {
    EXPECT_LT(periodic_unitary_product(9, 0, 0.13).max_abs_diff(Unitary2::rx(9 * 0.13)), 1e-13);
}

TEST(periodic, rejects_zero_depth) {
    EXPECT_THROW(periodic_unitary_product(0, 0.1, 0.1), ContractError);
}

TEST(chebyshev, recurrence_values) {
    EXPECT_EQ(chebyshev_u(0, 0.3), 1);
    EXPECT_DOUBLE_EQ(chebyshev_u(1, 0.3), 0.6);
    EXPECT_DOUBLE_EQ(chebyshev_u(2, 0.3), 4 * 0.09 - 1);
    EXPECT_DOUBLE_EQ(chebyshev_u(3, 0.3), 8 * 0.027 - 4 * 0.3);
    EXPECT_EQ(chebyshev_u(-1, 0.3), 0);
}

TEST(chebyshev, limits_are_exact) {
    for (int n : {1, 2, 7, 64, 255, 256, 257, 1000, 4097}) {
        EXPECT_EQ(dirichlet_ratio(n, 0, 1), n);
        EXPECT_EQ(dirichlet_ratio(n, 0, -1), (n % 2 ? 1 : -1) * n);
    }
}

TEST(chebyshev, trig_branch_matches_recurrence) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; t++) {
        int n = 257 + t * 13;
        double s = uniform(rng, 0.01, kPi - 0.01);
        double trig = dirichlet_ratio(n, std::sin(s), std::cos(s));
        double rec = chebyshev_u(n - 1, std::cos(s));
        ASSERT_NEAR(trig, rec, 1e-9 * n) << n << " " << s;
    }
}

TEST(closed_form, depth_one) {
    double w = 0.91;
    double t = 0.4;
    PolyPair pq = closed_form_pq(1, w, t);
    EXPECT_LT(std::abs(pq.p_value - std::polar(std::cos(t), 2 * w)), 1e-15);
    EXPECT_DOUBLE_EQ(pq.q_value, 1);
}

TEST(closed_form, zero_modulation) {
    for (int d : {1, 3, 10, 50}) {
        double t = 0.07;
        PolyPair pq = closed_form_pq(d, 0, t);
        EXPECT_NEAR(pq.p_value.real(), std::cos(d * t), 1e-13);
        EXPECT_NEAR(pq.p_value.imag(), 0, 1e-13);
        EXPECT_NEAR(pq.q_value, std::sin(d * t) / std::sin(t), 1e-11);
    }
}

TEST(closed_form, limit_points) {
    // sigma = 0 and sigma = pi exactly.
    EXPECT_EQ(closed_form_pq(12, 0, 0).q_value, 12);
    EXPECT_NEAR(closed_form_pq(12, kPi, 0).q_value, -12, 1e-12);
    EXPECT_NEAR(closed_form_pq(13, kPi, 0).q_value, 13, 1e-12);
}

TEST(closed_form, matches_product_and_normalized) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 500; t++) {
        int d = 1 + int(rng() % 128);
        double w = uniform(rng, -kPi, kPi);
        double th = uniform(rng, 0, kPi);
        PolyPair pq = closed_form_pq(d, w, th);
        ASSERT_LT(assemble_unitary(pq, th).max_abs_diff(periodic_unitary_product(d, w, th)), 1e-10)
            << d << " " << w << " " << th;
        ASSERT_LT(std::abs(pq.normalization_error()), 1e-12);
    }
}

TEST(closed_form, parity) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 200; t++) {
        int d = 1 + int(rng() % 40);
        double w = uniform(rng, -kPi, kPi);
        double th = uniform(rng, 0, kPi);
        // x -> -x is theta -> pi - theta.
        PolyPair a = closed_form_pq(d, w, th);
        PolyPair b = closed_form_pq(d, w, kPi - th);
        double sp = d % 2 ? -1 : 1;
        ASSERT_LT(std::abs(b.p_value - sp * a.p_value), 1e-11);
        ASSERT_NEAR(b.q_value, -sp * a.q_value, 1e-10);
    }
}

TEST(special_point, depth_one_matches) {
    PolyPair a = special_point_pq(0, 0.3, 0.2);
    PolyPair b = closed_form_pq(1, 0.3, 0.2);
    EXPECT_LT(std::abs(a.p_value - b.p_value), 1e-15);
    EXPECT_EQ(a.q_value, b.q_value);
}

TEST(special_point, matches_closed_form) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; t++) {
        double w = uniform(rng, -kPi, kPi);
        double th = uniform(rng, 0, kPi);
        for (int j = 0; j <= 7; j++) {
            PolyPair a = special_point_pq(j, w, th);
            PolyPair b = closed_form_pq(1 << j, w, th);
            ASSERT_LT(std::abs(a.p_value - b.p_value), 1e-11) << j;
            ASSERT_NEAR(a.q_value, b.q_value, 1e-11 * (1 << j)) << j;
        }
    }
}

TEST(special_point, chebyshev_value_at_zero) {
    PolyPair pq = special_point_pq(6, kPi / 2, 0.3);
    EXPECT_NEAR(pq.q_value, chebyshev_u(63, 0), 1e-12);
    EXPECT_EQ(chebyshev_u(63, 0), 0);
}

TEST(wrap, principal_branch) {
    EXPECT_DOUBLE_EQ(wrap_pi(kPi), kPi);
    EXPECT_DOUBLE_EQ(wrap_pi(-kPi), kPi);
    EXPECT_NEAR(wrap_pi(3 * kPi / 2), -kPi / 2, 1e-15);
    EXPECT_NEAR(wrap_pi(0.25), 0.25, 0);
}
