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

#include "qspc/fisher.h"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "qspc/errors.h"
#include "qspc/signal.h"
#include "test_util.h"

using namespace qspc;
using qspc::testing::kPi;

namespace {

const FsimParams kGate{1e-3, kPi / 16, 5 * kPi / 32};

// I_chi,chi from dp_X/dchi = p_Y - 1/2 and dp_Y/dchi = -(p_X - 1/2).
double analytic_chi_information(int d, const FsimParams &g, long long m) {
    CircuitSpec spec(d);
    double acc = 0;
    for (double w : spec.omega_grid()) {
        auto s = exact_probabilities(d, w, g);
        double gx = s.p_y - 0.5;
        double gy = -(s.p_x - 0.5);
        acc += gx * gx / (s.p_x * (1 - s.p_x)) + gy * gy / (s.p_y * (1 - s.p_y));
    }
    return double(m) * acc;
}

FisherMatrix synthetic(const Eigen::Matrix3d &m, int d) {
    FisherMatrix f;
    f.entries = m;
    f.depth = d;
    f.shots = 1;
    return f;
}

}  // namespace

TEST(fisher, symmetric_and_positive) {
    for (int d : {2, 7, 50, 300}) {
        auto f = fisher_matrix(d, kGate, 100000);
        EXPECT_LT((f.entries - f.entries.transpose()).cwiseAbs().maxCoeff(), 1e-10 * f.entries.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(f.entries);
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10 * f.entries.cwiseAbs().maxCoeff());
        EXPECT_LT(f.gradient_mismatch, 1e-6) << d;
        EXPECT_EQ(f.clamped_points, 0);
    }
}

TEST(fisher, phase_row_vanishes_with_swap_angle) {
    auto a = fisher_matrix(20, {1e-3, 0.3, 0.2}, 1000);
    auto b = fisher_matrix(20, {1e-6, 0.3, 0.2}, 1000);
    EXPECT_NEAR(b.entries(1, 1) / a.entries(1, 1), 1e-6, 1e-7);
    EXPECT_LT(b.entries(1, 1), 1e-6 * a.entries(0, 0));
}

TEST(fisher, preasymptotic_structure) {
    int d = 50;
    double th = kGate.theta;
    long long m = 100000;
    auto f = fisher_matrix(d, kGate, m);
    double base = 4.0 * m * (2 * d - 1);
    EXPECT_NEAR(f.entries(0, 0) / (base * d), 1, 0.05);
    EXPECT_NEAR(f.entries(1, 1) / (base * d * (4.0 * d * d - 1) * th * th / 3), 1, 0.05);
    EXPECT_NEAR(f.entries(1, 2) / (base * d * d * th * th), 1, 0.05);
    EXPECT_NEAR(f.entries(2, 2) / (base * d * th * th), 1, 0.05);
}

TEST(fisher, chi_derivative_identity) {
    for (int d : {3, 20, 50}) {
        for (const FsimParams &g : {kGate, FsimParams{0.05, -0.4, 1.3}}) {
            auto f = fisher_matrix(d, g, 100000);
            double ref = analytic_chi_information(d, g, 100000);
            EXPECT_NEAR(f.entries(2, 2) / ref, 1, 1e-7) << d;
        }
    }
    // Pointwise: central difference against the identity.
    FsimParams g{0.05, -0.4, 1.3};
    double h = 1e-5;
    for (double w : {0.1, 0.9, 2.5}) {
        auto plus = exact_probabilities(12, w, {g.theta, g.varphi, g.chi + h});
        auto minus = exact_probabilities(12, w, {g.theta, g.varphi, g.chi - h});
        auto s = exact_probabilities(12, w, g);
        EXPECT_NEAR((plus.p_x - minus.p_x) / (2 * h), s.p_y - 0.5, 1e-7);
        EXPECT_NEAR((plus.p_y - minus.p_y) / (2 * h), -(s.p_x - 0.5), 1e-7);
    }
}

TEST(fisher, clamping_is_reported) {
    // d = 1, theta = pi/4, chi = pi/2 puts p_X at exactly 1 on the single grid point.
    auto f = fisher_matrix(1, {kPi / 4, 0, kPi / 2}, 100);
    EXPECT_GT(f.clamped_points, 0);
    EXPECT_FALSE(f.diagnostics.empty());
    EXPECT_TRUE(std::isfinite(f.entries(0, 0)));
}

TEST(crlb, matches_closed_forms_in_preasymptotic_regime) {
    auto c = crlb(50, kGate, 100000);
    EXPECT_EQ(c.regime, Regime::kPreAsymptotic);
    EXPECT_NEAR(c.crlb_theta / c.preasymptotic_theta, 1, 0.1);
    EXPECT_NEAR(c.crlb_varphi / c.preasymptotic_varphi, 1, 0.1);
    EXPECT_NEAR(c.crlb_chi / c.preasymptotic_chi, 1, 0.1);
    EXPECT_TRUE(c.unbounded.empty());
    double dd = 50;
    double base = 4 * 1e5 * dd * (2 * dd - 1);
    EXPECT_NEAR(c.preasymptotic_theta, 1 / base, 1e-20);
    EXPECT_NEAR(c.preasymptotic_varphi, 3 / (base * (dd * dd - 1) * 1e-6), 1e-18);
    EXPECT_NEAR(c.preasymptotic_chi, (4 * dd * dd - 1) / (base * (dd * dd - 1) * 1e-6), 1e-18);
}

TEST(crlb, linear_in_shots) {
    auto a = crlb(30, kGate, 1000);
    auto b = crlb(30, kGate, 2000);
    EXPECT_NEAR(b.crlb_theta / a.crlb_theta, 0.5, 1e-12);
    EXPECT_NEAR(b.crlb_varphi / a.crlb_varphi, 0.5, 1e-12);
    EXPECT_NEAR(b.crlb_chi / a.crlb_chi, 0.5, 1e-12);
}

TEST(crlb, dense_inverse_oracle) {
    Eigen::Matrix3d m;
    m << 4, 1, 0.5, 1, 3, -0.2, 0.5, -0.2, 2;
    auto c = crlb_from_fisher(synthetic(m, 2), 0.1);
    // Cofactor inverse.
    double det = m.determinant();
    EXPECT_NEAR(c.crlb_theta, (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det, 1e-14);
    EXPECT_NEAR(c.crlb_varphi, (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det, 1e-14);
    EXPECT_NEAR(c.crlb_chi, (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det, 1e-14);
}

TEST(crlb, singular_directions_unbounded) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 0) = 5;
    m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = 1;
    auto c = crlb_from_fisher(synthetic(m, 10), 0.01);
    EXPECT_NEAR(c.crlb_theta, 0.2, 1e-14);
    EXPECT_TRUE(std::isinf(c.crlb_varphi));
    EXPECT_TRUE(std::isinf(c.crlb_chi));
    EXPECT_EQ(c.unbounded, (std::vector<std::string>{"varphi", "chi"}));

    auto zero = crlb(20, {0, 0.3, 0.1}, 1000);
    EXPECT_TRUE(std::isinf(zero.crlb_varphi));
}

TEST(crlb, regime_flags) {
    EXPECT_EQ(classify_regime(50, 1e-3), Regime::kPreAsymptotic);
    EXPECT_EQ(classify_regime(100, 1e-3), Regime::kTransition);
    EXPECT_EQ(classify_regime(3000, 1e-3), Regime::kTransition);
    EXPECT_EQ(classify_regime(3001, 1e-3), Regime::kAsymptotic);
    EXPECT_STREQ(regime_name(Regime::kAsymptotic), "asymptotic");
}

TEST(slopes, synthetic_inverse_depth) {
    // Fisher entries proportional to d give bounds proportional to 1/d.
    std::vector<double> ds, vs;
    for (int d : {4, 8, 16, 40, 100, 1000}) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity() * 3.0 * d;
        ds.push_back(d);
        vs.push_back(crlb_from_fisher(synthetic(m, d), 0.01).crlb_theta);
    }
    EXPECT_NEAR(fit_loglog_slope(ds, vs), -1, 1e-12);
    for (double s : loglog_slopes(ds, vs)) {
        EXPECT_NEAR(s, -1, 1e-12);
    }
}

TEST(slopes, transition_for_larger_swap) {
    FsimParams g{1e-2, kPi / 16, 5 * kPi / 32};
    auto pre = transition_scan(g, 100000, log_spaced_depths(4, 30, 10));
    auto post = transition_scan(g, 100000, log_spaced_depths(300, 1000, 10));
    std::vector<double> d1, v1, d2, v2;
    for (const auto &r : pre) {
        d1.push_back(r.d);
        v1.push_back(r.crlb_varphi);
    }
    for (const auto &r : post) {
        d2.push_back(r.d);
        v2.push_back(r.crlb_varphi);
    }
    EXPECT_NEAR(fit_loglog_slope(d1, v1), -4, 0.3);
    EXPECT_NEAR(fit_loglog_slope(d2, v2), -3, 0.3);
}

TEST(scan, csv_and_grid) {
    auto g = log_spaced_depths(10, 5000, 8);
    EXPECT_EQ(g.front(), 10);
    EXPECT_EQ(g.back(), 5000);
    for (size_t i = 1; i < g.size(); i++) {
        EXPECT_GT(g[i], g[i - 1]);
    }
    auto rows = transition_scan(kGate, 1000, {5, 10, 20});
    std::string csv = transition_scan_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "d,crlb_theta,crlb_varphi,crlb_chi,slope_theta,slope_varphi,slope_chi");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_THROW(transition_scan(kGate, 1000, {10, 5}), ContractError);
}
