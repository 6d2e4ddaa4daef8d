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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fmt/format.h"
#include "qspc/errors.h"
#include "qspc/signal.h"

namespace qspc {

namespace {

constexpr double kClamp = 1e-12;
constexpr double kRelativeStep = 1e-6;
constexpr double kMismatchTolerance = 1e-6;

using Vec3 = std::array<double, 3>;

FsimParams with_param(const FsimParams &g, int k, double value) {
    FsimParams r = g;
    (k == 0 ? r.theta : k == 1 ? r.varphi : r.chi) = value;
    return r;
}

double param(const FsimParams &g, int k) {
    return k == 0 ? g.theta : k == 1 ? g.varphi : g.chi;
}

struct Pair {
    double x;
    double y;
};

Pair probs(int d, double omega, const FsimParams &g) {
    SignalSample s = exact_probabilities(d, omega, g);
    return {s.p_x, s.p_y};
}

Pair central(int d, double omega, const FsimParams &g, int k, double h) {
    double v = param(g, k);
    Pair a = probs(d, omega, with_param(g, k, v + h));
    Pair b = probs(d, omega, with_param(g, k, v - h));
    return {(a.x - b.x) / (2 * h), (a.y - b.y) / (2 * h)};
}

Pair richardson(const Pair &coarse, const Pair &fine) {
    return {(4 * fine.x - coarse.x) / 3, (4 * fine.y - coarse.y) / 3};
}

}  // namespace

const char *regime_name(Regime r) {
    switch (r) {
        case Regime::kPreAsymptotic:
            return "pre-asymptotic";
        case Regime::kTransition:
            return "transition";
        case Regime::kAsymptotic:
            return "asymptotic";
    }
    return "?";
}

Regime classify_regime(int d, double theta) {
    double dt = d * std::abs(theta);
    if (dt < 0.1) {
        return Regime::kPreAsymptotic;
    }
    if (dt > 3) {
        return Regime::kAsymptotic;
    }
    return Regime::kTransition;
}

FisherMatrix fisher_matrix(int d, const FsimParams &params, long long m_shots) {
    if (d < 1 || m_shots < 1) {
        throw ContractError("fisher_matrix: need d >= 1 and M >= 1");
    }
    FisherMatrix f;
    f.depth = d;
    f.shots = m_shots;

    CircuitSpec spec(d);
    Vec3 steps;
    for (int k = 0; k < 3; k++) {
        steps[k] = kRelativeStep * std::max(1.0, std::abs(param(params, k)));
    }
    Vec3 max_grad{};
    Vec3 max_mismatch{};
    Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();

    for (int j = 0; j < spec.grid_size(); j++) {
        double w = spec.omega(j);
        Pair p = probs(d, w, params);
        std::array<Pair, 3> grad;
        for (int k = 0; k < 3; k++) {
            double h = steps[k];
            Pair d1 = central(d, w, params, k, h);
            Pair d2 = central(d, w, params, k, h / 2);
            Pair d4 = central(d, w, params, k, h / 4);
            grad[k] = richardson(d1, d2);
            Pair check = richardson(d2, d4);
            max_grad[k] = std::max({max_grad[k], std::abs(grad[k].x), std::abs(grad[k].y)});
            max_mismatch[k] =
                std::max({max_mismatch[k], std::abs(grad[k].x - check.x), std::abs(grad[k].y - check.y)});
        }
        auto weight = [&](double q) {
            double c = std::clamp(q, kClamp, 1 - kClamp);
            if (c != q) {
                f.clamped_points++;
            }
            return 1 / (c * (1 - c));
        };
        double wx = weight(p.x);
        double wy = weight(p.y);
        for (int a = 0; a < 3; a++) {
            for (int b = a; b < 3; b++) {
                acc(a, b) += grad[a].x * grad[b].x * wx + grad[a].y * grad[b].y * wy;
            }
        }
    }
    for (int a = 0; a < 3; a++) {
        for (int b = 0; b < a; b++) {
            acc(a, b) = acc(b, a);
        }
    }
    f.entries = double(m_shots) * acc;

    for (int k = 0; k < 3; k++) {
        if (max_grad[k] > 0) {
            f.gradient_mismatch = std::max(f.gradient_mismatch, max_mismatch[k] / max_grad[k]);
        }
    }
    if (f.gradient_mismatch > kMismatchTolerance) {
        f.diagnostics.push_back(fmt::format("finite-difference step disagreement {:.3g}", f.gradient_mismatch));
    }
    if (f.clamped_points > 0) {
        f.diagnostics.push_back(fmt::format("{} probabilities clamped away from 0/1", f.clamped_points));
    }
    return f;
}

PreasymptoticCrlb preasymptotic_crlb(int d, double theta, long long m_shots) {
    double dd = d;
    double base = 4 * double(m_shots) * dd * (2 * dd - 1);
    double t2 = theta * theta;
    double inf = std::numeric_limits<double>::infinity();
    double lap = dd * dd - 1;
    return {
        1 / base,
        lap > 0 ? 3 / (base * lap * t2) : inf,
        lap > 0 ? (4 * dd * dd - 1) / (lap * base * t2) : inf,
    };
}

CrlbReport crlb_from_fisher(const FisherMatrix &fisher, double theta) {
    CrlbReport r;
    auto pre = preasymptotic_crlb(fisher.depth, theta, fisher.shots);
    r.preasymptotic_theta = pre.theta;
    r.preasymptotic_varphi = pre.varphi;
    r.preasymptotic_chi = pre.chi;
    r.regime = classify_regime(fisher.depth, theta);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(fisher.entries);
    Eigen::Vector3d ev = eig.eigenvalues();
    Eigen::Matrix3d vecs = eig.eigenvectors();
    double top = std::max(std::abs(ev(2)), std::numeric_limits<double>::min());
    std::array<bool, 3> unbounded{};
    Eigen::Matrix3d inv = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; i++) {
        if (ev(i) <= 1e-13 * top) {
            for (int k = 0; k < 3; k++) {
                if (std::abs(vecs(k, i)) > 1e-8) {
                    unbounded[k] = true;
                }
            }
        } else {
            inv += vecs.col(i) * vecs.col(i).transpose() / ev(i);
        }
    }
    static const char *names[3] = {"theta", "varphi", "chi"};
    std::array<double, 3> diag;
    for (int k = 0; k < 3; k++) {
        diag[k] = unbounded[k] ? std::numeric_limits<double>::infinity() : inv(k, k);
        if (unbounded[k]) {
            r.unbounded.push_back(names[k]);
        }
    }
    r.crlb_theta = diag[0];
    r.crlb_varphi = diag[1];
    r.crlb_chi = diag[2];
    return r;
}

CrlbReport crlb(int d, const FsimParams &params, long long m_shots) {
    return crlb_from_fisher(fisher_matrix(d, params, m_shots), params.theta);
}

std::vector<double> loglog_slopes(const std::vector<double> &depths, const std::vector<double> &values) {
    size_t n = depths.size();
    if (values.size() != n) {
        throw ContractError("loglog_slopes: size mismatch");
    }
    std::vector<double> r(n, std::numeric_limits<double>::quiet_NaN());
    if (n < 2) {
        return r;
    }
    for (size_t i = 0; i < n; i++) {
        size_t a = i == 0 ? 0 : i - 1;
        size_t b = i + 1 == n ? n - 1 : i + 1;
        r[i] = (std::log(values[b]) - std::log(values[a])) / (std::log(depths[b]) - std::log(depths[a]));
    }
    return r;
}

double fit_loglog_slope(const std::vector<double> &depths, const std::vector<double> &values) {
    size_t n = depths.size();
    if (n < 2 || values.size() != n) {
        throw ContractError("fit_loglog_slope: need at least two matching points");
    }
    double mx = 0;
    double my = 0;
    for (size_t i = 0; i < n; i++) {
        mx += std::log(depths[i]);
        my += std::log(values[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0;
    double sxx = 0;
    for (size_t i = 0; i < n; i++) {
        double dx = std::log(depths[i]) - mx;
        sxy += dx * (std::log(values[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<ScanRow> transition_scan(const FsimParams &params, long long m_shots, const std::vector<int> &depth_grid) {
    for (size_t i = 1; i < depth_grid.size(); i++) {
        if (depth_grid[i] <= depth_grid[i - 1]) {
            throw ContractError("transition_scan: depth grid must be strictly ascending");
        }
    }
    std::vector<ScanRow> rows;
    std::vector<double> ds, ct, cv, cc;
    for (int d : depth_grid) {
        CrlbReport c = crlb(d, params, m_shots);
        rows.push_back({d, c.crlb_theta, c.crlb_varphi, c.crlb_chi, 0, 0, 0, c.preasymptotic_varphi});
        ds.push_back(d);
        ct.push_back(c.crlb_theta);
        cv.push_back(c.crlb_varphi);
        cc.push_back(c.crlb_chi);
    }
    auto st = loglog_slopes(ds, ct);
    auto sv = loglog_slopes(ds, cv);
    auto sc = loglog_slopes(ds, cc);
    for (size_t i = 0; i < rows.size(); i++) {
        rows[i].slope_theta = st[i];
        rows[i].slope_varphi = sv[i];
        rows[i].slope_chi = sc[i];
    }
    return rows;
}

std::string transition_scan_csv(const std::vector<ScanRow> &rows) {
    std::string out = "d,crlb_theta,crlb_varphi,crlb_chi,slope_theta,slope_varphi,slope_chi\n";
    for (const auto &r : rows) {
        out += fmt::format(
            "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
            r.d,
            r.crlb_theta,
            r.crlb_varphi,
            r.crlb_chi,
            r.slope_theta,
            r.slope_varphi,
            r.slope_chi);
    }
    return out;
}

std::vector<int> log_spaced_depths(int lo, int hi, int per_decade) {
    if (lo < 1 || hi < lo || per_decade < 1) {
        throw ContractError("log_spaced_depths: need 1 <= lo <= hi and per_decade >= 1");
    }
    std::vector<int> r;
    double step = std::pow(10.0, 1.0 / per_decade);
    for (double v = lo; v <= hi * (1 + 1e-12); v *= step) {
        int d = int(std::lround(v));
        if (r.empty() || d > r.back()) {
            r.push_back(d);
        }
    }
    if (r.back() != hi) {
        r.push_back(hi);
    }
    return r;
}

}  // namespace qspc
