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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qspc/errors.h"

namespace qspc {

namespace {

// Below this depth the recurrence is cheap enough to always use.
constexpr int kRecurrenceDepth = 256;
constexpr double kNearPole = 1e-4;

struct ChebyshevPair {
    double t_n;       // T_n(c)
    double u_nminus;  // U_{n-1}(c)
};

ChebyshevPair chebyshev_by_recurrence(int n, double c) {
    // U_{k} for k = n-2, n-1; U_{-1} = 0, U_0 = 1.
    double u_prev = 0;
    double u = 1;
    for (int k = 1; k < n; k++) {
        double next = 2 * c * u - u_prev;
        u_prev = u;
        u = next;
    }
    return {c * u - u_prev, u};
}

ChebyshevPair chebyshev_pair(int n, double sin_s, double cos_s) {
    if (n <= kRecurrenceDepth || sin_s < kNearPole) {
        return chebyshev_by_recurrence(n, cos_s);
    }
    double s = std::atan2(sin_s, cos_s);
    return {std::cos(n * s), std::sin(n * s) / sin_s};
}

// sin(sigma) for cos(sigma) = cos(w) cos(t), computed without cancellation.
double sin_sigma(double omega, double theta) {
    double sw = std::sin(omega);
    double cw = std::cos(omega);
    double st = std::sin(theta);
    return std::sqrt(sw * sw + cw * cw * st * st);
}

}  // namespace

double wrap_pi(double angle) {
    double r = std::remainder(angle, 2 * std::numbers::pi);
    if (r <= -std::numbers::pi) {
        r += 2 * std::numbers::pi;
    }
    return r;
}

Unitary2 Unitary2::operator*(const Unitary2 &o) const {
    Unitary2 r;
    r.m[0] = m[0] * o.m[0] + m[1] * o.m[2];
    r.m[1] = m[0] * o.m[1] + m[1] * o.m[3];
    r.m[2] = m[2] * o.m[0] + m[3] * o.m[2];
    r.m[3] = m[2] * o.m[1] + m[3] * o.m[3];
    return r;
}

Unitary2 Unitary2::adjoint() const {
    Unitary2 r;
    r.m[0] = std::conj(m[0]);
    r.m[1] = std::conj(m[2]);
    r.m[2] = std::conj(m[1]);
    r.m[3] = std::conj(m[3]);
    return r;
}

cdouble Unitary2::det() const {
    return m[0] * m[3] - m[1] * m[2];
}

double Unitary2::max_abs_diff(const Unitary2 &other) const {
    double r = 0;
    for (int k = 0; k < 4; k++) {
        r = std::max(r, std::abs(m[k] - other.m[k]));
    }
    return r;
}

double Unitary2::unitarity_error() const {
    return (adjoint() * *this).max_abs_diff(identity());
}

std::string Unitary2::str() const {
    std::stringstream ss;
    ss << "[[" << m[0] << ", " << m[1] << "], [" << m[2] << ", " << m[3] << "]]";
    return ss.str();
}

Unitary2 Unitary2::identity() {
    return Unitary2{};
}

Unitary2 Unitary2::rz(double a) {
    Unitary2 r;
    r.m = {std::polar(1.0, a), 0, 0, std::polar(1.0, -a)};
    return r;
}

Unitary2 Unitary2::rx(double a) {
    Unitary2 r;
    cdouble c{std::cos(a), 0};
    cdouble s{0, std::sin(a)};
    r.m = {c, s, s, c};
    return r;
}

double PolyPair::normalization_error() const {
    return std::norm(p_value) + (1 - x * x) * q_value * q_value - 1;
}

Unitary2 fsim_subspace_unitary(const FsimParams &g) {
    double c = std::cos(g.theta);
    double s = std::sin(g.theta);
    const cdouble mi{0, -1};
    Unitary2 u;
    u.m = {
        std::polar(c, -g.varphi),
        mi * std::polar(s, g.chi),
        mi * std::polar(s, -g.chi),
        std::polar(c, g.varphi),
    };
    return u;
}

Unitary2 qsp_unitary(double x, std::span<const double> phases) {
    if (!(std::abs(x) <= 1)) {
        throw DomainError("qsp_unitary: |x| must be <= 1");
    }
    if (phases.empty()) {
        throw ContractError("qsp_unitary: need at least one phase");
    }
    Unitary2 w = Unitary2::rx(std::acos(x));
    Unitary2 u = Unitary2::rz(phases[0]);
    for (size_t j = 1; j < phases.size(); j++) {
        u = u * w * Unitary2::rz(phases[j]);
    }
    return u;
}

Unitary2 periodic_unitary_product(int d, double omega, double theta) {
    if (d < 1) {
        throw ContractError("periodic_unitary_product: d must be >= 1");
    }
    Unitary2 step = Unitary2::rz(omega) * Unitary2::rx(theta);
    Unitary2 u;
    for (int k = 0; k < d; k++) {
        u = u * step;
    }
    return u * Unitary2::rz(omega);
}

double chebyshev_u(int n, double x) {
    if (n < 0) {
        return 0;
    }
    return chebyshev_by_recurrence(n + 1, x).u_nminus;
}

double dirichlet_ratio(int n, double sin_s, double cos_s) {
    return chebyshev_pair(n, sin_s, cos_s).u_nminus;
}

PolyPair closed_form_pq(int d, double omega, double theta) {
    if (d < 1) {
        throw ContractError("closed_form_pq: d must be >= 1");
    }
    double x = std::cos(theta);
    double cs = std::cos(omega) * x;
    double ss = sin_sigma(omega, theta);
    auto [t, u] = chebyshev_pair(d, ss, cs);

    PolyPair r;
    r.d = d;
    r.x = x;
    r.sigma = std::atan2(ss, cs);
    r.q_value = u;
    r.p_value = std::polar(1.0, omega) * cdouble{t, u * std::sin(omega) * x};
    return r;
}

PolyPair special_point_pq(int j, double omega, double theta) {
    if (j < 0 || j > 30) {
        throw ContractError("special_point_pq: j must be in [0, 30]");
    }
    double x = std::cos(theta);
    // Re and Im of e^{-iw} P, starting from P^(1) = e^{2iw} x.
    double re = std::cos(omega) * x;
    double im = std::sin(omega) * x;
    double q = 1;
    for (int k = 0; k < j; k++) {
        q = 2 * q * re;
        im = 2 * im * re;
        re = 2 * re * re - 1;
    }
    PolyPair r;
    r.d = 1 << j;
    r.x = x;
    r.sigma = std::atan2(sin_sigma(omega, theta), std::cos(omega) * x);
    r.q_value = q;
    r.p_value = std::polar(1.0, omega) * cdouble{re, im};
    return r;
}

Unitary2 assemble_unitary(const PolyPair &pq, double theta) {
    cdouble off{0, std::sin(theta) * pq.q_value};
    Unitary2 u;
    u.m = {pq.p_value, off, off, std::conj(pq.p_value)};
    return u;
}

}  // namespace qspc
