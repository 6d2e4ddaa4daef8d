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

#include "qspc/signal.h"

#include <cmath>
#include <numbers>
#include <string>

#include "qspc/errors.h"

namespace qspc {

namespace {

constexpr double kGridTolerance = 1e-12;

size_t slot_of(int depth, int k) {
    if (k <= -depth || k >= depth) {
        throw ContractError("FourierSpectrum: index " + std::to_string(k) + " out of range");
    }
    return k >= 0 ? size_t(k) : size_t(k + 2 * depth - 1);
}

}  // namespace

CircuitSpec::CircuitSpec(int depth) : depth(depth) {
    if (depth < 1) {
        throw ContractError("CircuitSpec: depth must be >= 1");
    }
}

double CircuitSpec::omega(int j) const {
    return j * std::numbers::pi / grid_size();
}

std::vector<double> CircuitSpec::omega_grid() const {
    std::vector<double> r(grid_size());
    for (int j = 0; j < grid_size(); j++) {
        r[j] = omega(j);
    }
    return r;
}

cdouble FourierSpectrum::at(int k) const {
    return slots[slot_of(depth, k)];
}

cdouble &FourierSpectrum::at(int k) {
    return slots[slot_of(depth, k)];
}

cdouble FourierSpectrum::evaluate(double omega) const {
    cdouble r = 0;
    for (int k = -depth + 1; k < depth; k++) {
        r += at(k) * std::polar(1.0, 2 * k * omega);
    }
    return r;
}

SignalSample exact_probabilities(int d, double omega, const FsimParams &g) {
    PolyPair pq = closed_form_pq(d, omega - g.varphi, g.theta);
    cdouble h = std::polar(1.0, g.varphi - g.chi - 2 * omega) * pq.p_value * cdouble{0, std::sin(g.theta)} *
                pq.q_value;
    return {omega, 0.5 + h.real(), 0.5 + h.imag()};
}

double amplitude_profile(int d, double omega, const FsimParams &g) {
    PolyPair pq = closed_form_pq(d, omega - g.varphi, g.theta);
    double s = std::sin(g.theta) * pq.q_value;
    s *= s;
    return s * (1 - s);
}

FourierSpectrum dft_spectrum(const std::vector<SignalSample> &samples) {
    size_t n = samples.size();
    if (n == 0 || n % 2 == 0) {
        throw ContractError("dft_spectrum: need 2d-1 samples, got " + std::to_string(n));
    }
    CircuitSpec spec(int(n + 1) / 2);
    for (size_t j = 0; j < n; j++) {
        if (std::abs(samples[j].omega - spec.omega(int(j))) > kGridTolerance) {
            throw ContractError("dft_spectrum: sample " + std::to_string(j) + " is off the modulation grid");
        }
    }

    std::vector<cdouble> twiddle(n);
    for (size_t m = 0; m < n; m++) {
        twiddle[m] = std::polar(1.0, -2 * std::numbers::pi * double(m) / double(n));
    }
    FourierSpectrum r;
    r.depth = spec.depth;
    r.slots.assign(n, 0);
    for (size_t s = 0; s < n; s++) {
        cdouble acc = 0;
        for (size_t j = 0; j < n; j++) {
            acc += samples[j].h() * twiddle[(j * s) % n];
        }
        r.slots[s] = acc / double(n);
    }
    return r;
}

FourierSpectrum exact_spectrum(int d, const FsimParams &params) {
    CircuitSpec spec(d);
    std::vector<SignalSample> samples;
    samples.reserve(spec.grid_size());
    for (int j = 0; j < spec.grid_size(); j++) {
        samples.push_back(exact_probabilities(d, spec.omega(j), params));
    }
    return dft_spectrum(samples);
}

std::vector<double> approx_coefficients(int d, double theta) {
    if (d < 1) {
        throw ContractError("approx_coefficients: d must be >= 1");
    }
    double half = std::sin(theta / 2);
    double one_minus_cos = 2 * half * half;
    double dd = d;
    std::vector<double> r(2 * d - 1);
    for (int k = -d + 1; k < d; k++) {
        double kk = k;
        double v;
        if (k >= 0) {
            double a = dd - (2 * kk + 1);
            v = 1 - 0.5 * (3 * dd * dd - kk * kk - (kk + 1) * (kk + 1) - a * a) * one_minus_cos;
        } else {
            double a = dd + 2 * kk + 1;
            v = -0.5 * (dd * dd + a * a - kk * kk - (kk + 1) * (kk + 1)) * one_minus_cos;
        }
        r[k + d - 1] = v;
    }
    return r;
}

SnrBound snr_lower_bound(int d, long long m_shots, double theta) {
    if (d < 1 || m_shots < 1) {
        throw ContractError("snr_lower_bound: need d >= 1 and M >= 1");
    }
    double dt = d * theta;
    double s = std::sin(theta);
    double factor = 1 - (4.0 / 3.0) * dt * dt * (1 + 3.0 * d * dt * dt);
    double value = 2.0 * (2 * d - 1) * double(m_shots) * s * s * factor;
    if (factor < 0) {
        throw RegimeViolationError("snr_lower_bound: d theta too large for the expansion");
    }
    return {value, 4.0 * d * double(m_shots) * theta * theta};
}

}  // namespace qspc
