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

#include "qspc/noise.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qspc/errors.h"
#include "qspc/signal.h"

namespace qspc {

ConfusionMatrix ConfusionMatrix::identity() {
    return uniform(1.0);
}

ConfusionMatrix ConfusionMatrix::uniform(double diag) {
    ConfusionMatrix c;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            c.r[i][j] = i == j ? diag : (1 - diag) / 3;
        }
    }
    return c;
}

void ConfusionMatrix::validate() const {
    for (int i = 0; i < 4; i++) {
        double s = 0;
        for (int j = 0; j < 4; j++) {
            if (!(r[i][j] >= 0)) {
                throw ContractError("ConfusionMatrix: negative entry");
            }
            s += r[i][j];
        }
        if (std::abs(s - 1) > 1e-12) {
            throw ContractError("ConfusionMatrix: row " + std::to_string(i) + " does not sum to 1");
        }
    }
}

double ConfusionMatrix::kappa() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; i++) {
        m = std::min(m, 2 * r[i][i] - 1);
    }
    return m > 0 ? 1 / m : std::numeric_limits<double>::infinity();
}

void NoiseConfig::validate() const {
    if (shots < 1) {
        throw ContractError("NoiseConfig: shots must be >= 1");
    }
    if (!(depol_rate >= 0 && depol_rate < 1)) {
        throw ContractError("NoiseConfig: depol_rate must lie in [0, 1)");
    }
    if (extra_gates_x < 0 || extra_gates_y < 0) {
        throw ContractError("NoiseConfig: extra gate counts must be >= 0");
    }
    if (drift && (drift->d_theta_frac < 0 || drift->d_phase_max < 0)) {
        throw ContractError("DriftModel: half-widths must be >= 0");
    }
    if (confusion) {
        confusion->validate();
    }
}

uint64_t circuit_id(uint32_t purpose, int depth, int index, InputState state) {
    return (uint64_t(purpose) << 56) | (uint64_t(uint32_t(depth) & 0xFFFFFF) << 32) |
           (uint64_t(uint32_t(index) & 0x7FFFFFFF) << 1) | (state == InputState::kPlusI ? 1 : 0);
}

long long sample_counts(double p_true, long long shots, KeyedStream &stream) {
    if (p_true <= 0) {
        return 0;
    }
    if (p_true >= 1) {
        return shots;
    }
    std::binomial_distribution<long long> dist(shots, p_true);
    return dist(stream);
}

std::array<long long, 4> sample_multinomial(const std::array<double, 4> &q, long long shots, KeyedStream &stream) {
    std::array<long long, 4> counts{};
    long long left = shots;
    double mass = 1;
    for (int i = 0; i < 3 && left > 0; i++) {
        double p = mass > 0 ? std::clamp(q[i] / mass, 0.0, 1.0) : 0.0;
        counts[i] = sample_counts(p, left, stream);
        left -= counts[i];
        mass -= q[i];
    }
    counts[3] = left;
    return counts;
}

double apply_depolarizing(double p, double alpha) {
    return alpha * p + (1 - alpha) / 4;
}

double dem_fidelity(double depol_rate, int n_gates) {
    return std::pow(1 - depol_rate, n_gates);
}

int gate_count(int d, InputState state, const NoiseConfig &noise) {
    return 2 * d + (state == InputState::kPlus ? noise.extra_gates_x : noise.extra_gates_y);
}

std::vector<FsimParams> draw_drifted_gates(
    int d, const FsimParams &params, const DriftModel &drift, uint64_t seed, uint64_t circuit, uint64_t replicate) {
    std::vector<FsimParams> gates(d);
    for (int j = 1; j <= d; j++) {
        KeyedStream s = KeyedStream::derive(seed, circuit, replicate, uint64_t(j));
        double phase_width = drift.d_phase_max * double(j) / double(d);
        FsimParams &g = gates[j - 1];
        g.theta = params.theta + (2 * s.uniform() - 1) * drift.d_theta_frac * params.theta;
        g.varphi = params.varphi + (2 * s.uniform() - 1) * phase_width;
        g.chi = params.chi + (2 * s.uniform() - 1) * phase_width;
    }
    return gates;
}

std::array<double, 4> SubspaceDensity::outcome_distribution() const {
    double leak = (1 - trace()) / 2;
    return {leak, b[0].real(), b[3].real(), leak};
}

namespace {

void depolarize(SubspaceDensity &rho, double r) {
    for (auto &e : rho.b) {
        e *= 1 - r;
    }
    rho.b[0] += r / 4;
    rho.b[3] += r / 4;
}

void conjugate(SubspaceDensity &rho, const Unitary2 &u) {
    Unitary2 b;
    b.m = rho.b;
    rho.b = (u * b * u.adjoint()).m;
}

}  // namespace

SubspaceDensity evolve_subspace_density(
    double omega, const std::vector<FsimParams> &gates, double depol_rate, int extra_gates, InputState state) {
    cdouble beta = state == InputState::kPlus ? cdouble{1, 0} : cdouble{0, 1};
    SubspaceDensity rho;
    rho.b = {0.5, 0.5 * std::conj(beta), 0.5 * beta, 0.5};
    for (int k = 0; k < extra_gates; k++) {
        depolarize(rho, depol_rate);
    }
    Unitary2 z = Unitary2::rz(omega);
    for (const auto &g : gates) {
        conjugate(rho, fsim_subspace_unitary(g));
        depolarize(rho, depol_rate);
        conjugate(rho, z);
        depolarize(rho, depol_rate);
    }
    return rho;
}

std::array<double, 4> apply_confusion(const std::array<double, 4> &q4, const ConfusionMatrix &R) {
    std::array<double, 4> out{};
    for (int j = 0; j < 4; j++) {
        for (int i = 0; i < 4; i++) {
            out[j] += R.r[i][j] * q4[i];
        }
    }
    return out;
}

std::array<double, 4> invert_confusion(const std::array<double, 4> &q4_measured, const ConfusionMatrix &R) {
    double kappa = R.kappa();
    if (!std::isfinite(kappa)) {
        throw InversionRejectedError("invert_confusion: confusion matrix is not diagonally dominant", kappa);
    }
    Eigen::Matrix4d rt;
    Eigen::Vector4d q;
    for (int i = 0; i < 4; i++) {
        q(i) = q4_measured[i];
        for (int j = 0; j < 4; j++) {
            rt(i, j) = R.r[j][i];
        }
    }
    Eigen::FullPivLU<Eigen::Matrix4d> lu(rt);
    if (!lu.isInvertible()) {
        throw InversionRejectedError("invert_confusion: confusion matrix is singular", kappa);
    }
    Eigen::Vector4d p = lu.solve(q);
    return {p(0), p(1), p(2), p(3)};
}

long long confusion_sample_size(double kappa, double epsilon, double alpha_conf, double constant) {
    if (!(epsilon > 0)) {
        throw ContractError("confusion_sample_size: epsilon must be > 0");
    }
    if (!(alpha_conf > 0 && alpha_conf < 1)) {
        throw ContractError("confusion_sample_size: alpha must lie in (0, 1)");
    }
    if (!(kappa >= 1) || !std::isfinite(kappa)) {
        throw ContractError("confusion_sample_size: kappa must be finite and >= 1");
    }
    double k = kappa * (kappa + epsilon);
    double m = constant * k * k * std::log(32 / alpha_conf) / (epsilon * epsilon);
    return (long long)std::ceil(m);
}

CircuitOutcome simulate_noisy_circuit(
    int d,
    double omega,
    const FsimParams &params,
    const NoiseConfig &noise,
    InputState state,
    uint64_t circuit,
    uint64_t replicate) {
    if (state != InputState::kPlus && state != InputState::kPlusI) {
        throw ContractError("simulate_noisy_circuit: invalid input state");
    }
    CircuitOutcome out;
    int extra = state == InputState::kPlus ? noise.extra_gates_x : noise.extra_gates_y;

    std::array<double, 4> q4;
    if (noise.drift) {
        auto gates = draw_drifted_gates(d, params, *noise.drift, noise.seed, circuit, replicate);
        q4 = evolve_subspace_density(omega, gates, noise.depol_rate, extra, state).outcome_distribution();
    } else {
        // Depolarizing commutes with the unitaries, so the channel product
        // collapses to a single global fidelity.
        SignalSample s = exact_probabilities(d, omega, params);
        double p = state == InputState::kPlus ? s.p_x : s.p_y;
        double alpha = dem_fidelity(noise.depol_rate, 2 * d + extra);
        double leak = (1 - alpha) / 4;
        q4 = {leak, apply_depolarizing(p, alpha), apply_depolarizing(1 - p, alpha), leak};
    }

    if (noise.confusion) {
        q4 = apply_confusion(q4, *noise.confusion);
    }
    if (noise.exact) {
        out.measured = q4;
    } else {
        KeyedStream stream = KeyedStream::derive(noise.seed, circuit, replicate, kShotStreamGate);
        auto counts = sample_multinomial(q4, noise.shots, stream);
        for (int i = 0; i < 4; i++) {
            out.measured[i] = double(counts[i]) / double(noise.shots);
        }
    }
    out.p01 = out.measured[1];

    if (noise.confusion && noise.mitigate_readout) {
        try {
            out.p01 = invert_confusion(out.measured, *noise.confusion)[1];
        } catch (const InversionRejectedError &e) {
            out.diagnostics.push_back(std::string("readout mitigation skipped: ") + e.what());
        }
    }
    return out;
}

}  // namespace qspc
