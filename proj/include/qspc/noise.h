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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qspc/rng.h"
#include "qspc/su2.h"

namespace qspc {

/// Per-gate i.i.d. uniform coherent errors. At gate j of a depth-d circuit the
/// half-widths are d_theta_frac * theta for theta and d_phase_max * j / d for
/// both phases.
struct DriftModel {
    double d_theta_frac = 0.1;
    double d_phase_max = 0.3;
};

/// Outcome order is 00, 01, 10, 11. r[i][j] = P(j measured | i prepared).
struct ConfusionMatrix {
    std::array<std::array<double, 4>, 4> r{};

    static ConfusionMatrix identity();
    /// All diagonal entries equal to `diag`, off-diagonal mass spread evenly.
    static ConfusionMatrix uniform(double diag);

    /// Throws ContractError unless rows are stochastic.
    void validate() const;
    /// 1 / min_i (2 r_ii - 1); +inf if not diagonally dominant.
    double kappa() const;
};

struct NoiseConfig {
    long long shots = 100000;
    double depol_rate = 0;
    std::optional<DriftModel> drift;
    std::optional<ConfusionMatrix> confusion;
    /// Invert the confusion matrix on the sampled distribution.
    bool mitigate_readout = true;
    /// Infinite-shot limit: return probabilities without sampling.
    bool exact = false;
    uint64_t seed = 0;
    /// Depolarizing channels outside the d repetitions, per input state.
    int extra_gates_x = 5;
    int extra_gates_y = 6;

    void validate() const;
};

enum class InputState { kPlus, kPlusI };

/// Packs a circuit identity for the keyed random streams.
uint64_t circuit_id(uint32_t purpose, int depth, int index, InputState state);

struct CircuitOutcome {
    /// Distribution over 00, 01, 10, 11 after readout (empirical unless exact).
    std::array<double, 4> measured{};
    /// Probability of 01 used for the signal, after mitigation when enabled.
    double p01 = 0;
    std::vector<std::string> diagnostics;
};

long long sample_counts(double p_true, long long shots, KeyedStream &stream);
std::array<long long, 4> sample_multinomial(const std::array<double, 4> &q, long long shots, KeyedStream &stream);

/// alpha p + (1 - alpha) / 4
double apply_depolarizing(double p, double alpha);
/// (1 - r)^n
double dem_fidelity(double depol_rate, int n_gates);
int gate_count(int d, InputState state, const NoiseConfig &noise);

/// Independent per-gate draws; gate j uses the stream (seed, circuit, replicate, j).
std::vector<FsimParams> draw_drifted_gates(
    int d, const FsimParams &params, const DriftModel &drift, uint64_t seed, uint64_t circuit, uint64_t replicate);

/// Unnormalized density block on span{|01>, |10>}. Population that leaves the
/// subspace is the maximally mixed part and splits evenly between 00 and 11.
struct SubspaceDensity {
    std::array<cdouble, 4> b{};

    double trace() const {
        return (b[0] + b[3]).real();
    }
    /// Distribution over 00, 01, 10, 11.
    std::array<double, 4> outcome_distribution() const;
};

/// Channel-by-channel evolution: `extra_gates` depolarizing steps on the input,
/// then for each gate the FsimGate, a depolarizing step, the Z phase, another
/// depolarizing step.
SubspaceDensity evolve_subspace_density(
    double omega, const std::vector<FsimParams> &gates, double depol_rate, int extra_gates, InputState state);

std::array<double, 4> apply_confusion(const std::array<double, 4> &q4, const ConfusionMatrix &R);
/// (R^T)^{-1} q; no clipping. Throws InversionRejectedError.
std::array<double, 4> invert_confusion(const std::array<double, 4> &q4_measured, const ConfusionMatrix &R);

/// ceil(C kappa^2 (kappa + eps)^2 ln(32/alpha) / eps^2)
long long confusion_sample_size(double kappa, double epsilon, double alpha_conf, double constant = 8);

CircuitOutcome simulate_noisy_circuit(
    int d,
    double omega,
    const FsimParams &params,
    const NoiseConfig &noise,
    InputState state,
    uint64_t circuit,
    uint64_t replicate);

}  // namespace qspc
