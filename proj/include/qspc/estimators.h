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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qspc/signal.h"

namespace qspc {

struct EstimateReport {
    int depth = 0;
    long long shots = 0;
    double theta_hat = 0;
    /// In (-pi/2, pi/2]; phi is identifiable only modulo pi.
    double varphi_hat = 0;
    std::optional<double> alpha_hat;
    std::optional<double> theta_alpha_corrected;
    std::optional<double> theta_pd;
    std::optional<double> theta_pf;
    double var_theory_theta = 0;
    double var_theory_varphi = 0;
    std::vector<double> amplitudes;   ///< |c_k|, k = 0..d-1
    std::vector<double> phase_diffs;  ///< Delta_k, k = 0..d-2
    std::vector<std::string> warnings;
};

void to_json(nlohmann::ordered_json &j, const EstimateReport &r);

/// Weights of the inverse-Laplacian weighted average over n values.
struct WpaWeights {
    int dimension = 0;
    std::vector<double> weights;

    /// Closed-form parabolic window.
    static WpaWeights closed_form(int n);
    /// D^{-1} 1 / (1^T D^{-1} 1) via the tridiagonal solve.
    static WpaWeights solve(int n);
};

/// D^{-1} v for the n x n discrete Laplacian (2 on the diagonal, -1 beside it).
std::vector<double> laplacian_solve(const std::vector<double> &v);

/// Principal phase of c_k conj(c_{k+1}) for k = 0..d-2.
std::vector<double> sequential_phase_diffs(const FourierSpectrum &spectrum);

/// (1^T D^{-1} v) / (1^T D^{-1} 1)
double wpa_solve(const std::vector<double> &values);

EstimateReport qspcf_estimate(const FourierSpectrum &spectrum, long long m_shots);

struct AlphaCorrected {
    double alpha_hat;
    double theta_hat;
};

/// Uses |c_0| against the k >= 1 population. Throws FidelityCollapseError.
AlphaCorrected estimate_alpha_corrected(const FourierSpectrum &spectrum);

/// Depths of the ladder: d, d+2, ..., 3d.
std::vector<int> theta_pd_depths(int d);

struct ThetaPd {
    double theta_pd;
    double var_theory;
    double bias_budget;
};

/// `amplitudes[j]` is |h| at depth d + 2j, all at w = phi_prior.
ThetaPd theta_pd_estimate(int d, const std::vector<double> &amplitudes, long long m_shots, double var_phi_prior);

/// w_j = phi_prior + (pi/d)(j/(n-1) - 1/2)
std::vector<double> peak_fit_grid(int d, double phi_prior, int n);

struct PeakFit {
    double beta0;
    double beta1;
    double beta2;
    bool accepted;
    std::optional<double> theta_pf;
};

/// Quadratic least squares; accept iff concave and the vertex sits within
/// beta_thr of the prior. Default threshold pi/(2d).
PeakFit peak_fit(
    const std::vector<double> &omegas,
    const std::vector<double> &amplitudes,
    int d,
    double phi_prior,
    std::optional<double> beta_thr = std::nullopt);

}  // namespace qspc
