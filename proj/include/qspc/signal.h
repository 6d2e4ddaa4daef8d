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

#include <complex>
#include <vector>

#include "qspc/su2.h"

namespace qspc {

/// Depth and the 2d-1 point modulation grid w_j = j pi / (2d-1).
struct CircuitSpec {
    int depth = 1;

    explicit CircuitSpec(int depth);
    int grid_size() const {
        return 2 * depth - 1;
    }
    double omega(int j) const;
    std::vector<double> omega_grid() const;
};

/// Probabilities of the two Bell-input circuits at one modulation angle.
struct SignalSample {
    double omega = 0;
    double p_x = 0.5;
    double p_y = 0.5;

    /// p_x - 1/2 + i (p_y - 1/2)
    cdouble h() const {
        return {p_x - 0.5, p_y - 0.5};
    }
};

/// DFT coefficients c_k, k = -d+1..d-1, stored in DFT slot order.
struct FourierSpectrum {
    int depth = 1;
    std::vector<cdouble> slots;

    /// c_k for k in [-d+1, d-1].
    cdouble at(int k) const;
    cdouble &at(int k);
    /// Sum_k c_k e^{2ikw}
    cdouble evaluate(double omega) const;
};

SignalSample exact_probabilities(int d, double omega, const FsimParams &params);

/// |h|^2 from the closed form.
double amplitude_profile(int d, double omega, const FsimParams &params);

/// Throws ContractError unless samples sit exactly on CircuitSpec's grid, in order.
FourierSpectrum dft_spectrum(const std::vector<SignalSample> &samples);

/// Exact noiseless spectrum at the standard grid.
FourierSpectrum exact_spectrum(int d, const FsimParams &params);

/// First-order coefficients; element k + d - 1 holds c*_k for k = -d+1..d-1.
std::vector<double> approx_coefficients(int d, double theta);

struct SnrBound {
    double value;          ///< 2(2d-1) M sin^2(theta) (1 - (4/3)(d theta)^2 (1 + 3 d^3 theta^2))
    double leading_order;  ///< 4 d M theta^2
};

/// Throws RegimeViolationError when the bound would be negative.
SnrBound snr_lower_bound(int d, long long m_shots, double theta);

}  // namespace qspc
