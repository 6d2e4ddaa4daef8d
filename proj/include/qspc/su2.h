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
#include <complex>
#include <span>
#include <string>

namespace qspc {

using cdouble = std::complex<double>;

/// FsimGate angles restricted to the {|01>, |10>} subspace.
struct FsimParams {
    double theta = 0;   ///< swap angle
    double varphi = 0;  ///< single-qubit phase
    double chi = 0;     ///< off-diagonal phase
};

/// Maps an angle to the principal branch (-pi, pi].
double wrap_pi(double angle);

/// Row-major complex 2x2 matrix.
struct Unitary2 {
    std::array<cdouble, 4> m{cdouble{1}, cdouble{0}, cdouble{0}, cdouble{1}};

    cdouble &operator()(int r, int c) {
        return m[2 * r + c];
    }
    const cdouble &operator()(int r, int c) const {
        return m[2 * r + c];
    }

    Unitary2 operator*(const Unitary2 &other) const;
    Unitary2 adjoint() const;
    cdouble det() const;
    double max_abs_diff(const Unitary2 &other) const;
    /// max |(U^dagger U - I)_{ij}|
    double unitarity_error() const;
    std::string str() const;

    static Unitary2 identity();
    /// e^{i a Z}
    static Unitary2 rz(double a);
    /// e^{i a X}
    static Unitary2 rx(double a);
};

/// P and Q of the periodic circuit at one point.
struct PolyPair {
    cdouble p_value;
    double q_value = 0;
    double sigma = 0;
    double x = 1;
    int d = 1;

    /// |P|^2 + (1 - x^2) Q^2 - 1
    double normalization_error() const;
};

Unitary2 fsim_subspace_unitary(const FsimParams &params);

/// e^{i w_0 Z} prod_j (e^{i arccos(x) X} e^{i w_j Z}); throws DomainError if |x| > 1.
Unitary2 qsp_unitary(double x, std::span<const double> phases);

/// (e^{iwZ} e^{i theta X})^d e^{iwZ} by explicit multiplication.
Unitary2 periodic_unitary_product(int d, double omega, double theta);

/// U_n(x) by the three-term recurrence. U_{-1} = 0.
double chebyshev_u(int n, double x);

/// sin(n s)/sin(s) given sin(s) >= 0 and cos(s). Exact +-n in the limits.
double dirichlet_ratio(int n, double sin_s, double cos_s);

/// Closed form of the periodic circuit with x = cos(theta).
PolyPair closed_form_pq(int d, double omega, double theta);

/// Same quantity at d = 2^j through the doubling recurrences.
PolyPair special_point_pq(int j, double omega, double theta);

/// [[P, i s Q], [i s Q, conj(P)]] with s = sin(theta).
Unitary2 assemble_unitary(const PolyPair &pq, double theta);

}  // namespace qspc
