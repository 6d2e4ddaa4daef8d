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

#include "qspc/estimators.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "qspc/errors.h"

namespace qspc {

namespace {

// Representative of an angle modulo pi in (-pi/2, pi/2].
double wrap_half_pi(double a) {
    double r = std::remainder(a, std::numbers::pi);
    if (r <= -std::numbers::pi / 2) {
        r += std::numbers::pi;
    }
    return r;
}

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T> &v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

void to_json(nlohmann::ordered_json &j, const EstimateReport &r) {
    j = nlohmann::ordered_json{
        {"theta_hat", r.theta_hat},
        {"varphi_hat", r.varphi_hat},
        {"alpha_hat", optional_json(r.alpha_hat)},
        {"theta_alpha_corrected", optional_json(r.theta_alpha_corrected)},
        {"theta_pd", optional_json(r.theta_pd)},
        {"theta_pf", optional_json(r.theta_pf)},
        {"var_theory_theta", r.var_theory_theta},
        {"var_theory_varphi", r.var_theory_varphi},
        {"warnings", r.warnings},
        {"depth", r.depth},
        {"shots", r.shots},
        {"diagnostics", {{"amplitudes", r.amplitudes}, {"phase_diffs", r.phase_diffs}}},
    };
}

WpaWeights WpaWeights::closed_form(int n) {
    if (n < 1) {
        throw ContractError("WpaWeights: n must be >= 1");
    }
    WpaWeights w;
    w.dimension = n;
    w.weights.resize(n);
    double np1 = n + 1;
    double scale = 1.5 * np1 / (np1 * np1 - 1);
    for (int k = 0; k < n; k++) {
        double u = (k - (n - 1) / 2.0) / (np1 / 2);
        w.weights[k] = scale * (1 - u * u);
    }
    return w;
}

WpaWeights WpaWeights::solve(int n) {
    if (n < 1) {
        throw ContractError("WpaWeights: n must be >= 1");
    }
    std::vector<double> w = laplacian_solve(std::vector<double>(n, 1.0));
    double total = 0;
    for (double v : w) {
        total += v;
    }
    for (double &v : w) {
        v /= total;
    }
    return {n, std::move(w)};
}

std::vector<double> laplacian_solve(const std::vector<double> &v) {
    // Thomas algorithm with sub/super diagonal -1 and diagonal 2.
    size_t n = v.size();
    std::vector<double> c(n), x(n);
    double denom = 2;
    c[0] = -1 / denom;
    x[0] = v[0] / denom;
    for (size_t i = 1; i < n; i++) {
        denom = 2 + c[i - 1];
        c[i] = -1 / denom;
        x[i] = (v[i] + x[i - 1]) / denom;
    }
    for (size_t i = n - 1; i-- > 0;) {
        x[i] -= c[i] * x[i + 1];
    }
    return x;
}

double wpa_solve(const std::vector<double> &values) {
    if (values.empty()) {
        throw ContractError("wpa_solve: need at least one value");
    }
    std::vector<double> a = laplacian_solve(values);
    std::vector<double> b = laplacian_solve(std::vector<double>(values.size(), 1.0));
    double num = 0;
    double den = 0;
    for (size_t i = 0; i < values.size(); i++) {
        num += a[i];
        den += b[i];
    }
    return num / den;
}

std::vector<double> sequential_phase_diffs(const FourierSpectrum &spectrum) {
    int d = spectrum.depth;
    if (d < 2) {
        throw ContractError("sequential_phase_diffs: d must be >= 2");
    }
    std::vector<double> out(d - 1);
    for (int k = 0; k + 1 < d; k++) {
        cdouble a = spectrum.at(k);
        cdouble b = spectrum.at(k + 1);
        if (a == cdouble{0} || b == cdouble{0}) {
            throw DegenerateCoefficientError("sequential_phase_diffs: zero coefficient at k = " + std::to_string(a == cdouble{0} ? k : k + 1));
        }
        out[k] = wrap_pi(std::arg(a * std::conj(b)));
    }
    return out;
}

EstimateReport qspcf_estimate(const FourierSpectrum &spectrum, long long m_shots) {
    int d = spectrum.depth;
    if (d < 2) {
        throw ContractError("qspcf_estimate: d must be >= 2");
    }
    if (m_shots < 1) {
        throw ContractError("qspcf_estimate: shots must be >= 1");
    }
    EstimateReport r;
    r.depth = d;
    r.shots = m_shots;

    double low_snr = 1e-3 / std::sqrt(double(m_shots) * (2 * d - 1));
    double sum = 0;
    for (int k = 0; k < d; k++) {
        double a = std::abs(spectrum.at(k));
        r.amplitudes.push_back(a);
        sum += a;
        if (a < low_snr) {
            r.warnings.push_back("low SNR coefficient at k = " + std::to_string(k));
        }
    }
    r.theta_hat = sum / d;

    r.phase_diffs = sequential_phase_diffs(spectrum);
    // Average around the circular mean so differences near +-pi do not split
    // across the branch cut; identical to the plain average otherwise.
    WpaWeights mu = WpaWeights::solve(d - 1);
    cdouble resultant = 0;
    for (int k = 0; k < d - 1; k++) {
        resultant += mu.weights[k] * std::polar(1.0, r.phase_diffs[k]);
    }
    double ref = std::arg(resultant);
    std::vector<double> centered(d - 1);
    for (int k = 0; k < d - 1; k++) {
        centered[k] = wrap_pi(r.phase_diffs[k] - ref);
    }
    r.varphi_hat = wrap_half_pi(0.5 * (ref + wpa_solve(centered)));

    double md = double(m_shots) * d * (2 * d - 1);
    r.var_theory_theta = 1 / (4 * md);
    r.var_theory_varphi = 3 / (4 * md * (double(d) * d - 1) * r.theta_hat * r.theta_hat);
    return r;
}

AlphaCorrected estimate_alpha_corrected(const FourierSpectrum &spectrum) {
    int d = spectrum.depth;
    if (d < 3) {
        throw ContractError("estimate_alpha_corrected: d must be >= 3");
    }
    double rest = 0;
    for (int k = 1; k < d; k++) {
        rest += std::abs(spectrum.at(k));
    }
    rest /= d - 1;
    double alpha = 1 - 2 * std::numbers::sqrt2 * (std::abs(spectrum.at(0)) - rest);
    if (!(alpha > 0)) {
        throw FidelityCollapseError("estimate_alpha_corrected: fidelity estimate is not positive");
    }
    return {alpha, rest / alpha};
}

std::vector<int> theta_pd_depths(int d) {
    std::vector<int> r;
    for (int depth = d; depth <= 3 * d; depth += 2) {
        r.push_back(depth);
    }
    return r;
}

ThetaPd theta_pd_estimate(int d, const std::vector<double> &amplitudes, long long m_shots, double var_phi_prior) {
    if (d < 1) {
        throw ContractError("theta_pd_estimate: d must be >= 1");
    }
    if (amplitudes.size() != size_t(d) + 1) {
        throw ContractError(
            "theta_pd_estimate: expected " + std::to_string(d + 1) + " ladder depths, got " +
            std::to_string(amplitudes.size()));
    }
    std::vector<double> gamma(d);
    for (int j = 0; j < d; j++) {
        gamma[j] = amplitudes[j + 1] - amplitudes[j];
    }
    ThetaPd r;
    r.theta_pd = 0.5 * wpa_solve(gamma);
    double dd = d;
    r.var_theory = 3 / (4 * double(m_shots) * dd * (dd + 1) * (dd + 2));
    double t = std::abs(r.theta_pd);
    r.bias_budget = 6.5 * dd * dd * t * var_phi_prior + 37 * std::pow(dd * t, 3);
    return r;
}

std::vector<double> peak_fit_grid(int d, double phi_prior, int n) {
    if (n < 3 || d < 1) {
        throw ContractError("peak_fit_grid: need n >= 3 and d >= 1");
    }
    std::vector<double> r(n);
    for (int j = 0; j < n; j++) {
        r[j] = phi_prior + (std::numbers::pi / d) * (double(j) / (n - 1) - 0.5);
    }
    return r;
}

PeakFit peak_fit(
    const std::vector<double> &omegas,
    const std::vector<double> &amplitudes,
    int d,
    double phi_prior,
    std::optional<double> beta_thr) {
    size_t n = omegas.size();
    if (n < 3 || amplitudes.size() != n) {
        throw ContractError("peak_fit: need n >= 3 matching samples");
    }
    // Fit in the offset t = w - phi_prior; the model is the same.
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (size_t j = 0; j < n; j++) {
        double t = omegas[j] - phi_prior;
        design(j, 0) = t * t;
        design(j, 1) = t;
        design(j, 2) = 1;
        y(j) = amplitudes[j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3) {
        throw FitError("peak_fit: singular normal equations");
    }
    Eigen::Vector3d coef = qr.solve(y);
    double a = coef(0);
    double b = coef(1);
    double c = coef(2);
    if (a == 0) {
        return {a, phi_prior, c, false, std::nullopt};
    }

    PeakFit r;
    r.beta0 = a;
    r.beta1 = phi_prior - b / (2 * a);
    r.beta2 = c - b * b / (4 * a);
    double thr = beta_thr.value_or(std::numbers::pi / (2 * d));
    r.accepted = a < 0 && std::abs(r.beta1 - phi_prior) < thr;
    if (r.accepted) {
        r.theta_pf = r.beta2 / d;
    }
    return r;
}

}  // namespace qspc
