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

#include <Eigen/Core>
#include <string>
#include <vector>

#include "qspc/su2.h"

namespace qspc {

enum class Regime { kPreAsymptotic, kTransition, kAsymptotic };

const char *regime_name(Regime r);
/// Pre-asymptotic below d theta = 0.1, asymptotic above 3.
Regime classify_regime(int d, double theta);

/// Parameter order (theta, varphi, chi).
struct FisherMatrix {
    Eigen::Matrix3d entries = Eigen::Matrix3d::Zero();
    int depth = 0;
    long long shots = 0;
    /// Largest disagreement between the two finite-difference step sizes,
    /// relative to the largest derivative of the same parameter.
    double gradient_mismatch = 0;
    int clamped_points = 0;
    std::vector<std::string> diagnostics;
};

struct PreasymptoticCrlb {
    double theta;
    double varphi;
    double chi;
};

struct CrlbReport {
    double crlb_theta = 0;
    double crlb_varphi = 0;
    double crlb_chi = 0;
    double preasymptotic_theta = 0;
    double preasymptotic_varphi = 0;
    double preasymptotic_chi = 0;
    Regime regime = Regime::kPreAsymptotic;
    /// Parameters along null directions of a singular Fisher matrix.
    std::vector<std::string> unbounded;
};

FisherMatrix fisher_matrix(int d, const FsimParams &params, long long m_shots);

PreasymptoticCrlb preasymptotic_crlb(int d, double theta, long long m_shots);

/// Diagonal of the inverse; singular directions are reported as +inf.
CrlbReport crlb_from_fisher(const FisherMatrix &fisher, double theta);
CrlbReport crlb(int d, const FsimParams &params, long long m_shots);

/// Local slope of log(values) against log(depths): centered differences in
/// the interior, one-sided at the ends.
std::vector<double> loglog_slopes(const std::vector<double> &depths, const std::vector<double> &values);

/// Least-squares slope of log(values) against log(depths).
double fit_loglog_slope(const std::vector<double> &depths, const std::vector<double> &values);

struct ScanRow {
    int d;
    double crlb_theta;
    double crlb_varphi;
    double crlb_chi;
    double slope_theta;
    double slope_varphi;
    double slope_chi;
    double preasymptotic_varphi;
};

std::vector<ScanRow> transition_scan(const FsimParams &params, long long m_shots, const std::vector<int> &depth_grid);

/// Header d,crlb_theta,crlb_varphi,crlb_chi,slope_theta,slope_varphi,slope_chi.
std::string transition_scan_csv(const std::vector<ScanRow> &rows);

/// Roughly log-spaced distinct integers in [lo, hi], `per_decade` per factor of ten.
std::vector<int> log_spaced_depths(int lo, int hi, int per_decade);

}  // namespace qspc
