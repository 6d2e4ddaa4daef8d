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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qspc/config.h"
#include "qspc/estimators.h"

namespace qspc {

/// Runs fn(i) for i in [0, n) on `jobs` threads. Each index is written once.
void parallel_for(int n, int jobs, const std::function<void(int)> &fn);

/// Circuit purposes used to key the random streams.
enum : uint32_t { kPurposeGrid = 0, kPurposePeakFit = 1, kPurposeLadder = 2 };

/// Full pipeline for one replicate at (depth, shots): simulate, DFT, estimate,
/// then the optional corrected, peak-fit and ladder estimators.
EstimateReport run_replicate(const ExperimentConfig &config, int depth, long long shots, int replicate);

struct ReplicateResult {
    int index = 0;
    bool ok = false;
    std::string error;
    EstimateReport report;
};

struct EstimatorSummary {
    std::string estimator;
    double truth = 0;
    int n = 0;
    double mean = 0;
    double var = 0;  ///< population variance (divisor n)
    double bias = 0;
    double bias2 = 0;
    double mse = 0;  ///< var + bias2
    double ci_low = 0;
    double ci_high = 0;
};

/// Errors are supplied already reduced (phase errors wrapped modulo pi).
/// The interval is a 95% percentile bootstrap of the MSE.
EstimatorSummary summarize(const std::string &name, double truth, const std::vector<double> &errors, uint64_t seed);

struct RunRecord {
    ExperimentConfig config;
    std::string grid_var;
    double grid_value = 0;
    int depth = 0;
    long long shots = 0;
    std::vector<ReplicateResult> replicates;
    std::vector<EstimatorSummary> summaries;
    /// Kept out of the JSON so records stay byte-identical across runs.
    double wall_clock_seconds = 0;

    const EstimatorSummary *summary(const std::string &name) const;
};

nlohmann::ordered_json record_to_json(const RunRecord &r);

RunRecord run_calibration(const ExperimentConfig &config, int jobs);
RunRecord run_point(const ExperimentConfig &config, int depth, long long shots, int jobs);

/// One record per depth (sweep-depth) or per shot count (sweep-shots).
std::vector<RunRecord> run_sweep(const ExperimentConfig &config, int jobs);

/// Header grid_var,grid_value,estimator,n,mse,var,bias2,ci_low,ci_high.
std::string sweep_csv(const std::vector<RunRecord> &records);

struct AlphaScanRow {
    int d;
    double alpha_dem;
    double alpha_hat_median;
    double abs_dev_median;
    double theta_corrected_median;
    int ok;
};

std::vector<AlphaScanRow> run_alpha_scan(const ExperimentConfig &config, int jobs);
std::string alpha_scan_csv(const std::vector<AlphaScanRow> &rows);

struct ConfusionReport {
    double kappa = 0;
    long long shots_per_row = 0;
    int trials = 0;
    int failures = 0;
    double failure_rate = 0;
    double epsilon = 0;
    double alpha = 0;
    double max_error = 0;
    bool within_alpha = false;
};

ConfusionReport run_confusion_check(const ExperimentConfig &config, int jobs);
nlohmann::ordered_json confusion_report_to_json(const ConfusionReport &r);

/// Top-level output document for a CLI run.
nlohmann::ordered_json run_document(const ExperimentConfig &config, const nlohmann::ordered_json &results);

/// Maps file name to CSV content for the given figure id. Throws ContractError
/// when the document's mode cannot produce that figure.
std::map<std::string, std::string> emit_figure_data(const nlohmann::ordered_json &document, const std::string &figure);

/// Figure ids understood by emit_figure_data.
std::vector<std::string> figure_ids();

double median(std::vector<double> v);

}  // namespace qspc
