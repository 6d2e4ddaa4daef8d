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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qspc/noise.h"
#include "qspc/su2.h"

namespace qspc {

constexpr int kSchemaVersion = 1;
constexpr const char *kArtifactVersion = "0.1.0";

enum class Mode { kCalibrate, kSweepDepth, kSweepShots, kCrlbScan, kAlphaScan, kConfusionCheck };

const char *mode_name(Mode m);
Mode parse_mode(const std::string &s);

struct PeakFitConfig {
    bool enabled = true;
    int n_pf = 15;
    /// Defaults to pi/(2d).
    std::optional<double> beta_thr;
};

struct ConfusionCheckConfig {
    double epsilon = 0.05;
    double alpha = 0.1;
    int trials = 2000;
    double constant = 8;
    /// Distribution measured through the readout channel.
    std::array<double, 4> p_true{0.0, 0.5, 0.5, 0.0};
};

struct ExperimentConfig {
    Mode mode = Mode::kCalibrate;
    FsimParams gate;
    int depth = 50;
    std::vector<int> depth_grid;
    std::vector<long long> shots_grid;
    int replicates = 96;
    uint64_t seed = 0;
    NoiseConfig noise;
    bool alpha_corrected = false;
    bool theta_pd = false;
    PeakFitConfig peak_fit;
    ConfusionCheckConfig confusion_check;
    std::string output_dir = "out";

    /// Throws ContractError on inconsistent settings.
    void validate() const;
};

/// Rejects unknown keys and a missing or unsupported schema_version.
ExperimentConfig config_from_json(const nlohmann::ordered_json &j);
nlohmann::ordered_json config_to_json(const ExperimentConfig &c);
ExperimentConfig load_config(const std::string &path);

}  // namespace qspc
