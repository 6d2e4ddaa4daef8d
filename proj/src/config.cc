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

#include "qspc/config.h"

#include <fstream>
#include <set>

#include "qspc/errors.h"

namespace qspc {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!j.is_object()) {
        throw ContractError("config: '" + where + "' must be an object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &item : j.items()) {
        if (!ok.contains(item.key())) {
            throw ContractError("config: unknown key '" + item.key() + "' in " + where);
        }
    }
}

template <typename T>
void read(const json &j, const char *key, T &out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception &e) {
            throw ContractError(std::string("config: bad value for '") + key + "': " + e.what());
        }
    }
}

template <typename T>
void read_optional(const json &j, const char *key, std::optional<T> &out) {
    if (j.contains(key)) {
        if (j.at(key).is_null()) {
            out.reset();
        } else {
            T v;
            read(j, key, v);
            out = v;
        }
    }
}

ConfusionMatrix confusion_from_json(const json &j) {
    ConfusionMatrix c;
    if (!j.is_array() || j.size() != 4) {
        throw ContractError("config: confusion must be a 4x4 array");
    }
    for (int i = 0; i < 4; i++) {
        if (!j[i].is_array() || j[i].size() != 4) {
            throw ContractError("config: confusion must be a 4x4 array");
        }
        for (int k = 0; k < 4; k++) {
            c.r[i][k] = j[i][k].get<double>();
        }
    }
    return c;
}

}  // namespace

const char *mode_name(Mode m) {
    switch (m) {
        case Mode::kCalibrate:
            return "calibrate";
        case Mode::kSweepDepth:
            return "sweep-depth";
        case Mode::kSweepShots:
            return "sweep-shots";
        case Mode::kCrlbScan:
            return "crlb-scan";
        case Mode::kAlphaScan:
            return "alpha-scan";
        case Mode::kConfusionCheck:
            return "confusion-check";
    }
    return "?";
}

Mode parse_mode(const std::string &s) {
    for (Mode m : {Mode::kCalibrate,
                   Mode::kSweepDepth,
                   Mode::kSweepShots,
                   Mode::kCrlbScan,
                   Mode::kAlphaScan,
                   Mode::kConfusionCheck}) {
        if (s == mode_name(m)) {
            return m;
        }
    }
    throw ContractError("config: unknown mode '" + s + "'");
}

void ExperimentConfig::validate() const {
    noise.validate();
    if (replicates < 1) {
        throw ContractError("config: replicates must be >= 1");
    }
    if (mode == Mode::kCalibrate && depth < 2) {
        throw ContractError("config: calibrate mode needs depth >= 2");
    }
    if ((mode == Mode::kSweepDepth || mode == Mode::kCrlbScan || mode == Mode::kAlphaScan) && depth_grid.empty()) {
        throw ContractError(std::string("config: ") + mode_name(mode) + " needs a nonempty depth_grid");
    }
    if (mode == Mode::kSweepShots && shots_grid.empty()) {
        throw ContractError("config: sweep-shots needs a nonempty shots_grid");
    }
    for (int d : depth_grid) {
        if (d < 2) {
            throw ContractError("config: depth_grid entries must be >= 2");
        }
    }
    for (long long m : shots_grid) {
        if (m < 1) {
            throw ContractError("config: shots_grid entries must be >= 1");
        }
    }
    if (peak_fit.n_pf < 3) {
        throw ContractError("config: peak_fit.n_pf must be >= 3");
    }
    if (mode == Mode::kConfusionCheck && !noise.confusion) {
        throw ContractError("config: confusion-check needs noise.confusion");
    }
}

ExperimentConfig config_from_json(const json &j) {
    check_keys(
        j,
        "root",
        {"schema_version",
         "mode",
         "gate",
         "depth",
         "depth_grid",
         "shots_grid",
         "replicates",
         "seed",
         "noise",
         "estimators",
         "confusion_check",
         "output_dir"});
    if (!j.contains("schema_version")) {
        throw ContractError("config: missing schema_version");
    }
    if (j.at("schema_version") != kSchemaVersion) {
        throw ContractError("config: unsupported schema_version " + j.at("schema_version").dump());
    }
    ExperimentConfig c;
    if (!j.contains("mode")) {
        throw ContractError("config: missing mode");
    }
    c.mode = parse_mode(j.at("mode").get<std::string>());

    if (j.contains("gate")) {
        const json &g = j.at("gate");
        check_keys(g, "gate", {"theta", "varphi", "chi"});
        read(g, "theta", c.gate.theta);
        read(g, "varphi", c.gate.varphi);
        read(g, "chi", c.gate.chi);
    }
    read(j, "depth", c.depth);
    read(j, "depth_grid", c.depth_grid);
    read(j, "shots_grid", c.shots_grid);
    read(j, "replicates", c.replicates);
    read(j, "seed", c.seed);
    read(j, "output_dir", c.output_dir);

    if (j.contains("noise")) {
        const json &n = j.at("noise");
        check_keys(
            n,
            "noise",
            {"shots", "depol_rate", "drift", "confusion", "mitigate_readout", "exact", "extra_gates_x", "extra_gates_y"});
        read(n, "shots", c.noise.shots);
        read(n, "depol_rate", c.noise.depol_rate);
        read(n, "mitigate_readout", c.noise.mitigate_readout);
        read(n, "exact", c.noise.exact);
        read(n, "extra_gates_x", c.noise.extra_gates_x);
        read(n, "extra_gates_y", c.noise.extra_gates_y);
        if (n.contains("drift") && !n.at("drift").is_null()) {
            const json &dj = n.at("drift");
            check_keys(dj, "noise.drift", {"d_theta_frac", "d_phase_max"});
            DriftModel dm;
            read(dj, "d_theta_frac", dm.d_theta_frac);
            read(dj, "d_phase_max", dm.d_phase_max);
            c.noise.drift = dm;
        }
        if (n.contains("confusion") && !n.at("confusion").is_null()) {
            c.noise.confusion = confusion_from_json(n.at("confusion"));
        }
    }
    if (j.contains("estimators")) {
        const json &e = j.at("estimators");
        check_keys(e, "estimators", {"alpha_corrected", "theta_pd", "peak_fit"});
        read(e, "alpha_corrected", c.alpha_corrected);
        read(e, "theta_pd", c.theta_pd);
        if (e.contains("peak_fit")) {
            const json &p = e.at("peak_fit");
            check_keys(p, "estimators.peak_fit", {"enabled", "n_pf", "beta_thr"});
            read(p, "enabled", c.peak_fit.enabled);
            read(p, "n_pf", c.peak_fit.n_pf);
            read_optional(p, "beta_thr", c.peak_fit.beta_thr);
        }
    }
    if (j.contains("confusion_check")) {
        const json &cc = j.at("confusion_check");
        check_keys(cc, "confusion_check", {"epsilon", "alpha", "trials", "constant", "p_true"});
        read(cc, "epsilon", c.confusion_check.epsilon);
        read(cc, "alpha", c.confusion_check.alpha);
        read(cc, "trials", c.confusion_check.trials);
        read(cc, "constant", c.confusion_check.constant);
        read(cc, "p_true", c.confusion_check.p_true);
    }
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig &c) {
    json noise{
        {"shots", c.noise.shots},
        {"depol_rate", c.noise.depol_rate},
        {"drift", nullptr},
        {"confusion", nullptr},
        {"mitigate_readout", c.noise.mitigate_readout},
        {"exact", c.noise.exact},
        {"extra_gates_x", c.noise.extra_gates_x},
        {"extra_gates_y", c.noise.extra_gates_y},
    };
    if (c.noise.drift) {
        noise["drift"] = {{"d_theta_frac", c.noise.drift->d_theta_frac}, {"d_phase_max", c.noise.drift->d_phase_max}};
    }
    if (c.noise.confusion) {
        noise["confusion"] = c.noise.confusion->r;
    }
    json peak{
        {"enabled", c.peak_fit.enabled},
        {"n_pf", c.peak_fit.n_pf},
        {"beta_thr", c.peak_fit.beta_thr ? json(*c.peak_fit.beta_thr) : json(nullptr)},
    };
    return json{
        {"schema_version", kSchemaVersion},
        {"mode", mode_name(c.mode)},
        {"gate", {{"theta", c.gate.theta}, {"varphi", c.gate.varphi}, {"chi", c.gate.chi}}},
        {"depth", c.depth},
        {"depth_grid", c.depth_grid},
        {"shots_grid", c.shots_grid},
        {"replicates", c.replicates},
        {"seed", c.seed},
        {"noise", noise},
        {"estimators", {{"alpha_corrected", c.alpha_corrected}, {"theta_pd", c.theta_pd}, {"peak_fit", peak}}},
        {"confusion_check",
         {{"epsilon", c.confusion_check.epsilon},
          {"alpha", c.confusion_check.alpha},
          {"trials", c.confusion_check.trials},
          {"constant", c.confusion_check.constant},
          {"p_true", c.confusion_check.p_true}}},
        {"output_dir", c.output_dir},
    };
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ContractError("config: cannot open " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ContractError(std::string("config: parse error: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace qspc
