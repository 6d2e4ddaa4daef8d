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

#include "qspc/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "fmt/format.h"
#include "qspc/errors.h"
#include "qspc/fisher.h"

namespace qspc {

namespace {

using json = nlohmann::ordered_json;

constexpr int kBootstrapResamples = 1000;

double wrap_half_pi(double a) {
    double r = std::remainder(a, std::numbers::pi);
    if (r <= -std::numbers::pi / 2) {
        r += std::numbers::pi;
    }
    return r;
}

uint64_t name_hash(const std::string &s) {
    // FNV-1a; only needs to be stable.
    uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001B3ULL;
    }
    return h;
}

std::string num(double v) {
    if (!std::isfinite(v)) {
        return "nan";
    }
    return fmt::format("{:.17g}", v);
}

double json_num(const json &j) {
    return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

json summary_to_json(const EstimatorSummary &s) {
    return json{
        {"estimator", s.estimator},
        {"truth", s.truth},
        {"n", s.n},
        {"mean", s.mean},
        {"var", s.var},
        {"bias", s.bias},
        {"bias2", s.bias2},
        {"mse", s.mse},
        {"ci_low", s.ci_low},
        {"ci_high", s.ci_high},
    };
}

const json *find_summary(const json &record, const std::string &name) {
    for (const auto &s : record.at("summaries")) {
        if (s.at("estimator") == name) {
            return &s;
        }
    }
    return nullptr;
}

double summary_field(const json &record, const std::string &name, const char *field) {
    const json *s = find_summary(record, name);
    return s ? json_num(s->at(field)) : std::numeric_limits<double>::quiet_NaN();
}

void require_mode(const json &doc, std::initializer_list<const char *> modes, const std::string &figure) {
    std::string mode = doc.at("mode").get<std::string>();
    for (const char *m : modes) {
        if (mode == m) {
            return;
        }
    }
    throw ContractError("emit_figure_data: figure '" + figure + "' cannot be built from a '" + mode + "' run");
}

}  // namespace

double median(std::vector<double> v) {
    if (v.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void parallel_for(int n, int jobs, const std::function<void(int)> &fn) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; i++) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    int workers = std::min(jobs, n);
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

EstimateReport run_replicate(const ExperimentConfig &config, int depth, long long shots, int replicate) {
    NoiseConfig noise = config.noise;
    noise.shots = shots;
    noise.seed = config.seed;
    std::vector<std::string> circuit_notes;

    auto measure = [&](uint32_t purpose, int d, int index, double omega) {
        CircuitOutcome x = simulate_noisy_circuit(
            d, omega, config.gate, noise, InputState::kPlus, circuit_id(purpose, d, index, InputState::kPlus),
            uint64_t(replicate));
        CircuitOutcome y = simulate_noisy_circuit(
            d, omega, config.gate, noise, InputState::kPlusI, circuit_id(purpose, d, index, InputState::kPlusI),
            uint64_t(replicate));
        if (circuit_notes.empty() && !x.diagnostics.empty()) {
            circuit_notes = x.diagnostics;
        }
        return SignalSample{omega, x.p01, y.p01};
    };

    CircuitSpec spec(depth);
    std::vector<SignalSample> samples;
    samples.reserve(spec.grid_size());
    for (int j = 0; j < spec.grid_size(); j++) {
        samples.push_back(measure(kPurposeGrid, depth, j, spec.omega(j)));
    }
    EstimateReport report = qspcf_estimate(dft_spectrum(samples), shots);

    if (config.alpha_corrected) {
        try {
            AlphaCorrected a = estimate_alpha_corrected(dft_spectrum(samples));
            report.alpha_hat = a.alpha_hat;
            report.theta_alpha_corrected = a.theta_hat;
        } catch (const FidelityCollapseError &e) {
            report.warnings.push_back(e.what());
        }
    }

    if (config.peak_fit.enabled) {
        auto omegas = peak_fit_grid(depth, report.varphi_hat, config.peak_fit.n_pf);
        std::vector<double> amps;
        for (size_t j = 0; j < omegas.size(); j++) {
            amps.push_back(std::abs(measure(kPurposePeakFit, depth, int(j), omegas[j]).h()));
        }
        PeakFit pf = peak_fit(omegas, amps, depth, report.varphi_hat, config.peak_fit.beta_thr);
        report.theta_pf = pf.theta_pf;
        if (!pf.accepted) {
            report.warnings.push_back("peak fit rejected");
        }
    }

    if (config.theta_pd) {
        std::vector<double> amps;
        for (int d : theta_pd_depths(depth)) {
            amps.push_back(std::abs(measure(kPurposeLadder, d, 0, report.varphi_hat).h()));
        }
        report.theta_pd = theta_pd_estimate(depth, amps, shots, report.var_theory_varphi).theta_pd;
    }

    for (const auto &n : circuit_notes) {
        report.warnings.push_back(n);
    }
    return report;
}

EstimatorSummary summarize(const std::string &name, double truth, const std::vector<double> &errors, uint64_t seed) {
    EstimatorSummary s;
    s.estimator = name;
    s.truth = truth;
    s.n = int(errors.size());
    if (errors.empty()) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        s.mean = s.var = s.bias = s.bias2 = s.mse = s.ci_low = s.ci_high = nan;
        return s;
    }
    double n = double(errors.size());
    double sum = 0;
    for (double e : errors) {
        sum += e;
    }
    s.bias = sum / n;
    double ss = 0;
    for (double e : errors) {
        ss += (e - s.bias) * (e - s.bias);
    }
    s.var = ss / n;
    s.mean = truth + s.bias;
    s.bias2 = s.bias * s.bias;
    s.mse = s.var + s.bias2;

    KeyedStream stream = KeyedStream::derive(seed, name_hash(name), 0, 0);
    std::vector<double> boot(kBootstrapResamples);
    for (auto &b : boot) {
        double acc = 0;
        for (size_t i = 0; i < errors.size(); i++) {
            double e = errors[size_t(stream.uniform() * n)];
            acc += e * e;
        }
        b = acc / n;
    }
    std::sort(boot.begin(), boot.end());
    s.ci_low = boot[size_t(0.025 * kBootstrapResamples)];
    s.ci_high = boot[size_t(0.975 * kBootstrapResamples) - 1];
    return s;
}

const EstimatorSummary *RunRecord::summary(const std::string &name) const {
    for (const auto &s : summaries) {
        if (s.estimator == name) {
            return &s;
        }
    }
    return nullptr;
}

json record_to_json(const RunRecord &r) {
    json summaries = json::array();
    for (const auto &s : r.summaries) {
        summaries.push_back(summary_to_json(s));
    }
    json reps = json::array();
    for (const auto &rep : r.replicates) {
        json item{{"index", rep.index}, {"ok", rep.ok}};
        if (rep.ok) {
            item["report"] = rep.report;
        } else {
            item["error"] = rep.error;
        }
        reps.push_back(item);
    }
    return json{
        {"artifact_version", kArtifactVersion},
        {"seed", r.config.seed},
        {"grid_var", r.grid_var},
        {"grid_value", r.grid_value},
        {"depth", r.depth},
        {"shots", r.shots},
        {"summaries", summaries},
        {"replicates", reps},
    };
}

RunRecord run_point(const ExperimentConfig &config, int depth, long long shots, int jobs) {
    auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.config = config;
    rec.depth = depth;
    rec.shots = shots;
    rec.replicates.resize(config.replicates);
    parallel_for(config.replicates, jobs, [&](int i) {
        ReplicateResult &r = rec.replicates[i];
        r.index = i;
        try {
            r.report = run_replicate(config, depth, shots, i);
            r.ok = true;
        } catch (const std::exception &e) {
            r.ok = false;
            r.error = e.what();
        }
    });

    const FsimParams &g = config.gate;
    std::vector<double> e_theta, e_phi, e_pf, e_pd, e_corr, e_alpha;
    for (const auto &r : rec.replicates) {
        if (!r.ok) {
            continue;
        }
        const EstimateReport &x = r.report;
        e_theta.push_back(x.theta_hat - g.theta);
        e_phi.push_back(wrap_half_pi(x.varphi_hat - g.varphi));
        if (x.theta_pf) {
            e_pf.push_back(*x.theta_pf - g.theta);
        }
        if (x.theta_pd) {
            e_pd.push_back(*x.theta_pd - g.theta);
        }
        if (x.theta_alpha_corrected) {
            e_corr.push_back(*x.theta_alpha_corrected - g.theta);
        }
        if (x.alpha_hat) {
            e_alpha.push_back(*x.alpha_hat - dem_fidelity(config.noise.depol_rate, gate_count(depth, InputState::kPlus, config.noise)));
        }
    }
    uint64_t seed = mix64(config.seed ^ mix64(uint64_t(depth) ^ (uint64_t(shots) << 24)));
    rec.summaries.push_back(summarize("theta_hat", g.theta, e_theta, seed));
    rec.summaries.push_back(summarize("varphi_hat", wrap_half_pi(g.varphi), e_phi, seed));
    if (config.peak_fit.enabled) {
        rec.summaries.push_back(summarize("theta_pf", g.theta, e_pf, seed));
    }
    if (config.theta_pd) {
        rec.summaries.push_back(summarize("theta_pd", g.theta, e_pd, seed));
    }
    if (config.alpha_corrected) {
        rec.summaries.push_back(summarize("theta_alpha_corrected", g.theta, e_corr, seed));
        double alpha_truth = dem_fidelity(config.noise.depol_rate, gate_count(depth, InputState::kPlus, config.noise));
        rec.summaries.push_back(summarize("alpha_hat", alpha_truth, e_alpha, seed));
    }
    rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

RunRecord run_calibration(const ExperimentConfig &config, int jobs) {
    RunRecord r = run_point(config, config.depth, config.noise.shots, jobs);
    r.grid_var = "d";
    r.grid_value = config.depth;
    return r;
}

std::vector<RunRecord> run_sweep(const ExperimentConfig &config, int jobs) {
    std::vector<RunRecord> out;
    if (config.mode == Mode::kSweepShots) {
        for (long long m : config.shots_grid) {
            RunRecord r = run_point(config, config.depth, m, jobs);
            r.grid_var = "M";
            r.grid_value = double(m);
            out.push_back(std::move(r));
        }
    } else {
        if (config.depth_grid.empty()) {
            throw ContractError("run_sweep: empty depth grid");
        }
        for (int d : config.depth_grid) {
            RunRecord r = run_point(config, d, config.noise.shots, jobs);
            r.grid_var = "d";
            r.grid_value = d;
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::string sweep_csv(const std::vector<RunRecord> &records) {
    std::string out = "grid_var,grid_value,estimator,n,mse,var,bias2,ci_low,ci_high\n";
    for (const auto &r : records) {
        for (const auto &s : r.summaries) {
            out += fmt::format(
                "{},{},{},{},{},{},{},{},{}\n",
                r.grid_var,
                num(r.grid_value),
                s.estimator,
                s.n,
                num(s.mse),
                num(s.var),
                num(s.bias2),
                num(s.ci_low),
                num(s.ci_high));
        }
    }
    return out;
}

std::vector<AlphaScanRow> run_alpha_scan(const ExperimentConfig &config, int jobs) {
    ExperimentConfig c = config;
    c.alpha_corrected = true;
    c.peak_fit.enabled = false;
    c.theta_pd = false;
    std::vector<AlphaScanRow> rows;
    for (int d : c.depth_grid) {
        RunRecord rec = run_point(c, d, c.noise.shots, jobs);
        double truth = dem_fidelity(c.noise.depol_rate, gate_count(d, InputState::kPlus, c.noise));
        std::vector<double> a, dev, t;
        for (const auto &r : rec.replicates) {
            if (r.ok && r.report.alpha_hat) {
                a.push_back(*r.report.alpha_hat);
                dev.push_back(std::abs(*r.report.alpha_hat - truth));
                t.push_back(*r.report.theta_alpha_corrected);
            }
        }
        rows.push_back({d, truth, median(a), median(dev), median(t), int(a.size())});
    }
    return rows;
}

std::string alpha_scan_csv(const std::vector<AlphaScanRow> &rows) {
    std::string out = "d,alpha_dem,alpha_hat_median,abs_dev_median,theta_corrected_median,n\n";
    for (const auto &r : rows) {
        out += fmt::format(
            "{},{},{},{},{},{}\n",
            r.d,
            num(r.alpha_dem),
            num(r.alpha_hat_median),
            num(r.abs_dev_median),
            num(r.theta_corrected_median),
            r.ok);
    }
    return out;
}

ConfusionReport run_confusion_check(const ExperimentConfig &config, int jobs) {
    if (!config.noise.confusion) {
        throw ContractError("run_confusion_check: no confusion matrix configured");
    }
    const ConfusionMatrix &R = *config.noise.confusion;
    R.validate();
    const ConfusionCheckConfig &cc = config.confusion_check;
    ConfusionReport rep;
    rep.kappa = R.kappa();
    if (!std::isfinite(rep.kappa)) {
        throw InversionRejectedError("run_confusion_check: confusion matrix is not diagonally dominant", rep.kappa);
    }
    rep.shots_per_row = confusion_sample_size(rep.kappa, cc.epsilon, cc.alpha, cc.constant);
    rep.trials = cc.trials;
    rep.epsilon = cc.epsilon;
    rep.alpha = cc.alpha;

    std::array<double, 4> q = apply_confusion(cc.p_true, R);
    std::array<double, 4> p = invert_confusion(q, R);
    std::vector<double> err(cc.trials);
    parallel_for(cc.trials, jobs, [&](int t) {
        ConfusionMatrix est;
        for (int i = 0; i < 4; i++) {
            KeyedStream s = KeyedStream::derive(config.seed, uint64_t(i), uint64_t(t), 0);
            auto counts = sample_multinomial(R.r[i], rep.shots_per_row, s);
            for (int j = 0; j < 4; j++) {
                est.r[i][j] = double(counts[j]) / double(rep.shots_per_row);
            }
        }
        try {
            auto pfs = invert_confusion(q, est);
            double acc = 0;
            for (int i = 0; i < 4; i++) {
                acc += (p[i] - pfs[i]) * (p[i] - pfs[i]);
            }
            err[t] = std::sqrt(acc);
        } catch (const InversionRejectedError &) {
            err[t] = std::numeric_limits<double>::infinity();
        }
    });
    for (double e : err) {
        rep.max_error = std::max(rep.max_error, e);
        if (e > cc.epsilon) {
            rep.failures++;
        }
    }
    rep.failure_rate = cc.trials > 0 ? double(rep.failures) / cc.trials : 0;
    rep.within_alpha = rep.failure_rate <= cc.alpha;
    return rep;
}

json confusion_report_to_json(const ConfusionReport &r) {
    return json{
        {"kappa", r.kappa},
        {"shots_per_row", r.shots_per_row},
        {"trials", r.trials},
        {"failures", r.failures},
        {"failure_rate", r.failure_rate},
        {"epsilon", r.epsilon},
        {"alpha", r.alpha},
        {"max_error", r.max_error},
        {"within_alpha", r.within_alpha},
    };
}

json run_document(const ExperimentConfig &config, const json &results) {
    // Where the files land is not part of the experiment.
    json echo = config_to_json(config);
    echo.erase("output_dir");
    return json{
        {"artifact_version", kArtifactVersion},
        {"schema_version", kSchemaVersion},
        {"mode", mode_name(config.mode)},
        {"config", echo},
        {"results", results},
    };
}

std::vector<std::string> figure_ids() {
    return {"degree_mc", "meas_mc", "variance_qspcf", "alpha_degree", "exact_crlb"};
}

std::map<std::string, std::string> emit_figure_data(const json &doc, const std::string &figure) {
    std::map<std::string, std::string> files;
    const json &results = doc.at("results");
    if (figure == "degree_mc" || figure == "meas_mc") {
        bool depth = figure == "degree_mc";
        require_mode(doc, {depth ? "sweep-depth" : "sweep-shots"}, figure);
        std::string out = fmt::format(
            "{},mse_theta,mse_varphi,mse_theta_pf,ci_low_theta,ci_high_theta\n", depth ? "d" : "M");
        for (const auto &rec : results.at("records")) {
            out += fmt::format(
                "{},{},{},{},{},{}\n",
                num(json_num(rec.at("grid_value"))),
                num(summary_field(rec, "theta_hat", "mse")),
                num(summary_field(rec, "varphi_hat", "mse")),
                num(summary_field(rec, "theta_pf", "mse")),
                num(summary_field(rec, "theta_hat", "ci_low")),
                num(summary_field(rec, "theta_hat", "ci_high")));
        }
        files[figure + ".csv"] = out;
    } else if (figure == "variance_qspcf") {
        require_mode(doc, {"sweep-depth"}, figure);
        double theta = doc.at("config").at("gate").at("theta").get<double>();
        std::string out = "d,var_theta,var_theory_theta,var_varphi,var_theory_varphi\n";
        for (const auto &rec : results.at("records")) {
            double d = rec.at("depth").get<double>();
            double m = rec.at("shots").get<double>();
            double base = 4 * m * d * (2 * d - 1);
            out += fmt::format(
                "{},{},{},{},{}\n",
                num(d),
                num(summary_field(rec, "theta_hat", "var")),
                num(1 / base),
                num(summary_field(rec, "varphi_hat", "var")),
                num(3 / (base * (d * d - 1) * theta * theta)));
        }
        files[figure + ".csv"] = out;
    } else if (figure == "alpha_degree") {
        require_mode(doc, {"alpha-scan"}, figure);
        std::string out = "d,alpha_dem,alpha_hat_median,abs_dev_median\n";
        for (const auto &row : results.at("rows")) {
            out += fmt::format(
                "{},{},{},{}\n",
                row.at("d").get<int>(),
                num(json_num(row.at("alpha_dem"))),
                num(json_num(row.at("alpha_hat_median"))),
                num(json_num(row.at("abs_dev_median"))));
        }
        files[figure + ".csv"] = out;
    } else if (figure == "exact_crlb") {
        require_mode(doc, {"crlb-scan"}, figure);
        std::string out = "d,crlb_varphi,preasymptotic_varphi\n";
        for (const auto &row : results.at("rows")) {
            out += fmt::format(
                "{},{},{}\n",
                row.at("d").get<int>(),
                num(json_num(row.at("crlb_varphi"))),
                num(json_num(row.at("preasymptotic_varphi"))));
        }
        files[figure + ".csv"] = out;
    } else {
        throw ContractError("emit_figure_data: unknown figure '" + figure + "'");
    }
    return files;
}

}  // namespace qspc
