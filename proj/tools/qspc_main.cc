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

// Command line front end: runs experiments from a JSON configuration and
// writes JSON records plus CSV tables.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "qspc/config.h"
#include "qspc/errors.h"
#include "qspc/fisher.h"
#include "qspc/harness.h"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CommonFlags {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> replicates;
    std::optional<std::string> out;
    bool exact = false;
    int jobs = 1;
};

void add_common(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--config", f.config_path, "JSON experiment configuration")->required();
    cmd->add_option("--seed", f.seed, "override the configured seed");
    cmd->add_option("--replicates", f.replicates, "override the replicate count");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_flag("--exact", f.exact, "noise-free analytic mode (no shot sampling)");
    cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
}

qspc::ExperimentConfig load(const CommonFlags &f) {
    qspc::ExperimentConfig c = qspc::load_config(f.config_path);
    if (f.seed) {
        c.seed = *f.seed;
    }
    if (f.replicates) {
        c.replicates = *f.replicates;
    }
    if (f.out) {
        c.output_dir = *f.out;
    }
    if (f.exact) {
        c.noise.exact = true;
    }
    c.validate();
    return c;
}

void write_file(const fs::path &path, const std::string &content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
}

void write_json(const fs::path &path, const json &doc) {
    write_file(path, doc.dump(2) + "\n");
}

std::string replicate_csv(const qspc::RunRecord &r) {
    auto opt = [](const std::optional<double> &v) { return v ? fmt::format("{:.17g}", *v) : std::string(); };
    std::string out = "replicate,ok,theta_hat,varphi_hat,alpha_hat,theta_alpha_corrected,theta_pf,theta_pd\n";
    for (const auto &rep : r.replicates) {
        if (!rep.ok) {
            out += fmt::format("{},0,,,,,,\n", rep.index);
            continue;
        }
        const auto &e = rep.report;
        out += fmt::format(
            "{},1,{:.17g},{:.17g},{},{},{},{}\n",
            rep.index,
            e.theta_hat,
            e.varphi_hat,
            opt(e.alpha_hat),
            opt(e.theta_alpha_corrected),
            opt(e.theta_pf),
            opt(e.theta_pd));
    }
    return out;
}

void require_mode(const qspc::ExperimentConfig &c, std::initializer_list<qspc::Mode> modes, const char *cmd) {
    for (auto m : modes) {
        if (c.mode == m) {
            return;
        }
    }
    throw std::runtime_error(fmt::format("'{}' cannot run a config with mode '{}'", cmd, qspc::mode_name(c.mode)));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qspc: FsimGate calibration by quantum signal processing"};
    app.require_subcommand(1);

    CommonFlags calib, sweep, scan, alpha, conf;
    add_common(app.add_subcommand("calibrate", "run one calibration point"), calib);
    add_common(app.add_subcommand("sweep", "sweep depth or shot count"), sweep);
    add_common(app.add_subcommand("crlb-scan", "Fisher information and CRLB over a depth grid"), scan);
    add_common(app.add_subcommand("alpha-scan", "depolarizing fidelity estimation over a depth grid"), alpha);
    add_common(app.add_subcommand("confusion-check", "coverage of finite-sample confusion inversion"), conf);

    std::string record_path, figure = "all", fig_out = "figures";
    auto *emit = app.add_subcommand("emit-figures", "write figure CSVs from a run document");
    emit->add_option("--record", record_path, "JSON document written by another subcommand")->required();
    emit->add_option("--figure", figure, "figure id or 'all'");
    emit->add_option("--out", fig_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    auto start = std::chrono::steady_clock::now();
    try {
        if (app.got_subcommand("calibrate")) {
            auto c = load(calib);
            require_mode(c, {qspc::Mode::kCalibrate}, "calibrate");
            auto rec = qspc::run_calibration(c, calib.jobs);
            fs::path dir = c.output_dir;
            write_json(dir / "calibrate.json", qspc::run_document(c, json{{"record", qspc::record_to_json(rec)}}));
            write_file(dir / "calibrate_replicates.csv", replicate_csv(rec));
            write_file(dir / "calibrate_summary.csv", qspc::sweep_csv({rec}));
            for (const auto &s : rec.summaries) {
                std::cout << fmt::format(
                    "{:<22} n={:<4} mean={:.6g} mse={:.4g} var={:.4g} bias2={:.4g}\n",
                    s.estimator,
                    s.n,
                    s.mean,
                    s.mse,
                    s.var,
                    s.bias2);
            }
        } else if (app.got_subcommand("sweep")) {
            auto c = load(sweep);
            require_mode(c, {qspc::Mode::kSweepDepth, qspc::Mode::kSweepShots}, "sweep");
            auto recs = qspc::run_sweep(c, sweep.jobs);
            json arr = json::array();
            for (const auto &r : recs) {
                arr.push_back(qspc::record_to_json(r));
            }
            fs::path dir = c.output_dir;
            write_json(dir / "sweep.json", qspc::run_document(c, json{{"records", arr}}));
            std::string csv = qspc::sweep_csv(recs);
            write_file(dir / "sweep.csv", csv);
            std::cout << csv;
        } else if (app.got_subcommand("crlb-scan")) {
            auto c = load(scan);
            require_mode(c, {qspc::Mode::kCrlbScan}, "crlb-scan");
            auto rows = qspc::transition_scan(c.gate, c.noise.shots, c.depth_grid);
            json arr = json::array();
            for (const auto &r : rows) {
                arr.push_back(json{
                    {"d", r.d},
                    {"crlb_theta", r.crlb_theta},
                    {"crlb_varphi", r.crlb_varphi},
                    {"crlb_chi", r.crlb_chi},
                    {"slope_theta", r.slope_theta},
                    {"slope_varphi", r.slope_varphi},
                    {"slope_chi", r.slope_chi},
                    {"preasymptotic_varphi", r.preasymptotic_varphi},
                    {"regime", qspc::regime_name(qspc::classify_regime(r.d, c.gate.theta))},
                });
            }
            fs::path dir = c.output_dir;
            write_json(dir / "crlb_scan.json", qspc::run_document(c, json{{"rows", arr}}));
            std::string csv = qspc::transition_scan_csv(rows);
            write_file(dir / "crlb_scan.csv", csv);
            std::cout << csv;
        } else if (app.got_subcommand("alpha-scan")) {
            auto c = load(alpha);
            require_mode(c, {qspc::Mode::kAlphaScan}, "alpha-scan");
            auto rows = qspc::run_alpha_scan(c, alpha.jobs);
            json arr = json::array();
            for (const auto &r : rows) {
                arr.push_back(json{
                    {"d", r.d},
                    {"alpha_dem", r.alpha_dem},
                    {"alpha_hat_median", r.alpha_hat_median},
                    {"abs_dev_median", r.abs_dev_median},
                    {"theta_corrected_median", r.theta_corrected_median},
                    {"n", r.ok},
                });
            }
            fs::path dir = c.output_dir;
            write_json(dir / "alpha_scan.json", qspc::run_document(c, json{{"rows", arr}}));
            std::string csv = qspc::alpha_scan_csv(rows);
            write_file(dir / "alpha_scan.csv", csv);
            std::cout << csv;
        } else if (app.got_subcommand("confusion-check")) {
            auto c = load(conf);
            require_mode(c, {qspc::Mode::kConfusionCheck}, "confusion-check");
            auto rep = qspc::run_confusion_check(c, conf.jobs);
            json doc = qspc::run_document(c, json{{"report", qspc::confusion_report_to_json(rep)}});
            write_json(fs::path(c.output_dir) / "confusion_check.json", doc);
            std::cout << doc.at("results").dump(2) << "\n";
        } else if (app.got_subcommand("emit-figures")) {
            std::ifstream in(record_path);
            if (!in) {
                throw std::runtime_error("cannot open " + record_path);
            }
            json doc = json::parse(in);
            std::vector<std::string> ids;
            if (figure == "all") {
                for (const auto &id : qspc::figure_ids()) {
                    try {
                        auto files = qspc::emit_figure_data(doc, id);
                        for (const auto &[name, content] : files) {
                            write_file(fs::path(fig_out) / name, content);
                            std::cout << "wrote " << (fs::path(fig_out) / name).string() << "\n";
                        }
                    } catch (const qspc::ContractError &) {
                        // Figure not derivable from this run mode.
                    }
                }
            } else {
                for (const auto &[name, content] : qspc::emit_figure_data(doc, figure)) {
                    write_file(fs::path(fig_out) / name, content);
                    std::cout << "wrote " << (fs::path(fig_out) / name).string() << "\n";
                }
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << fmt::format("wall clock {:.2f} s\n", secs);
    return 0;
}
