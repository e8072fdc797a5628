// Copyright 2026 The smplab Authors
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

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "smplab/experiment.h"
#include "smplab/io.h"

using namespace smplab;

namespace {

constexpr int kExitAssertion = 3;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 4;
constexpr int kExitOther = 1;

std::pair<std::string, std::string> split_kv(const std::string &s) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("expected key=value, got '" + s + "'");
    }
    return {s.substr(0, eq), s.substr(eq + 1)};
}

std::vector<std::string> split_commas(const std::string &s) {
    std::vector<std::string> out;
    if (s.empty()) {
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(item);
    }
    return out;
}

void record_error(const std::string &out_dir, const std::string &kind, const std::string &what) {
    std::cerr << "error (" << kind << "): " << what << "\n";
    if (out_dir.empty()) {
        return;
    }
    try {
        std::filesystem::create_directories(out_dir);
        write_file(out_dir + "/error.txt", "kind=" + kind + "\nmessage=" + what + "\n");
    } catch (const std::exception &) {
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"smplab: simultaneous message passing experiments"};
    std::string experiment;
    std::vector<std::string> params;
    std::vector<std::string> tolerances;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::string out_dir;
    std::string config_path;
    std::string sweep;
    bool list = false;

    app.add_option("--experiment,-e", experiment, "Experiment name");
    app.add_option("--param,-p", params, "Parameter override key=value (repeatable)");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--trials", trials, "Trial count for sampled experiments");
    app.add_option("--out,-o", out_dir, "Output directory");
    app.add_option("--tolerance", tolerances, "Tolerance override key=value (repeatable)");
    app.add_option("--config,-c", config_path, "Declarative config file of key = value lines");
    app.add_option("--sweep", sweep, "Sweep one parameter: key=v1,v2,...");
    app.add_flag("--list", list, "List experiments and their defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (list) {
        for (const auto &name : experiment_names()) {
            std::cout << name;
            for (const auto &[k, v] : experiment_defaults(name)) {
                std::cout << " " << k << "=" << v;
            }
            std::cout << "\n";
        }
        return 0;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = load_config_file(config_path);
        }
        if (!experiment.empty()) {
            cfg.experiment = experiment;
        }
        for (const auto &p : params) {
            auto [k, v] = split_kv(p);
            cfg.params[k] = v;
        }
        for (const auto &t : tolerances) {
            auto [k, v] = split_kv(t);
            cfg.tolerance_overrides[k] = v;
        }
        if (seed) {
            cfg.seed = seed;
        }
        if (trials) {
            cfg.trials = trials;
        }
        if (!out_dir.empty()) {
            cfg.out_dir = out_dir;
        }
        if (cfg.out_dir.empty()) {
            cfg.out_dir = "out/" + (cfg.experiment.empty() ? std::string("run") : cfg.experiment);
        }
    } catch (const ConfigError &e) {
        record_error(cfg.out_dir, "config", e.what());
        return kExitConfig;
    }

    auto start = std::chrono::steady_clock::now();
    try {
        bool passed = true;
        if (!sweep.empty()) {
            auto [key, list_text] = split_kv(sweep);
            if (cfg.experiment.empty()) {
                throw ConfigError("no experiment given");
            }
            SweepResult res = run_sweep(cfg, key, split_commas(list_text));
            std::filesystem::create_directories(cfg.out_dir);
            write_file(cfg.out_dir + "/sweep.csv", res.csv(cfg.experiment));
            for (std::size_t i = 0; i < res.runs.size(); i++) {
                write_report(res.runs[i], cfg.out_dir + "/run" + std::to_string(i));
            }
            passed = res.passed();
            std::cout << "sweep " << key << ": " << res.runs.size() << " runs, "
                      << (passed ? "all assertions held" : "assertion failed") << "\n";
        } else {
            ExperimentReport report = run_experiment(cfg);
            write_report(report, cfg.out_dir);
            passed = report.passed();
            std::cout << report.summary_text();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_file(cfg.out_dir + "/timing.txt", "seconds=" + format_double(secs) + "\n");
        return passed ? 0 : kExitAssertion;
    } catch (const ConfigError &e) {
        record_error(cfg.out_dir, "config", e.what());
        return kExitConfig;
    } catch (const CapExceeded &e) {
        record_error(cfg.out_dir, "cap", e.what());
        return kExitCap;
    } catch (const std::exception &e) {
        record_error(cfg.out_dir, "error", e.what());
        return kExitOther;
    }
}
